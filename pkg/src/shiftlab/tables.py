"""The embedded dataset: every rational-z series for levels 2, 3, 1 with its
conjectured value of G(1/2, q), the level-4 and irrational examples, and the
standalone displayed sums.

Rows are stored with exact quadratic numbers.  ``dump_tables`` writes one
record per line as tab-separated ``key=value`` fields; ``read_tables`` parses
that text back into identical records.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .closedform import (
    CATALAN,
    PI,
    Arctan,
    ClosedForm,
    Log,
    LogInt,
    LValue,
    Pi,
    format_closed,
    parse_closed,
)
from .exact import QuadNum, format_quad, parse_quad
from .hypershift import SeriesCase, case_id


class DataIntegrity(ValueError):
    pass


class UnknownCase(KeyError):
    pass


@dataclass(frozen=True)
class TableRow:
    case: SeriesCase
    closed: ClosedForm | None
    imaginary_flag: bool
    source: str = ""

    @property
    def id(self) -> str:
        return self.case.id

    def integrity_errors(self) -> list[str]:
        errs = self.case.invariant_errors()
        if self.imaginary_flag != (self.case.q_sign < 0):
            errs.append(f"{self.id}: imaginary_flag must equal (q < 0)")
        return errs


@dataclass(frozen=True)
class Display:
    """``scale * sum_n (1)_n (1/2+1/s)_n (3/2-1/s)_n/(3/2)_n^3 (A + B n) w^n`` as
    printed, with its claimed value.  ``(-i)^[q<0] G(1/2, q) = g_factor * sum``
    ties it to the series at ``q = sign exp(-pi sqrt r)``."""

    name: str
    level: int
    q_sign: int
    r: Fraction
    w: QuadNum
    A: QuadNum
    B: QuadNum
    scale: QuadNum
    closed: ClosedForm
    g_factor: QuadNum
    source: str = ""

    @property
    def case_id(self) -> str:
        return case_id(self.level, self.q_sign, self.r)


Q = QuadNum
F = Fraction
rad = QuadNum.radical


def _ln(*pairs) -> tuple:
    return tuple((c, LogInt(n)) for c, n in pairs)


def _row(level, sign, r, a, b, z, closed, source, prefactor=1):
    case = SeriesCase(level, sign, F(r), Q.coerce(a), Q.coerce(b), Q.coerce(z))
    cf = None if closed is None else ClosedForm(Q.coerce(prefactor), tuple(closed))
    return TableRow(case, cf, sign < 0, source)


def _level2_rows() -> list[TableRow]:
    t = "level 2, rational z"
    neg = [
        (5, F(3, 8), F(20, 8), F(-1, 4), _ln((1, 2))),
        (7, rad(8, 9, 1, 7), rad(65, 9, 1, 7), F(-16 ** 2, 63 ** 2),
         ((1, Log(Q(88, 13, 7))), (-4, LogInt(3)))),
        (9, rad(3, 16, 3), rad(28, 16, 3), F(-1, 48), _ln((F(3, 2), 3), (-2, 2))),
        (13, F(23, 72), F(260, 72), F(-1, 18 ** 2), _ln((2, 3), (-3, 2))),
        (25, rad(41, 288, 5), rad(644, 288, 5), F(-1, 5 * 72 ** 2), _ln((9, 2), (-2, 3), (F(-5, 2), 5))),
        (37, F(1123, 3528), F(21460, 3528), F(-1, 882 ** 2), _ln((1, 2), (10, 3), (-6, 7))),
    ]
    pos = [
        (4, F(2, 9), F(14, 9), F(32, 81), ((F(1, 2), PI), (-2, Arctan(rad(1, 2, 1, 2))))),
        (6, rad(1, 2, 1, 3), rad(8, 2, 1, 3), F(1, 9), ((F(1, 6), PI),)),
        (10, rad(4, 9, 1, 2), rad(40, 9, 1, 2), F(1, 81), ((F(1, 2), PI), (4, Arctan(rad(1, 2, 1, 2))))),
        (18, rad(27, 49, 1, 3), rad(360, 49, 1, 3), F(1, 7 ** 4),
         ((F(-1, 6), PI), (4, Arctan(rad(1, 4, 1, 3))))),
        (22, rad(19, 18, 1, 11), rad(280, 18, 1, 11), F(1, 99 ** 2),
         ((F(-1, 2), PI), (4, Arctan(rad(7, 5, 1, 11))))),
        (58, rad(4412, 9801, 1, 2), rad(105560, 9801, 1, 2), F(1, 99 ** 4),
         ((F(13, 2), PI), (-16, Arctan(rad(1, 1, 1, 2))), (-24, Arctan(rad(1, 3, 2))))),
    ]
    rows = [_row(2, -1, r, a, b, z, c, t) for r, a, b, z, c in neg]
    rows += [_row(2, 1, r, a, b, z, c, t) for r, a, b, z, c in pos]
    return rows


def _level3_rows() -> list[TableRow]:
    t = "level 3, rational z"
    s34, s334 = rad(1, 4, 3), rad(3, 4, 3)
    neg = [
        (F(9, 3), rad(1, 4, 3), rad(5, 4, 3), F(-9, 16), s34, _ln((3, 3), (-2, 2))),
        (F(17, 3), rad(7, 12, 1, 3), rad(51, 12, 1, 3), F(-1, 16), s334, _ln((2, 2), (-1, 3))),
        (F(25, 3), rad(1, 12, 15), rad(9, 12, 15), F(-1, 80), s34, _ln((9, 3), (-2, 2), (-5, 5))),
        (F(41, 3), rad(106, 192, 1, 3), rad(1230, 192, 1, 3), F(-1, 2 ** 10), s334, _ln((8, 2), (-5, 3))),
        (F(49, 3), rad(26, 216, 7), rad(330, 216, 7), F(-1, 3024), s34, _ln((7, 7), (-10, 2), (-6, 3))),
        (F(89, 3), rad(827, 1500, 1, 3), rad(14151, 1500, 1, 3), F(-1, 500 ** 2), s334,
         _ln((6, 5), (-6, 2), (-5, 3))),
    ]
    half_sqrt2 = rad(1, 2, 2)
    pos = [
        (F(8, 3), rad(1, 3, 1, 3), rad(6, 3, 1, 3), F(1, 2), s34, ((3, PI), (-12, Arctan(half_sqrt2)))),
        (F(16, 3), F(8, 27), F(60, 27), F(2, 27), s34, ((5, PI), (-24, Arctan(half_sqrt2)))),
        (F(20, 3), rad(8, 15, 1, 3), rad(66, 15, 1, 3), F(4, 125), s34, ((-3, PI), (12, Arctan(rad(1, 2, 5))))),
    ]
    rows = [_row(3, -1, r, a, b, z, c, t, pf) for r, a, b, z, pf, c in neg]
    rows += [_row(3, 1, r, a, b, z, c, t, pf) for r, a, b, z, pf, c in pos]
    return rows


def _level1_rows() -> list[TableRow]:
    t = "level 1, rational z"
    pf = rad(3, 8, 3)
    neg = [
        (7, rad(8, 5, 1, 15), rad(63, 5, 1, 15), F(-4 ** 3, 5 ** 3), _ln((3, 3), (-1, 5))),
        (11, rad(15, 32, 1, 2), rad(154, 32, 1, 2), F(-3 ** 3, 8 ** 3), _ln((1, 2))),
        (19, rad(25, 32, 1, 6), rad(342, 32, 1, 6), F(-1, 8 ** 3), _ln((5, 2), (-3, 3))),
        (27, rad(279, 160, 1, 30), rad(4554, 160, 1, 30), F(-9, 40 ** 3), _ln((3, 3), (1, 5), (-7, 2))),
        (43, rad(526, 80 ** 2, 15), rad(10836, 80 ** 2, 15), F(-1, 80 ** 3), _ln((2, 2), (9, 3), (-7, 5))),
        (67, rad(10177, 3 * 440 ** 2, 330), rad(261702, 3 * 440 ** 2, 330), F(-1, 440 ** 3),
         _ln((13, 2), (5, 11), (-3, 3), (-11, 5))),
        (163, rad(27182818, 3 * 53360 ** 2, 10005), rad(1090280268, 3 * 53360 ** 2, 10005),
         F(-1, 53360 ** 3), _ln((21, 3), (13, 5), (5, 29), (-38, 2), (-11, 23))),
    ]
    half = F(1, 2)
    pos = [
        (8, rad(3, 5, 1, 5), rad(28, 5, 1, 5), F(3 ** 3, 5 ** 3), ((1, PI), (-4, Arctan(half)))),
        (12, rad(6, 5, 1, 15), rad(66, 5, 1, 15), F(4, 5 ** 3), ((-1, PI), (8, Arctan(half)))),
        (16, rad(20, 11, 1, 33), rad(252, 11, 1, 33), F(2 ** 3, 11 ** 3),
         ((3, PI), (-4, Arctan(rad(1, 3, 2))), (-12, Arctan(rad(1, 2, 2))))),
        (28, rad(144, 85, 3, 85), rad(2394, 85, 3, 85), F(4 ** 3, 85 ** 3),
         ((3, PI), (-16, Arctan(half)), (-8, Arctan(F(1, 4))))),
    ]
    rows = [_row(1, -1, r, a, b, z, c, t, pf) for r, a, b, z, c in neg]
    rows += [_row(1, 1, r, a, b, z, c, t, pf) for r, a, b, z, c in pos]
    return rows


def _extra_rows() -> list[TableRow]:
    """Level-4 series at r = 4 and r = 15, and the irrational level-2 series at r = 21."""
    return [
        _row(4, -1, 4, rad(1, 4, 2), rad(3, 2, 2), F(-1, 8), ((F(1, 2), CATALAN),), "level 4 examples"),
        _row(4, 1, 15, Q(F(-1, 32), F(5, 32), 5), Q(F(30, 32), F(42, 32), 5), Q(F(47, 128), F(-21, 128), 5),
             ((F(1, 240), Pi(2)),), "level 4 examples"),
        _row(2, -1, 21, Q(F(-27, 24), F(20, 24), 3), Q(F(-21, 6), F(28, 6), 3), Q(F(-97, 36), F(56, 36), 3),
             ((1, Log(Q(F(42, 81), F(24, 81), 3))),), "irrational example"),
    ]


def _displays() -> list[Display]:
    x21 = Q(42, 24, 3)
    sqrt5m1_over_2 = Q(F(-1, 2), F(1, 2), 5)
    sqrt2m1_over_2 = Q(F(-1, 2), F(1, 2), 2)
    return [
        Display("catalan-2G", 4, -1, F(4), Q(F(-1, 8)), Q(2), Q(3), Q(1),
                ClosedForm.of((2, CATALAN)), Q(F(1, 4)), "level 4 examples"),
        Display("pi2-240", 4, 1, F(15), sqrt5m1_over_2 ** 8 / 64, Q(F(14, 32), F(26, 32), 5),
                Q(F(30, 32), F(42, 32), 5), sqrt5m1_over_2 ** 4 / 8,
                ClosedForm.of((F(1, 240), Pi(2))), Q(1), "level 4 examples"),
        Display("L4-L8-mix", 4, -1, F(8), -(sqrt2m1_over_2 ** 3), Q(F(-5, 4), 1, 2), Q(F(-6, 4), F(5, 4), 2),
                Q(1), ClosedForm.of((2, LValue(-4)), (rad(-1, 2, 2), LValue(-8))), Q(1),
                "level 4 examples"),
        Display("L2-13", 2, -1, F(13), Q(F(-1, 18 ** 2)), Q(F(153, 72)), Q(F(260, 72)), Q(F(1, 18)),
                ClosedForm.of(*_ln((2, 3), (-3, 2))), Q(1), "conjectured examples"),
        Display("L2+58", 2, 1, F(58), Q(F(1, 99 ** 4)), rad(4 * 14298, 9801, 1, 2), rad(4 * 26390, 9801, 1, 2),
                Q(F(1, 99 ** 2)),
                ClosedForm.of((F(13, 2), PI), (-16, Arctan(rad(1, 2, 2))), (-24, Arctan(rad(1, 3, 2)))),
                Q(1), "conjectured examples"),
        Display("L3-25/3", 3, -1, F(25, 3), Q(F(-1, 80)), Q(F(11, 24)), Q(F(3, 4)), Q(1),
                ClosedForm.of(*_ln((9, 3), (-2, 2), (-5, 5))), rad(1, 4, 3), "conjectured examples"),
        Display("L1+8", 1, 1, F(8), Q(F(27, 125)), Q(F(136, 125)), Q(F(224, 125)), Q(1),
                ClosedForm.of((1, PI), (-4, Arctan(F(1, 2)))), rad(3, 8, 3), "conjectured examples"),
        Display("L2-21", 2, -1, F(21), -(1 / x21 ** 2), Q(429, 256, 3), Q(756, 448, 3), Q(1),
                ClosedForm(2 * x21 ** 2, ((2, Log(x21 / 81)),)), Q(F(97, 144), F(-56, 144), 3),
                "irrational example"),
    ]


def corrections() -> dict[str, ClosedForm]:
    """Values found numerically where the printed entry disagrees; keyed by row
    id or display name.  The printed entries stay in the dataset unchanged."""
    return {
        # sign of the arctan term: pi/2 - 4 arctan(1/(2 sqrt 2)) = 0.21144868...
        "L2+10": ClosedForm.of((F(1, 2), PI), (-4, Arctan(rad(1, 2, 1, 2)))),
        # the L(-4,2) coefficient is 1, not 2: the sum is 0.16308484...
        "L4-L8-mix": ClosedForm.of((1, LValue(-4)), (rad(-1, 2, 2), LValue(-8))),
    }


@lru_cache(maxsize=1)
def _load() -> tuple[tuple[TableRow, ...], tuple[Display, ...]]:
    rows = _level2_rows() + _level3_rows() + _level1_rows() + _extra_rows()
    errs = [e for row in rows for e in row.integrity_errors()]
    ids = [row.id for row in rows]
    if len(set(ids)) != len(ids):
        errs.append("duplicate case ids")
    if errs:
        raise DataIntegrity("; ".join(errs))
    return tuple(rows), tuple(_displays())


def load_tables(include_extras: bool = True) -> list[TableRow]:
    """All 32 rational rows of levels 2, 3, 1; with *include_extras* also the
    level-4 rows (r = 4, 15) and the irrational level-2 row (r = 21)."""
    rows = list(_load()[0])
    if not include_extras:
        rows = [r for r in rows if r.source.endswith("rational z")]
    return rows


def load_displays() -> list[Display]:
    return list(_load()[1])


def table_rows() -> list[TableRow]:
    return load_tables(include_extras=False)


def find_rows(level: int | None = None, r=None, q_sign: int | None = None,
              case: str | None = None, rows: list[TableRow] | None = None) -> list[TableRow]:
    """Select rows; raises :class:`UnknownCase` when nothing matches."""
    rows = load_tables() if rows is None else rows
    out = [
        row for row in rows
        if (level is None or row.case.level == level)
        and (r is None or row.case.r == Fraction(r))
        and (q_sign is None or row.case.q_sign == q_sign)
        and (case is None or row.id == case)
    ]
    if not out:
        raise UnknownCase(f"no table row for level={level} r={r} sign={q_sign} case={case}")
    return out


# --- text round trip --------------------------------------------------------------

def _row_record(row: TableRow) -> dict:
    c = row.case
    return {
        "kind": "row", "level": str(c.level), "q_sign": str(c.q_sign), "r": str(c.r),
        "a": format_quad(c.a), "b": format_quad(c.b), "z": format_quad(c.z),
        "imaginary_flag": "true" if row.imaginary_flag else "false",
        "closed": "none" if row.closed is None else format_closed(row.closed),
        "source": row.source,
    }


def _display_record(d: Display) -> dict:
    return {
        "kind": "display", "name": d.name, "level": str(d.level), "q_sign": str(d.q_sign), "r": str(d.r),
        "w": format_quad(d.w), "A": format_quad(d.A), "B": format_quad(d.B),
        "scale": format_quad(d.scale), "closed": format_closed(d.closed),
        "g_factor": format_quad(d.g_factor), "source": d.source,
    }


def dump_tables(rows: list[TableRow] | None = None, displays: list[Display] | None = None) -> str:
    rows = load_tables() if rows is None else rows
    displays = load_displays() if displays is None else displays
    lines = ["# one record per line; tab-separated key=value fields"]
    for rec in [_row_record(r) for r in rows] + [_display_record(d) for d in displays]:
        lines.append("\t".join(f"{k}={v}" for k, v in rec.items()))
    return "\n".join(lines) + "\n"


def read_tables(text: str) -> tuple[list[TableRow], list[Display]]:
    rows, displays = [], []
    for lineno, line in enumerate(text.splitlines(), 1):
        if not line.strip() or line.startswith("#"):
            continue
        try:
            rec = dict(field.split("=", 1) for field in line.split("\t"))
            if rec["kind"] == "row":
                case = SeriesCase(int(rec["level"]), int(rec["q_sign"]), Fraction(rec["r"]),
                                  parse_quad(rec["a"]), parse_quad(rec["b"]), parse_quad(rec["z"]))
                closed = None if rec["closed"] == "none" else parse_closed(rec["closed"])
                row = TableRow(case, closed, rec["imaginary_flag"] == "true", rec.get("source", ""))
                if row.integrity_errors():
                    raise DataIntegrity("; ".join(row.integrity_errors()))
                rows.append(row)
            elif rec["kind"] == "display":
                displays.append(Display(
                    rec["name"], int(rec["level"]), int(rec["q_sign"]), Fraction(rec["r"]),
                    parse_quad(rec["w"]), parse_quad(rec["A"]), parse_quad(rec["B"]),
                    parse_quad(rec["scale"]), parse_closed(rec["closed"]),
                    parse_quad(rec["g_factor"]), rec.get("source", "")))
            else:
                raise DataIntegrity(f"unknown record kind {rec['kind']!r}")
        except (KeyError, ValueError) as exc:
            raise DataIntegrity(f"line {lineno}: {exc}") from exc
    return rows, displays
