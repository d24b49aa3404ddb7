"""Symbolic closed forms: a quadratic prefactor times a linear combination of
basis constants (pi, logarithms, arctangents, L-values, Catalan).

Closed forms are kept structurally so that exact rewrites (``ln(27/5) = 3 ln 3 -
ln 5``) and integer-relation round trips stay possible.  The text syntax used by
:func:`format_closed` / :func:`parse_closed` is

    [prefactor] * ( coeff*atom + coeff*atom ... )

with atoms ``pi``, ``pi^k``, ``ln(<quad>)``, ``arctan(<quad>)``, ``L(-4,2)``, ``L(-8,2)``
and ``catalan``; coefficients are quadratic numbers written in brackets when
they contain a radical.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath
from mpmath import mpc, mpf

from .arith import DomainError, Precision
from .exact import QuadNum, format_quad, parse_quad, quad_to_real
from .lattice import dirichlet_L


# --- atoms ------------------------------------------------------------------------

@dataclass(frozen=True)
class Pi:
    power: int = 1

    def __post_init__(self):
        if self.power < 1:
            raise ValueError("pi power must be >= 1")

    def value(self, p: Precision) -> mpf:
        with p.context():
            return mpmath.pi ** self.power

    def __str__(self):
        return "pi" if self.power == 1 else f"pi^{self.power}"


@dataclass(frozen=True)
class Log:
    """Natural logarithm of a positive quadratic number.  ``Log(n)`` with an
    integer ``n >= 2`` is the plain ``ln n`` of the tables."""

    arg: QuadNum

    def __post_init__(self):
        arg = QuadNum.coerce(self.arg)
        if arg.sign() <= 0:
            raise DomainError(f"ln of non-positive {arg}")
        if arg.is_rational and arg.u.denominator == 1 and arg.u < 2:
            raise ValueError("integer logarithm arguments must be >= 2")
        object.__setattr__(self, "arg", arg)

    @property
    def is_integer(self) -> bool:
        return self.arg.is_rational and self.arg.u.denominator == 1

    def value(self, p: Precision) -> mpf:
        with p.context():
            return mpmath.log(quad_to_real(self.arg, p))

    def __str__(self):
        return f"ln({format_quad(self.arg)})"


def LogInt(n: int) -> Log:
    if int(n) != n or n < 2:
        raise ValueError("LogInt needs an integer >= 2")
    return Log(QuadNum(int(n)))


@dataclass(frozen=True)
class Arctan:
    arg: QuadNum

    def __post_init__(self):
        object.__setattr__(self, "arg", QuadNum.coerce(self.arg))

    def value(self, p: Precision) -> mpf:
        with p.context():
            return mpmath.atan(quad_to_real(self.arg, p))

    def __str__(self):
        return f"arctan({format_quad(self.arg)})"


@dataclass(frozen=True)
class LValue:
    d: int
    s: int = 2

    def __post_init__(self):
        if self.d not in (-4, -8) or self.s != 2:
            raise ValueError("only L(-4,2) and L(-8,2) are available")

    def value(self, p: Precision) -> mpf:
        return dirichlet_L(self.d, self.s, p)

    def __str__(self):
        return f"L({self.d},{self.s})"


CATALAN = LValue(-4, 2)
PI = Pi()
Atom = Pi | Log | Arctan | LValue


def atom_value(atom, p: Precision) -> mpf:
    return atom.value(p)


# --- closed forms -------------------------------------------------------------------

@dataclass(frozen=True)
class ClosedForm:
    prefactor: QuadNum = field(default_factory=lambda: QuadNum(1))
    terms: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "prefactor", QuadNum.coerce(self.prefactor))
        object.__setattr__(self, "terms", tuple((QuadNum.coerce(c), a) for c, a in self.terms))

    @classmethod
    def of(cls, *terms, prefactor=1) -> "ClosedForm":
        """``ClosedForm.of((2, LogInt(3)), (-3, LogInt(2)))``."""
        return cls(QuadNum.coerce(prefactor), tuple(terms))

    def atoms(self) -> list:
        return [a for _, a in self.terms]

    def expand(self) -> "ClosedForm":
        """Fold the prefactor into the coefficients."""
        return ClosedForm(QuadNum(1), tuple((self.prefactor * c, a) for c, a in self.terms))

    def __add__(self, other: "ClosedForm") -> "ClosedForm":
        if self.prefactor == other.prefactor:
            return ClosedForm(self.prefactor, self.terms + other.terms)
        return ClosedForm(QuadNum(1), self.expand().terms + other.expand().terms)

    def scale(self, c) -> "ClosedForm":
        return ClosedForm(self.prefactor * QuadNum.coerce(c), self.terms)

    def __str__(self):
        return format_closed(self)


def eval_closed(cf: ClosedForm, p: Precision) -> mpf:
    with p.context():
        total = mpmath.fsum(quad_to_real(c, p) * a.value(p) for c, a in cf.terms) if cf.terms else mpf(0)
        return quad_to_real(cf.prefactor, p) * total


def _fmt_coeff(c: QuadNum) -> str:
    text = format_quad(c)
    return f"[{text}]" if c.v else text


def format_closed(cf: ClosedForm) -> str:
    body = " + ".join(f"{_fmt_coeff(c)}*{a}" for c, a in cf.terms) or "0"
    body = body.replace("+ -", "- ")
    if cf.prefactor == 1:
        return body
    return f"{_fmt_coeff(cf.prefactor)} * ({body})"


_ATOM_RE = re.compile(r"^(pi(?:\^(\d+))?|catalan|L\((-?\d+),(\d+)\)|ln\((.+)\)|arctan\((.+)\))$")


def parse_atom(text: str):
    m = _ATOM_RE.match(text.strip())
    if not m:
        raise ValueError(f"unknown atom {text!r}")
    if m.group(1).startswith("pi"):
        return Pi(int(m.group(2) or 1))
    if m.group(1) == "catalan":
        return CATALAN
    if m.group(3):
        return LValue(int(m.group(3)), int(m.group(4)))
    if m.group(5) is not None:
        return Log(parse_quad(m.group(5)))
    return Arctan(parse_quad(m.group(6)))


def _split_top(text: str, seps: str) -> list[tuple[str, str]]:
    """Split at top-level (outside brackets) signs; returns (sign, chunk) pairs."""
    out, depth, start, sign = [], 0, 0, "+"
    for i, ch in enumerate(text):
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        elif depth == 0 and ch in seps and i > 0 and text[i - 1] == " ":
            out.append((sign, text[start:i].strip()))
            sign, start = ch, i + 1
    out.append((sign, text[start:].strip()))
    return [(s, c) for s, c in out if c]


def _parse_coeff(text: str) -> QuadNum:
    text = text.strip()
    if text.startswith("[") and text.endswith("]"):
        text = text[1:-1]
    return parse_quad(text)


def parse_closed(text: str) -> ClosedForm:
    """Inverse of :func:`format_closed`."""
    text = text.strip()
    prefactor = QuadNum(1)
    m = re.match(r"^(\[[^\]]+\]|[-\d/]+) \* \((.*)\)$", text)
    if m:
        prefactor = _parse_coeff(m.group(1))
        text = m.group(2)
    if text == "0":
        return ClosedForm(prefactor, ())
    terms = []
    for sign, chunk in _split_top(text, "+-"):
        depth = 0
        for i, ch in enumerate(chunk):
            if ch in "([":
                depth += 1
            elif ch in ")]":
                depth -= 1
            elif ch == "*" and depth == 0:
                coeff, atom = chunk[:i], chunk[i + 1:]
                break
        else:
            raise ValueError(f"term {chunk!r} lacks 'coeff*atom'")
        c = _parse_coeff(coeff)
        terms.append((-c if sign == "-" else c, parse_atom(atom)))
    return ClosedForm(prefactor, tuple(terms))


# --- the logarithmic rewriting of the r = 58 value -------------------------------

@dataclass
class RewriteReport:
    arctan_form: mpf
    log_form: mpc
    diff: mpf
    norms: dict
    passed: bool

    def to_json(self, p: Precision) -> dict:
        from .arith import complex_to_json, to_decimal_string

        return {
            "arctan_form": to_decimal_string(self.arctan_form, p),
            "log_form": complex_to_json(self.log_form, p),
            "diff": mpmath.nstr(self.diff, 5),
            "norms": {k: str(v) for k, v in self.norms.items()},
            "pass": self.passed,
        }


def gaussian_norm(re_part: QuadNum, im_part: QuadNum) -> QuadNum:
    """``(x + iy)(x - iy) = x^2 + y^2`` computed exactly."""
    return re_part * re_part + im_part * im_part


def logarithmic_rewrite_check(p: Precision = Precision(40)) -> RewriteReport:
    """``13pi/2 - 16 arctan(sqrt2/2) - 24 arctan(sqrt2/3)`` against
    ``-13i ln((1+i)/(1-i)) + 8i ln((sqrt2+i)/(sqrt2-i)) + 12i ln((3+sqrt2 i)/(3-sqrt2 i))``."""
    r2 = QuadNum(0, 1, 2)
    cf = ClosedForm.of(
        (Fraction(13, 2), PI),
        (-16, Arctan(r2 / 2)),
        (-24, Arctan(r2 / 3)),
    )
    with p.context():
        s2 = mpmath.sqrt(2)
        i = mpc(0, 1)
        logs = (-13 * i * mpmath.log((1 + i) / (1 - i))
                + 8 * i * mpmath.log((s2 + i) / (s2 - i))
                + 12 * i * mpmath.log((3 + s2 * i) / (3 - s2 * i)))
        val = eval_closed(cf, p)
        diff = abs(logs - val)
        norms = {
            "(sqrt2+i)(sqrt2-i)": gaussian_norm(r2, QuadNum(1)),
            "(3+sqrt2 i)(3-sqrt2 i)": gaussian_norm(QuadNum(3), r2),
        }
        divides = all(n.is_rational and n.u.denominator == 1 and 99 % int(n.u) == 0
                      for n in norms.values())
        return RewriteReport(val, logs, diff, norms, bool(diff < p.tolerance() and divides))


def load_tables():
    """All table rows; see :mod:`shiftlab.tables`."""
    from .tables import load_tables as _load

    return _load()
