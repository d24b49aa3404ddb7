"""``shiftlab report``: verification summary as TSV plus PNG figures."""

from __future__ import annotations

import csv
import io
from fractions import Fraction
from pathlib import Path

import mpmath

from .arith import Precision, to_decimal_string
from .closedform import eval_closed
from .exact import quad_to_real
from .hypershift import G_from_qside, half_shift_display_sum, verify_case
from .lattice import EpsteinForm, dirichlet_L, epstein_radius
from .modular import c_coefficients
from .plotting import plot_coefficient_growth, plot_epstein_enclosures, plot_residuals
from .tables import corrections, load_displays, load_tables

COLUMNS = ["kind", "id", "x", "value_re", "value_im", "diff_qside", "diff_closed", "pass"]


def display_check(d, p: Precision) -> dict:
    """Printed sum against its printed value and against ``g_factor``-scaled G."""
    half = Fraction(1, 2)
    with p.context():
        value = quad_to_real(d.scale, p) * half_shift_display_sum(d.level, d.w, d.A, d.B, p)
        g = G_from_qside(d.level, d.q_sign, d.r, half, p)
        g = g.imag if d.q_sign < 0 else g.real
        diff_q = abs(g - quad_to_real(d.g_factor, p) * value)
        diff_c = abs(value - eval_closed(d.closed, p))
        tol = p.tolerance() * max(1, abs(value))
        return {"value": value, "diff_qside": diff_q, "diff_closed": diff_c,
                "pass": bool(diff_q < tol and diff_c < tol)}


def build_report(out_dir: Path, p: Precision, terms: int = 40) -> tuple[bool, str]:
    out_dir.mkdir(parents=True, exist_ok=True)
    buf = io.StringIO()
    w = csv.writer(buf, delimiter="\t", lineterminator="\n")
    w.writerow(COLUMNS)
    labels, diff_q, diff_c = [], [], []
    ok = True
    fixes = corrections()
    for row in load_tables():
        rep = verify_case(row.case, Fraction(1, 2), row.closed, p)
        ok &= rep.passed
        w.writerow(["row", row.id, "1/2", to_decimal_string(rep.lhs.real, p),
                    to_decimal_string(rep.lhs.imag, p), mpmath.nstr(rep.diff, 3),
                    mpmath.nstr(rep.diff_closed, 3), rep.passed])
        labels.append(row.id)
        diff_q.append(float(rep.diff))
        diff_c.append(float(rep.diff_closed))
        if row.id in fixes:
            fixed = verify_case(row.case, Fraction(1, 2), fixes[row.id], p)
            w.writerow(["corrected", row.id, "1/2", to_decimal_string(fixed.lhs.real, p),
                        to_decimal_string(fixed.lhs.imag, p), mpmath.nstr(fixed.diff, 3),
                        mpmath.nstr(fixed.diff_closed, 3), fixed.passed])
    for d in load_displays():
        chk = display_check(d, p)
        ok &= chk["pass"]
        w.writerow(["display", d.name, "1/2", to_decimal_string(chk["value"], p), "0",
                    mpmath.nstr(chk["diff_qside"], 3), mpmath.nstr(chk["diff_closed"], 3), chk["pass"]])
        if d.name in fixes:
            with p.context():
                dc = abs(chk["value"] - eval_closed(fixes[d.name], p))
            good = bool(dc < p.tolerance())
            w.writerow(["corrected", d.name, "1/2", to_decimal_string(chk["value"], p), "0",
                        mpmath.nstr(chk["diff_qside"], 3), mpmath.nstr(dc, 3), good])

    plot_residuals(labels, {"q side": diff_q, "closed form": diff_c},
                   out_dir / "residuals.png", threshold=float(p.tolerance()))
    plot_coefficient_growth({lv: c_coefficients(lv, terms) for lv in (1, 2, 3)},
                            out_dir / "coefficients.png")
    ref = float(2 * mpmath.pi ** 2 / 3 * dirichlet_L(-4, 2, Precision(20)))
    form = EpsteinForm(1, 0, 1)
    radii = [25.0, 50.0, 100.0, 200.0, 400.0]
    encl = [epstein_radius(form, R) for R in radii]
    plot_epstein_enclosures(radii, [e.lower for e in encl], [e.upper for e in encl], ref,
                            out_dir / "epstein.png")
    text = buf.getvalue()
    (out_dir / "report.tsv").write_text(text)
    return ok, text
