from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from shiftlab.arith import Precision, is_purely_imaginary
from shiftlab.exact import QuadNum
from shiftlab.hypershift import (
    Divergent,
    F_shifted,
    G_from_qside,
    G_shifted,
    SeriesCase,
    case_id,
    half_shift_display_sum,
    pochhammer,
    principal_power,
    verify_case,
)
from shiftlab.tables import find_rows

S = {4: 2, 3: 3, 2: 4, 1: 6}


@given(st.fractions(min_value=-5, max_value=5, max_denominator=12), st.integers(0, 25))
def test_pochhammer_exact(a, n):
    assert pochhammer(a, n) == (1 if n == 0 else pochhammer(a, n - 1) * (a + n - 1))


def test_pochhammer_against_gamma_ratio():
    p = Precision(30)
    with p.context():
        a = mpmath.mpf(3) / 7
        assert abs(pochhammer(a, 12) - mpmath.rf(a, 12)) < mpmath.mpf(10) ** -28
    with pytest.raises(ValueError):
        pochhammer(1, -1)


@pytest.mark.parametrize("level", [1, 2, 3, 4])
@pytest.mark.parametrize("x", [Fraction(0), Fraction(1, 2), Fraction(1, 3), Fraction(-1, 4)])
def test_F_shifted_against_generalized_hypergeometric(level, x):
    """z^x 4F3(1/2+x, 1/s+x, 1-1/s+x, 1; 1+x, 1+x, 1+x; z)."""
    p = Precision(30)
    s = S[level]
    with p.context():
        z = mpmath.mpf(-3) / 10
        xf = mpmath.mpf(x.numerator) / x.denominator
        ref = mpmath.hyper([0.5 + xf, mpmath.mpf(1) / s + xf, 1 - mpmath.mpf(1) / s + xf, 1],
                           [1 + xf] * 3, z) * principal_power(z, x)
        got = F_shifted(level, x, z, p)
        assert abs(got - ref) < mpmath.mpf(10) ** -28


def test_principal_branch():
    p = Precision(20)
    with p.context():
        v = principal_power(mpmath.mpf(-4), Fraction(1, 2))
        assert abs(v - 2j) < 1e-18
        assert abs(principal_power(mpmath.mpf(-8), Fraction(1, 3)) - 2 * mpmath.expjpi(mpmath.mpf(1) / 3)) < 1e-18


def test_divergence_and_bad_shift():
    with pytest.raises(Divergent):
        F_shifted(4, 0, 1, Precision(10))
    with pytest.raises(ValueError):
        F_shifted(4, -1, Fraction(1, 2), Precision(10))


def test_series_case_invariants():
    with pytest.raises(ValueError):
        SeriesCase(5, 1, 2, 1, 1, Fraction(1, 2))
    with pytest.raises(ValueError):
        SeriesCase(2, 0, 2, 1, 1, Fraction(1, 2))
    c = SeriesCase(2, 1, 4, 1, 1, Fraction(-1, 2))
    assert c.invariant_errors() == ["L2+4: sign(z) != sign(q)"]
    assert case_id(3, -1, Fraction(25, 3)) == "L3-25/3"


@pytest.mark.parametrize("case_name", ["L2-5", "L2+4", "L3-9/3", "L1+8", "L4-4", "L2-21", "L1-19"])
@pytest.mark.parametrize("x", [Fraction(0), Fraction(1, 2), Fraction(1, 3), Fraction(1, 4)])
def test_bridge_for_several_shifts(case_name, x):
    row = find_rows(case=case_name)[0] if case_name != "L3-9/3" else find_rows(level=3, r=3, q_sign=-1)[0]
    rep = verify_case(row.case, x, None, Precision(30))
    assert rep.passed, (row.id, x, rep.diff)


def test_x_zero_is_one_over_pi():
    p = Precision(40)
    row = find_rows(case="L2-5")[0]
    with p.context():
        assert abs(G_from_qside(2, -1, 5, 0, p) - 1 / mpmath.pi) < mpmath.mpf(10) ** -40
        assert abs(G_shifted(row.case, 0, p) - 1 / mpmath.pi) < mpmath.mpf(10) ** -38


def test_negative_q_half_shift_is_imaginary():
    p = Precision(30)
    for row in find_rows(q_sign=-1)[:5]:
        assert is_purely_imaginary(G_shifted(row.case, Fraction(1, 2), p), p)


def test_catalan_display():
    """sum (-1)^n (1)_n^3/(3/2)_n^3 (2+3n)/8^n = 2 Catalan."""
    p = Precision(50)
    with p.context():
        v = half_shift_display_sum(4, Fraction(-1, 8), 2, 3, p)
        assert abs(v - 2 * mpmath.catalan) < mpmath.mpf(10) ** -48
    with pytest.raises(Divergent):
        half_shift_display_sum(4, 1, 2, 3, p)


def test_report_json_shape():
    row = find_rows(case="L2-13")[0]
    rep = verify_case(row.case, Fraction(1, 2), row.closed, Precision(30))
    js = rep.to_json()
    assert set(js) == {"case", "x", "digits", "lhs", "rhs", "closed_form", "diff", "diff_closed", "pass"}
    assert js["pass"] and js["case"] == "L2-13" and js["x"] == "1/2"
    assert len(js["lhs"]["im"].replace("-", "").replace(".", "")) >= 30


@settings(max_examples=15, deadline=None)
@given(st.sampled_from([Fraction(1, 2), Fraction(1, 3), Fraction(1, 6), Fraction(3, 4)]),
       st.sampled_from([1, 2, 3, 4]))
def test_bridge_property_level_rows(x, level):
    row = find_rows(level=level)[0]
    assert verify_case(row.case, x, None, Precision(20)).passed
