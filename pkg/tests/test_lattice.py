import math
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from shiftlab.arith import Precision
from shiftlab.hypershift import G_from_qside
from shiftlab.lattice import (
    CHARACTERS,
    EpsteinForm,
    NotPositiveDefinite,
    PrecisionUnreachable,
    catalan,
    character,
    dirichlet_L,
    dirichlet_L_alternating,
    epstein,
    epstein_radius,
    level4_lattice_eval,
    level4_positive_rowsum,
)

HALF = Fraction(1, 2)


def overlap(a, b, slack=0.0):
    return a.lower - slack <= b.upper and b.lower - slack <= a.upper


def test_characters_are_kronecker_symbols():
    def kron(d, n):
        # (d/n) for odd n by Jacobi reciprocity, 0 for even n
        if n % 2 == 0:
            return 0
        return _jacobi(d, n)

    for d in (-4, -8):
        for n in range(1, 60):
            assert character(d, n) == kron(d, n), (d, n)
    assert CHARACTERS[-8] == (0, 1, 0, 1, 0, -1, 0, -1)


def _jacobi(a, n):
    a %= n
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


@pytest.mark.parametrize("d", [-4, -8])
def test_dirichlet_two_routes(d):
    p = Precision(40)
    with p.context():
        assert abs(dirichlet_L(d, 2, p) - dirichlet_L_alternating(d, 2, p)) < mpmath.mpf(10) ** -40


def test_catalan_and_known_values():
    p = Precision(40)
    with p.context():
        assert abs(catalan(p) - mpmath.catalan) < mpmath.mpf(10) ** -40
        # one period per term keeps the summand smooth enough for extrapolation
        grouped = mpmath.nsum(lambda k: sum(character(-8, j) / (8 * k + j) ** 2 for j in (1, 3, 5, 7)),
                              [0, mpmath.inf])
        assert abs(dirichlet_L(-8, 2, p) - grouped) < mpmath.mpf(10) ** -30
    with pytest.raises(ValueError):
        dirichlet_L(-3, 2)


def test_form_validation():
    with pytest.raises(NotPositiveDefinite):
        EpsteinForm(1, 2, 1)
    with pytest.raises(NotPositiveDefinite):
        EpsteinForm(-1, 0, -1)
    with pytest.raises(ValueError):
        EpsteinForm(1, 0, 1, t=1)


def test_square_lattice_value():
    res = epstein(EpsteinForm(1, 0, 1), Precision(8))
    ref = float(2 * mpmath.pi ** 2 / 3 * mpmath.catalan)
    assert res.lower <= ref <= res.upper
    assert res.error < 1e-8 * ref


def test_tail_estimate_sits_inside_certified_bounds():
    form = EpsteinForm(2, 1, 3)
    lo, hi = form.tail_bounds(80.0)
    assert lo <= form.tail_estimate(80.0) <= hi


def test_precision_limits():
    with pytest.raises(PrecisionUnreachable):
        epstein(EpsteinForm(1, 0, 1), Precision(13))
    with pytest.raises(PrecisionUnreachable):
        epstein(EpsteinForm(1, 0, 1), Precision(10), budget=10 ** 5)


forms = st.tuples(st.integers(1, 5), st.integers(-2, 2), st.integers(1, 5)).filter(lambda f: f[1] ** 2 < 4 * f[0] * f[2])


@settings(max_examples=20, deadline=None)
@given(forms)
def test_symmetry(f):
    A, B, C = f
    R = 120.0
    a = epstein_radius(EpsteinForm(A, B, C), R)
    b = epstein_radius(EpsteinForm(C, B, A), R)
    c = epstein_radius(EpsteinForm(A, -B, C), R)
    assert overlap(a, b) and overlap(a, c)


@settings(max_examples=20, deadline=None)
@given(forms, st.integers(2, 4))
def test_scaling(f, k):
    A, B, C = f
    base = epstein_radius(EpsteinForm(A, B, C), 120.0)
    scaled = epstein_radius(EpsteinForm(k * A, k * B, k * C), 120.0 * math.sqrt(k))
    assert scaled.lower * k ** 2 <= base.upper and base.lower <= scaled.upper * k ** 2


def test_quarter_form_relation():
    a = epstein(EpsteinForm(1, 0, Fraction(1, 4)), Precision(7))
    b = epstein(EpsteinForm(1, 0, 4), Precision(8))
    assert 16 * b.lower <= a.upper and a.lower <= 16 * b.upper


@pytest.mark.parametrize("r", [4, 15])
def test_alternating_lattice_formula(r):
    lat = level4_lattice_eval(-1, r)
    p = Precision(20)
    g = G_from_qside(4, -1, r, HALF, p)
    assert abs(lat.value - g) < 1e-7


def test_alternating_r8_value():
    p = Precision(30)
    lat = level4_lattice_eval(-1, 8)
    with p.context():
        ref = dirichlet_L(-4, 2, p) - mpmath.sqrt(2) / 2 * dirichlet_L(-8, 2, p)
        assert abs(lat.value.imag - ref) < 1e-7
        assert abs(G_from_qside(4, -1, 8, HALF, p).imag - ref) < mpmath.mpf(10) ** -28


def test_positive_branch_printed_weights_disagree_with_q_side():
    lat = level4_lattice_eval(1, 15)
    g = G_from_qside(4, 1, 15, HALF, Precision(20))
    assert abs(lat.value - g) > 1


def test_positive_weights_cancel_identically():
    """(1/16) S(1,1/2,(1+r)/16) - (9/16) S(1,1,(r+1)/4) + (1/2) S(1,0,r) vanishes."""
    for r in (3, 15):
        terms = [(Fraction(1, 16), EpsteinForm(1, HALF, Fraction(1 + r, 16))),
                 (Fraction(-9, 16), EpsteinForm(1, 1, Fraction(r + 1, 4))),
                 (Fraction(1, 2), EpsteinForm(1, 0, r))]
        lo = hi = 0.0
        for w, f in terms:
            res = epstein(f, Precision(9))
            a, b = float(w) * res.lower, float(w) * res.upper
            lo += min(a, b)
            hi += max(a, b)
        assert lo <= 0 <= hi and hi - lo < 1e-7


@pytest.mark.parametrize("r", [4, 15, 6, Fraction(1, 10)])
def test_positive_rowsum_matches_q_side(r):
    p = Precision(30)
    with p.context():
        assert abs(level4_positive_rowsum(r, p) - G_from_qside(4, 1, r, HALF, p).real) < mpmath.mpf(10) ** -29


def test_r15_positive_value():
    p = Precision(30)
    with p.context():
        assert abs(level4_positive_rowsum(15, p) - mpmath.pi ** 2 / 240) < mpmath.mpf(10) ** -29
