from fractions import Fraction

import mpmath
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from shiftlab.arith import Precision
from shiftlab.qseries import (
    IncompatibleOffset,
    NotUnit,
    QSeries,
    TailTooLarge,
    ZeroExponent,
    bfile,
    dump_coefficients,
    eval_qseries,
    integrate_dq_over_q,
    load_coefficients,
    q_d_dq,
    series_arith,
    series_inverse,
    series_nth_root,
    series_power,
    substitute_qm,
    terms_for,
)

small = st.fractions(min_value=-9, max_value=9, max_denominator=6)
coeff_lists = st.lists(small, min_size=2, max_size=10)


def unit_series(draw_list):
    return QSeries.from_coeffs([1] + draw_list)


@given(coeff_lists, coeff_lists)
def test_ring_laws(a, b):
    A, B = QSeries.from_coeffs(a), QSeries.from_coeffs(b)
    n = min(len(a), len(b))
    assert (A + B).truncate(n) == (B + A).truncate(n)
    assert (A * B).truncate(n) == (B * A).truncate(n)
    assert series_arith("sub", A, A).coeffs == tuple(Fraction(0) for _ in a)


@given(coeff_lists)
def test_inverse(a):
    A = unit_series(a)
    one = A * series_inverse(A)
    assert one == QSeries.one(A.trunc)


@given(coeff_lists, st.sampled_from([2, 3, 4, 6, 8, 12]))
def test_root_then_power(a, m):
    A = unit_series(a)
    assert series_nth_root(A, m) ** m == A


@given(coeff_lists, st.fractions(min_value=-3, max_value=3, max_denominator=5),
       st.fractions(min_value=-3, max_value=3, max_denominator=5))
def test_power_laws(a, s, t):
    A = unit_series(a)
    assert series_power(A, s) * series_power(A, t) == series_power(A, s + t)


@given(st.lists(small, min_size=1, max_size=10), st.fractions(min_value=Fraction(1, 8), max_value=3, max_denominator=8))
def test_operator_round_trip(a, offset):
    A = QSeries.from_coeffs(a, offset)
    assert q_d_dq(integrate_dq_over_q(A)) == A
    cube = integrate_dq_over_q(integrate_dq_over_q(integrate_dq_over_q(A)))
    assert q_d_dq(q_d_dq(q_d_dq(cube))) == A


def test_integrating_constant_fails():
    with pytest.raises(ZeroExponent):
        integrate_dq_over_q(QSeries.from_coeffs([1, 2]))


def test_non_unit_errors():
    with pytest.raises(NotUnit):
        series_inverse(QSeries.from_coeffs([0, 0]))


def test_mismatched_offsets():
    with pytest.raises(IncompatibleOffset):
        QSeries.from_coeffs([1], Fraction(1, 3)) + QSeries.from_coeffs([1], 0)


def test_substitution_and_shift():
    A = QSeries.from_coeffs([1, 2, 3], 1)
    B = substitute_qm(A, 3)
    assert B.offset == 3 and B.coeff(3) == 1 and B.coeff(6) == 2 and B.coeff(9) == 3
    assert B.coeff(4) == 0
    assert A.shift(Fraction(1, 2)).offset == Fraction(3, 2)


def test_geometric_series_value():
    # 1/(1-q) evaluated at q = 1/10
    p = Precision(20)
    A = series_inverse(QSeries.from_coeffs([1, -1] + [0] * 60))
    with p.context():
        ev = eval_qseries(A, mpmath.mpf(1) / 10, p)
        assert abs(ev.value - mpmath.mpf(10) / 9) < mpmath.mpf(10) ** -20


def test_tail_too_large():
    A = series_inverse(QSeries.from_coeffs([1, -1] + [0] * 5))
    with pytest.raises(TailTooLarge):
        eval_qseries(A, 0.5, Precision(20))
    with pytest.raises(TailTooLarge):
        eval_qseries(A, 1.5, Precision(5))
    with pytest.raises(TailTooLarge):
        terms_for(0.9, 10, growth=1.2)


@given(st.lists(small, min_size=1, max_size=8), st.fractions(min_value=0, max_value=2, max_denominator=24))
def test_dump_round_trip(a, offset):
    A = QSeries.from_coeffs(a, offset)
    assert load_coefficients(dump_coefficients(A)) == A


def test_bfile_format():
    assert bfile([1, -28, 126]) == "0 1\n1 -28\n2 126\n"
    assert bfile([5], start=1) == "1 5\n"
