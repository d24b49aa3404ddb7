import decimal
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given
from hypothesis import strategies as st

from shiftlab.arith import (
    DomainError,
    Precision,
    close,
    complex_to_json,
    const_pi,
    elementary,
    is_purely_imaginary,
    to_decimal_string,
)

PI_30 = "3.14159265358979323846264338328"


def machin_pi(digits: int) -> Fraction:
    """pi = 16 arctan(1/5) - 4 arctan(1/239) in scaled integer arithmetic."""
    scale = 10 ** (digits + 10)

    def arctan_inv(x):
        total, term, k, sign = 0, scale // x, 1, 1
        while term:
            total += sign * (term // k)
            term //= x * x
            k += 2
            sign = -sign
        return total

    return Fraction(16 * arctan_inv(5) - 4 * arctan_inv(239), scale)


def agm_pi(digits: int) -> decimal.Decimal:
    """Gauss-Legendre iteration in the decimal module."""
    with decimal.localcontext() as ctx:
        ctx.prec = digits + 10
        D = decimal.Decimal
        a, b, t, p = D(1), D(1) / D(2).sqrt(), D(1) / 4, D(1)
        for _ in range(12):
            an = (a + b) / 2
            b = (a * b).sqrt()
            t -= p * (a - an) ** 2
            a, p = an, 2 * p
        return (a + b) ** 2 / (4 * t)


def test_pi_against_two_independent_routes():
    p = Precision(200)
    with p.context():
        pi = const_pi(p)
        m = machin_pi(210)
        assert abs(pi - mpmath.mpf(m.numerator) / m.denominator) < mpmath.mpf(10) ** -200
        assert abs(pi - mpmath.mpf(str(agm_pi(210)))) < mpmath.mpf(10) ** -200


def test_pi_printed_digits():
    assert to_decimal_string(const_pi(Precision(30)), Precision(30)) == PI_30
    assert to_decimal_string(const_pi(Precision(1)), Precision(1)) == "3.1"


def test_cos_pi_is_minus_one():
    p = Precision(50)
    with p.context():
        assert close(mpmath.cos(const_pi(p)), -1, p)


def test_precision_validation():
    with pytest.raises(ValueError):
        Precision(0)
    with pytest.raises(ValueError):
        Precision(5, -1)
    assert Precision(20).working == 30


@pytest.mark.parametrize("f,args,expected", [
    ("exp", (1,), lambda: mpmath.e),
    ("ln", (2,), lambda: mpmath.ln2),
    ("sqrt", (2,), lambda: mpmath.sqrt(2)),
    ("arctan", (1,), lambda: mpmath.pi / 4),
    ("pow", (-2, 3), lambda: -8),
])
def test_elementary_values(f, args, expected):
    p = Precision(40)
    with p.context():
        assert close(elementary(f, *args, p=p), +expected(), p)


@pytest.mark.parametrize("f,args", [("ln", (0,)), ("ln", (-1,)), ("sqrt", (-4,)), ("pow", (-2, 0.5))])
def test_elementary_domain_errors(f, args):
    with pytest.raises(DomainError):
        elementary(f, *args, p=Precision(20))


def test_unknown_elementary():
    with pytest.raises(ValueError):
        elementary("sinh", 1, p=Precision(10))


def test_purely_imaginary():
    p = Precision(20)
    assert is_purely_imaginary(mpmath.mpc(1e-25, 3), p)
    assert not is_purely_imaginary(mpmath.mpc(1e-10, 3), p)


def test_json_keeps_all_digits():
    p = Precision(40)
    with p.context():
        z = mpmath.mpc(1, 1) / 3
    out = complex_to_json(z, p)
    assert out["re"] == "0." + "3" * 40
    assert out["im"] == out["re"]


@given(st.integers(1, 60))
def test_exp_ln_round_trip(d):
    p = Precision(d)
    with p.context():
        x = mpmath.mpf(7) / 3
        assert close(elementary("exp", elementary("ln", x, p=p), p=p), x, p, scale=True)
