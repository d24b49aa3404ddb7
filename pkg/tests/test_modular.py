from fractions import Fraction

import mpmath
import pytest

from shiftlab.arith import Precision
from shiftlab.modular import (
    G_PREFACTOR,
    Level,
    RootObstruction,
    c_coefficients,
    check_h_multiplicativity,
    congruence_check,
    eisenstein,
    eta,
    eta_power,
    f_squared,
    g_series,
    h_m_series,
    lambda_modular,
    sigma3_odd_series,
    theta2,
    theta3,
    theta4,
    weight4_shift_form,
    z_level,
)
from shiftlab.exact import QuadNum, quad_to_real, sigma_k
from shiftlab.qseries import QSeries, eval_qseries, series_inverse, series_power, substitute_qm
from shiftlab.tables import table_rows

N = 120


def direct_euler_product(n):
    c = [1] + [0] * (n - 1)
    for k in range(1, n):
        # multiply by (1 - q^k)
        for i in range(n - 1, k - 1, -1):
            c[i] -= c[i - k]
    return c


def test_eta_against_direct_product():
    e = eta(N)
    assert e.offset == Fraction(1, 24)
    assert [int(c) for c in e.coeffs] == direct_euler_product(N)


def test_eta_power_negative_exponent():
    a = eta_power(2, 8, 60) * eta_power(2, -8, 60)
    assert a.offset == 0 and a.coeffs == QSeries.one(60).coeffs


def test_theta_series_direct():
    t3 = theta3(N)
    assert [int(c) for c in t3.coeffs] == [sum(1 for n in range(-20, 21) if n * n == k) for k in range(N)]
    t2 = theta2(N)
    assert t2.offset == Fraction(1, 4)
    # theta2 = sum over half-integers q^((n+1/2)^2) -> exponents 1/4 + n(n+1)
    assert [int(c) for c in t2.coeffs][:13] == [2, 0, 2, 0, 0, 0, 2, 0, 0, 0, 0, 0, 2]


def test_eisenstein_direct():
    e4 = eisenstein(4, 50)
    assert e4.coeff(0) == 1 and all(e4.coeff(n) == 240 * sigma_k(n, 3) for n in range(1, 50))
    e6 = eisenstein(6, 50)
    assert all(e6.coeff(n) == -504 * sigma_k(n, 5) for n in range(1, 50))
    # E8 = E4^2
    assert eisenstein(8, 80) == eisenstein(4, 80) ** 2
    with pytest.raises(ValueError):
        eisenstein(10, 5)


def test_classical_identities_200_terms():
    M = 200
    t2, t3, t4 = theta2(M) ** 4, theta3(M) ** 4, theta4(M) ** 4
    assert all(t3.coeff(e) == t2.coeff(e) + t4.coeff(e) for e in range(M))
    lhs = eisenstein(4, M) ** 3 - eisenstein(6, M) ** 2
    rhs = eta_power(1, 24, M).scalar_mul(1728)
    assert all(lhs.coeff(e) == rhs.coeff(e) for e in range(1, M))
    # E4 = (theta2^8 + theta3^8 + theta4^8) / 2 at q -> q^2 convention
    th = (theta2(M) ** 8 + theta3(M) ** 8 + theta4(M) ** 8).scalar_mul(Fraction(1, 2))
    e4 = substitute_qm(eisenstein(4, M // 2), 2)
    assert all(th.coeff(e) == e4.coeff(e) for e in range(M - 2))


def test_lambda_leading_terms():
    lam = lambda_modular(10)
    assert [int(c) for c in lam.coeffs[:4]] == [16, -128, 704, -3072]


def test_levels():
    assert Level(2).s == 4 and Level.from_s(6).ell == 1
    with pytest.raises(ValueError):
        Level(5)
    with pytest.raises(ValueError):
        Level.from_s(5)


@pytest.mark.parametrize("level,s", [(4, 2), (2, 4), (3, 3), (1, 6)])
def test_z_and_F_squared_numerically(level, s):
    """F(z(q))^2 from the hypergeometric function equals the modular form."""
    p = Precision(25)
    M = 80
    with p.context():
        # 1728/j has its nearest pole at |q| = exp(-pi sqrt 3), about 0.0043
        q = mpmath.mpf("0.001") if level == 1 else mpmath.mpf("0.01")
        z = eval_qseries(z_level(level, M), q, p).value.real
        F = mpmath.hyp3f2(0.5, mpmath.mpf(1) / s, 1 - mpmath.mpf(1) / s, 1, 1, z)
        f2 = eval_qseries(f_squared(level, M), q, p).value.real
        assert abs(F * F - f2) < mpmath.mpf(10) ** -22


def test_table_z_values_match_z_of_q():
    """Every row's z equals z_level evaluated at q = sign exp(-pi sqrt r)."""
    p = Precision(20)
    for row in table_rows():
        c = row.case
        with p.context():
            q = c.q_sign * mpmath.exp(-mpmath.pi * mpmath.sqrt(mpmath.mpf(c.r.numerator) / c.r.denominator))
            M = int(60 / float(c.r) ** 0.5) + 60
            z = eval_qseries(z_level(c.level, M), q, p, check=False).value.real
            assert abs(z - quad_to_real(c.z, p)) < mpmath.mpf(10) ** -15, c.id


def test_level4_g_is_odd_divisor_series():
    """theta form of g(q) equals sum sigma_3(2n+1)(-q)^n."""
    assert g_series(4, 150).pure == sigma3_odd_series(150)


def test_prefactors_from_leading_z_coefficient():
    p = Precision(30)
    for level in (1, 2, 3, 4):
        lead = z_level(level, 3).normalized().coeffs[0]
        with p.context():
            assert abs(quad_to_real(G_PREFACTOR[level], p) - mpmath.sqrt(lead) / 8) < 1e-25


def test_level4_odd_divisor_values():
    g = sigma3_odd_series(5)
    assert [int(c) for c in g.coeffs] == [1, -28, 126, -344, 757]


def test_c_coefficient_listings():
    assert c_coefficients(2, 7) == [1, -44, 1126, -27096, 640909, -15036548, 351245038]
    assert c_coefficients(3, 8) == [1, -17, 126, -832, 5329, -33516, 209054, -1298142]
    assert c_coefficients(1, 6) == [1, -332, 81126, -19147288, 4472942221, -1040187455460]


def test_h_m_by_theta_formula():
    """h_m against 16^(-1/m) theta3^8 (1 - 2 lambda) [lambda(1 - lambda)]^(1/m) at q^m."""
    M = 180
    lam = lambda_modular(M + 2).normalized()
    t3 = theta3(M + 2)
    for m in (2, 3, 4, 6, 8):
        K = M // m + 1
        L = lam.truncate(K)
        body = (series_power(L.shift(-1).scalar_mul(Fraction(1, 16)), Fraction(1, m))
                * series_power((1 - L).truncate(K), Fraction(1, m))
                * t3.truncate(K) ** 8 * (1 - 2 * L).truncate(K))
        ref = substitute_qm(body.truncate(K), m).shift(1)
        h = h_m_series(m, M)
        assert all(h.coeff(e) == ref.coeff(e) for e in range(1, M)), m


def test_h_m_integral_and_multiplicative():
    for m in (2, 3, 4, 6, 8, 12, 24):
        h = h_m_series(m, 240)
        assert h.is_integral()
    for m in (2, 3, 4, 6, 8):
        assert all(pc.ok for pc in check_h_multiplicativity(m, 15))


def test_h_m_recomputed_values():
    # values where the printed h_3, h_4, h_6 listings carry sign slips
    h3, h4, h6 = h_m_series(3, 100), h_m_series(4, 100), h_m_series(6, 100)
    assert h3.coeff(31) == 308
    assert [h4.coeff(e) for e in (5, 9, 13, 17, 25, 29)] == [-22, -27, 18, -94, 359, 130]
    assert h6.coeff(43) == 520 and h6.coeff(67) == 880
    # h_3 and h_6 differ by the sign pattern on exponents 7 mod 12
    for e in range(1, 100, 6):
        assert h6.coeff(e) == (-1 if e % 12 == 7 else 1) * h3.coeff(e)


def test_multiplicativity_needs_truncation():
    with pytest.raises(ValueError):
        check_h_multiplicativity(2, 15, h_m_series(2, 100))


def test_unsupported_roots():
    with pytest.raises(RootObstruction):
        weight4_shift_form(2, Fraction(1, 5), 10)
    with pytest.raises(ValueError):
        h_m_series(5, 10)


@pytest.mark.parametrize("level", [1, 2, 3])
def test_congruences(level):
    rep = congruence_check(level, 200)
    assert rep.ok and rep.residues
    assert rep.to_json()["pass"] is True


def test_shift_form_prefactor():
    form = weight4_shift_form(4, Fraction(1, 2), 10)
    assert form.base == 64 and form.prefactor_quad() == QuadNum(8)
    assert weight4_shift_form(1, Fraction(1, 2), 5).prefactor_quad() == QuadNum(0, 24, 3)
