"""Modular building blocks and the per-level q-series behind the shift 1/2.

All constructors return exact :class:`~shiftlab.qseries.QSeries` objects
truncated to ``N`` terms past their leading exponent.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .exact import QuadNum, divisor_sums
from .qseries import (
    QSeries,
    RootObstruction,
    integrate_dq_over_q,
    series_inverse,
    series_nth_root,
    series_power,
    substitute_qm,
)

# level -> s, following the hypergeometric parameters (1/2, 1/s, 1 - 1/s)
S_OF_LEVEL = {4: 2, 3: 3, 2: 4, 1: 6}
SUPPORTED_ROOTS = (1, 2, 3, 4, 6, 8, 12, 24)


@dataclass(frozen=True)
class Level:
    ell: int

    def __post_init__(self):
        if self.ell not in S_OF_LEVEL:
            raise ValueError(f"level must be one of 1, 2, 3, 4 (got {self.ell})")

    @property
    def s(self) -> int:
        return S_OF_LEVEL[self.ell]

    @classmethod
    def from_s(cls, s: int) -> "Level":
        for ell, ss in S_OF_LEVEL.items():
            if ss == s:
                return cls(ell)
        raise ValueError(f"s must be one of 2, 3, 4, 6 (got {s})")


def _ell(level) -> int:
    return level.ell if isinstance(level, Level) else Level(int(level)).ell


# --- eta, theta, Eisenstein -------------------------------------------------

@lru_cache(maxsize=None)
def _euler_product(N: int) -> tuple:
    """Coefficients of prod_{n>=1} (1 - q^n) via the pentagonal number theorem."""
    c = [0] * N
    k = 0
    while True:
        hit = False
        for kk in ((k,) if k == 0 else (k, -k)):
            e = kk * (3 * kk - 1) // 2
            if e < N:
                c[e] += -1 if kk % 2 else 1
                hit = True
        if not hit and k > 0:
            break
        k += 1
    return tuple(c)


def eta(N: int) -> QSeries:
    """Dedekind eta ``q^(1/24) prod (1 - q^n)``."""
    return QSeries(Fraction(1, 24), _euler_product(N))


@lru_cache(maxsize=None)
def eta_power(m: int, k: int, N: int) -> QSeries:
    """``eta(q^m)**k`` to N terms (k may be negative)."""
    base = QSeries(Fraction(0), _euler_product(-(-N // m)))
    body = base ** k if k >= 0 else series_inverse(base) ** (-k)
    body = substitute_qm(body, m).truncate(N)
    return body.shift(Fraction(m * k, 24))


def theta2(N: int) -> QSeries:
    c = [0] * N
    n = 0
    while n * (n + 1) < N:
        c[n * (n + 1)] = 2
        n += 1
    return QSeries(Fraction(1, 4), tuple(c))


def theta3(N: int) -> QSeries:
    c = [0] * N
    c[0] = 1
    n = 1
    while n * n < N:
        c[n * n] = 2
        n += 1
    return QSeries(Fraction(0), tuple(c))


def theta4(N: int) -> QSeries:
    c = [0] * N
    c[0] = 1
    n = 1
    while n * n < N:
        c[n * n] = 2 * (-1) ** n
        n += 1
    return QSeries(Fraction(0), tuple(c))


_EIS = {4: (240, 3), 6: (-504, 5), 8: (480, 7)}


@lru_cache(maxsize=None)
def eisenstein(k: int, N: int) -> QSeries:
    if k not in _EIS:
        raise ValueError("weight must be 4, 6 or 8")
    scale, power = _EIS[k]
    sig = divisor_sums(N, power)
    return QSeries(Fraction(0), (1,) + tuple(scale * sig[n] for n in range(1, N)))


# --- hauptmoduln and z(q) ------------------------------------------------------

@lru_cache(maxsize=None)
def lambda_modular(N: int) -> QSeries:
    return theta2(N) ** 4 / theta3(N) ** 4


@lru_cache(maxsize=None)
def x2(N: int) -> QSeries:
    """``64 / (64 + eta(q)^24 / eta(q^2)^24)``."""
    ratio = eta_power(1, 24, N + 1) * eta_power(2, -24, N + 1)
    return series_inverse(ratio + 64).scalar_mul(64).truncate(N)


@lru_cache(maxsize=None)
def x3(N: int) -> QSeries:
    """``27 / (27 + eta(q)^12 / eta(q^3)^12)``."""
    ratio = eta_power(1, 12, N + 1) * eta_power(3, -12, N + 1)
    return series_inverse(ratio + 27).scalar_mul(27).truncate(N)


def _four_x_one_minus_x(x: QSeries) -> QSeries:
    return (x * (1 - x)).scalar_mul(4)


@lru_cache(maxsize=None)
def z_level(level, N: int) -> QSeries:
    ell = _ell(level)
    if ell == 4:
        return _four_x_one_minus_x(lambda_modular(N))
    if ell == 2:
        return _four_x_one_minus_x(x2(N))
    if ell == 3:
        return _four_x_one_minus_x(x3(N))
    e4 = eisenstein(4, N)
    return (eta_power(1, 24, N) * series_inverse(e4 ** 3)).scalar_mul(1728)


@lru_cache(maxsize=None)
def f_squared(level, N: int) -> QSeries:
    """``F_ell(0, q)**2`` from the classical eta/theta/Eisenstein forms."""
    ell = _ell(level)
    if ell == 4:
        return theta3(N) ** 8
    if ell == 2:
        num = eta_power(2, 16, N).scalar_mul(64)
        return num * eta_power(1, -8, N) * series_inverse(x2(N))
    if ell == 3:
        cubic = 1 + (eta_power(9, 3, N + 1) * eta_power(1, -3, N + 1)).scalar_mul(9)
        quot = 1 + (eta_power(1, 12, N + 2) * eta_power(3, -12, N + 2)).scalar_mul(Fraction(1, 27))
        return (eta_power(3, 8, N).scalar_mul(27) * cubic * quot).truncate(N)
    return eisenstein(4, N)


# --- the weight-4 form behind the shift x ------------------------------------

@dataclass(frozen=True)
class ShiftForm:
    """``base**exponent * series``: ``F^2 sqrt(1-z) z^x`` with the constant of
    ``z^x`` kept apart so that ``series`` stays rational."""

    base: Fraction
    exponent: Fraction
    series: QSeries

    def prefactor_quad(self) -> QuadNum:
        """``base**exponent`` as a quadratic number (exponent denominator <= 2)."""
        e = self.exponent
        if e.denominator == 1:
            return QuadNum(self.base ** e.numerator)
        if e.denominator != 2:
            raise RootObstruction(f"{self.base}^{e} is not quadratic")
        b = self.base
        return QuadNum(Fraction(0), Fraction(1, b.denominator), b.numerator * b.denominator) ** e.numerator


def _check_shift(x) -> Fraction:
    x = Fraction(x)
    if x.denominator not in SUPPORTED_ROOTS:
        raise RootObstruction(f"shift denominator {x.denominator} not in {SUPPORTED_ROOTS}")
    return x


@lru_cache(maxsize=None)
def weight4_shift_form(level, x, N: int) -> ShiftForm:
    """``F_ell(0,q)^2 * sqrt(1 - z_ell) * z_ell^x`` for rational x."""
    x = _check_shift(x)
    ell = _ell(level)
    z = z_level(ell, N + 1).normalized()
    if z.offset != 1:
        raise RootObstruction("z(q) must start at q^1")
    c = z.coeffs[0]
    unit = z.shift(-1).scalar_mul(1 / c).truncate(N)
    root_one_minus_z = series_nth_root(1 - z_level(ell, N), 2)
    body = f_squared(ell, N) * root_one_minus_z
    if x:
        body = body * series_power(unit, x)
    return ShiftForm(c, x, body.shift(x))


# --- per-level g(q), f(q), c_n ---------------------------------------------------

@dataclass(frozen=True)
class GSeries:
    """``(q d/dq)^3 phi = prefactor * sqrt(q) * pure`` at the shift 1/2."""

    level: int
    pure: QSeries
    algebraic_prefactor: QuadNum = field(default_factory=lambda: QuadNum(1))


# (q d/dq)^3 phi = (1/8) F^2 sqrt(1-z) sqrt(z); the square root of the leading
# coefficient of z (64, 256, 108, 1728) over 8 gives these constants.
G_PREFACTOR = {
    4: QuadNum(1),
    2: QuadNum(2),
    3: QuadNum(0, Fraction(3, 4), 3),
    1: QuadNum(0, 3, 3),
}


@lru_cache(maxsize=None)
def g_series(level, N: int) -> GSeries:
    ell = _ell(level)
    if ell == 4:
        t2, t4 = theta2(N + 1), theta4(N + 1)
        raw = (t2 ** 2 * t4 ** 2 * (t4 ** 4 - t2 ** 4)).scalar_mul(Fraction(1, 4))
    elif ell == 2:
        ratio = eta_power(1, 24, N + 2) * eta_power(2, -24, N + 2)
        frac = series_inverse(ratio + 64).scalar_mul(128)
        raw = eta_power(1, 4, N + 1) * eta_power(2, 4, N + 1) * (1 - frac)
    elif ell == 3:
        ratio = eta_power(1, 12, N + 2) * eta_power(3, -12, N + 2)
        frac = series_inverse(ratio + 27).scalar_mul(54)
        cubic = 1 + (eta_power(9, 3, N + 2) * eta_power(1, -3, N + 2)).scalar_mul(9)
        raw = eta_power(3, 2, N + 1) * eta_power(1, 6, N + 1) * cubic * (1 - frac)
    else:
        raw = eta_power(1, 12, N) * eisenstein(6, N) * series_inverse(eisenstein(8, N))
    raw = raw.normalized()
    if raw.offset != Fraction(1, 2):
        raise ArithmeticError(f"unexpected leading exponent {raw.offset} for level {ell}")
    return GSeries(ell, raw.shift(Fraction(-1, 2)).truncate(N), G_PREFACTOR[ell])


def sigma3_odd_series(N: int) -> QSeries:
    """``sum sigma_3(2n+1) (-q)^n``, the closed form of the level-4 g(q)."""
    sig = divisor_sums(2 * N, 3)
    return QSeries(Fraction(0), tuple((-1) ** n * sig[2 * n + 1] for n in range(N)))


def _normalize_int(x: Fraction):
    return x.numerator if x.denominator == 1 else x


def c_coefficients(level, N: int) -> list:
    """``c_n = g_n / (2n+1)``: ints where integral, Fractions otherwise.

    Obtained as ``f = (1/(2 sqrt q)) * integral sqrt(q) g(q) dq/q``.
    """
    g = g_series(level, N).pure
    f = integrate_dq_over_q(g.shift(Fraction(1, 2))).shift(Fraction(-1, 2)).scalar_mul(Fraction(1, 2))
    return [_normalize_int(c) for c in f.coeffs]


@lru_cache(maxsize=None)
def h_m_series(m: int, N: int) -> QSeries:
    """``64^(-1/m) f(1/m, q^m)`` for level 4, known through ``q^(N)``."""
    if m not in SUPPORTED_ROOTS[1:]:
        raise ValueError(f"m must be one of {SUPPORTED_ROOTS[1:]}")
    terms = -(-N // m)
    form = weight4_shift_form(4, Fraction(1, m), terms)
    if form.base != 64:
        raise RootObstruction("level-4 z(q) should start with 64 q")
    return substitute_qm(form.series, m).truncate(N)


@dataclass
class PairCheck:
    k: int
    j: int
    lhs: int
    rhs: int

    @property
    def ok(self) -> bool:
        return self.lhs == self.rhs


def check_h_multiplicativity(m: int, K: int, series: QSeries | None = None) -> list[PairCheck]:
    """coeff(q^k)*coeff(q^j) == coeff(q^kj) for coprime k < j <= K, k = j = 1 mod m."""
    h = series if series is not None else h_m_series(m, K * K)
    if h.end <= K * K:
        raise ValueError(f"need truncation past q^{K * K}")
    out = []
    idx = [n for n in range(1, K + 1) if n % m == 1 % m]
    for a in idx:
        for b in idx:
            if a < b and math.gcd(a, b) == 1:
                lhs = h.coeff(a) * h.coeff(b)
                out.append(PairCheck(a, b, int(lhs), int(h.coeff(a * b))))
    return out


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    return all(n % d for d in range(3, math.isqrt(n) + 1, 2))


@dataclass
class CongruenceReport:
    level: int
    n_max: int
    non_integral: list = field(default_factory=list)
    residues: list = field(default_factory=list)  # (n, p, c_n mod p^2)

    @property
    def violations(self) -> list:
        return [(n, p, r) for n, p, r in self.residues if r != 1]

    @property
    def ok(self) -> bool:
        return not self.non_integral and not self.violations

    def to_json(self) -> dict:
        return {
            "level": self.level,
            "n_max": self.n_max,
            "non_integral": self.non_integral,
            "prime_checks": len(self.residues),
            "violations": [list(v) for v in self.violations],
            "pass": self.ok,
        }


def congruence_check(level, N: int) -> CongruenceReport:
    """Divisibility of g_n by 2n+1, and c_n = 1 (mod p^2) when 2n+1 = p prime."""
    ell = _ell(level)
    g = g_series(ell, N).pure.coeffs
    rep = CongruenceReport(ell, N)
    for n, gn in enumerate(g):
        if gn.denominator != 1 or gn.numerator % (2 * n + 1):
            rep.non_integral.append(n)
            continue
        p = 2 * n + 1
        if _is_prime(p):
            rep.residues.append((n, p, (gn.numerator // p) % (p * p)))
    return rep
