"""Epstein zeta sums, the two Dirichlet L-values, and the level-4 lattice formulas.

``S(A,B,C;t) = sum over (n,m) != (0,0) of (A n^2 + B n m + C m^2)^-t`` is summed
directly over the ellipse ``Q <= R^2``; the omitted tail is bounded by comparing
each lattice point with the average of ``(sqrt Q - delta)^-2t`` over its unit
cell, where ``delta`` is the largest value of ``sqrt Q`` on the cell corners.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

import mpmath
import numpy as np
from mpmath import mpc, mpf

from .arith import Precision

MAX_DIRECT_DIGITS = 12
DEFAULT_POINT_BUDGET = 3 * 10 ** 7


class NotPositiveDefinite(ValueError):
    pass


class PrecisionUnreachable(ArithmeticError):
    pass


@dataclass(frozen=True)
class EpsteinForm:
    A: Fraction
    B: Fraction
    C: Fraction
    t: int = 2

    def __post_init__(self):
        for name in ("A", "B", "C"):
            object.__setattr__(self, name, Fraction(getattr(self, name)))
        if self.t < 2:
            raise ValueError("t >= 2 is needed for the direct sum to converge")
        if self.A <= 0 or self.discriminant >= 0:
            raise NotPositiveDefinite(f"{self.A}n^2 + {self.B}nm + {self.C}m^2 is not positive definite")

    @property
    def discriminant(self) -> Fraction:
        return self.B * self.B - 4 * self.A * self.C

    def cell_radius(self) -> float:
        """Largest ``sqrt Q`` over the corners ``(+-1/2, +-1/2)``."""
        A, B, C = float(self.A), float(self.B), float(self.C)
        return math.sqrt(max(A / 4 + B / 4 + C / 4, A / 4 - B / 4 + C / 4))

    def tail_bounds(self, R: float) -> tuple[float, float]:
        """Certified ``(lower, upper)`` for the sum over ``Q > R^2``.

        Cells of the omitted points cover ``sqrt Q > R + delta`` and lie in
        ``sqrt Q > R - delta``; on a cell ``sqrt Q`` moves by at most delta.
        """
        d = self.cell_radius()
        t = self.t
        k = 4 * math.pi / math.sqrt(float(-self.discriminant))
        lo_u = R + 2 * d
        lower = k * (lo_u ** (2 - 2 * t) / (2 * t - 2) - d * lo_u ** (1 - 2 * t) / (2 * t - 1))
        hi_u = R - 2 * d
        if hi_u <= 0:
            return max(lower, 0.0), math.inf
        upper = k * (hi_u ** (2 - 2 * t) / (2 * t - 2) + d * hi_u ** (1 - 2 * t) / (2 * t - 1))
        return max(lower, 0.0), upper

    def tail_estimate(self, R: float) -> float:
        """Leading-order size of the tail, ``2 pi / (sqrt(4AC-B^2) (t-1) R^(2t-2))``."""
        t = self.t
        return 2 * math.pi / (math.sqrt(float(-self.discriminant)) * (t - 1) * R ** (2 * t - 2))

    def points_within(self, R: float) -> float:
        return 2 * math.pi * R * R / math.sqrt(float(-self.discriminant))


class EpsteinResult(NamedTuple):
    """The exact sum lies in ``[lower, upper]``; ``value`` is the midpoint."""

    lower: float
    upper: float
    radius: float
    points: int

    @property
    def value(self) -> float:
        return (self.lower + self.upper) / 2

    @property
    def error(self) -> float:
        return (self.upper - self.lower) / 2


def epstein_partial(form: EpsteinForm, R: float) -> tuple[float, int]:
    """Sum over ``0 < Q(n,m) <= R^2``, one numpy row per m, rows combined with fsum."""
    A, B, C = float(form.A), float(form.B), float(form.C)
    R2 = R * R
    # |m| <= R * sqrt(4A / D') bounds the ellipse in the m direction
    mmax = int(math.floor(R * math.sqrt(4 * A / float(-form.discriminant)))) + 1
    rows = []
    count = 0
    for m in range(-mmax, mmax + 1):
        disc = (B * m) ** 2 - 4 * A * (C * m * m - R2)
        if disc < 0:
            continue
        root = math.sqrt(disc)
        lo = math.ceil((-B * m - root) / (2 * A)) - 1
        hi = math.floor((-B * m + root) / (2 * A)) + 1
        n = np.arange(lo, hi + 1, dtype=np.float64)
        q = A * n * n + B * n * m + C * m * m
        q = q[(q <= R2) & (q > 0)]
        count += int(q.size)
        rows.append(float(np.sum(q ** (-form.t))))
    return math.fsum(rows), count


def epstein_radius(form: EpsteinForm, R: float) -> EpsteinResult:
    """Enclosure of ``S`` from the points with ``Q <= R^2``."""
    partial, count = epstein_partial(form, R)
    lo, hi = form.tail_bounds(R)
    # one ulp-scale allowance per row sum for float64 rounding
    slack = 1e-15 * partial * (2 + math.log2(count + 2))
    return EpsteinResult(partial + lo - slack, partial + hi + slack, R, count)


def epstein(form: EpsteinForm, p: Precision, budget: int = DEFAULT_POINT_BUDGET) -> EpsteinResult:
    """Direct lattice sum with half-width below ``10^-digits`` times the value
    (at most 12 digits)."""
    if p.decimal_digits > MAX_DIRECT_DIGITS:
        raise PrecisionUnreachable(
            f"direct summation is limited to {MAX_DIRECT_DIGITS} digits (asked {p.decimal_digits})")
    # nearest nonzero lattice vectors give a floor for the value
    floor_val = min(float(form.A), float(form.C)) ** (-form.t)
    target = 10.0 ** (-p.decimal_digits) * floor_val
    R = 4 * form.cell_radius() + 1
    while True:
        lo, hi = form.tail_bounds(R)
        if (hi - lo) / 2 < 0.8 * target:
            break
        R *= 1.2
        if form.points_within(R) > budget:
            raise PrecisionUnreachable(
                f"{p.decimal_digits} digits need more than {budget} lattice points")
    return epstein_radius(form, R)


# --- Dirichlet L-values ----------------------------------------------------------

# Kronecker symbols (d/n) on n mod |d|.
CHARACTERS = {
    -4: (0, 1, 0, -1),
    -8: (0, 1, 0, 1, 0, -1, 0, -1),
}


def character(d: int, n: int) -> int:
    chi = CHARACTERS[d]
    return chi[n % len(chi)]


def dirichlet_L(d: int, s: int = 2, p: Precision = Precision(30)) -> mpf:
    """``sum chi_d(n) n^-s`` through Hurwitz zeta values at ``a/|d|``."""
    if d not in CHARACTERS:
        raise ValueError("only d = -4 and d = -8 are supported")
    k = len(CHARACTERS[d])
    with p.context():
        total = mpf(0)
        for a, c in enumerate(CHARACTERS[d]):
            if c:
                total += c * mpmath.zeta(s, mpf(a) / k)
        return total / mpf(k) ** s


def alternating_sum(b, p: Precision) -> mpf:
    """``sum_k (-1)^k b(k)`` for completely monotone ``b`` by the
    Cohen-Rodriguez Villegas-Zagier weights (error about 5.8^-n)."""
    with p.context():
        n = int(p.working * 1.31) + 4
        d = (3 + mpmath.sqrt(8)) ** n
        d = (d + 1 / d) / 2
        bb = mpf(-1)
        c = -d
        s = mpf(0)
        for k in range(n):
            c = bb - c
            s += c * b(k)
            bb = (k + n) * (k - n) * bb / ((k + mpf(1) / 2) * (k + 1))
        return s / d


def dirichlet_L_alternating(d: int, s: int = 2, p: Precision = Precision(30)) -> mpf:
    """Same values as :func:`dirichlet_L`, grouped into an alternating series."""
    if d == -4:
        return alternating_sum(lambda k: 1 / mpf(2 * k + 1) ** s, p)
    if d == -8:
        return alternating_sum(lambda k: 1 / mpf(4 * k + 1) ** s + 1 / mpf(4 * k + 3) ** s, p)
    raise ValueError("only d = -4 and d = -8 are supported")


def catalan(p: Precision) -> mpf:
    return dirichlet_L(-4, 2, p)


# --- level-4 evaluation through lattice sums -------------------------------------

class LatticeValue(NamedTuple):
    value: mpc
    error: float


def level4_lattice_terms(q_sign: int, r) -> list[tuple[Fraction, EpsteinForm]]:
    """Weights and forms inside the bracket of the level-4 lattice formula."""
    r = Fraction(r)
    if r <= 0:
        raise ValueError("r must be positive")
    if q_sign < 0:
        return [
            (Fraction(1, 16), EpsteinForm(1, 0, r / 16)),
            (Fraction(-9, 16), EpsteinForm(1, 0, r / 4)),
            (Fraction(1, 2), EpsteinForm(1, 0, r)),
        ]
    quarter = Fraction(1, 4)
    return [
        (Fraction(1, 16), EpsteinForm(1, 1, r / 16 + quarter)),
        (Fraction(-9, 16), EpsteinForm(1, 1, r / 4 + quarter)),
        (Fraction(-1, 2), EpsteinForm(1, 1, r + quarter)),
    ]


def level4_lattice_eval(q_sign: int, r, p: Precision = Precision(8),
                        budget: int = DEFAULT_POINT_BUDGET) -> LatticeValue:
    """``G_4(1/2, z)`` at ``q = sign exp(-pi sqrt r)`` as ``r^(3/2)/pi^2`` times
    a weighted sum of three Epstein values (times ``i`` when ``q < 0``)."""
    r = Fraction(r)
    total = []
    err = 0.0
    for w, form in level4_lattice_terms(q_sign, r):
        res = epstein(form, p, budget)
        total.append(float(w) * res.value)
        err += abs(float(w)) * res.error
    with p.context():
        scale = mpmath.power(mpf(r.numerator) / r.denominator, 1.5) / mpmath.pi ** 2
        val = scale * mpf(math.fsum(total))
        value = mpc(0, val) if q_sign < 0 else mpc(val)
        return LatticeValue(value, float(scale) * err)


def level4_positive_rowsum(r, p: Precision = Precision(30)) -> mpf:
    """``G_4(1/2, z)`` at ``q = exp(-pi sqrt r)`` from the lattice of ``E_4(i sqrt q)``.

    Only the lattice of ``tau/2 + 1/4`` contributes for ``q > 0``; each row
    ``m`` is summed over n in closed form (``pi cot`` and ``pi^2 csc^2``),
    leaving ``(4/pi^2) sum_{m>=1} Re[pi cot(pi a) + i v pi^2 csc^2(pi a)] / m^3``
    with ``v = m sqrt(r)/4`` and ``a = m/4 + i v``.  The rows decay like
    ``exp(-pi m sqrt r / 2)``.
    """
    r = Fraction(r)
    if r <= 0:
        raise ValueError("r must be positive")
    with p.context():
        sr = mpmath.sqrt(mpf(r.numerator) / r.denominator)
        eps = mpf(10) ** (-p.working)
        total = mpf(0)
        m = 1
        while True:
            v = m * sr / 4
            a = mpc(mpf(m) / 4, v)
            row = mpmath.re(mpmath.pi * mpmath.cot(mpmath.pi * a)
                            + mpc(0, v) * mpmath.pi ** 2 * mpmath.csc(mpmath.pi * a) ** 2)
            total += row / mpf(m) ** 3
            if mpmath.exp(-mpmath.pi * m * sr / 2) * (1 + v) < eps:
                break
            m += 1
        return 4 * total / mpmath.pi ** 2
