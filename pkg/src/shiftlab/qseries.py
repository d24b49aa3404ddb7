"""Exact truncated power series in q with a rational leading exponent.

``QSeries(offset=e, coeffs=(c0, c1, ...))`` stands for
``q**e * (c0 + c1*q + ... + c_{N-1}*q**(N-1) + O(q**N))``.  Coefficients are
:class:`fractions.Fraction`; nothing numeric happens until :func:`eval_qseries`.
"""

from __future__ import annotations

import math
import operator
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, NamedTuple

import mpmath

from .arith import Precision
from .exact import as_fraction


class IncompatibleOffset(ValueError):
    pass


class NotUnit(ArithmeticError):
    pass


class RootObstruction(ArithmeticError):
    pass


class ZeroExponent(ArithmeticError):
    pass


class TailTooLarge(ArithmeticError):
    pass


def _lcm_den(xs: Iterable[Fraction]) -> int:
    out = 1
    for x in xs:
        d = x.denominator
        if d != 1:
            out = out * d // math.gcd(out, d)
    return out


def _convolve(a: list[Fraction], b: list[Fraction], n: int) -> list[Fraction]:
    """First *n* coefficients of the product, through common-denominator ints."""
    da, db = _lcm_den(a[:n]), _lcm_den(b[:n])
    ai = [int(x * da) for x in a[:n]]
    bi = [int(x * db) for x in b[:n]]
    den = da * db
    out = []
    for k in range(n):
        s = sum(map(operator.mul, ai[:k + 1], bi[k::-1]))
        out.append(Fraction(s, den))
    return out


def _exact_root(c: Fraction, m: int) -> Fraction:
    if c < 0 and m % 2 == 0:
        raise RootObstruction(f"even root of negative leading coefficient {c}")
    sgn = -1 if c < 0 else 1
    num, den = abs(c.numerator), c.denominator
    rn = round(num ** (1.0 / m)) if num < 2 ** 1000 else _iroot(num, m)
    rd = round(den ** (1.0 / m)) if den < 2 ** 1000 else _iroot(den, m)
    for cand_n in (rn - 1, rn, rn + 1):
        for cand_d in (rd - 1, rd, rd + 1):
            if cand_n >= 0 and cand_d > 0 and cand_n ** m == num and cand_d ** m == den:
                return sgn * Fraction(cand_n, cand_d)
    raise RootObstruction(f"{c} has no rational {m}-th root")


def _iroot(n: int, m: int) -> int:
    lo, hi = 0, 1 << (n.bit_length() // m + 1)
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if mid ** m <= n:
            lo = mid
        else:
            hi = mid - 1
    return lo


@dataclass(frozen=True)
class QSeries:
    offset: Fraction
    coeffs: tuple

    def __post_init__(self):
        object.__setattr__(self, "offset", as_fraction(self.offset))
        object.__setattr__(self, "coeffs", tuple(as_fraction(c) for c in self.coeffs))

    # constructors --------------------------------------------------------
    @classmethod
    def from_coeffs(cls, coeffs, offset=0) -> "QSeries":
        return cls(Fraction(offset), tuple(coeffs))

    @classmethod
    def one(cls, N: int) -> "QSeries":
        return cls(Fraction(0), (Fraction(1),) + (Fraction(0),) * (N - 1))

    @classmethod
    def monomial(cls, exponent, N: int, coeff=1) -> "QSeries":
        return cls(Fraction(exponent), (Fraction(coeff),) + (Fraction(0),) * (N - 1))

    # basic accessors -----------------------------------------------------
    @property
    def trunc(self) -> int:
        return len(self.coeffs)

    @property
    def end(self) -> Fraction:
        """First exponent whose coefficient is unknown."""
        return self.offset + len(self.coeffs)

    def coeff(self, exponent) -> Fraction:
        k = Fraction(exponent) - self.offset
        if k.denominator != 1 or k < 0:
            return Fraction(0)
        if k >= len(self.coeffs):
            raise IndexError(f"q^{exponent} lies beyond the truncation")
        return self.coeffs[int(k)]

    def terms(self):
        """Yield ``(exponent, coefficient)`` for the retained terms."""
        for n, c in enumerate(self.coeffs):
            yield self.offset + n, c

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coeffs)

    def int_coeffs(self) -> list[int]:
        if not self.is_integral():
            raise ValueError("series has non-integer coefficients")
        return [c.numerator for c in self.coeffs]

    def normalized(self) -> "QSeries":
        """Move leading zero coefficients into the offset."""
        k = 0
        while k < len(self.coeffs) and self.coeffs[k] == 0:
            k += 1
        if k == 0 or k == len(self.coeffs):
            return self
        return QSeries(self.offset + k, self.coeffs[k:])

    def truncate(self, N: int) -> "QSeries":
        return QSeries(self.offset, self.coeffs[:N])

    def shift(self, k) -> "QSeries":
        """Multiply by ``q**k``."""
        return QSeries(self.offset + Fraction(k), self.coeffs)

    # arithmetic ------------------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, QSeries):
            other = self._constant(other)
        diff = other.offset - self.offset
        if diff.denominator != 1:
            raise IncompatibleOffset(f"offsets {self.offset} and {other.offset} differ by a non-integer")
        lo = min(self.offset, other.offset)
        hi = min(self.end, other.end)
        n = int(hi - lo)
        if n <= 0:
            raise IncompatibleOffset("no overlap in known terms")
        out = [Fraction(0)] * n
        for s in (self, other):
            k0 = int(s.offset - lo)
            for i, c in enumerate(s.coeffs[: n - k0]):
                out[k0 + i] += c
        return QSeries(lo, tuple(out))

    def __radd__(self, other):
        return self.__add__(other)

    def _constant(self, c) -> "QSeries":
        # a constant is known exactly; pad it to cover self's known range
        n = math.ceil(self.end)
        if n <= 0:
            raise IncompatibleOffset("constant term lies beyond the truncation")
        return QSeries(Fraction(0), (as_fraction(c),) + (Fraction(0),) * (n - 1))

    def __neg__(self):
        return QSeries(self.offset, tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        if isinstance(other, QSeries):
            return self + (-other)
        return self + (-Fraction(other))

    def __rsub__(self, other):
        return (-self) + other

    def scalar_mul(self, c) -> "QSeries":
        c = as_fraction(c)
        return QSeries(self.offset, tuple(c * x for x in self.coeffs))

    def __mul__(self, other):
        if not isinstance(other, QSeries):
            return self.scalar_mul(other)
        a, b = self.normalized(), other.normalized()
        n = min(a.trunc, b.trunc)
        return QSeries(a.offset + b.offset, tuple(_convolve(list(a.coeffs), list(b.coeffs), n)))

    def __rmul__(self, other):
        return self.scalar_mul(other)

    def __pow__(self, k):
        if isinstance(k, Fraction) and k.denominator != 1:
            return series_power(self, k)
        k = int(k)
        if k < 0:
            return series_inverse(self) ** (-k)
        out = None
        base = self
        while k:
            if k & 1:
                out = base if out is None else out * base
            k >>= 1
            if k:
                base = base * base
        if out is None:
            return QSeries.one(self.trunc)
        return out

    def __truediv__(self, other):
        if isinstance(other, QSeries):
            return self * series_inverse(other)
        return self.scalar_mul(1 / as_fraction(other))

    def __eq__(self, other):
        if not isinstance(other, QSeries):
            return NotImplemented
        a, b = self.normalized(), other.normalized()
        return a.offset == b.offset and a.coeffs == b.coeffs

    def __hash__(self):
        return hash((self.offset, self.coeffs))

    def __repr__(self):
        head = ", ".join(str(c) for c in self.coeffs[:6])
        more = ", ..." if len(self.coeffs) > 6 else ""
        return f"QSeries(offset={self.offset}, trunc={self.trunc}, coeffs=[{head}{more}])"


def series_arith(op: str, a: QSeries, b) -> QSeries:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "scalar_mul":
        return a.scalar_mul(b)
    raise ValueError(f"unknown op {op!r}")


def series_inverse(a: QSeries) -> QSeries:
    a = a.normalized()
    c = a.coeffs
    if not c or c[0] == 0:
        raise NotUnit("series has no nonzero leading coefficient")
    a0 = c[0]
    u = [x / a0 for x in c]
    D = _lcm_den(u)
    U = [int(x * D) for x in u]
    # 1/u = sum B_k / D**k q^k with integer B_k
    B = [1]
    Dp = [1]
    for k in range(1, len(u)):
        Dp.append(Dp[-1] * D)
        B.append(-sum(U[j] * B[k - j] * Dp[j - 1] for j in range(1, k + 1) if U[j]))
    b = [Fraction(Bk, Dk) / a0 for Bk, Dk in zip(B, Dp)]
    return QSeries(-a.offset, tuple(b))


def series_power(a: QSeries, alpha) -> QSeries:
    """``a**alpha`` for rational alpha via the J.C.P. Miller recurrence."""
    alpha = as_fraction(alpha)
    a = a.normalized()
    c = a.coeffs
    if not c or c[0] == 0:
        raise NotUnit("series has no nonzero leading coefficient")
    if alpha.denominator == 1:
        return a ** int(alpha)
    lead = _exact_root(c[0], alpha.denominator) ** alpha.numerator
    n = len(c)
    u = [x / c[0] for x in c]
    b = [Fraction(0)] * n
    b[0] = Fraction(1)
    for k in range(1, n):
        s = Fraction(0)
        for j in range(1, k + 1):
            if u[j]:
                s += ((alpha + 1) * j - k) * u[j] * b[k - j]
        b[k] = s / k
    return QSeries(a.offset * alpha, tuple(lead * x for x in b))


def series_nth_root(a: QSeries, m: int) -> QSeries:
    if m < 1:
        raise ValueError("root index must be positive")
    if m == 1:
        return a
    return series_power(a, Fraction(1, m))


def substitute_qm(a: QSeries, m: int) -> QSeries:
    """``q -> q**m``."""
    if m < 1:
        raise ValueError("m must be >= 1")
    out = [Fraction(0)] * (m * len(a.coeffs))
    for i, c in enumerate(a.coeffs):
        out[m * i] = c
    return QSeries(a.offset * m, tuple(out))


def q_d_dq(a: QSeries) -> QSeries:
    return QSeries(a.offset, tuple(c * (a.offset + n) for n, c in enumerate(a.coeffs)))


def integrate_dq_over_q(a: QSeries) -> QSeries:
    """Formal inverse of ``q d/dq`` with zero constant of integration."""
    out = []
    for n, c in enumerate(a.coeffs):
        e = a.offset + n
        if e == 0:
            if c != 0:
                raise ZeroExponent("cannot integrate a constant term against dq/q")
            out.append(Fraction(0))
        else:
            out.append(c / e)
    return QSeries(a.offset, tuple(out))


class Evaluated(NamedTuple):
    value: mpmath.mpc
    tail_bound: mpmath.mpf


def growth_ratio(a: QSeries, window: int = 8) -> float:
    """Estimate of ``lim |c_{n+1}/c_n|`` from the last retained terms."""
    tail = [(n, _abs_log(c)) for n, c in enumerate(a.coeffs) if c][-(window + 1):]
    if len(tail) < 2:
        return 1.0
    slopes = [(l1 - l0) / (n1 - n0) for (n0, l0), (n1, l1) in zip(tail, tail[1:])]
    return math.exp(max(slopes))


def _abs_log(c: Fraction) -> float:
    return math.log(abs(c.numerator)) - math.log(c.denominator)


def eval_qseries(a: QSeries, q, p: Precision, check: bool = True) -> Evaluated:
    """Sum the retained terms at a numeric ``q`` (|q| < 1), principal branch.

    The tail bound extrapolates the last coefficient with the observed growth
    ratio; ``TailTooLarge`` is raised when it exceeds ``10**-digits`` and
    *check* is set.
    """
    with p.context():
        q = mpmath.mpc(q)
        aq = abs(q)
        if aq >= 1:
            raise TailTooLarge("|q| >= 1: series does not converge")
        total = mpmath.mpc(0)
        qn = mpmath.power(q, a.offset) if a.offset else mpmath.mpc(1)
        for c in a.coeffs:
            if c:
                total += (mpmath.mpf(c.numerator) / c.denominator) * qn
            qn *= q
        nz = [(n, c) for n, c in enumerate(a.coeffs) if c]
        if not nz:
            tail = mpmath.mpf(0)
        else:
            n_last, c_last = nz[-1]
            rho = growth_ratio(a)
            step = mpmath.mpf(rho) * aq
            if step >= 1:
                tail = mpmath.inf
            else:
                gap = len(a.coeffs) - n_last
                tail = (abs(mpmath.mpf(c_last.numerator) / c_last.denominator)
                        * aq ** (n_last + a.offset) * step ** gap / (1 - step))
        if check and tail > p.tolerance():
            raise TailTooLarge(f"tail bound {mpmath.nstr(tail, 5)} exceeds 1e-{p.decimal_digits}")
        return Evaluated(total, tail)


def terms_for(q_abs: float, digits: int, growth: float = 1.0) -> int:
    """Number of terms so that ``(growth*|q|)**N < 10**-(digits+5)``."""
    rate = -math.log(q_abs * growth)
    if rate <= 0:
        raise TailTooLarge("series diverges at this |q|")
    return math.ceil((digits + 5) * math.log(10) / rate)


# text dump ------------------------------------------------------------------

def dump_coefficients(a: QSeries) -> str:
    lines = [f"offset {a.offset} trunc {a.trunc}"]
    for n, c in enumerate(a.coeffs):
        lines.append(f"{n}\t{c.numerator}/{c.denominator}")
    return "\n".join(lines) + "\n"


def load_coefficients(text: str) -> QSeries:
    rows = [ln for ln in text.splitlines() if ln.strip()]
    head = rows[0].split()
    if head[0] != "offset" or head[2] != "trunc":
        raise ValueError("missing 'offset e trunc N' header")
    offset, n = Fraction(head[1]), int(head[3])
    coeffs = [Fraction(0)] * n
    for ln in rows[1:]:
        idx, val = ln.split("\t")
        coeffs[int(idx)] = Fraction(val)
    return QSeries(offset, tuple(coeffs))


def bfile(values: Iterable, start: int = 0) -> str:
    """OEIS b-file body: ``n a(n)`` per line."""
    return "".join(f"{start + i} {v}\n" for i, v in enumerate(values))
