"""Exact arithmetic: rationals and elements of a single real quadratic field.

A :class:`QuadNum` is ``u + v*sqrt(d)`` with rational ``u, v`` and square-free
``d >= 0``; ``d == 0`` (or ``d == 1`` after normalisation) means rational.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import mpmath

from .arith import Precision


class MixedField(ArithmeticError):
    """Operands live in different quadratic fields."""


class DivByZero(ZeroDivisionError):
    pass


def _squarefree_split(d: int) -> tuple[int, int]:
    """Return ``(f, s)`` with ``d == f*f*s`` and ``s`` square-free."""
    if d < 0:
        raise ValueError("only real quadratic fields are supported")
    if d == 0:
        return 0, 0
    f, s = 1, 1
    n = d
    p = 2
    while p * p <= n:
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        f *= p ** (e // 2)
        if e % 2:
            s *= p
        p += 1
    s *= n
    return f, s


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        raise TypeError("floats are not exact; pass a Fraction or string")
    return Fraction(x)


@dataclass(frozen=True)
class QuadNum:
    u: Fraction
    v: Fraction = Fraction(0)
    d: int = 0

    def __post_init__(self):
        u, v, d = as_fraction(self.u), as_fraction(self.v), int(self.d)
        f, s = _squarefree_split(d)
        if s in (0, 1) or v == 0:
            u = u + v * f if s == 1 else u
            v, s = Fraction(0), 0
        else:
            v = v * f
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "v", v)
        object.__setattr__(self, "d", s)

    # construction helpers -------------------------------------------------
    @classmethod
    def rational(cls, x) -> "QuadNum":
        return cls(as_fraction(x))

    @classmethod
    def radical(cls, num, den=1, sqrt_num=1, sqrt_den=1) -> "QuadNum":
        """``(num/den) * sqrt(sqrt_num/sqrt_den)`` rationalised."""
        coeff = Fraction(num) / (Fraction(den) * sqrt_den)
        return cls(Fraction(0), coeff, int(sqrt_num) * int(sqrt_den))

    @classmethod
    def coerce(cls, x) -> "QuadNum":
        if isinstance(x, QuadNum):
            return x
        if isinstance(x, str):
            return parse_quad(x)
        return cls.rational(x)

    @property
    def is_rational(self) -> bool:
        return self.d == 0

    def _field(self, other: "QuadNum") -> int:
        if self.d and other.d and self.d != other.d:
            raise MixedField(f"sqrt({self.d}) and sqrt({other.d}) in one operation")
        return self.d or other.d

    # field operations -----------------------------------------------------
    def __add__(self, other):
        other = QuadNum.coerce(other)
        d = self._field(other)
        return QuadNum(self.u + other.u, self.v + other.v, d)

    __radd__ = __add__

    def __neg__(self):
        return QuadNum(-self.u, -self.v, self.d)

    def __sub__(self, other):
        return self + (-QuadNum.coerce(other))

    def __rsub__(self, other):
        return QuadNum.coerce(other) - self

    def __mul__(self, other):
        other = QuadNum.coerce(other)
        d = self._field(other)
        u = self.u * other.u + self.v * other.v * d
        v = self.u * other.v + self.v * other.u
        return QuadNum(u, v, d)

    __rmul__ = __mul__

    def conj(self) -> "QuadNum":
        return QuadNum(self.u, -self.v, self.d)

    def norm(self) -> Fraction:
        return self.u * self.u - self.v * self.v * self.d

    def __truediv__(self, other):
        other = QuadNum.coerce(other)
        self._field(other)
        n = other.norm()
        if n == 0:
            raise DivByZero("division by zero quadratic number")
        num = self * other.conj()
        return QuadNum(num.u / n, num.v / n, num.d)

    def __rtruediv__(self, other):
        return QuadNum.coerce(other) / self

    def __pow__(self, k: int):
        if not isinstance(k, int):
            raise TypeError("QuadNum powers must be integers")
        if k < 0:
            return QuadNum(1) / self ** (-k)
        out, base = QuadNum(1), self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        try:
            other = QuadNum.coerce(other)
        except (TypeError, ValueError):
            return NotImplemented
        return (self.u, self.v, self.d) == (other.u, other.v, other.d)

    def __hash__(self):
        return hash((self.u, self.v, self.d))

    def sign(self) -> int:
        """Exact sign of ``u + v*sqrt(d)``."""
        su = (self.u > 0) - (self.u < 0)
        sv = (self.v > 0) - (self.v < 0)
        if sv == 0 or self.d == 0:
            return su
        if su == 0 or su == sv:
            return sv
        # opposite signs: compare u^2 with v^2 d
        diff = self.u * self.u - self.v * self.v * self.d
        return su if diff > 0 else (sv if diff < 0 else 0)

    def __lt__(self, other):
        return (self - other).sign() < 0

    def __le__(self, other):
        return (self - other).sign() <= 0

    def __gt__(self, other):
        return (self - other).sign() > 0

    def __ge__(self, other):
        return (self - other).sign() >= 0

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def __bool__(self):
        return self.u != 0 or self.v != 0

    def to_real(self, p: Precision) -> mpmath.mpf:
        return quad_to_real(self, p)

    def __str__(self):
        return format_quad(self)

    def __repr__(self):
        return f"QuadNum({format_quad(self)!r})"


def quad_arith(op: str, x: QuadNum, y: QuadNum | None = None) -> QuadNum:
    """Dispatch ``add``, ``mul``, ``div``, ``conj``, ``neg`` on quadratic numbers."""
    x = QuadNum.coerce(x)
    if op == "conj":
        return x.conj()
    if op == "neg":
        return -x
    y = QuadNum.coerce(y)
    if op == "add":
        return x + y
    if op == "mul":
        return x * y
    if op == "div":
        return x / y
    raise ValueError(f"unknown op {op!r}")


def quad_to_real(x: QuadNum, p: Precision) -> mpmath.mpf:
    with p.context():
        val = mpmath.mpf(x.u.numerator) / x.u.denominator
        if x.v:
            val += mpmath.mpf(x.v.numerator) / x.v.denominator * mpmath.sqrt(x.d)
        return val


def _fmt_frac(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def format_quad(x: QuadNum) -> str:
    """Text form ``u+v*sqrt(d)``; rationals print as ``u``."""
    if x.v == 0:
        return _fmt_frac(x.u)
    rad = f"sqrt({x.d})" if abs(x.v) == 1 else f"{_fmt_frac(abs(x.v))}*sqrt({x.d})"
    if x.u == 0:
        return rad if x.v > 0 else "-" + rad
    return f"{_fmt_frac(x.u)}{'+' if x.v > 0 else '-'}{rad}"


_FRAC = r"[+-]?\d+(?:/\d+)?"
_QUAD_RE = re.compile(
    rf"^\s*(?:(?P<u>{_FRAC})(?=\s*(?:[+-]|$)))?\s*"
    rf"(?:(?P<v>[+-]?\s*(?:\d+(?:/\d+)?)?)\s*\*?\s*sqrt\(\s*(?P<d>\d+)\s*\))?\s*$"
)


def parse_quad(text: str) -> QuadNum:
    """Parse ``u``, ``u+v*sqrt(d)``, ``v*sqrt(d)``, ``-sqrt(d)`` and friends."""
    m = _QUAD_RE.match(text)
    if not m or (m.group("u") is None and m.group("d") is None):
        raise ValueError(f"cannot parse quadratic number {text!r}")
    u = Fraction(m.group("u")) if m.group("u") else Fraction(0)
    if m.group("d") is None:
        return QuadNum(u)
    vtxt = (m.group("v") or "").replace(" ", "")
    if vtxt in ("", "+"):
        v = Fraction(1)
    elif vtxt == "-":
        v = Fraction(-1)
    else:
        v = Fraction(vtxt)
    return QuadNum(u, v, int(m.group("d")))


@lru_cache(maxsize=4096)
def sigma_k(n: int, k: int) -> int:
    """Sum of the k-th powers of the divisors of n."""
    if n < 1:
        raise ValueError("sigma_k needs n >= 1")
    total = 0
    r = math.isqrt(n)
    for d in range(1, r + 1):
        if n % d == 0:
            e = n // d
            total += d ** k
            if e != d:
                total += e ** k
    return total


def divisor_sums(N: int, k: int) -> list[int]:
    """``[sigma_k(1), ..., sigma_k(N)]`` by a sieve (index 0 holds 0)."""
    out = [0] * (N + 1)
    for d in range(1, N + 1):
        dk = d ** k
        for m in range(d, N + 1, d):
            out[m] += dk
    return out
