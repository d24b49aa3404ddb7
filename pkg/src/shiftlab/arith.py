"""Arbitrary-precision real/complex kernel.

Backed by mpmath.  Every public numeric routine takes a :class:`Precision`
and computes at ``decimal_digits + guard_digits``; callers format results at
``decimal_digits`` with :func:`to_decimal_string`.
"""

from __future__ import annotations

from dataclasses import dataclass

import mpmath
from mpmath import mpc, mpf

BigReal = mpf
BigComplex = mpc


class DomainError(ValueError):
    """Argument outside the domain of an elementary function."""


@dataclass(frozen=True)
class Precision:
    decimal_digits: int
    guard_digits: int = 10

    def __post_init__(self):
        if self.decimal_digits < 1:
            raise ValueError("decimal_digits must be >= 1")
        if self.guard_digits < 0:
            raise ValueError("guard_digits must be >= 0")

    @property
    def working(self) -> int:
        return self.decimal_digits + self.guard_digits

    def context(self):
        """Context manager that sets mpmath's working precision."""
        return mpmath.workdps(self.working)

    def tolerance(self) -> mpf:
        with self.context():
            return mpf(10) ** (-self.decimal_digits)

    def __str__(self) -> str:
        return f"{self.decimal_digits}+{self.guard_digits}"


def const_pi(p: Precision) -> mpf:
    with p.context():
        return +mpmath.pi


def elementary(f: str, *args, p: Precision) -> mpf:
    """Evaluate ``exp``, ``ln``, ``sqrt``, ``arctan`` or ``pow`` on reals.

    ``pow(x, y)`` with ``x < 0`` is only accepted for integral ``y``; the
    principal-branch complex power lives in :mod:`shiftlab.hypershift`.
    """
    with p.context():
        xs = [mpf(a) for a in args]
        if f == "exp":
            return mpmath.exp(xs[0])
        if f == "ln":
            if xs[0] <= 0:
                raise DomainError(f"ln of non-positive value {mpmath.nstr(xs[0], 10)}")
            return mpmath.log(xs[0])
        if f == "sqrt":
            if xs[0] < 0:
                raise DomainError(f"sqrt of negative value {mpmath.nstr(xs[0], 10)}")
            return mpmath.sqrt(xs[0])
        if f == "arctan":
            return mpmath.atan(xs[0])
        if f == "pow":
            x, y = xs
            if x < 0 and y != mpmath.floor(y):
                raise DomainError("real pow of a negative base needs an integral exponent")
            return mpmath.power(x, y)
    raise ValueError(f"unknown elementary function {f!r}")


def close(a, b, p: Precision, scale: bool = False) -> bool:
    """``|a - b| < 10**-digits`` (times ``max(1, |b|)`` if *scale*)."""
    with p.context():
        tol = p.tolerance()
        if scale:
            tol *= max(mpf(1), abs(b))
        return abs(a - b) < tol


def is_purely_imaginary(z, p: Precision) -> bool:
    with p.context():
        z = mpc(z)
        return abs(z.real) < p.tolerance() * max(mpf(1), abs(z.imag))


def to_decimal_string(x, p: Precision) -> str:
    """Format a real at the requested digits (at least two significant)."""
    with p.context():
        return mpmath.nstr(mpf(x), max(p.decimal_digits, 2), strip_zeros=False)


def complex_to_json(z, p: Precision) -> dict:
    with p.context():
        z = mpc(z)
    return {"re": to_decimal_string(z.real, p), "im": to_decimal_string(z.imag, p)}
