"""Shifted hypergeometric sums F_ell(x,z), G_ell(x,z) and their q-side twins.

The hypergeometric side sums

    G_ell(x, z) = sum_n z^(n+x) (1/2+x)_n (1/s+x)_n (1-1/s+x)_n / (1+x)_n^3 * (a + b(n+x))

directly.  The q side evaluates ``(1/pi) (phi - ln|q| q dphi/dq)`` where phi is
the triple ``dq/q`` integral of ``x^3 F^2 sqrt(1-z) z^x``.  For ``z < 0`` (and
``q < 0``) powers use the principal branch, ``z^(n+x) = |z|^(n+x) e^(i pi (n+x))``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import mpmath
from mpmath import mpc, mpf

from .arith import Precision, complex_to_json, to_decimal_string
from .exact import QuadNum, quad_to_real
from .modular import (
    G_PREFACTOR,
    Level,
    g_series,
    sigma3_odd_series,
    weight4_shift_form,
)
from .qseries import (
    QSeries,
    TailTooLarge,
    eval_qseries,
    growth_ratio,
    integrate_dq_over_q,
    q_d_dq,
    terms_for,
)


class Divergent(ArithmeticError):
    pass


@dataclass(frozen=True)
class SeriesCase:
    """One Ramanujan series for 1/pi: q = sign * exp(-pi sqrt(r))."""

    level: int
    q_sign: int
    r: Fraction
    a: QuadNum
    b: QuadNum
    z: QuadNum

    def __post_init__(self):
        Level(self.level)
        if self.q_sign not in (1, -1):
            raise ValueError("q_sign must be +1 or -1")
        object.__setattr__(self, "r", Fraction(self.r))
        for name in ("a", "b", "z"):
            object.__setattr__(self, name, QuadNum.coerce(getattr(self, name)))

    @property
    def id(self) -> str:
        return case_id(self.level, self.q_sign, self.r)

    def invariant_errors(self) -> list[str]:
        errs = []
        if self.z.sign() != self.q_sign:
            errs.append(f"{self.id}: sign(z) != sign(q)")
        if not abs(self.z) < 1:
            errs.append(f"{self.id}: |z| >= 1")
        if self.r <= 0:
            errs.append(f"{self.id}: r must be positive")
        return errs

    def q_value(self, p: Precision) -> mpf:
        return q_value(self.q_sign, self.r, p)


def case_id(level: int, q_sign: int, r) -> str:
    return f"L{level}{'-' if q_sign < 0 else '+'}{Fraction(r)}"


def q_value(q_sign: int, r, p: Precision) -> mpf:
    with p.context():
        r = Fraction(r)
        return q_sign * mpmath.exp(-mpmath.pi * mpmath.sqrt(mpf(r.numerator) / r.denominator))


def pochhammer(a, n: int):
    """Rising factorial ``(a)_n``; exact for Fraction/int input."""
    if n < 0:
        raise ValueError("n must be >= 0")
    out = 1 if isinstance(a, (int, Fraction)) else mpf(1)
    for k in range(n):
        out = out * (a + k)
    return out


def _check_shift(x) -> Fraction:
    x = Fraction(x)
    if (1 + x).denominator == 1 and 1 + x <= 0:
        raise ValueError(f"1 + x must not be a non-positive integer (x = {x})")
    return x


def _as_real(v, p: Precision) -> mpf:
    if isinstance(v, QuadNum):
        return quad_to_real(v, p)
    if isinstance(v, Fraction):
        return mpf(v.numerator) / v.denominator
    return mpf(v)


def principal_power(base: mpf, e) -> mpc:
    """``base**e`` with arg(base) in (-pi, pi]; exact e^(i pi e) for base < 0."""
    e = Fraction(e)
    ef = mpf(e.numerator) / e.denominator
    if base >= 0:
        return mpc(mpmath.power(base, ef))
    return mpmath.power(-base, ef) * mpmath.expjpi(ef)


def _hyper_sums(level: int, x: Fraction, z: mpf, a: mpf | None, b: mpf | None, p: Precision):
    """Return (F, G) sums; G is None when a, b are not given."""
    s = Level(level).s
    with p.context():
        if abs(z) >= 1:
            raise Divergent(f"|z| = {mpmath.nstr(abs(z), 8)} >= 1")
        xf = mpf(x.numerator) / x.denominator
        tops = (mpf(1) / 2 + xf, mpf(1) / s + xf, mpf(s - 1) / s + xf)
        bot = 1 + xf
        eps = mpf(10) ** (-p.working - 2)
        t = mpf(1)      # ratio of Pochhammers times z^n
        fsum = mpf(0)
        gsum = mpf(0)
        az = abs(z)
        n = 0
        while True:
            fsum += t
            if a is not None:
                gsum += t * (a + b * (n + xf))
            n += 1
            t *= (tops[0] + n - 1) * (tops[1] + n - 1) * (tops[2] + n - 1) / (bot + n - 1) ** 3 * z
            rate = az * (1 + 1 / (n + xf)) if n + xf > 0 else az
            size = abs(t) * (1 + (abs(a) + abs(b) * (n + abs(xf))) if a is not None else 1)
            if rate < 1 and size / (1 - rate) < eps and n > 2:
                break
            if n > 10 ** 6:
                raise Divergent("series did not converge in 10^6 terms")
        zx = principal_power(z, x) if x else mpc(1)
        return fsum * zx, (gsum * zx if a is not None else None)


def F_shifted(level: int, x, z, p: Precision) -> mpc:
    x = _check_shift(x)
    with p.context():
        zz = _as_real(z, p)
    return _hyper_sums(level, x, zz, None, None, p)[0]


def G_shifted(case: SeriesCase, x, p: Precision) -> mpc:
    x = _check_shift(x)
    with p.context():
        z, a, b = (_as_real(v, p) for v in (case.z, case.a, case.b))
    return _hyper_sums(case.level, x, z, a, b, p)[1]


# --- q side ------------------------------------------------------------------

def _phi_series(level: int, x: Fraction, N: int):
    """Return (constant, series) with phi = constant * series (series exact)."""
    if x == Fraction(1, 2):
        if level == 4:
            pure = sigma3_odd_series(N)
        else:
            pure = g_series(level, N).pure
        source = pure.shift(x)
        const = ("quad", G_PREFACTOR[level])
    else:
        form = weight4_shift_form(level, x, N)
        source = form.series
        const = ("power", form.base, form.exponent, x ** 3)
    phi = integrate_dq_over_q(integrate_dq_over_q(integrate_dq_over_q(source)))
    return const, phi


def _const_value(const, p: Precision) -> mpf:
    with p.context():
        if const[0] == "quad":
            return quad_to_real(const[1], p)
        _, base, e, x3 = const
        return (mpf(x3.numerator) / x3.denominator) * mpmath.power(
            mpf(base.numerator) / base.denominator, mpf(e.numerator) / e.denominator)


def G_from_qside(level: int, q_sign: int, r, x, p: Precision, N: int | None = None) -> mpc:
    """``(1/pi)(phi(q) - ln|q| q phi'(q))`` at ``q = sign * exp(-pi sqrt(r))``."""
    x = _check_shift(x)
    r = Fraction(r)
    Level(level)
    with p.context():
        if x == 0:
            return mpc(1 / mpmath.pi)
        q = q_value(q_sign, r, p)
        ln_abs_q = -mpmath.pi * mpmath.sqrt(mpf(r.numerator) / r.denominator)
        if N is None:
            probe = _phi_series(level, x, 24)[1]
            growth = max(growth_ratio(probe), 1.0)
            N = terms_for(float(abs(q)), p.working, growth) + 8
        for _ in range(6):
            const, phi = _phi_series(level, x, N)
            try:
                v_phi = eval_qseries(phi, q, p).value
                v_der = eval_qseries(q_d_dq(phi), q, p).value
                break
            except TailTooLarge:
                N *= 2
        else:
            raise TailTooLarge(f"q-side did not converge with {N} terms")
        c = _const_value(const, p)
        return c * (v_phi - ln_abs_q * v_der) / mpmath.pi


# --- verification ---------------------------------------------------------------

@dataclass
class VerificationReport:
    case: str
    x: Fraction
    digits: int
    lhs: mpc
    rhs: mpc
    diff: mpf
    closed_form: mpf | None = None
    closed_text: str | None = None
    diff_closed: mpf | None = None
    passed: bool = False
    precision: Precision | None = None

    def to_json(self) -> dict:
        p = self.precision or Precision(self.digits)
        return {
            "case": self.case,
            "x": str(self.x),
            "digits": self.digits,
            "lhs": complex_to_json(self.lhs, p),
            "rhs": complex_to_json(self.rhs, p),
            "closed_form": None if self.closed_form is None else {
                "expr": self.closed_text,
                "value": to_decimal_string(self.closed_form, p),
            },
            "diff": mpmath.nstr(self.diff, 5),
            "diff_closed": None if self.diff_closed is None else mpmath.nstr(self.diff_closed, 5),
            "pass": self.passed,
        }


def verify_case(case: SeriesCase, x, closed=None, p: Precision = Precision(40)) -> VerificationReport:
    """Compare the hypergeometric sum, the q-side formula and (optionally) a
    closed form for ``(-i)^[q<0] G``; tolerance ``10**-digits`` relative to
    ``max(1, |value|)``."""
    from .closedform import eval_closed, format_closed

    x = _check_shift(x)
    with p.context():
        lhs = G_shifted(case, x, p)
        rhs = G_from_qside(case.level, case.q_sign, case.r, x, p)
        tol = p.tolerance() * max(mpf(1), abs(lhs))
        diff = abs(lhs - rhs)
        ok = diff < tol
        rep = VerificationReport(case.id, x, p.decimal_digits, lhs, rhs, diff, precision=p)
        if closed is not None:
            cf = eval_closed(closed, p)
            rotated = lhs * (-1j) if (case.q_sign < 0 and x.denominator % 2 == 0) else lhs
            rep.closed_form = cf
            rep.closed_text = format_closed(closed)
            rep.diff_closed = abs(rotated - cf)
            ok = ok and rep.diff_closed < tol
        rep.passed = bool(ok)
        return rep


def half_shift_display_sum(level: int, w, A, B, p: Precision) -> mpf:
    """``sum_n (1)_n (1/2+1/s)_n (3/2-1/s)_n / (3/2)_n^3 * (A + B n) * w^n``.

    This is how shifted series are printed: the factor ``z^(1/2)`` and the
    ``b/2`` from ``b(n + 1/2)`` are absorbed into the scale and ``A``.
    """
    s = Level(level).s
    with p.context():
        w, A, B = (_as_real(v, p) for v in (w, A, B))
        if abs(w) >= 1:
            raise Divergent("|w| >= 1")
        tops = (mpf(1), mpf(1) / s + mpf(1) / 2, mpf(3) / 2 - mpf(1) / s)
        half3 = mpf(3) / 2
        eps = mpf(10) ** (-p.working - 2)
        t = mpf(1)
        total = mpf(0)
        n = 0
        aw = abs(w)
        while True:
            total += t * (A + B * n)
            t *= (tops[0] + n) * (tops[1] + n) * (tops[2] + n) / (half3 + n) ** 3 * w
            n += 1
            rate = aw * (1 + mpf(1) / n)
            if n > 2 and rate < 1 and abs(t) * (abs(A) + abs(B) * n + 1) / (1 - rate) < eps:
                return total
