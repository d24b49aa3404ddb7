"""Integer-relation detection (PSLQ) and closed-form recognition of G(1/2, q).

The PSLQ implementation follows Ferguson, Bailey and Arno: it keeps a lower
trapezoidal matrix H and integer matrices A, B = A^-1 with y = x B, and stops
when some entry of y vanishes to the detection threshold.  While running,
``1 / max |H_jj|`` bounds the norm of any relation not yet found, which gives
the ``max_coeff`` cut-off.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import mpmath
from mpmath import mpf

from .arith import Precision
from .closedform import ClosedForm, atom_value
from .exact import QuadNum, quad_to_real

DEFAULT_DIGITS = 60
DEFAULT_MAX_COEFF = 10 ** 6
DEFAULT_GUARD = 10


class PrecisionTooLow(ValueError):
    pass


@dataclass
class RelationProblem:
    target: mpf
    basis: list = field(default_factory=list)   # (label, value) pairs
    digits: int = DEFAULT_DIGITS
    max_coeff: int = DEFAULT_MAX_COEFF
    guard: int = DEFAULT_GUARD

    @property
    def precision(self) -> Precision:
        return Precision(self.digits, self.guard)

    def values(self) -> list:
        return [self.target] + [v for _, v in self.basis]


def pslq(x: list, tol: mpf, max_coeff: int, max_steps: int | None = None) -> list[int] | None:
    """Integer vector c with ``|sum c_i x_i| <= tol * max|x|``, or None once every
    relation would need a coefficient norm above *max_coeff*.  Call inside the
    desired mpmath precision context."""
    n = len(x)
    if n < 2:
        raise ValueError("need at least two values")
    x = [mpf(v) for v in x]
    scale = max(abs(v) for v in x)
    if scale == 0:
        raise ValueError("all values are zero")
    x = [v / scale for v in x]
    for i, v in enumerate(x):
        if abs(v) < tol:
            return [int(i == k) for k in range(n)]
    max_steps = max_steps or 2000 * n
    gamma = mpmath.sqrt(mpf(4) / 3)

    s = [mpf(0)] * n
    for k in range(n):
        s[k] = mpmath.sqrt(mpmath.fsum(v * v for v in x[k:]))
    t = s[0]
    y = [v / t for v in x]
    s = [v / t for v in s]

    H = [[mpf(0)] * (n - 1) for _ in range(n)]
    for i in range(n):
        for j in range(min(i + 1, n - 1)):
            if i == j:
                H[i][j] = s[i + 1] / s[i]
            else:
                H[i][j] = -y[i] * y[j] / (s[j] * s[j + 1])
    A = [[int(i == j) for j in range(n)] for i in range(n)]
    B = [[int(i == j) for j in range(n)] for i in range(n)]

    def reduce_row(i, jmax):
        for j in range(jmax, -1, -1):
            if H[j][j] == 0:
                continue
            q = int(mpmath.nint(H[i][j] / H[j][j]))
            if q == 0:
                continue
            y[j] += q * y[i]
            for k in range(j + 1):
                H[i][k] -= q * H[j][k]
            for k in range(n):
                A[i][k] -= q * A[j][k]
                B[k][j] += q * B[k][i]

    for i in range(1, n):
        reduce_row(i, i - 1)

    for _ in range(max_steps):
        m = max(range(n - 1), key=lambda i: gamma ** (i + 1) * abs(H[i][i]))
        y[m], y[m + 1] = y[m + 1], y[m]
        H[m], H[m + 1] = H[m + 1], H[m]
        A[m], A[m + 1] = A[m + 1], A[m]
        for k in range(n):
            B[k][m], B[k][m + 1] = B[k][m + 1], B[k][m]
        if m < n - 2:
            t0 = mpmath.sqrt(H[m][m] ** 2 + H[m][m + 1] ** 2)
            if t0 == 0:
                return None
            t1, t2 = H[m][m] / t0, H[m][m + 1] / t0
            for i in range(m, n):
                t3, t4 = H[i][m], H[i][m + 1]
                H[i][m] = t1 * t3 + t2 * t4
                H[i][m + 1] = -t2 * t3 + t1 * t4
        for i in range(m + 1, n):
            reduce_row(i, min(i - 1, m + 1))

        for j in range(n):
            if abs(y[j]) < tol:
                rel = [B[k][j] for k in range(n)]
                if max(abs(c) for c in rel) <= max_coeff:
                    return rel
        diag = max(abs(H[j][j]) for j in range(n - 1))
        if diag == 0 or 1 / diag > max_coeff:
            return None
    return None


def _normalize(rel: list[int]) -> list[int]:
    first = next((c for c in rel if c), 0)
    return [-c for c in rel] if first < 0 else rel


def find_relation(problem: RelationProblem) -> list[int] | None:
    """``(c0, c1, ...)`` with ``c0*target + sum ci*basis_i`` below
    ``10^-(digits-guard)`` and all ``|ci| <= max_coeff``; sign fixed so that the
    first nonzero entry is positive."""
    size = len(problem.basis)
    if size == 0:
        return None
    if problem.digits < 3 * size:
        raise PrecisionTooLow(f"{problem.digits} digits is too few for {size} basis values")
    labels = [lab for lab, _ in problem.basis]
    if len(set(labels)) != len(labels):
        raise ValueError("duplicate basis labels")
    p = problem.precision
    with p.context():
        vals = problem.values()
        tol = mpf(10) ** (-(problem.digits - problem.guard))
        rel = pslq(vals, tol, problem.max_coeff)
        if rel is None:
            return None
        residual = abs(mpmath.fsum(c * v for c, v in zip(rel, vals)))
        if residual > tol * max(abs(v) for v in vals):
            return None
        return _normalize(rel)


# --- recognising table values -------------------------------------------------------

def default_radicals(level: int) -> tuple[QuadNum, ...]:
    """Radical multipliers folded into the basis: sqrt 3 for levels 1 and 3."""
    return (QuadNum(0, 1, 3),) if level in (1, 3) else (QuadNum(1),)


def case_target(case, p: Precision) -> mpf:
    """``(-i)^[q<0] G(1/2, q)`` as a real number."""
    from .hypershift import G_shifted

    with p.context():
        g = G_shifted(case, Fraction(1, 2), p)
        return g.imag if case.q_sign < 0 else g.real


def relation_to_closed(rel: list[int], pairs: list[tuple[QuadNum, object]]) -> ClosedForm | None:
    """Turn ``c0*T + sum ci*rad_i*atom_i = 0`` into ``T = ClosedForm``."""
    c0 = rel[0]
    if c0 == 0:
        return None
    rads = {rad for rad, _ in pairs}
    if len(rads) == 1:
        rad = next(iter(rads))
        terms = tuple((Fraction(-c, c0), atom) for c, (_, atom) in zip(rel[1:], pairs) if c)
        return ClosedForm(rad, terms)
    terms = tuple((rad * Fraction(-c, c0), atom) for c, (rad, atom) in zip(rel[1:], pairs) if c)
    return ClosedForm(QuadNum(1), terms)


def recognize_value(target: mpf, atom_pool: list, p: Precision,
                    radicals: tuple[QuadNum, ...] = (QuadNum(1),),
                    max_coeff: int = DEFAULT_MAX_COEFF) -> ClosedForm | None:
    if not atom_pool:
        return None
    pairs = [(rad, atom) for rad in radicals for atom in atom_pool]
    with p.context():
        basis = [(f"{rad}*{atom}", quad_to_real(rad, p) * atom_value(atom, p)) for rad, atom in pairs]
    problem = RelationProblem(target, basis, p.decimal_digits, max_coeff, p.guard_digits)
    rel = find_relation(problem)
    if rel is None:
        return None
    return relation_to_closed(rel, pairs)


def recognize_case(case, atom_pool: list, p: Precision = Precision(DEFAULT_DIGITS, DEFAULT_GUARD),
                   radicals: tuple[QuadNum, ...] | None = None,
                   max_coeff: int = DEFAULT_MAX_COEFF) -> ClosedForm | None:
    """Search ``(-i)^[q<0] G(1/2, q)`` as a rational combination of
    ``radical * atom`` over the pool."""
    if not atom_pool:
        return None
    radicals = default_radicals(case.level) if radicals is None else radicals
    target = case_target(case, p)
    return recognize_value(target, atom_pool, p, radicals, max_coeff)


def expanded_coefficients(cf: ClosedForm) -> dict:
    """``{atom: coefficient}`` after folding the prefactor, merging repeats."""
    out: dict = {}
    for c, atom in cf.expand().terms:
        out[atom] = out.get(atom, QuadNum(0)) + c
    return {a: c for a, c in out.items() if c}
