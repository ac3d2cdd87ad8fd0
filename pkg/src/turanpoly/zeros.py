"""Zeros of P_n^{id,h}.

Primary route: the zeros of q_N are the eigenvalues of the symmetric
tridiagonal Jacobi matrix (diag c_i, off-diagonal sqrt(lambda_{i+1})),
located by bisection on Sturm counts.  Cross-check route: exact Sturm
sequences of the rational polynomial itself.
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from typing import Sequence

import gmpy2
from gmpy2 import mpfr, mpq

from . import arithfn
from .arithfn import ArithmeticFunctionSpec
from .errors import RecurrenceError, RootIsolationError
from .favard import q_recurrence
from .polycore import Poly, poly_gcd
from .scalar import Scalar, as_scalar, format_scalar, get_precision, sqrt, to_rational

DEFAULT_TOL = mpq(1, 10**12)


@dataclass(frozen=True)
class JacobiMatrix:
    diag: tuple  # d_1..d_N
    off_sq: tuple  # e_i^2 = lambda_{i+1}, i = 1..N-1

    @property
    def order(self) -> int:
        return len(self.diag)

    @property
    def off(self) -> tuple:
        return tuple(sqrt(v) for v in self.off_sq)


def jacobi_from_h(h: ArithmeticFunctionSpec, N: int) -> JacobiMatrix:
    """Jacobi matrix of q_N^h: d_i = -2h(i), e_i = sqrt(h(i) h(i+1))."""
    if N < 1:
        raise ValueError(f"order must be >= 1, got {N}")
    rec = q_recurrence(h, N)
    lam = [rec.lam_at(n) for n in range(2, N + 1)]
    bad = [n for n, v in enumerate(lam, 2) if not v > 0]
    if bad:
        raise RecurrenceError(f"lambda_{bad[0]} = {lam[bad[0] - 2]} is not positive; no real Jacobi matrix")
    return JacobiMatrix(tuple(rec.c), tuple(lam))


def sturm_count(J: JacobiMatrix, x) -> int:
    """Number of eigenvalues of J strictly less than x.

    A zero pivot is replaced by a tiny negative one, so an eigenvalue sitting
    exactly at x may be counted; the count stays monotone in x.
    """
    count = 0
    q = mpfr(1)
    pivmin = mpfr(2) ** (-2 * get_precision())
    for i, d in enumerate(J.diag):
        q = d - x - (J.off_sq[i - 1] / q if i else 0)
        if q == 0:
            q = -pivmin
        if q < 0:
            count += 1
    return count


def gershgorin_bounds(J: JacobiMatrix) -> tuple[mpfr, mpfr]:
    off = [mpfr(0)] + [gmpy2.sqrt(mpfr(v)) for v in J.off_sq] + [mpfr(0)]
    lo = min(d - off[i] - off[i + 1] for i, d in enumerate(J.diag))
    hi = max(d + off[i] + off[i + 1] for i, d in enumerate(J.diag))
    pad = (abs(lo) + abs(hi) + 1) * mpfr(2) ** -20
    return mpfr(lo) - pad, mpfr(hi) + pad


def eigenvalue_brackets(J: JacobiMatrix, tol=DEFAULT_TOL) -> list[tuple[mpfr, mpfr]]:
    """Disjoint brackets (lo, hi], each holding exactly one eigenvalue, width <= tol."""
    tol = mpfr(as_scalar(tol))
    if tol <= 0:
        raise ValueError("tol must be positive")
    lo, hi = gershgorin_bounds(J)
    out = []
    stack = [(lo, hi, sturm_count(J, lo), sturm_count(J, hi))]
    while stack:
        a, b, ca, cb = stack.pop()
        k = cb - ca
        if k == 0:
            continue
        if k == 1:
            while b - a > tol:
                m = (a + b) / 2
                if sturm_count(J, m) > ca:
                    b = m
                else:
                    a = m
            out.append((a, b))
            continue
        if b - a <= tol:
            raise RootIsolationError(f"{k} eigenvalues within width {b - a} near {a}: multiple or clustered")
        m = (a + b) / 2
        cm = sturm_count(J, m)
        stack.append((m, b, cm, cb))
        stack.append((a, m, ca, cm))
    out.sort()
    return out


def eigenvalues(J: JacobiMatrix, tol=DEFAULT_TOL) -> list[mpfr]:
    """Eigenvalues in increasing order, each the midpoint of a bracket of width <= tol."""
    return [(a + b) / 2 for a, b in eigenvalue_brackets(J, tol)]


def zeros_of_P(h: ArithmeticFunctionSpec, n: int, tol=DEFAULT_TOL) -> list[Scalar]:
    """Sorted zeros of P_n^{id,h}: those of q_{n-1} together with 0."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if n == 1:
        return [mpq(0)]
    return eigenvalues(jacobi_from_h(h, n - 1), tol) + [mpq(0)]


# --- Sturm-sequence oracle -------------------------------------------------


def sturm_sequence(p: Poly) -> list[Poly]:
    seq = [p, p.derivative()]
    while seq[-1].degree > 0:
        seq.append(-(seq[-2] % seq[-1]))
        if not seq[-1]:
            seq.pop()
            break
    return seq


def _variations(seq: Sequence[Poly], x) -> int:
    signs = [v for v in (s(x) for s in seq) if v != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if (a < 0) != (b < 0))


def cauchy_bound(p: Poly) -> mpq:
    lead = abs(p.lead)
    return 1 + max((abs(c) / lead for c in p.coeffs[:-1]), default=mpq(0))


def sturm_roots(p: Poly, tol=DEFAULT_TOL) -> list[mpq]:
    """All real roots of p to within tol, by exact rational Sturm bisection.

    Big-float coefficients are taken at their exact dyadic value.  Roots hit
    exactly by a bisection point are returned exactly.
    """
    p = Poly(to_rational(c) for c in p.coeffs)
    tol = to_rational(as_scalar(tol))
    if p.degree < 1:
        return []
    g = poly_gcd(p, p.derivative())
    if g.degree > 0:
        raise RootIsolationError(f"polynomial is not squarefree (gcd degree {g.degree})")
    seq = sturm_sequence(p)
    bound = cauchy_bound(p) + 1
    a, b = -bound, bound
    roots = []
    stack = [(a, b, _variations(seq, a), _variations(seq, b))]
    while stack:
        a, b, va, vb = stack.pop()
        k = va - vb  # distinct roots in (a, b]
        if k == 0:
            continue
        if k == 1:
            roots.append(_refine(p, seq, a, b, va, tol))
            continue
        m = (a + b) / 2
        vm = _variations(seq, m)
        stack.append((m, b, vm, vb))
        stack.append((a, m, va, vm))
    return sorted(roots)


def _refine(p: Poly, seq, a: mpq, b: mpq, va: int, tol: mpq) -> mpq:
    if p(b) == 0:
        return b
    while b - a > tol:
        m = (a + b) / 2
        if p(m) == 0:
            return m
        if _variations(seq, m) < va:
            b = m
        else:
            a = m
    return (a + b) / 2


# --- checks -----------------------------------------------------------------


def interlacing_check(inner: Sequence, outer: Sequence) -> bool:
    """True iff each gap between consecutive ``outer`` zeros holds exactly one ``inner`` zero.

    Both lists sorted; ``len(outer) == len(inner) + 1``.
    """
    if len(outer) != len(inner) + 1:
        raise ValueError(f"size mismatch: {len(inner)} inner vs {len(outer)} outer zeros")
    return all(outer[i] < inner[i] < outer[i + 1] for i in range(len(inner)))


def min_gap(values: Sequence) -> Scalar | None:
    return min((b - a for a, b in zip(values, values[1:])), default=None)


@dataclass
class ZeroTrajectory:
    n: int
    s_grid: list
    zeros: list  # per s, sorted ascending
    max_step: Scalar | None = None
    continuity_bound: Scalar = mpq(1, 5)
    flags: list = field(default_factory=list)

    @property
    def continuous(self) -> bool:
        return self.max_step is None or self.max_step <= self.continuity_bound

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["s", "index", "zero"])
        for s, zs in zip(self.s_grid, self.zeros):
            for i, z in enumerate(zs):
                w.writerow([format_scalar(s), i, format_scalar(z)])
        return buf.getvalue()


def trajectory(n: int, s_grid: Sequence, tol=DEFAULT_TOL) -> ZeroTrajectory:
    """Zeros of P_n^{id,h_s} for each s, h_s(k) = k^s; curves matched by sorted index."""
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    s_grid = [as_scalar(s) for s in s_grid]
    zeros = []
    for s in s_grid:
        zs = zeros_of_P(arithfn.power(s), n, tol)
        gap = min_gap(zs)
        if gap is not None and gap <= 10 * mpfr(as_scalar(tol)):
            raise RootIsolationError(f"zeros collide at s={s}: gap {gap}")
        zeros.append(zs)
    traj = ZeroTrajectory(n, s_grid, zeros)
    steps = [max(abs(a - b) for a, b in zip(z0, z1)) for z0, z1 in zip(zeros, zeros[1:])]
    traj.max_step = max(steps, default=None)
    if not traj.continuous:
        traj.flags.append(f"max zero displacement {format_scalar(traj.max_step)} exceeds {traj.continuity_bound}")
    return traj


def chebyshev_zeros_of_P(n: int) -> list[mpfr]:
    """Closed form for h = 1: 0 and 2 cos(k pi / n) - 2, k = 1..n-1, ascending."""
    pi = gmpy2.const_pi()
    return sorted([2 * gmpy2.cos(k * pi / n) - 2 for k in range(1, n)]) + [mpq(0)]


def zero_table_csv(rows: Sequence[tuple[int, Sequence]]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["n", "index", "zero"])
    for n, zs in rows:
        for i, z in enumerate(zs):
            w.writerow([n, i, format_scalar(z)])
    return buf.getvalue()
