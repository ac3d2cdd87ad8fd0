"""Monic three-term recurrences, their moment functionals and Hankel determinants.

Recurrences use the convention

    P_{-1} = 0,  P_0 = 1,  P_n = (x - c_n) P_{n-1} - lambda_n P_{n-2}   (n >= 1)

with ``c`` and ``lam`` stored 1-indexed in spirit: ``rec.c[0]`` is ``c_1``.
``lambda_1`` never enters the polynomials; the functional's total mass
``Lambda(1) = mu_0`` is chosen separately and defaults to 1.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from math import comb
from typing import Sequence

import gmpy2
from gmpy2 import mpq

from .arithfn import ArithmeticFunctionSpec
from .errors import RecurrenceError, SpecError
from .polycore import GeneratedFamily, Poly, require_identity_g
from .scalar import ZERO_SLACK_BITS, Scalar, as_scalar, format_scalar, get_precision, is_exact, precision, sign


class Verdict(str, enum.Enum):
    POSITIVE_DEFINITE = "positive-definite"
    QUASI_DEFINITE = "quasi-definite"
    DEGENERATE = "degenerate"


@dataclass(frozen=True)
class ThreeTermRecurrence:
    c: tuple
    lam: tuple

    def __post_init__(self):
        if len(self.c) != len(self.lam):
            raise RecurrenceError("c and lambda must have the same length")

    @classmethod
    def from_sequences(cls, c: Sequence, lam: Sequence) -> ThreeTermRecurrence:
        return cls(tuple(as_scalar(v) for v in c), tuple(as_scalar(v) for v in lam))

    @classmethod
    def constant(cls, c, lam, N: int) -> ThreeTermRecurrence:
        return cls.from_sequences([c] * N, [lam] * N)

    @property
    def horizon(self) -> int:
        return len(self.c)

    def c_at(self, n: int) -> Scalar:
        return self.c[n - 1]

    def lam_at(self, n: int) -> Scalar:
        return self.lam[n - 1]

    def to_dict(self) -> dict:
        return {"c": [format_scalar(v) for v in self.c], "lambda": [format_scalar(v) for v in self.lam]}


MomentSequence = tuple


def q_recurrence(h: ArithmeticFunctionSpec, N: int) -> ThreeTermRecurrence:
    """Coefficients of the monic OPS q_n^h: c_n = -2 h(n), lambda_n = h(n-1) h(n)."""
    if N < 0:
        raise SpecError(f"N must be >= 0, got {N}")
    c = tuple(-2 * h(n) for n in range(1, N + 1))
    lam = tuple(h(n - 1) * h(n) for n in range(1, N + 1))
    return ThreeTermRecurrence(c, lam)


def monic_from_recurrence(rec: ThreeTermRecurrence, N: int) -> list[Poly]:
    """P_0, ..., P_N from the monic recurrence."""
    if N > rec.horizon:
        raise RecurrenceError(f"recurrence only known up to n={rec.horizon}, asked for {N}")
    prev, cur = Poly(), Poly.constant(1)
    out = [cur]
    for n in range(1, N + 1):
        prev, cur = cur, cur.mul_x() - cur.scale(rec.c_at(n)) - prev.scale(rec.lam_at(n))
        out.append(cur)
    return out


def q_from_family(h: ArithmeticFunctionSpec, family: GeneratedFamily, n: int) -> Poly:
    """q_n = (prod_{k=1}^{n+1} h(k)) * P_{n+1} / x."""
    require_identity_g(family.g)
    if family.h != h:
        raise SpecError(f"family was generated for h = {family.h}, not {h}")
    if n < 0 or n + 1 > family.N:
        raise SpecError(f"family has degree up to {family.N}; q_{n} needs P_{n + 1}")
    factor = mpq(1)
    for k in range(1, n + 2):
        factor = factor * h(k)
    return family[n + 1].div_x().scale(factor)


def apply_functional(p: Poly, mu: Sequence) -> Scalar:
    if p.degree >= len(mu):
        raise RecurrenceError(f"need moments up to {p.degree}, have {len(mu) - 1}")
    return sum((c * mu[k] for k, c in enumerate(p.coeffs)), mpq(0))


def moments_from_recurrence(rec: ThreeTermRecurrence, N: int, mu0=1) -> MomentSequence:
    """mu_0, ..., mu_N of the functional that annihilates P_1, ..., P_N."""
    polys = monic_from_recurrence(rec, N)
    mu = [as_scalar(mu0)]
    for n in range(1, N + 1):
        p = polys[n]
        mu.append(-sum((p[j] * mu[j] for j in range(n)), mpq(0)))
    return tuple(mu)


def gram_matrix(polys: Sequence[Poly], mu: Sequence) -> list[list]:
    """Lambda(P_m P_n) for all pairs."""
    return [[apply_functional(p * q, mu) for q in polys] for p in polys]


def _bareiss_det(matrix: list[list]) -> Scalar:
    """Determinant by fraction-free elimination with row pivoting."""
    a = [list(row) for row in matrix]
    n = len(a)
    if n == 0:
        return mpq(1)
    det_sign = 1
    prev = mpq(1)
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return mpq(0)
            a[k], a[swap] = a[swap], a[k]
            det_sign = -det_sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev
        prev = a[k][k]
    return det_sign * a[n - 1][n - 1]


def _leading_minors(matrix: list[list]) -> list:
    """All leading principal minors; no-pivot Bareiss pivots are exactly these."""
    a = [list(row) for row in matrix]
    n = len(a)
    minors = []
    prev = mpq(1)
    for k in range(n):
        minors.append(a[k][k])
        if a[k][k] == 0:
            # pivot broke down; remaining minors computed one by one
            minors.extend(_bareiss_det([row[: m + 1] for row in matrix[: m + 1]]) for m in range(k + 1, n))
            return minors
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev
        prev = a[k][k]
    return minors


@dataclass(frozen=True)
class HankelReport:
    determinants: tuple
    verdict: Verdict
    uncertain: tuple  # indices where a big-float determinant sat within tolerance of 0
    horizon: int

    def to_dict(self) -> dict:
        return {
            "delta": [format_scalar(d) for d in self.determinants],
            "verdict": self.verdict.value,
            "uncertain": list(self.uncertain),
            "horizon": self.horizon,
        }


def hankel_determinants(mu: Sequence, N: int) -> HankelReport:
    """Delta_n = det(mu_{i+j})_{i,j=0..n} for n = 0..N and the resulting verdict."""
    if len(mu) < 2 * N + 1:
        raise RecurrenceError(f"need moments up to {2 * N}, have {len(mu) - 1}")
    mu = list(mu)
    hankel = [[mu[i + j] for j in range(N + 1)] for i in range(N + 1)]
    if all(is_exact(m) for m in mu[: 2 * N + 1]):
        dets = _leading_minors(hankel)
        signs = [sign(d) for d in dets]
        uncertain = ()
    else:
        base = get_precision()
        coarse = _leading_minors([[gmpy2.mpfr(v) for v in row] for row in hankel])
        with precision(2 * base):
            fine = _leading_minors([[gmpy2.mpfr(v) for v in row] for row in hankel])
        # trusted: both precisions agree to ~10 bits and the minor is not
        # negligible next to its largest moment
        signs, uncertain = [], []
        for n, (lo, hi) in enumerate(zip(coarse, fine)):
            s = sign(hi, scale=max(abs(m) for m in mu[: 2 * n + 1]))
            if s == 0 or abs(hi - lo) * 2**ZERO_SLACK_BITS >= abs(hi):
                uncertain.append(n)
                s = 0
            signs.append(s)
        dets = [gmpy2.mpfr(d, base) for d in fine]
        uncertain = tuple(uncertain)
    if all(s > 0 for s in signs):
        verdict = Verdict.POSITIVE_DEFINITE
    elif all(s != 0 for s in signs):
        verdict = Verdict.QUASI_DEFINITE
    else:
        verdict = Verdict.DEGENERATE
    return HankelReport(tuple(dets), verdict, uncertain, N)


def _is_real(v) -> bool:
    return not isinstance(v, complex) and not (hasattr(v, "imag") and getattr(v, "imag", 0) != 0)


def classify(rec: ThreeTermRecurrence, N: int | None = None) -> Verdict:
    """Favard classification from lambda_2..lambda_N and the realness of c_n.

    Only the finite horizon is inspected; the verdict holds "up to N".
    """
    N = rec.horizon if N is None else N
    lams = [rec.lam_at(n) for n in range(2, N + 1)]
    if any(sign(v) == 0 for v in lams):
        return Verdict.DEGENERATE
    cs = [rec.c_at(n) for n in range(1, N + 1)]
    if all(_is_real(v) for v in cs) and all(sign(v) > 0 for v in lams):
        return Verdict.POSITIVE_DEFINITE
    return Verdict.QUASI_DEFINITE


def affine_transform_recurrence(rec: ThreeTermRecurrence, a, b) -> ThreeTermRecurrence:
    """Recurrence of a^{-n} p_n(a x + b): c -> (c - b)/a, lambda -> lambda / a^2."""
    a, b = as_scalar(a), as_scalar(b)
    if a == 0:
        raise SpecError("affine scale a must be nonzero")
    return ThreeTermRecurrence(tuple((c - b) / a for c in rec.c), tuple(v / a**2 for v in rec.lam))


def affine_transform_moments(mu: Sequence, a, b) -> MomentSequence:
    """mu~_n = a^{-n} sum_k C(n,k) (-b)^{n-k} mu_k."""
    a, b = as_scalar(a), as_scalar(b)
    if a == 0:
        raise SpecError("affine scale a must be nonzero")
    out = []
    for n in range(len(mu)):
        acc = sum((comb(n, k) * (-b) ** (n - k) * mu[k] for k in range(n + 1)), mpq(0))
        out.append(acc / a**n)
    return tuple(out)


def inverse_affine(a, b) -> tuple[Scalar, Scalar]:
    a, b = as_scalar(a), as_scalar(b)
    return 1 / a, -b / a


def orthonormal_to_monic(a_seq: Sequence, b_seq: Sequence) -> ThreeTermRecurrence:
    """From x p_n = a_{n+1} p_{n+1} + b_n p_n + a_n p_{n-1} (sequences start at index 0)
    to the monic form c_n = b_{n-1}, lambda_n = a_{n-1}^2."""
    a_seq = [as_scalar(v) for v in a_seq]
    b_seq = [as_scalar(v) for v in b_seq]
    if len(a_seq) < len(b_seq):
        raise RecurrenceError("need at least as many a_n as b_n")
    if any(v <= 0 for v in a_seq):
        raise RecurrenceError("orthonormal coefficients a_n must be positive")
    return ThreeTermRecurrence(tuple(b_seq), tuple(v**2 for v in a_seq[: len(b_seq)]))


def favard_report(h: ArithmeticFunctionSpec, N: int, mu0=1) -> dict:
    """Classification and Hankel data for q_n^h, horizon 2N (moments up to mu_{2N}).

    Irrational h is handled at doubled working precision.
    """
    if h.is_exact:
        rec = q_recurrence(h, 2 * N)
        mu = moments_from_recurrence(rec, 2 * N, mu0)
    else:
        with precision(2 * get_precision()):
            rec = q_recurrence(h, 2 * N)
            mu = moments_from_recurrence(rec, 2 * N, mu0)
    hankel = hankel_determinants(mu, N)
    verdict = classify(rec)
    base = get_precision()

    def fmt(v):
        return format_scalar(v if is_exact(v) else gmpy2.mpfr(v, base))

    return {
        "h": str(h),
        "N": N,
        "c": [fmt(v) for v in rec.c],
        "lambda": [fmt(v) for v in rec.lam],
        "delta": [format_scalar(d) for d in hankel.determinants],
        "verdict": verdict.value,
        "hankel_verdict": hankel.verdict.value,
        "uncertain": list(hankel.uncertain),
        "horizon": rec.horizon,
    }


def orthogonality_defects(rec: ThreeTermRecurrence, N: int, mu0=1) -> tuple[list, list]:
    """Off-diagonal Gram entries that are nonzero, and diagonal entries that vanish."""
    polys = monic_from_recurrence(rec, N)
    mu = moments_from_recurrence(rec, 2 * N, mu0) if rec.horizon >= 2 * N else None
    if mu is None:
        raise RecurrenceError(f"orthogonality up to {N} needs horizon {2 * N}")
    gram = gram_matrix(polys, mu)
    off = [(m, n) for m in range(N + 1) for n in range(N + 1) if m != n and gram[m][n] != 0]
    diag = [n for n in range(N + 1) if gram[n][n] == 0]
    return off, diag


def norm_products(rec: ThreeTermRecurrence, N: int, mu0=1) -> list:
    """Lambda(P_n^2) = mu_0 * lambda_2 * ... * lambda_{n+1}, n = 0..N."""
    out = []
    acc = as_scalar(mu0)
    for n in range(N + 1):
        if n:
            acc = acc * rec.lam_at(n + 1)
        out.append(acc)
    return out
