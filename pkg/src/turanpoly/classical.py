"""Chebyshev U_n and associated Laguerre L_n^(alpha) over exact rationals,
plus the identities tying them to P_n^{id,h}.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from math import factorial

from gmpy2 import mpq

from . import arithfn
from .favard import q_recurrence, monic_from_recurrence
from .polycore import X, Poly, generate_three_term
from .scalar import as_scalar


@lru_cache(maxsize=None)
def chebyshev_U(n: int) -> Poly:
    """U_n via U_n = 2x U_{n-1} - U_{n-2}, U_{-1} = 0, U_0 = 1."""
    if n < -1:
        raise ValueError(f"degree must be >= -1, got {n}")
    if n == -1:
        return Poly()
    if n == 0:
        return Poly.constant(1)
    return chebyshev_U(n - 1).mul_x().scale(2) - chebyshev_U(n - 2)


def generalized_binomial(top, k: int) -> mpq:
    """C(top, k) for rational top and integer k (0 for k < 0)."""
    if k < 0:
        return mpq(0)
    top = as_scalar(top)
    acc = mpq(1)
    for i in range(k):
        acc = acc * (top - i)
    return acc / factorial(k)


@lru_cache(maxsize=None)
def _laguerre(n: int, alpha: mpq) -> Poly:
    return Poly(generalized_binomial(n + alpha, n - k) * (-1) ** k / mpq(factorial(k)) for k in range(n + 1))


def laguerre(n: int, alpha) -> Poly:
    """L_n^(alpha)(x) = sum_k C(n + alpha, n - k) (-x)^k / k!.

    alpha = -1 is allowed as the formal extension of the sum.
    """
    if n < 0:
        raise ValueError(f"degree must be >= 0, got {n}")
    return _laguerre(n, as_scalar(alpha))


def _reflect(p: Poly, sgn: int) -> Poly:
    return p if sgn > 0 else p.compose_affine(-1, 0)


@dataclass
class IdentityCheck:
    name: str
    statement: str
    n_range: tuple
    holds: bool = True
    first_failure: int | None = None
    difference: list = field(default_factory=list)

    def record(self, n: int, lhs: Poly, rhs: Poly) -> None:
        if self.holds and lhs != rhs:
            self.holds = False
            self.first_failure = n
            self.difference = (lhs - rhs).to_json()

    def to_dict(self) -> dict:
        return {
            "statement": self.statement,
            "n_range": list(self.n_range),
            "holds": self.holds,
            "first_failure": self.first_failure,
            "difference": self.difference,
        }


@dataclass
class VariantIdentity:
    """An identity whose Laguerre argument sign is ambiguous; both signs are tested."""

    name: str
    variants: dict
    resolved: str | None = None

    @property
    def holds(self) -> bool:
        return self.resolved is not None and self.variants[self.resolved].holds

    def to_dict(self) -> dict:
        return {
            "resolved_variant": self.resolved,
            "holds": self.holds,
            "variants": {k: v.to_dict() for k, v in self.variants.items()},
        }


@dataclass
class IdentityReport:
    N: int
    checks: dict
    variant_checks: dict

    @property
    def all_hold(self) -> bool:
        return all(c.holds for c in self.checks.values()) and all(v.holds for v in self.variant_checks.values())

    def to_dict(self) -> dict:
        return {
            "N": self.N,
            "all_hold": self.all_hold,
            "identities": {k: v.to_dict() for k, v in self.checks.items()},
            "sign_variant_identities": {k: v.to_dict() for k, v in self.variant_checks.items()},
        }


def _variant_identity(name: str, template: str, N: int, sides) -> VariantIdentity:
    """``sides(n, sgn)`` returns (lhs, rhs) with the Laguerre argument taken as sgn*x.

    The sign is decided at n = 2 and every n in 1..N is then checked for both.
    """
    variants = {}
    for label, sgn in (("x", 1), ("-x", -1)):
        check = IdentityCheck(name, template.replace("{arg}", label), (1, N))
        for n in range(1, N + 1):
            check.record(n, *sides(n, sgn))
        variants[label] = check
    decided = []
    for label, sgn in (("x", 1), ("-x", -1)):
        lhs, rhs = sides(2, sgn)
        if lhs == rhs:
            decided.append(label)
    resolved = decided[0] if len(decided) == 1 else None
    return VariantIdentity(name, variants, resolved)


def verify_identities(N: int) -> IdentityReport:
    """Check the Chebyshev/Laguerre identities for degrees up to N (exactly)."""
    if N < 2:
        raise ValueError(f"N must be >= 2 to resolve sign variants, got {N}")
    fam0 = generate_three_term(arithfn.ONE, N + 1)
    fam1 = generate_three_term(arithfn.IDENTITY, N + 1)
    checks = {}

    c = IdentityCheck("p_h0_chebyshev", "P_n^{id,1}(x) = x U_{n-1}(x/2 + 1)", (1, N))
    for n in range(1, N + 1):
        c.record(n, fam0[n], chebyshev_U(n - 1).compose_affine(mpq(1, 2), 1).mul_x())
    checks[c.name] = c

    c = IdentityCheck("q_h0_chebyshev", "q_n^{1}(x) = U_n(x/2 + 1)", (0, N))
    q0 = monic_from_recurrence(q_recurrence(arithfn.ONE, N), N)
    for n in range(N + 1):
        c.record(n, q0[n], chebyshev_U(n).compose_affine(mpq(1, 2), 1))
    checks[c.name] = c

    c = IdentityCheck("q_h1_laguerre", "q_n^{id}(x) = n! L_n^(1)(-x)", (0, N))
    q1 = monic_from_recurrence(q_recurrence(arithfn.IDENTITY, N), N)
    for n in range(N + 1):
        c.record(n, q1[n], _reflect(laguerre(n, 1), -1).scale(factorial(n)))
    checks[c.name] = c

    c = IdentityCheck("chebyshev_turan", "U_n^2 - U_{n-1} U_{n+1} = 1", (0, N))
    for n in range(N + 1):
        c.record(n, chebyshev_U(n) * chebyshev_U(n) - chebyshev_U(n - 1) * chebyshev_U(n + 1), Poly.constant(1))
    checks[c.name] = c

    for alpha in (mpq(-1), mpq(0), mpq(1), mpq(1, 2)):
        c = IdentityCheck(
            f"laguerre_recurrence_alpha_{alpha}",
            f"n L_n^({alpha}) = (2n + alpha - 1 - x) L_(n-1) - (n + alpha - 1) L_(n-2)",
            (2, N),
        )
        for n in range(2, N + 1):
            lhs = laguerre(n, alpha).scale(n)
            rhs = laguerre(n - 1, alpha) * Poly([2 * n + alpha - 1, -1]) - laguerre(n - 2, alpha).scale(n + alpha - 1)
            c.record(n, lhs, rhs)
        checks[c.name] = c

    c = IdentityCheck("laguerre_monic", "p_n = n! L_n^(1)(-x) satisfies p_n = (x + 2n) p_{n-1} - (n-1) n p_{n-2}", (2, N))
    p = [_reflect(laguerre(n, 1), -1).scale(factorial(n)) for n in range(N + 1)]
    for n in range(2, N + 1):
        c.record(n, p[n], (X + 2 * n) * p[n - 1] - p[n - 2].scale((n - 1) * n))
    checks[c.name] = c

    variant_checks = {}

    def p_h1(n, sgn):
        return fam1[n], _reflect(laguerre(n - 1, 1), sgn).mul_x().scale(mpq(1, n))

    def l_minus_one(n, sgn):
        return _reflect(laguerre(n, -1), sgn), _reflect(laguerre(n - 1, 1), -1).mul_x().scale(mpq(1, n))

    def p_id_l_minus_one(n, sgn):
        return fam1[n], _reflect(laguerre(n, -1), sgn)

    for name, template, sides in (
        ("p_h1_laguerre", "P_n^{id,id}(x) = (x/n) L_{n-1}^(1)({arg})", p_h1),
        ("laguerre_minus_one", "L_n^(-1)({arg}) = (x/n) L_{n-1}^(1)(-x)", l_minus_one),
        ("p_id_laguerre_minus_one", "P_n^{id,id}(x) = L_n^(-1)({arg})", p_id_l_minus_one),
    ):
        variant_checks[name] = _variant_identity(name, template, N, sides)

    return IdentityReport(N, checks, variant_checks)
