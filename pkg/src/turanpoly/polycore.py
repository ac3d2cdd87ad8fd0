"""Dense univariate polynomials over Scalars and the generators of P_n^{g,h}."""
from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from typing import Iterable, Sequence

from gmpy2 import mpq

from . import arithfn
from .arithfn import ArithmeticFunctionSpec, Kind
from .errors import SpecError, UnsupportedGError
from .scalar import Scalar, as_scalar, format_scalar, get_precision, is_exact, parse_scalar


class Poly:
    """Immutable dense polynomial, coefficients in ascending degree.

    The zero polynomial has no coefficients.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [as_scalar(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = tuple(cs)

    @classmethod
    def constant(cls, c) -> Poly:
        return cls([c])

    @classmethod
    def monomial(cls, k: int, c=1) -> Poly:
        return cls([0] * k + [c])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def lead(self) -> Scalar:
        return self.coeffs[-1] if self.coeffs else mpq(0)

    @property
    def is_exact(self) -> bool:
        return all(is_exact(c) for c in self.coeffs)

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __len__(self) -> int:
        return len(self.coeffs)

    def __getitem__(self, k: int) -> Scalar:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else mpq(0)

    def __iter__(self):
        return iter(self.coeffs)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Poly):
            other = Poly.constant(other)
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self) -> str:
        return f"Poly([{', '.join(format_scalar(c) for c in self.coeffs)}])"

    def __neg__(self) -> Poly:
        return Poly(-c for c in self.coeffs)

    def __add__(self, other) -> Poly:
        if not isinstance(other, Poly):
            other = Poly.constant(other)
        n = max(len(self), len(other))
        return Poly(self[k] + other[k] for k in range(n))

    __radd__ = __add__

    def __sub__(self, other) -> Poly:
        if not isinstance(other, Poly):
            other = Poly.constant(other)
        return self + (-other)

    def __rsub__(self, other) -> Poly:
        return (-self) + other

    def __mul__(self, other) -> Poly:
        if not isinstance(other, Poly):
            return self.scale(other)
        if not self or not other:
            return Poly()
        out = [mpq(0)] * (len(self) + len(other) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return Poly(out)

    __rmul__ = __mul__

    def scale(self, c) -> Poly:
        return Poly(c * a for a in self.coeffs)

    def mul_x(self, k: int = 1) -> Poly:
        return Poly([0] * k + list(self.coeffs)) if self else Poly()

    def div_x(self) -> Poly:
        """Exact division by x; the constant term must vanish."""
        if self[0] != 0:
            raise ArithmeticError("polynomial is not divisible by x")
        return Poly(self.coeffs[1:])

    def __call__(self, x) -> Scalar:
        acc = mpq(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def compose_affine(self, a, b) -> Poly:
        """``p(a x + b)``."""
        lin = Poly([b, a])
        out = Poly()
        for c in reversed(self.coeffs):
            out = out * lin + c
        return out

    def derivative(self) -> Poly:
        return Poly(k * c for k, c in enumerate(self.coeffs) if k)

    def divmod(self, other: Poly) -> tuple[Poly, Poly]:
        if not other:
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = other.degree
        if len(rem) - 1 < dq:
            return Poly(), self
        quot = [mpq(0)] * (len(rem) - dq)
        for k in range(len(rem) - 1, dq - 1, -1):
            c = rem[k] / other.lead
            quot[k - dq] = c
            for j in range(dq + 1):
                rem[k - dq + j] -= c * other.coeffs[j]
        return Poly(quot), Poly(rem[:dq])

    def __mod__(self, other: Poly) -> Poly:
        return self.divmod(other)[1]

    def monic(self) -> Poly:
        return self.scale(1 / self.lead)

    def allclose(self, other: Poly, rel) -> bool:
        """Coefficientwise match relative to the largest coefficient of the pair."""
        return self.max_difference(other) <= rel * max(self.max_abs(), other.max_abs())

    def max_abs(self) -> Scalar:
        return max((abs(c) for c in self.coeffs), default=mpq(0))

    def max_difference(self, other: Poly) -> Scalar:
        n = max(len(self), len(other))
        return max((abs(self[k] - other[k]) for k in range(n)), default=mpq(0))

    def to_json(self) -> list[str]:
        return [format_scalar(c) for c in self.coeffs]

    @classmethod
    def from_json(cls, data: Sequence[str]) -> Poly:
        return cls(parse_scalar(t) for t in data)


X = Poly([0, 1])


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Monic gcd over an exact field."""
    while b:
        a, b = b, a % b
    return a.monic() if a else a


@dataclass(frozen=True)
class GeneratedFamily:
    g: ArithmeticFunctionSpec
    h: ArithmeticFunctionSpec
    polys: tuple
    method: str  # "convolution" | "three-term"

    def __getitem__(self, n: int) -> Poly:
        return self.polys[n]

    def __len__(self) -> int:
        return len(self.polys)

    @property
    def N(self) -> int:
        return len(self.polys) - 1

    def to_dict(self) -> dict:
        return {
            "g": str(self.g),
            "h": str(self.h),
            "method": self.method,
            "N": self.N,
            "polynomials": [p.to_json() for p in self.polys],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", "k", "coefficient"])
        for n, p in enumerate(self.polys):
            for k, c in enumerate(p.coeffs):
                w.writerow([n, k, format_scalar(c)])
        return buf.getvalue()


def _check_h(h: ArithmeticFunctionSpec, N: int) -> None:
    arithfn.check_normalized(h)
    for n in range(1, N + 1):
        if h(n) == 0:
            raise ZeroDivisionError(f"h({n}) = 0")


def require_identity_g(g: ArithmeticFunctionSpec) -> None:
    if g.kind is not Kind.IDENTITY:
        raise UnsupportedGError(f"only g = id is supported here, got g = {g}")


def generate_convolution(g: ArithmeticFunctionSpec, h: ArithmeticFunctionSpec, N: int) -> GeneratedFamily:
    """P_0 = 1, P_n = (x / h(n)) * sum_{k=1}^{n} g(k) P_{n-k}."""
    if N < 0:
        raise SpecError(f"N must be >= 0, got {N}")
    _check_h(h, N)
    gs = [g(k) for k in range(N + 1)]
    polys = [Poly.constant(1)]
    for n in range(1, N + 1):
        acc = Poly()
        for k in range(1, n + 1):
            acc = acc + polys[n - k].scale(gs[k])
        polys.append(acc.mul_x().scale(1 / h(n)))
    return GeneratedFamily(g, h, tuple(polys), "convolution")


def generate_three_term(h: ArithmeticFunctionSpec, N: int) -> GeneratedFamily:
    """P_n^{id,h} via h(n+1) P_{n+1} = (x + 2h(n)) P_n - h(n-1) P_{n-1}."""
    if N < 0:
        raise SpecError(f"N must be >= 0, got {N}")
    _check_h(h, N)
    polys = [Poly.constant(1)]
    if N >= 1:
        polys.append(X)
    for n in range(1, N):
        nxt = polys[n].mul_x() + polys[n].scale(2 * h(n)) - polys[n - 1].scale(h(n - 1))
        polys.append(nxt.scale(1 / h(n + 1)))
    return GeneratedFamily(arithfn.IDENTITY, h, tuple(polys), "three-term")


def generate(g: ArithmeticFunctionSpec, h: ArithmeticFunctionSpec, N: int, method: str = "three-term") -> GeneratedFamily:
    if method == "convolution":
        return generate_convolution(g, h, N)
    if method == "three-term":
        require_identity_g(g)
        return generate_three_term(h, N)
    raise SpecError(f"unknown generation method {method!r}")


def evaluate_three_term(h: ArithmeticFunctionSpec, N: int, x) -> list:
    """Values P_0(x), ..., P_N(x) for g = id, straight from the recurrence."""
    x = as_scalar(x)
    vals = [mpq(1)]
    if N >= 1:
        vals.append(x)
    for n in range(1, N):
        vals.append(((x + 2 * h(n)) * vals[n] - h(n - 1) * vals[n - 1]) / h(n + 1))
    return vals


def default_comparison_tolerance() -> Scalar:
    return as_scalar(2) ** (16 - get_precision())


def families_agree(a: GeneratedFamily, b: GeneratedFamily, rel=None) -> tuple[bool, int | None]:
    """Compare two families coefficientwise; returns (ok, first differing n)."""
    if len(a) != len(b):
        return False, min(len(a), len(b))
    exact = all(p.is_exact for p in a.polys) and all(p.is_exact for p in b.polys)
    tol = default_comparison_tolerance() if rel is None else as_scalar(rel)
    for n, (p, q) in enumerate(zip(a.polys, b.polys)):
        same = p == q if exact else p.allclose(q, tol)
        if not same:
            return False, n
    return True, None
