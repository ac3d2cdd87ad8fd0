"""Turan expressions T_n^h(x) and the v-root bounds behind their positivity.

For x > 0, T_n >= 0 is equivalent to r^2 - ((x + 2h(n))/h(n+1)) r + h(n-1)/h(n+1) >= 0
with r = P_n(x)/P_{n-1}(x).  The larger root of that quadratic, v_{n,2}, is
a lower bound for r whenever v_{n,2}(x) decreases in n.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from gmpy2 import mpq

from .arithfn import ArithmeticFunctionSpec, d_criterion, delta_h
from .errors import NegativeDiscriminantError
from .polycore import evaluate_three_term
from .scalar import Scalar, as_scalar, format_scalar, is_exact, sign, sqrt

# relative slack for big-float sign assertions
DEFAULT_REL_TOL = mpq(1, 10**9)


def default_x_grid() -> list[mpq]:
    """{0} U {10^k : k = -3..1} U {1, ..., 50}."""
    pts = {mpq(0)} | {mpq(10) ** k for k in range(-3, 2)} | {mpq(k) for k in range(1, 51)}
    return sorted(pts)


def _nonneg(value, scale, rel) -> bool:
    if is_exact(value):
        return value >= 0
    return value >= -rel * abs(scale)


def turan_T(h: ArithmeticFunctionSpec, n: int, x) -> Scalar:
    """P_n(x)^2 - P_{n-1}(x) P_{n+1}(x) for g = id."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    p = evaluate_three_term(h, n + 1, x)
    return p[n] ** 2 - p[n - 1] * p[n + 1]


@dataclass(frozen=True)
class VRoots:
    n: int
    x: Scalar
    v1: Scalar
    v2: Scalar
    discriminant: Scalar


def v_roots(h: ArithmeticFunctionSpec, n: int, x) -> VRoots:
    """Roots of v^2 - ((x + 2h(n))/h(n+1)) v + h(n-1)/h(n+1) = 0."""
    x = as_scalar(x)
    hn, hn1 = h(n), h(n + 1)
    disc = x * x + 4 * hn * x + 4 * delta_h(h, n)
    sgn = sign(disc, scale=max(x * x, abs(hn) * abs(x), 1))
    if sgn < 0:
        raise NegativeDiscriminantError(n, x, disc)
    root = sqrt(disc) if sgn > 0 else mpq(0)
    return VRoots(n, x, (x + 2 * hn - root) / (2 * hn1), (x + 2 * hn + root) / (2 * hn1), disc)


def v2_at_zero(h: ArithmeticFunctionSpec, n: int) -> Scalar:
    """(h(n) + sqrt(Delta_h(n))) / h(n+1)."""
    return (h(n) + sqrt(delta_h(h, n))) / h(n + 1)


@dataclass
class Failure:
    n: int
    x: Scalar
    value: Scalar

    def to_dict(self) -> dict:
        return {"n": self.n, "x": format_scalar(self.x), "value": format_scalar(self.value)}


@dataclass
class TuranReport:
    h: str
    n_range: tuple
    x_grid: list
    values: list = field(default_factory=list, repr=False)  # (n, x, T)
    failures: list = field(default_factory=list)
    negative_x: list = field(default_factory=list, repr=False)  # exploratory (n, x, T)
    minimum: Scalar | None = None
    zero_row_exact: bool = True

    @property
    def passed(self) -> bool:
        return not self.failures and self.zero_row_exact

    def to_dict(self) -> dict:
        neg = [r for r in self.negative_x if r[2] < 0]
        return {
            "h": self.h,
            "n_range": list(self.n_range),
            "x_points": len(self.x_grid),
            "minimum": format_scalar(self.minimum) if self.minimum is not None else None,
            "zero_row_exact": self.zero_row_exact,
            "passed": self.passed,
            "failures": [f.to_dict() for f in self.failures],
            "negative_x_explored": len(self.negative_x),
            "negative_x_violations": [
                {"n": n, "x": format_scalar(x), "T": format_scalar(t)} for n, x, t in neg
            ],
        }


def turan_sweep(
    h: ArithmeticFunctionSpec,
    n_max: int,
    x_grid: Sequence | None = None,
    allow_negative_x: bool = False,
    rel_tol=DEFAULT_REL_TOL,
) -> TuranReport:
    """T_n(x) >= 0 for 2 <= n <= n_max on the non-negative grid.

    With ``allow_negative_x`` the mirrored grid is also evaluated and recorded,
    but those values never count as failures.
    """
    grid = sorted({as_scalar(x) for x in (default_x_grid() if x_grid is None else x_grid)})
    pos = [x for x in grid if x >= 0]
    report = TuranReport(h=str(h), n_range=(2, n_max), x_grid=pos)
    for x in pos:
        p = evaluate_three_term(h, n_max + 1, x)
        for n in range(2, n_max + 1):
            t = p[n] ** 2 - p[n - 1] * p[n + 1]
            report.values.append((n, x, t))
            if report.minimum is None or t < report.minimum:
                report.minimum = t
            if x == 0 and t != 0:
                report.zero_row_exact = False
            if not _nonneg(t, max(p[n] ** 2, abs(p[n - 1] * p[n + 1])), rel_tol):
                report.failures.append(Failure(n, x, t))
    if allow_negative_x:
        for x in sorted({-x for x in pos if x > 0}):
            p = evaluate_three_term(h, n_max + 1, x)
            for n in range(2, n_max + 1):
                report.negative_x.append((n, x, p[n] ** 2 - p[n - 1] * p[n + 1]))
    return report


@dataclass
class BoundReport:
    """Shared shape for the v-monotonicity and ratio-bound checks."""

    check: str
    h: str
    n_range: tuple
    rows: list = field(default_factory=list, repr=False)  # (n, x, v2, other, margin)
    failures: list = field(default_factory=list)
    worst_margin: Scalar | None = None
    notes: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.failures and all(v for v in self.notes.values() if isinstance(v, bool))

    def add(self, n, x, v2, other, margin, ok) -> None:
        self.rows.append((n, x, v2, other, margin))
        if self.worst_margin is None or margin < self.worst_margin:
            self.worst_margin = margin
        if not ok:
            self.failures.append(Failure(n, x, margin))

    def to_dict(self) -> dict:
        return {
            "check": self.check,
            "h": self.h,
            "n_range": list(self.n_range),
            "points": len(self.rows),
            "worst_margin": format_scalar(self.worst_margin) if self.worst_margin is not None else None,
            "passed": self.passed,
            "failures": [f.to_dict() for f in self.failures],
            **self.notes,
        }


def _grid(x_grid, positive_only=False) -> list:
    grid = sorted({as_scalar(x) for x in (default_x_grid() if x_grid is None else x_grid)})
    return [x for x in grid if (x > 0 if positive_only else x >= 0)]


def check_v_monotone(
    h: ArithmeticFunctionSpec, n_max: int, x_grid: Iterable | None = None, rel_tol=DEFAULT_REL_TOL
) -> BoundReport:
    """v_{n,2}(x) >= v_{n+1,2}(x) for 1 <= n <= n_max on the grid."""
    report = BoundReport("v_monotone", str(h), (1, n_max))
    for x in _grid(x_grid):
        v = [None] + [v_roots(h, n, x).v2 for n in range(1, n_max + 2)]
        for n in range(1, n_max + 1):
            margin = v[n] - v[n + 1]
            report.add(n, x, v[n], v[n + 1], margin, _nonneg(margin, max(v[n], v[n + 1]), rel_tol))
    return report


def check_ratio_bound(
    h: ArithmeticFunctionSpec, n_max: int, x_grid: Iterable | None = None, rel_tol=DEFAULT_REL_TOL
) -> BoundReport:
    """v_{n,2}(x) <= P_n(x)/P_{n-1}(x) for 2 <= n <= n_max and x > 0.

    Also records whether the base case P_2/P_1 = v_{1,2} holds at every x.
    """
    report = BoundReport("ratio_bound", str(h), (2, n_max))
    base_case = True
    for x in _grid(x_grid, positive_only=True):
        p = evaluate_three_term(h, n_max, x)
        if any(v == 0 for v in p[1:]):
            raise ArithmeticError(f"P_n({x}) vanished for x > 0")
        ratio21 = p[2] / p[1]
        v12 = v_roots(h, 1, x).v2
        if sign(ratio21 - v12, scale=max(abs(v12), 1)) != 0:
            base_case = False
        for n in range(2, n_max + 1):
            v2 = v_roots(h, n, x).v2
            ratio = p[n] / p[n - 1]
            margin = ratio - v2
            report.add(n, x, v2, ratio, margin, _nonneg(margin, max(ratio, v2), rel_tol))
    report.notes["base_case_equal"] = base_case
    return report


@dataclass(frozen=True)
class DAgreementRow:
    n: int
    d_value: Scalar
    d_sign: int
    v_difference: Scalar  # v_{n+1,2}(0) - v_{n,2}(0)
    v_sign: int

    @property
    def agrees(self) -> bool:
        return self.d_sign == self.v_sign


def d_sign_agreement(h: ArithmeticFunctionSpec, n_max: int) -> list[DAgreementRow]:
    """Compare sign(D(n)) with the direct comparison of v_{n+1,2}(0) and v_{n,2}(0)."""
    rows = []
    v = [None] + [v2_at_zero(h, n) for n in range(1, n_max + 2)]
    for n in range(1, n_max + 1):
        d = d_criterion(h, n)
        diff = v[n + 1] - v[n]
        rows.append(DAgreementRow(n, d, sign(d), diff, sign(diff, scale=max(v[n], v[n + 1]))))
    return rows
