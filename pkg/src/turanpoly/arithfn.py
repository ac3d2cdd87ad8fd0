"""Arithmetic functions g and h and the log-concavity quantities built on them.

Every spec evaluates positive integers ``n >= 1``; position 0 evaluates to 0,
which is the extension ``h(0) = 0`` used by all recurrences.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path

from gmpy2 import mpq

from .errors import NotLogConcaveError, SpecError
from .scalar import (
    Scalar,
    as_scalar,
    format_scalar,
    get_precision,
    parse_rational,
    rational_power,
    sign,
    sqrt,
)


class Kind(enum.Enum):
    POWER = "power"
    ONE = "one"
    IDENTITY = "id"
    SIGMA = "sigma"
    TABLE = "table"
    ALTSIGN = "altsign"


@dataclass(frozen=True)
class ArithmeticFunctionSpec:
    kind: Kind
    s: mpq | None = None
    values: tuple = field(default=(), repr=False)
    source: str | None = None

    def __post_init__(self):
        if self.kind is Kind.POWER and self.s is None:
            raise SpecError("power spec needs an exponent")
        if self.kind is Kind.TABLE:
            if not self.values:
                raise SpecError("table spec needs at least one value")
            if any(v <= 0 for v in self.values):
                raise SpecError("table values must be positive")

    def __call__(self, n: int) -> Scalar:
        return evaluate(self, n)

    def __str__(self) -> str:
        if self.kind is Kind.POWER:
            return f"power:{format_scalar(self.s)}"
        if self.kind is Kind.TABLE:
            if self.source:
                return f"table:{self.source}"
            return "table:[" + ",".join(format_scalar(v) for v in self.values) + "]"
        return self.kind.value

    @property
    def is_exact(self) -> bool:
        """True when every value is rational (no big-float rounding)."""
        if self.kind is Kind.POWER:
            return self.s.denominator == 1
        return True

    @property
    def is_positive(self) -> bool:
        return self.kind is not Kind.ALTSIGN

    @property
    def limit(self) -> int | None:
        return len(self.values) if self.kind is Kind.TABLE else None


def power(s) -> ArithmeticFunctionSpec:
    return ArithmeticFunctionSpec(Kind.POWER, s=as_scalar(s))


def table(values, source: str | None = None) -> ArithmeticFunctionSpec:
    return ArithmeticFunctionSpec(Kind.TABLE, values=tuple(as_scalar(v) for v in values), source=source)


ONE = ArithmeticFunctionSpec(Kind.ONE)
IDENTITY = ArithmeticFunctionSpec(Kind.IDENTITY)
SIGMA = ArithmeticFunctionSpec(Kind.SIGMA)
ALTSIGN = ArithmeticFunctionSpec(Kind.ALTSIGN)


def parse_spec(text: str) -> ArithmeticFunctionSpec:
    """Parse ``power:0.5``, ``one``, ``id``, ``sigma``, ``altsign`` or ``table:path.csv``."""
    text = text.strip()
    head, _, arg = text.partition(":")
    head = head.lower()
    if head in ("one", "id", "sigma", "altsign") and not arg:
        return {"one": ONE, "id": IDENTITY, "sigma": SIGMA, "altsign": ALTSIGN}[head]
    if head == "power" and arg:
        try:
            return power(parse_rational(arg))
        except ValueError as exc:
            raise SpecError(f"bad exponent in {text!r}") from exc
    if head == "table" and arg:
        return load_table(arg)
    raise SpecError(f"unknown arithmetic function spec {text!r}")


def load_table(path) -> ArithmeticFunctionSpec:
    """Read one positive rational per line (1-indexed); blank lines and ``#`` comments skipped."""
    try:
        lines = Path(path).read_text().splitlines()
    except OSError as exc:
        raise SpecError(f"cannot read table {path}: {exc}") from exc
    values = []
    for lineno, line in enumerate(lines, 1):
        line = line.split("#", 1)[0].strip().rstrip(",")
        if not line:
            continue
        try:
            values.append(parse_rational(line))
        except ValueError as exc:
            raise SpecError(f"{path}:{lineno}: {exc}") from exc
    return table(values, source=str(path))


def divisor_sum(n: int) -> int:
    total = 0
    d = 1
    while d * d <= n:
        if n % d == 0:
            total += d
            if d * d != n:
                total += n // d
        d += 1
    return total


@lru_cache(maxsize=65536)
def _power_value(n: int, s: mpq, prec: int) -> Scalar:
    return rational_power(n, s)


def evaluate(spec: ArithmeticFunctionSpec, n: int) -> Scalar:
    """Value of the arithmetic function at ``n``, with ``h(0) = 0``."""
    if n < 0:
        raise SpecError(f"negative argument n={n}")
    if n == 0:
        return mpq(0)
    kind = spec.kind
    if kind is Kind.ONE:
        return mpq(1)
    if kind is Kind.IDENTITY:
        return mpq(n)
    if kind is Kind.POWER:
        return _power_value(n, spec.s, get_precision())
    if kind is Kind.SIGMA:
        return mpq(divisor_sum(n))
    if kind is Kind.ALTSIGN:
        return mpq(1 if n % 2 else -1)
    if n > len(spec.values):
        raise SpecError(f"table has {len(spec.values)} entries, asked for n={n}")
    return spec.values[n - 1]


def check_normalized(h: ArithmeticFunctionSpec) -> None:
    if evaluate(h, 1) != 1:
        raise SpecError(f"{h} is not normalized: h(1) = {evaluate(h, 1)}")


def delta_h(h: ArithmeticFunctionSpec, n: int) -> Scalar:
    """Log-concavity defect ``h(n)^2 - h(n-1) h(n+1)``."""
    if n < 1:
        raise SpecError(f"delta_h needs n >= 1, got {n}")
    return h(n) ** 2 - h(n - 1) * h(n + 1)


def x_ratio(h: ArithmeticFunctionSpec, n: int) -> Scalar:
    """``h(n-1) h(n+1) / h(n)^2``; equals 0 at n=1."""
    if n < 1:
        raise SpecError(f"x_ratio needs n >= 1, got {n}")
    return h(n - 1) * h(n + 1) / h(n) ** 2


def _sqrt_one_minus(h, n: int) -> Scalar:
    radicand = 1 - x_ratio(h, n)
    sgn = sign(radicand)
    if sgn < 0:
        raise NotLogConcaveError(n, radicand)
    return sqrt(radicand) if sgn > 0 else mpq(0)


def d_criterion(h: ArithmeticFunctionSpec, n: int) -> Scalar:
    """``1 + sqrt(1 - X(n+1)) - X(n+1) (1 + sqrt(1 - X(n)))``.

    Non-positive exactly when ``v_{n+1,2}(0) <= v_{n,2}(0)``.
    """
    x_next = x_ratio(h, n + 1)
    return 1 + _sqrt_one_minus(h, n + 1) - x_next * (1 + _sqrt_one_minus(h, n))


@dataclass(frozen=True)
class SideConditionRow:
    n: int
    monotone: bool  # h(n+1) >= h(n) >= 1
    delta_ordered: bool  # Delta(n) >= Delta(n+1) >= 0
    cubic: bool  # h(n+1)^3 - h(n) h(n+2)^2 <= 0

    @property
    def holds(self) -> bool:
        return self.monotone and self.delta_ordered and self.cubic


@dataclass(frozen=True)
class SideConditionReport:
    h: str
    n_max: int
    rows: tuple

    @property
    def all_hold(self) -> bool:
        return all(r.holds for r in self.rows)

    def failures(self) -> list:
        return [r for r in self.rows if not r.holds]

    def to_dict(self) -> dict:
        return {
            "h": self.h,
            "n_max": self.n_max,
            "all_hold": self.all_hold,
            "conditions": {
                "monotone": all(r.monotone for r in self.rows),
                "delta_ordered": all(r.delta_ordered for r in self.rows),
                "cubic": all(r.cubic for r in self.rows),
            },
            "failures": [
                {"n": r.n, "monotone": r.monotone, "delta_ordered": r.delta_ordered, "cubic": r.cubic}
                for r in self.failures()
            ],
        }


def _ge(a, b) -> bool:
    return sign(a - b, scale=max(abs(a), abs(b), 1)) >= 0


def lemma_side_conditions(h: ArithmeticFunctionSpec, n_max: int) -> SideConditionReport:
    """Check the three growth conditions that reduce v-monotonicity to x = 0."""
    if n_max < 1:
        raise SpecError(f"n_max must be >= 1, got {n_max}")
    rows = []
    for n in range(1, n_max + 1):
        h0, h1, h2 = h(n), h(n + 1), h(n + 2)
        d0, d1 = delta_h(h, n), delta_h(h, n + 1)
        rows.append(
            SideConditionRow(
                n=n,
                monotone=_ge(h1, h0) and _ge(h0, 1),
                delta_ordered=_ge(d0, d1) and _ge(d1, 0),
                cubic=_ge(h0 * h2**2, h1**3),
            )
        )
    return SideConditionReport(h=str(h), n_max=n_max, rows=tuple(rows))
