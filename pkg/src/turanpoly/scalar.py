"""Scalar backend: exact rationals (``mpq``) and binary big floats (``mpfr``).

A *Scalar* is either a ``gmpy2.mpq`` (always in lowest terms, positive
denominator) or a ``gmpy2.mpfr`` carrying the working precision of the active
gmpy2 context.  Arithmetic between two rationals stays rational; any operation
involving an ``mpfr`` yields an ``mpfr`` at the context precision.

The default precision is 128 bits and can be overridden with the
``TURANPOLY_PRECISION`` environment variable or :func:`precision`.
"""
from __future__ import annotations

import os
from contextlib import contextmanager
from fractions import Fraction
from typing import Iterator, Union

import gmpy2
from gmpy2 import mpfr, mpq, mpz

Scalar = Union[mpq, mpfr]

PRECISION_ENV = "TURANPOLY_PRECISION"
DEFAULT_PRECISION = int(os.environ.get(PRECISION_ENV, "128"))
MIN_PRECISION = 53

# bits of slack used when deciding that a big float is "zero"
ZERO_SLACK_BITS = 10


def set_precision(bits: int) -> None:
    if bits < MIN_PRECISION:
        raise ValueError(f"precision must be at least {MIN_PRECISION} bits, got {bits}")
    gmpy2.get_context().precision = int(bits)


def get_precision() -> int:
    return gmpy2.get_context().precision


@contextmanager
def precision(bits: int) -> Iterator[int]:
    """Run a block at ``bits`` of working precision."""
    if bits < MIN_PRECISION:
        raise ValueError(f"precision must be at least {MIN_PRECISION} bits, got {bits}")
    with gmpy2.context(gmpy2.get_context(), precision=int(bits)):
        yield int(bits)


set_precision(DEFAULT_PRECISION)


def is_exact(x) -> bool:
    return isinstance(x, (mpq, mpz, int, Fraction))


def as_scalar(value) -> Scalar:
    """Coerce ints, fractions, strings and floats to a Scalar.

    Strings like ``"3/7"`` or ``"0.1"`` are read as exact rationals. Python
    floats are converted exactly (their binary value).
    """
    if isinstance(value, (mpq, mpfr)):
        return value
    if isinstance(value, (int, mpz)):
        return mpq(value)
    if isinstance(value, Fraction):
        return mpq(value.numerator, value.denominator)
    if isinstance(value, float):
        return mpq(value)
    if isinstance(value, str):
        return parse_rational(value)
    raise TypeError(f"cannot convert {type(value).__name__} to a Scalar")


def parse_rational(text: str) -> mpq:
    text = text.strip()
    try:
        return mpq(text)
    except ValueError:
        pass
    try:
        f = Fraction(text)
    except ValueError as exc:
        raise ValueError(f"not a rational number: {text!r}") from exc
    return mpq(f.numerator, f.denominator)


def to_rational(x) -> mpq:
    """Exact rational value of ``x`` (big floats are dyadic rationals)."""
    if isinstance(x, mpfr):
        if not gmpy2.is_finite(x):
            raise ValueError(f"non-finite value {x}")
        return mpq(x)
    return as_scalar(x)


def to_float(x) -> mpfr:
    return mpfr(x) if not isinstance(x, mpfr) else x


def sqrt(x) -> Scalar:
    """Square root; rational perfect squares stay rational."""
    if x < 0:
        raise ValueError(f"square root of negative value {x}")
    if is_exact(x):
        q = as_scalar(x)
        num, den = q.numerator, q.denominator
        rn, ok_n = gmpy2.iroot(num, 2)
        if ok_n:
            rd, ok_d = gmpy2.iroot(den, 2)
            if ok_d:
                return mpq(rn, rd)
        return gmpy2.sqrt(mpfr(q))
    return gmpy2.sqrt(x)


def rational_power(n: int, s: mpq) -> Scalar:
    """``n**s`` for a positive integer ``n`` and rational exponent ``s``.

    Exact when the result is rational; otherwise correctly rounded to the
    context precision (computed with guard bits, then rounded once).
    """
    if n < 1:
        raise ValueError(f"base must be a positive integer, got {n}")
    s = as_scalar(s)
    p, q = int(s.numerator), int(s.denominator)
    root, exact = gmpy2.iroot(mpz(n), q)
    if exact:
        return mpq(root) ** p
    target = get_precision()
    power = mpz(n) ** abs(p)
    with gmpy2.context(gmpy2.get_context(), precision=target + 32 + int(power.bit_length())):
        value = gmpy2.rootn(mpfr(power), q)
        if p < 0:
            value = 1 / value
    return mpfr(value, target)


def zero_tolerance(scale=1) -> Scalar:
    """Magnitude below which a big float is indistinguishable from zero."""
    return mpfr(2) ** (ZERO_SLACK_BITS - get_precision()) * abs(to_float(scale))


def sign(x, scale=1, rel=None) -> int:
    """Three-valued sign of ``x``.

    Rationals use the true sign.  Big floats within ``rel * |scale|`` of zero
    (default ``2**(10 - precision) * |scale|``) report 0.
    """
    if is_exact(x):
        return (x > 0) - (x < 0)
    tol = zero_tolerance(scale) if rel is None else abs(to_float(scale)) * rel
    if abs(x) <= tol:
        return 0
    return 1 if x > 0 else -1


def _float_digits(x: mpfr, digits: int) -> str:
    mant, exp, _ = x.digits(10, digits)
    neg = mant.startswith("-")
    mant = mant.lstrip("-").rstrip("0") or "0"
    head, tail = mant[0], mant[1:] or "0"
    return f"{'-' if neg else ''}{head}.{tail}e{exp - 1}"


def format_scalar(x) -> str:
    """Deterministic text form that round-trips through :func:`parse_scalar`.

    Rationals print as ``"p"`` or ``"p/q"``; big floats print as the shortest
    decimal ``"d.ddde±k"`` that reparses to the same value at the current
    precision.
    """
    if is_exact(x):
        return str(as_scalar(x))
    if x == 0:
        return "0.0e0"
    if not gmpy2.is_finite(x):
        return str(x)
    for digits in range(2, get_precision()):
        text = _float_digits(x, digits)
        if mpfr(text) == x:
            return text
    return _float_digits(x, 0)


def parse_scalar(text: str) -> Scalar:
    """Inverse of :func:`format_scalar`."""
    text = text.strip()
    if any(ch in text for ch in ".eEn"):
        return mpfr(text)
    return mpq(text)
