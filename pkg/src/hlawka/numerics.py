"""Scalar backends and the three-valued comparison policy.

A scalar is a plain Python number: ``int`` or ``Fraction`` for the exact
backend, ``float`` for the binary backend.  ``Fraction`` arithmetic already
keeps values in lowest terms and decays to ``float`` whenever a float takes
part, so no wrapper type is needed.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Union

Scalar = Union[int, Fraction, float]


class HlawkaError(Exception):
    """Base class for errors raised by this package."""


class DomainError(HlawkaError, ValueError):
    """A value lies outside the domain of the requested operation."""


class StructuralError(HlawkaError, ValueError):
    """Shapes or lengths of inputs do not match."""


class PreconditionError(HlawkaError, ValueError):
    """An operation's precondition failed; ``witness`` names the culprit."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class InvalidComputation(HlawkaError, ArithmeticError):
    """A NaN reached a comparison."""


class Verdict(enum.Enum):
    HOLDS = "holds"
    FAILS = "fails"
    MARGINAL = "marginal"

    @property
    def ok(self) -> bool:
        return self is not Verdict.FAILS


@dataclass(frozen=True)
class TolerancePolicy:
    abs_tol: float = 1e-9
    rel_tol: float = 1e-12

    def __post_init__(self):
        for name in ("abs_tol", "rel_tol"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v >= 0):
                raise ValueError(f"{name} must be finite and >= 0, got {v!r}")

    def effective(self, x, y=0) -> float:
        return max(self.abs_tol, self.rel_tol * max(abs(float(x)), abs(float(y))))


DEFAULT_POLICY = TolerancePolicy()


def is_exact(x) -> bool:
    t = type(x)
    if t is float:
        return False
    if t is int or t is Fraction:
        return True
    return isinstance(x, Rational)


def all_exact(*values) -> bool:
    for v in values:
        if not is_exact(v):
            return False
    return True


def rational(x) -> Scalar:
    """Normalize an exact value: integral Fractions become ints (faster), floats pass through."""
    t = type(x)
    if t is float or t is int:
        return x
    if t is Fraction:
        return x.numerator if x.denominator == 1 else x
    if isinstance(x, bool):
        return int(x)
    return x


def cmp_ge(x: Scalar, y: Scalar, policy: TolerancePolicy = DEFAULT_POLICY) -> Verdict:
    """Compare ``x >= y``.

    Two exact operands are compared exactly and never yield ``MARGINAL``.
    Otherwise the difference is judged against
    ``max(abs_tol, rel_tol * max(|x|, |y|))``.
    """
    fx = x if type(x) is float else None
    fy = y if type(y) is float else None
    if fx is None and fy is None and is_exact(x) and is_exact(y):
        return Verdict.HOLDS if x >= y else Verdict.FAILS
    fx = float(x) if fx is None else fx
    fy = float(y) if fy is None else fy
    if fx != fx or fy != fy:
        raise InvalidComputation(f"NaN in comparison ({x!r} >= {y!r})")
    ax, ay = abs(fx), abs(fy)
    tol = policy.rel_tol * (ax if ax > ay else ay)
    if tol < policy.abs_tol:
        tol = policy.abs_tol
    d = fx - fy
    if d >= tol:
        return Verdict.HOLDS
    if d <= -tol:
        return Verdict.FAILS
    return Verdict.MARGINAL


def is_zero(x: Scalar, policy: TolerancePolicy = DEFAULT_POLICY, scale: float = 0.0) -> bool:
    """Exact zero test for rationals, tolerance band for floats."""
    if is_exact(x):
        return x == 0
    return abs(x) < policy.effective(scale)


def _isqrt_exact(n: int):
    r = math.isqrt(n)
    return r if r * r == n else None


def sqrt_scalar(x: Scalar, policy: TolerancePolicy = DEFAULT_POLICY) -> Scalar:
    if is_exact(x):
        if x < 0:
            raise DomainError(f"square root of negative value {x} (length of a vector outside the cone)")
        num = _isqrt_exact(x.numerator)
        den = _isqrt_exact(x.denominator)
        if num is not None and den is not None:
            return num if den == 1 else Fraction(num, den)
        return math.sqrt(x)
    if math.isnan(x):
        raise InvalidComputation("square root of NaN")
    if x < 0:
        if x < -policy.abs_tol:
            raise DomainError(f"square root of negative value {x} (length of a vector outside the cone)")
        return 0.0
    return math.sqrt(x)


def pow_half_k(x: Scalar, k: int, policy: TolerancePolicy = DEFAULT_POLICY) -> Scalar:
    """Return ``x ** (1 / 2**k)``; exact on rationals whenever possible."""
    if k == 0:
        return x
    if k > 0:
        if x < 0 and (is_exact(x) or x < -policy.abs_tol):
            raise DomainError(f"x^(1/2^{k}) undefined for negative x={x}")
        for _ in range(k):
            x = sqrt_scalar(x, policy)
        return x
    return x ** (2 ** (-k))


def parse_scalar(obj) -> Scalar:
    """Decode a scalar from JSON: ``{"rat": "p/q"}``, ``{"f64": x}``, ``"p/q"``, or a number."""
    if isinstance(obj, dict):
        if set(obj) == {"rat"}:
            return rational(Fraction(str(obj["rat"])))
        if set(obj) == {"f64"}:
            v = obj["f64"]
            if isinstance(v, bool) or not isinstance(v, (int, float)):
                raise ValueError(f"f64 scalar must be a number, got {v!r}")
            return float(v)
        raise ValueError(f"scalar object must have exactly one key 'rat' or 'f64', got {sorted(obj)}")
    if isinstance(obj, bool):
        raise ValueError("booleans are not scalars")
    if isinstance(obj, int):
        return obj
    if isinstance(obj, float):
        return obj
    if isinstance(obj, str):
        s = obj.strip()
        try:
            return rational(Fraction(s)) if ("/" in s or s.lstrip("+-").isdigit()) else float(s)
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"bad scalar literal {obj!r}") from exc
    raise ValueError(f"cannot parse scalar from {obj!r}")


def scalar_to_json(x: Scalar):
    if is_exact(x):
        x = Fraction(x)
        return {"rat": str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"}
    return {"f64": float(x)}
