"""Power-scaled Hlawka inequalities on abelian semigroups.

For a nonnegative ``F`` on a semigroup the ``k``-th power margin is::

    F(x)^e + F(y)^e + F(z)^e + F(x+y+z)^e - F(x+y)^e - F(y+z)^e - F(z+x)^e,   e = 1/2^k

Strong subadditivity propagates a nonnegative margin from ``k0`` upwards;
superadditivity propagates it downwards.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .integral import ConcaveMap
from .numerics import (
    DEFAULT_POLICY,
    HlawkaError,
    PreconditionError,
    Scalar,
    StructuralError,
    TolerancePolicy,
    Verdict,
    cmp_ge,
    pow_half_k,
    rational,
    sqrt_scalar,
)


class InvariantViolation(HlawkaError, ValueError):
    """``F`` returned a negative value."""


def lp_norm(v: Sequence[Scalar], p) -> Scalar:
    if p == math.inf:
        return max((abs(c) for c in v), default=0)
    if p == 1:
        return rational(sum(abs(c) for c in v))
    if p == 2:
        return sqrt_scalar(rational(sum(c * c for c in v)))
    p = float(p)
    return math.fsum(abs(float(c)) ** p for c in v) ** (1.0 / p)


class LpVectors:
    """``R^m`` under addition with ``F = ||.||_p``."""

    def __init__(self, m: int, p):
        if not (p == math.inf or p >= 1):
            raise ValueError("need p >= 1")
        self.m, self.p = m, p
        self.name = f"lp(m={m}, p={p})"

    def combine(self, x, y):
        if len(x) != self.m or len(y) != self.m:
            raise StructuralError(f"expected vectors of length {self.m}")
        return tuple(rational(a + b) for a, b in zip(x, y))

    def F(self, x):
        return lp_norm(x, self.p)


class MeasurableSets:
    """Subsets of a finite ground set (bitmasks) under union or symmetric difference, ``F = mu``."""

    def __init__(self, weights: Sequence[Scalar], op: str = "union"):
        if len(weights) > 64:
            raise ValueError("ground sets are capped at 64 elements")
        if any(w < 0 for w in weights):
            raise ValueError("measure weights must be nonnegative")
        if op not in ("union", "symmdiff"):
            raise ValueError(f"op must be 'union' or 'symmdiff', got {op!r}")
        self.weights = tuple(weights)
        self.ground_size = len(self.weights)
        self.op = op
        self.name = f"measure(n={self.ground_size}, op={op})"
        self._full = (1 << self.ground_size) - 1
        self._table = measure_table(self.weights) if self.ground_size <= 16 else None

    def combine(self, x: int, y: int) -> int:
        return (x | y) if self.op == "union" else (x ^ y)

    def F(self, x: int):
        if x & ~self._full:
            raise StructuralError(f"set {x:#x} has elements outside the ground set")
        if self._table is not None:
            return self._table[x]
        return measure(self.weights, x)


class NonnegReals:
    """``[0, inf)`` under addition with ``F(x) = x ** exponent``."""

    def __init__(self, exponent=1):
        self.exponent = exponent
        self.name = f"nonneg(F=x^{exponent})"

    def combine(self, x, y):
        return rational(x + y)

    def F(self, x):
        if x < 0:
            raise ValueError(f"{x} is not a nonnegative real")
        e = self.exponent
        if isinstance(e, int) or (isinstance(e, Fraction) and e.denominator == 1):
            return rational(x ** int(e))
        return float(x) ** float(e)


class NormedGroup:
    """An abelian group (integers or real tuples) with ``F = S(|.|)``."""

    def __init__(self, norm: Callable, S: ConcaveMap = ConcaveMap("identity")):
        self.norm, self.S = norm, S
        self.name = f"group(S={S.kind})"

    def combine(self, x, y):
        if isinstance(x, tuple):
            return tuple(rational(a + b) for a, b in zip(x, y))
        return rational(x + y)

    def neg(self, x):
        return tuple(-a for a in x) if isinstance(x, tuple) else -x

    def F(self, x):
        return self.S(self.norm(x))


def measure(weights, bits: int):
    total = 0
    i = 0
    while bits:
        if bits & 1:
            total += weights[i]
        bits >>= 1
        i += 1
    return rational(total)


def measure_table(weights) -> list:
    """``mu`` of every subset of the ground set, indexed by bitmask."""
    table = [0] * (1 << len(weights))
    for bits in range(1, len(table)):
        low = bits & -bits
        table[bits] = rational(table[bits ^ low] + weights[low.bit_length() - 1])
    return table


def _seven(structure, x, y, z):
    c = structure.combine
    xy, yz, zx = c(x, y), c(y, z), c(z, x)
    vals = [structure.F(v) for v in (x, y, z, c(xy, z), xy, yz, zx)]
    for v in vals:
        if v < 0:
            raise InvariantViolation(f"F returned negative value {v} on {structure.name}")
    return vals


def hlawka_power_margin(structure, x, y, z, k: int, policy: TolerancePolicy = DEFAULT_POLICY) -> Scalar:
    vals = [pow_half_k(v, k, policy) for v in _seven(structure, x, y, z)]
    return rational(vals[0] + vals[1] + vals[2] + vals[3] - vals[4] - vals[5] - vals[6])


def check_strong_subadditive(structure, pairs: Iterable, policy: TolerancePolicy = DEFAULT_POLICY):
    """``F(x)+F(y) >= F(x+y)`` and ``F(x)+F(x+y) >= F(y)`` on every pair; returns ``(ok, witness)``."""
    for x, y in pairs:
        fx, fy, fxy = structure.F(x), structure.F(y), structure.F(structure.combine(x, y))
        if not (cmp_ge(fx + fy, fxy, policy).ok and cmp_ge(fx + fxy, fy, policy).ok):
            return False, (x, y)
    return True, None


def check_superadditive(structure, pairs: Iterable, policy: TolerancePolicy = DEFAULT_POLICY):
    for x, y in pairs:
        if not cmp_ge(structure.F(structure.combine(x, y)), structure.F(x) + structure.F(y), policy).ok:
            return False, (x, y)
    return True, None


def pairs_of_triples(structure, triples) -> list:
    """Both orderings of ``(x, y)``, ``(y, z)``, ``(z, x)`` and ``(x+y, z)``."""
    out = []
    for x, y, z in triples:
        for a, b in ((x, y), (y, z), (z, x), (structure.combine(x, y), z)):
            out += [(a, b), (b, a)]
    return out


@dataclass
class PropagationReport:
    structure: str
    branch: str
    k0: int
    ks: tuple
    checked: int = 0
    premise_held: int = 0
    events: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.events


def propagate_check(structure, triples: Sequence, k0: int, k_range: Iterable[int],
                    policy: TolerancePolicy = DEFAULT_POLICY) -> PropagationReport:
    """Check that a nonnegative margin at ``k0`` stays nonnegative across ``k_range``.

    ``k_range`` above ``k0`` selects the strong-subadditive branch (``k0 >= -1``),
    below ``k0`` the superadditive branch (``k0 <= 0``).
    """
    ks = tuple(k_range)
    if all(k >= k0 for k in ks):
        branch = "strong_subadditive"
        if k0 < -1:
            raise ValueError("strong-subadditive propagation needs k0 >= -1")
        ok, witness = check_strong_subadditive(structure, pairs_of_triples(structure, triples), policy)
    elif all(k <= k0 for k in ks):
        branch = "superadditive"
        if k0 > 0:
            raise ValueError("superadditive propagation needs k0 <= 0")
        ok, witness = check_superadditive(structure, pairs_of_triples(structure, triples), policy)
    else:
        raise ValueError("k_range must lie entirely on one side of k0")
    if not ok:
        raise PreconditionError(f"{structure.name} is not {branch.replace('_', ' ')}", witness=witness)
    report = PropagationReport(structure.name, branch, k0, ks)
    for idx, (x, y, z) in enumerate(triples):
        report.checked += 1
        if not cmp_ge(hlawka_power_margin(structure, x, y, z, k0, policy), 0, policy).ok:
            continue
        report.premise_held += 1
        for k in ks:
            m = hlawka_power_margin(structure, x, y, z, k, policy)
            if cmp_ge(m, 0, policy) is Verdict.FAILS:
                report.events.append((idx, k, m))
    return report


SYMMDIFF_STATED = 3
SYMMDIFF_EXACT = 4


def measure_identity_residuals(weights, A: int, B: int, C: int, table=None,
                               symmdiff_coefficient=SYMMDIFF_STATED):
    """Residuals of the union and symmetric-difference inclusion-exclusion identities.

    The symmetric-difference sum is compared with
    ``symmdiff_coefficient * mu(A & B & C)``. The default 3 is the stated
    identity. A point of ``A & B & C`` lies in all three sets and in
    ``A ^ B ^ C`` but in no pairwise difference, so it contributes 4; only
    ``SYMMDIFF_EXACT`` makes this residual vanish identically.

    ``table`` is an optional precomputed ``measure_table(weights)``.
    """
    mu = table.__getitem__ if table is not None else (lambda s: measure(weights, s))
    base = mu(A) + mu(B) + mu(C)
    triple = mu(A & B & C)
    union = base - mu(A | B) - mu(B | C) - mu(C | A) + mu(A | B | C)
    symm = base - mu(A ^ B) - mu(B ^ C) - mu(C ^ A) + mu(A ^ B ^ C)
    return rational(union - triple), rational(symm - symmdiff_coefficient * triple)


def exhaustive_power_margins(structure: MeasurableSets, k: int):
    """Yield ``((A, B, C), margin)`` for every triple of subsets of the ground set."""
    if structure.ground_size > 10:
        raise ValueError("exhaustive enumeration is limited to ground sets of size <= 10")
    n = 1 << structure.ground_size
    powered = [pow_half_k(structure.F(s), k) for s in range(n)]
    c = structure.combine
    for A in range(n):
        pa = powered[A]
        for B in range(n):
            pab = pa + powered[B]
            ab = c(A, B)
            for C in range(n):
                m = (pab + powered[C] + powered[c(ab, C)]
                     - powered[ab] - powered[c(B, C)] - powered[c(C, A)])
                yield (A, B, C), rational(m)


def diamond(a: Sequence[Scalar], b: Sequence[Scalar], k) -> tuple:
    """Pointwise ``(a^(2^k) + b^(2^k))^(1/2^k)``; ``k=0`` is addition, ``k=inf`` is ``max(|a|, |b|)``."""
    if len(a) != len(b):
        raise StructuralError("diamond of vectors with different lengths")
    if k == math.inf:
        return tuple(max(abs(u), abs(v)) for u, v in zip(a, b))
    if k == 0:
        return tuple(rational(u + v) for u, v in zip(a, b))
    if k < 0 or k != int(k):
        raise ValueError(f"k must be a nonnegative integer or inf, got {k}")
    k = int(k)
    if any(u < 0 for u in a) or any(v < 0 for v in b):
        raise ValueError("diamond with k >= 1 needs nonnegative entries")
    e = 2 ** k
    return tuple(pow_half_k(rational(u ** e + v ** e), k) for u, v in zip(a, b))


def diamond_hlawka_margin(p, k, a, b, c) -> Scalar:
    """``|a|+|b|+|c|+|a<>b<>c| - |a<>b| - |b<>c| - |c<>a|`` in the ``p``-norm."""
    n = lambda v: lp_norm(v, p)  # noqa: E731
    rhs = n(a) + n(b) + n(c) + n(diamond(diamond(a, b, k), c, k))
    lhs = n(diamond(a, b, k)) + n(diamond(b, c, k)) + n(diamond(c, a, k))
    return rational(rhs - lhs)


def lp_sum_power(alpha, beta, t: float) -> float:
    """``(alpha^t + beta^t)^(1/t)``, nonincreasing in ``t`` for positive arguments."""
    return (alpha ** t + beta ** t) ** (1.0 / t)


@dataclass
class ResselReport:
    checked: int = 0
    premise_held: int = 0
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def ressel_check(norm: Callable, S: ConcaveMap, triples: Sequence,
                 policy: TolerancePolicy = DEFAULT_POLICY) -> ResselReport:
    """Whenever the ``S^2`` Hlawka inequality holds on a triple, the ``S`` one must too.

    ``norm`` must be symmetric and subadditive on the sampled elements.
    """
    if not S.spot_check():
        raise PreconditionError("S fails the concavity spot check", witness=S)
    group = NormedGroup(norm, S)
    for x, y, z in triples:
        for u, v in ((x, y), (y, z), (z, x), (group.combine(x, y), z)):
            if norm(group.neg(u)) != norm(u):
                raise PreconditionError("norm is not symmetric", witness=u)
            if cmp_ge(norm(u) + norm(v), norm(group.combine(u, v)), policy) is Verdict.FAILS:
                raise PreconditionError("norm is not subadditive", witness=(u, v))
    report = ResselReport()
    for idx, (x, y, z) in enumerate(triples):
        report.checked += 1
        if not cmp_ge(hlawka_power_margin(group, x, y, z, -1, policy), 0, policy).ok:
            continue
        report.premise_held += 1
        m = hlawka_power_margin(group, x, y, z, 0, policy)
        if cmp_ge(m, 0, policy) is Verdict.FAILS:
            report.violations.append((idx, m))
    return report
