"""Hlawka one-form / two-form relation over a finite index set.

A signature-preserving linear functional on R^Omega (Omega finite) is a
nonnegative weight vector, so ``T(v) = sum(w * v)``.  An instance carries only
the evaluated images ``f(eta(w))`` and ``f(xi(w))``; the underlying carrier is
never materialized.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .numerics import (
    DEFAULT_POLICY,
    HlawkaError,
    Scalar,
    StructuralError,
    TolerancePolicy,
    Verdict,
    cmp_ge,
    is_exact,
    is_zero,
    rational,
)


class InstanceError(HlawkaError, ValueError):
    """Constructor invariant of a HlawkaInstance violated."""


class SumMode(enum.Enum):
    LEQ_A = "LEQ_a"
    GEQ_A = "GEQ_a"
    NEITHER = "Neither"


def _div(x, y):
    if is_exact(x) and is_exact(y):
        return rational(Fraction(x) / y)
    return x / y


@dataclass(frozen=True)
class WeightedFunctional:
    weights: tuple

    def __post_init__(self):
        object.__setattr__(self, "weights", tuple(self.weights))
        if not self.weights:
            raise StructuralError("a functional needs at least one weight")
        for i, w in enumerate(self.weights):
            if w < 0:
                raise InstanceError(f"weight {i} is negative ({w}); functional would not preserve signs")
        object.__setattr__(self, "total", sum(self.weights))

    @classmethod
    def counting(cls, size: int) -> "WeightedFunctional":
        return cls((1,) * size)

    def __len__(self):
        return len(self.weights)


def t_apply(functional: WeightedFunctional, v: Sequence[Scalar]) -> Scalar:
    w = functional.weights
    if len(v) != len(w):
        raise StructuralError(f"vector of length {len(v)} for functional over {len(w)} points")
    return sum(wi * vi for wi, vi in zip(w, v))


@dataclass(frozen=True)
class HlawkaInstance:
    functional: WeightedFunctional
    f_eta: tuple
    f_xi: tuple
    a: Scalar
    b: Scalar

    def __post_init__(self):
        object.__setattr__(self, "f_eta", tuple(self.f_eta))
        object.__setattr__(self, "f_xi", tuple(self.f_xi))
        n = len(self.functional)
        if len(self.f_eta) != n or len(self.f_xi) != n:
            raise StructuralError(
                f"f_eta/f_xi lengths {len(self.f_eta)}/{len(self.f_xi)} do not match |Omega|={n}"
            )
        if self.a == 0:
            raise InstanceError("a must be nonzero")
        if not self.a + self.b > 0:
            raise InstanceError(f"a + b must be positive (a={self.a}, b={self.b})")

    @property
    def exact(self) -> bool:
        return all(
            is_exact(v)
            for v in (*self.functional.weights, *self.f_eta, *self.f_xi, self.a, self.b)
        )


@dataclass(frozen=True)
class Implication:
    premise: str
    conclusion: str
    premise_verdict: Verdict
    conclusion_verdict: Verdict

    @property
    def falsified(self) -> bool:
        return self.conclusion_verdict is Verdict.FAILS


@dataclass(frozen=True)
class RelationReport:
    c: Scalar
    c1: Scalar
    c2: Scalar
    sum_mode: SumMode
    diff_ok: bool
    identity_residual: Scalar
    verdicts: tuple = field(default_factory=tuple)
    note: str = ""

    @property
    def falsification(self) -> bool:
        return any(v.falsified for v in self.verdicts)


def compute_forms(instance: HlawkaInstance):
    """Return ``(c, C1, C2)``."""
    w = instance.functional.weights
    eta, xi, a, b = instance.f_eta, instance.f_xi, instance.a, instance.b
    t1 = instance.functional.total
    t_eta = sum(wi * e for wi, e in zip(w, eta))
    t_xi = sum(wi * x for wi, x in zip(w, xi))
    t_eta2 = sum(wi * e * e for wi, e in zip(w, eta))
    t_xi2 = sum(wi * x * x for wi, x in zip(w, xi))
    c = _div(2 * t_eta, a)
    c1 = (t1 - c) * b + t_eta - t_xi
    c2 = (t1 - c) * b * b + t_eta2 - t_xi2
    return rational(c), rational(c1), rational(c2)


def identity_residual(instance: HlawkaInstance, forms=None) -> Scalar:
    """``T((a - eta - xi)(eta + b - xi)) - [C1 (a + b) - C2]``; zero by the product identity.

    ``forms`` may pass an already computed ``compute_forms(instance)``.
    """
    _, c1, c2 = forms if forms is not None else compute_forms(instance)
    a, b = instance.a, instance.b
    lhs = sum(
        wi * (a - e - x) * (e + b - x)
        for wi, e, x in zip(instance.functional.weights, instance.f_eta, instance.f_xi)
    )
    return rational(lhs - (c1 * (a + b) - c2))


def check_controls(
    instance: HlawkaInstance,
    restrict: bool = False,
    policy: TolerancePolicy = DEFAULT_POLICY,
):
    """Return ``(sum_mode, diff_ok)``.

    With ``restrict`` the controls are only required on the points where
    ``b + f_eta - f_xi`` is nonzero.
    """
    a, b = instance.a, instance.b
    leq = geq = diff_ok = True
    for e, x in zip(instance.f_eta, instance.f_xi):
        gap = b + e - x
        if restrict and is_zero(gap, policy, max(abs(b), abs(e), abs(x))):
            continue
        s = e + x
        if leq and cmp_ge(a, s, policy) is Verdict.FAILS:
            leq = False
        if geq and cmp_ge(s, a, policy) is Verdict.FAILS:
            geq = False
        if diff_ok and cmp_ge(gap, 0, policy) is Verdict.FAILS:
            diff_ok = False
    mode = SumMode.LEQ_A if leq else SumMode.GEQ_A if geq else SumMode.NEITHER
    return mode, diff_ok


def adjudicate(
    instance: HlawkaInstance,
    restrict: bool = False,
    policy: TolerancePolicy = DEFAULT_POLICY,
) -> RelationReport:
    forms = compute_forms(instance)
    c, c1, c2 = forms
    resid = identity_residual(instance, forms)
    mode, diff_ok = check_controls(instance, restrict, policy)
    verdicts = []

    def fire(premise, pv, conclusion, cv):
        if pv.ok:
            verdicts.append(Implication(premise, conclusion, pv, cv))

    if diff_ok and mode is SumMode.LEQ_A:
        fire("C2 >= 0", cmp_ge(c2, 0, policy), "C1 >= 0", cmp_ge(c1, 0, policy))
        fire("C1 <= 0", cmp_ge(0, c1, policy), "C2 <= 0", cmp_ge(0, c2, policy))
        note = ""
    elif diff_ok and mode is SumMode.GEQ_A:
        fire("C1 >= 0", cmp_ge(c1, 0, policy), "C2 >= 0", cmp_ge(c2, 0, policy))
        fire("C2 <= 0", cmp_ge(0, c2, policy), "C1 <= 0", cmp_ge(0, c1, policy))
        note = ""
    else:
        note = "controls unmet"
    return RelationReport(c, c1, c2, mode, diff_ok, resid, tuple(verdicts), note)
