"""Integral and operator forms of Hlawka's inequality over discrete measures.

Functions on a finite Omega take values in R^d with the Euclidean norm.  The
integral of a vector function is ``sum_i mu_i f(i)`` and ``T(v) = sum_i mu_i v_i``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .numerics import (
    DEFAULT_POLICY,
    PreconditionError,
    Scalar,
    StructuralError,
    TolerancePolicy,
    Verdict,
    all_exact,
    cmp_ge,
    is_zero,
    rational,
    sqrt_scalar,
)
from .relation import HlawkaInstance, WeightedFunctional


@dataclass(frozen=True)
class DiscreteMeasure:
    weights: tuple

    def __post_init__(self):
        object.__setattr__(self, "weights", tuple(self.weights))
        if not self.weights:
            raise StructuralError("measure needs at least one atom")
        if any(w < 0 for w in self.weights):
            raise ValueError("measure weights must be nonnegative")
        object.__setattr__(self, "total", rational(sum(self.weights)))

    @classmethod
    def counting(cls, n: int) -> "DiscreteMeasure":
        return cls((1,) * n)

    @property
    def uniform(self) -> bool:
        return len(set(self.weights)) == 1

    def __len__(self):
        return len(self.weights)

    def integrate(self, values) -> Scalar:
        """``T(v)``: integral of a real function given by its values."""
        if len(values) != len(self.weights):
            raise StructuralError(f"{len(values)} values for a measure on {len(self.weights)} atoms")
        return rational(sum(w * v for w, v in zip(self.weights, values)))


def _den(values) -> int:
    d = 1
    for v in values:
        if isinstance(v, Fraction):
            d = math.lcm(d, v.denominator)
    return d


def dot(u, v) -> Scalar:
    return rational(sum(a * b for a, b in zip(u, v)))


def norm(v, policy: TolerancePolicy = DEFAULT_POLICY) -> Scalar:
    return sqrt_scalar(dot(v, v), policy)


def _sub(u, v):
    return tuple(rational(a - b) for a, b in zip(u, v))


def _scale(alpha, v):
    return tuple(rational(alpha * a) for a in v)


def check_vector_function(vf) -> int:
    """Return the common dimension ``d`` of a vector function's values."""
    if not vf:
        raise StructuralError("vector function has no values")
    d = len(vf[0])
    if d < 1 or any(len(v) != d for v in vf):
        raise StructuralError("vector function values must share a dimension d >= 1")
    return d


def aggregate(measure: DiscreteMeasure, vf) -> tuple:
    """Discrete Bochner integral ``sum_i mu_i vf(i)``."""
    d = check_vector_function(vf)
    if len(vf) != len(measure):
        raise StructuralError(f"{len(vf)} values for a measure on {len(measure)} atoms")
    return tuple(
        rational(sum(w * v[j] for w, v in zip(measure.weights, vf))) for j in range(d)
    )


_KINDS = ("identity", "sqrt", "power", "capped")


@dataclass(frozen=True)
class ConcaveMap:
    """Concave ``S: [0, inf) -> [0, inf)`` from a closed set of built-ins.

    ``power`` takes an exponent in (0, 1]; ``capped`` is ``min(u, cap)``.
    """

    kind: str = "identity"
    param: Scalar = None

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValueError(f"unknown concave map kind {self.kind!r}; expected one of {_KINDS}")
        if self.kind == "power" and not (self.param is not None and 0 < self.param <= 1):
            raise ValueError("power map needs an exponent in (0, 1]")
        if self.kind == "capped" and not (self.param is not None and self.param > 0):
            raise ValueError("capped map needs cap > 0")

    def __call__(self, u: Scalar, policy: TolerancePolicy = DEFAULT_POLICY) -> Scalar:
        if u < 0:
            raise ValueError(f"concave map evaluated at negative {u}")
        if self.kind == "identity":
            return u
        if self.kind == "sqrt":
            return sqrt_scalar(u, policy)
        if self.kind == "power":
            if self.param == 1:
                return u
            if isinstance(self.param, Fraction) and self.param == Fraction(1, 2):
                return sqrt_scalar(u, policy)
            return float(u) ** float(self.param)
        return min(u, self.param)

    def spot_check(self, grid=None) -> bool:
        """``S(0) >= 0`` and midpoint concavity on a grid."""
        grid = grid or [i / 4 for i in range(41)]
        if self(0) < 0:
            return False
        for u in grid:
            for v in grid:
                mid = self((u + v) / 2)
                if mid < (self(u) + self(v)) / 2 - 1e-12:
                    return False
        return True

    def to_json(self):
        out = {"kind": self.kind}
        if self.param is not None:
            out["param"] = float(self.param) if isinstance(self.param, float) else str(self.param)
        return out

    @classmethod
    def from_json(cls, obj) -> "ConcaveMap":
        from .numerics import parse_scalar

        param = obj.get("param")
        return cls(obj["kind"], None if param is None else parse_scalar(param))


ALL_CONCAVE_MAPS = (
    ConcaveMap("identity"),
    ConcaveMap("sqrt"),
    ConcaveMap("power", Fraction(3, 4)),
    ConcaveMap("capped", 2),
)


def _S_norm(S, v, policy):
    return S(norm(v, policy), policy)


@dataclass(frozen=True)
class GroupmainInstance:
    measure: DiscreteMeasure
    g_hat: tuple
    cal_t_g: tuple
    S: ConcaveMap
    A: Scalar

    def __post_init__(self):
        object.__setattr__(self, "g_hat", tuple(tuple(v) for v in self.g_hat))
        object.__setattr__(self, "cal_t_g", tuple(self.cal_t_g))
        d = check_vector_function(self.g_hat)
        if len(self.g_hat) != len(self.measure):
            raise StructuralError("g_hat and measure have different index sets")
        if len(self.cal_t_g) != d:
            raise StructuralError("aggregate has the wrong dimension")
        if self.A == 0:
            raise ValueError("A must be nonzero")
        if not (self.A > 0 or _S_norm(self.S, self.cal_t_g, DEFAULT_POLICY) > 0):
            raise ValueError("need A > 0 or S(|Tg|) > 0")

    def images(self, policy: TolerancePolicy = DEFAULT_POLICY):
        """``(S|g_hat|, S|Tg - g_hat|, S|Tg|)`` pointwise."""
        S, tg = self.S, self.cal_t_g
        s_hat = tuple(_S_norm(S, g, policy) for g in self.g_hat)
        s_rest = tuple(_S_norm(S, _sub(tg, g), policy) for g in self.g_hat)
        return s_hat, s_rest, _S_norm(S, tg, policy)

    def as_hlawka_instance(self, policy: TolerancePolicy = DEFAULT_POLICY) -> HlawkaInstance:
        """The relation instance with ``eta = g_hat``, ``xi = Tg - g_hat``, ``f = S|.|``, ``a = A``, ``b = S|Tg|``."""
        s_hat, s_rest, s_t = self.images(policy)
        return HlawkaInstance(WeightedFunctional(self.measure.weights), s_hat, s_rest, self.A, s_t)


def groupmain_premises(instance: GroupmainInstance, policy: TolerancePolicy = DEFAULT_POLICY):
    """Return ``(ok, witness)``; the control on ``A`` is required wherever
    ``S|g_hat| + S|Tg| != S|g_hat - Tg|``."""
    s_hat, s_rest, s_t = instance.images(policy)
    for i, (w, sh, sr) in enumerate(zip(instance.measure.weights, s_hat, s_rest)):
        if w == 0:
            continue
        if is_zero(rational(sh + s_t - sr), policy, max(sh, s_t, sr)):
            continue
        if cmp_ge(instance.A, sh + sr, policy) is Verdict.FAILS:
            return False, i
    return True, None


def groupmain_margins(instance: GroupmainInstance, policy: TolerancePolicy = DEFAULT_POLICY):
    """Return ``(two_form_margin, one_form_margin, C)``."""
    ok, witness = groupmain_premises(instance, policy)
    if not ok:
        raise PreconditionError(f"control on A fails at atom {witness}", witness=witness)
    m = instance.measure
    s_hat, s_rest, s_t = instance.images(policy)
    t_hat = m.integrate(s_hat)
    A = instance.A
    C = rational(Fraction(2 * t_hat) / A) if all_exact(t_hat, A) else 2 * t_hat / A
    two = (m.total - C) * s_t * s_t + m.integrate([v * v for v in s_hat]) - m.integrate([v * v for v in s_rest])
    one = (m.total - C) * s_t + t_hat - m.integrate(s_rest)
    return rational(two), rational(one), C


def inner_identity_residual(measure: DiscreteMeasure, f) -> Scalar:
    """``T(|f - Tf|^2) - [T(|f|^2) + |Tf|^2 (T(1) - 2)]``."""
    d = check_vector_function(f)
    if len(f) != len(measure):
        raise StructuralError(f"{len(f)} values for a measure on {len(measure)} atoms")
    flat = [c for v in f for c in v]
    if all_exact(*measure.weights, *flat):
        # scaled by dw^3 df^2 so the whole evaluation runs in integers
        dw, df = _den(measure.weights), _den(flat)
        W = [int(w * dw) for w in measure.weights]
        F = [[int(c * df) for c in v] for v in f]
        G = [sum(w * v[j] for w, v in zip(W, F)) for j in range(d)]
        sq = lambda u: sum(c * c for c in u)  # noqa: E731
        lhs = sum(w * sq([dw * c - g for c, g in zip(v, G)]) for w, v in zip(W, F))
        rhs = dw * dw * sum(w * sq(v) for w, v in zip(W, F)) + sq(G) * (sum(W) - 2 * dw)
        return rational(Fraction(lhs - rhs, dw ** 3 * df * df))
    tf = aggregate(measure, f)
    lhs = measure.integrate([dot(u, u) for u in (_sub(v, tf) for v in f)])
    rhs = measure.integrate([dot(v, v) for v in f]) + dot(tf, tf) * (measure.total - 2)
    return rational(lhs - rhs)


def on_ray(u, direction, policy: TolerancePolicy = DEFAULT_POLICY) -> bool:
    """True iff ``u = alpha * direction`` for some ``alpha >= 0``.

    Cauchy-Schwarz equality test ``|u| |v| = <u, v>`` with ``<u, v> >= 0``;
    for ``direction = 0`` only ``u = 0`` qualifies.
    """
    uv = dot(u, direction)
    uu = dot(u, u)
    vv = dot(direction, direction)
    if all_exact(uv, uu, vv):
        if vv == 0:
            return uu == 0
        return uv >= 0 and uv * uv == uu * vv
    nu, nv = math.sqrt(max(float(uu), 0.0)), math.sqrt(max(float(vv), 0.0))
    if nv <= policy.abs_tol:
        return nu <= policy.abs_tol
    if uv < -policy.abs_tol:
        return False
    return nu * nv - uv <= policy.effective(nu * nv)


def _check_pointwise(measure, values, bound, lhs_terms, policy):
    """Raise with the first positive-weight atom (off the ray) where ``bound < lhs``."""
    for i, (w, v) in enumerate(zip(measure.weights, values)):
        if w == 0:
            continue
        skip, need = lhs_terms(v)
        if skip:
            continue
        if cmp_ge(bound, need, policy) is Verdict.FAILS:
            raise PreconditionError(f"pointwise premise fails at atom {i}", witness=i)


def _integral_norm(measure, vf, policy):
    return measure.integrate([norm(v, policy) for v in vf])


def integral_hlawka_margin(measure: DiscreteMeasure, f, g, policy: TolerancePolicy = DEFAULT_POLICY) -> Scalar:
    """``(mu(Omega) - C) |int f| + int |g| - int |g - int f|`` with ``C = 2 int|g| / int|f|``."""
    if len(f) != len(measure) or len(g) != len(measure):
        raise StructuralError("f, g and measure have different index sets")
    F, G = aggregate(measure, f), aggregate(measure, g)
    nf, ng = _integral_norm(measure, f, policy), _integral_norm(measure, g, policy)
    if all(is_zero(c, policy) for c in F) or all(is_zero(c, policy) for c in G):
        raise PreconditionError("integrals of f and g must be nonzero", witness="aggregate")
    for Fi, Gi in zip(F, G):
        if not is_zero(rational(Fi * ng - Gi * nf), policy, max(abs(Fi * ng), abs(Gi * nf))):
            raise PreconditionError("int f / int|f| differs from int g / int|g|", witness="direction")

    def terms(v):
        return on_ray(_scale(-1, v), F, policy), norm(v, policy) + norm(_sub(v, F), policy)

    _check_pointwise(measure, g, nf, terms, policy)
    C = rational(Fraction(2 * ng) / nf) if all_exact(ng, nf) else 2 * ng / nf
    rest = _integral_norm(measure, [_sub(v, F) for v in g], policy)
    return rational((measure.total - C) * norm(F, policy) + ng - rest)


def t_variant_margin(measure: DiscreteMeasure, f, t: Scalar, policy: TolerancePolicy = DEFAULT_POLICY) -> Scalar:
    """``(mu(Omega) - 2t) |int f| + t int|f| - int |t f - int f|``."""
    if t < 0:
        raise ValueError("t must be nonnegative")
    F = aggregate(measure, f)
    nf = _integral_norm(measure, f, policy)

    def terms(v):
        return on_ray(_scale(-1, v), F, policy), t * norm(v, policy) + norm(_sub(_scale(t, v), F), policy)

    _check_pointwise(measure, f, nf, terms, policy)
    rest = _integral_norm(measure, [_sub(_scale(t, v), F) for v in f], policy)
    return rational((measure.total - 2 * t) * norm(F, policy) + t * nf - rest)


def rearrangement_margin(measure: DiscreteMeasure, f, permutation: Sequence[int],
                         policy: TolerancePolicy = DEFAULT_POLICY) -> Scalar:
    """Margin with ``f_bar = f o permutation`` in place of ``f`` where it appears pointwise."""
    perm = list(permutation)
    if sorted(perm) != list(range(len(f))):
        raise ValueError("not a permutation of the index set")
    if perm != sorted(perm) and not measure.uniform:
        raise PreconditionError("nontrivial rearrangement needs uniform weights", witness="weights")
    f_bar = [f[j] for j in perm]
    F = aggregate(measure, f)
    nf = _integral_norm(measure, f, policy)

    def terms(v):
        return on_ray(_scale(-1, v), F, policy), norm(v, policy) + norm(_sub(v, F), policy)

    _check_pointwise(measure, f_bar, nf, terms, policy)
    rest = _integral_norm(measure, [_sub(v, F) for v in f_bar], policy)
    return rational((measure.total - 2) * norm(F, policy) + _integral_norm(measure, f_bar, policy) - rest)


def weighted_variant_margin(mu_list, x_list, lam: Scalar, policy: TolerancePolicy = DEFAULT_POLICY) -> Scalar:
    """``(sum mu - 2 lam) |sum mu x| + lam sum mu |x| - sum mu |lam x - sum mu x|``.

    Premise, required at every index: ``sum mu|x| >= lam mu_i |x_i| + |lam x_i - sum mu x|``.
    """
    if lam < 0 or any(m < 0 for m in mu_list):
        raise ValueError("weights and lambda must be nonnegative")
    if len(mu_list) != len(x_list):
        raise StructuralError("mu_list and x_list differ in length")
    measure = DiscreteMeasure(mu_list)
    s = aggregate(measure, x_list)
    total_norm = _integral_norm(measure, x_list, policy)
    for i, (m, x) in enumerate(zip(mu_list, x_list)):
        need = lam * m * norm(x, policy) + norm(_sub(_scale(lam, x), s), policy)
        if cmp_ge(total_norm, need, policy) is Verdict.FAILS:
            raise PreconditionError(f"weighted premise fails at index {i}", witness=i)
    rest = _integral_norm(measure, [_sub(_scale(lam, x), s) for x in x_list], policy)
    return rational((measure.total - 2 * lam) * norm(s, policy) + lam * total_norm - rest)


def lambda_remark_margin(x, y, z, lam: Scalar, policy: TolerancePolicy = DEFAULT_POLICY) -> Scalar:
    """``(1-lam)(|x|+|y|+|z|) + (1+2lam)|x+y+z| - |lam x+y+z| - |x+lam y+z| - |x+y+lam z|``."""
    n = lambda v: norm(v, policy)  # noqa: E731
    s = tuple(rational(a + b + c) for a, b, c in zip(x, y, z))
    lhs = (1 - lam) * (n(x) + n(y) + n(z)) + (1 + 2 * lam) * n(s)
    rhs = sum(n(tuple(rational(si + (lam - 1) * vi) for si, vi in zip(s, v))) for v in (x, y, z))
    return rational(lhs - rhs)
