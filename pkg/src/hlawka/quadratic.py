"""Quadratic forms, Sylvester signatures and the Minkowski future cone.

Lengths are ``l(x) = sqrt(q(x))``.  Forward Hlawka margins are
``l(x)+l(y)+l(z)+l(x+y+z) - l(x+y) - l(y+z) - l(z+x)``; the reverse margin is
its negation.  Exact inputs are evaluated fraction-free (integer numerators
over a common denominator) so identities come out with zero residual.
"""

from __future__ import annotations

import enum
import functools
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .numerics import (
    DEFAULT_POLICY,
    HlawkaError,
    PreconditionError,
    Scalar,
    StructuralError,
    TolerancePolicy,
    Verdict,
    all_exact,
    cmp_ge,
    rational,
    sqrt_scalar,
)
from .relation import HlawkaInstance, WeightedFunctional


class UnsupportedForm(HlawkaError, ValueError):
    """Operation needs the canonical Minkowski or a positive definite form."""


class DegenerateTriple(HlawkaError, ValueError):
    """``a = 0``: every length vanishes and the inequality is a trivial equality."""


class Direction(enum.Enum):
    FORWARD = "forward"
    REVERSE = "reverse"


def _lcm_den(values) -> int:
    d = 1
    for v in values:
        if isinstance(v, Fraction):
            d = math.lcm(d, v.denominator)
    return d


def vadd(*vs):
    return tuple(rational(sum(c)) for c in zip(*vs))


def vscale(alpha, v):
    return tuple(rational(alpha * c) for c in v)


def _coords(v):
    return getattr(v, "coords", v)


def signature_of(Q) -> tuple:
    """Return ``(n_pos, n_neg, n_zero)`` by exact symmetric Gaussian congruence."""
    n = len(Q)
    if any(len(row) != n for row in Q):
        raise StructuralError("matrix is not square")
    A = [[Fraction(v) for v in row] for row in Q]
    for i in range(n):
        for j in range(i + 1, n):
            if A[i][j] != A[j][i]:
                raise StructuralError(f"matrix not symmetric at ({i},{j})")
    pos = neg = 0
    size = n
    while size:
        p = next((i for i in range(size) if A[i][i] != 0), None)
        if p is None:
            pair = next(((i, j) for i in range(size) for j in range(i + 1, size) if A[i][j] != 0), None)
            if pair is None:
                break
            i, j = pair
            # congruence by e_i <- e_i + e_j: new A[i][i] = 2 A[i][j] != 0
            for c in range(size):
                A[i][c] += A[j][c]
            for r in range(size):
                A[r][i] += A[r][j]
            p = i
        # move the pivot to the end and take the Schur complement
        last = size - 1
        A[p], A[last] = A[last], A[p]
        for row in A:
            row[p], row[last] = row[last], row[p]
        piv = A[last][last]
        if piv > 0:
            pos += 1
        else:
            neg += 1
        for r in range(last):
            f = A[r][last]
            if f:
                f /= piv
                for c in range(last):
                    A[r][c] -= f * A[last][c]
        size = last
    return pos, neg, n - pos - neg


class QuadraticForm:
    """``q(x) = x^T Q x`` for a symmetric rational matrix ``Q``."""

    def __init__(self, matrix):
        rows = [tuple(v if type(v) is int else rational(Fraction(v)) for v in row) for row in matrix]
        self.matrix = tuple(rows)
        self.dim = len(rows)
        if self.dim == 0:
            raise StructuralError("empty matrix")
        n = self.dim
        if any(len(row) != n for row in rows):
            raise StructuralError("matrix is not square")
        for i in range(n):
            for j in range(i + 1, n):
                if rows[i][j] != rows[j][i]:
                    raise StructuralError(f"matrix not symmetric at ({i},{j})")
        self._signature = None
        self.diag = None
        if all(self.matrix[i][j] == 0 for i in range(n) for j in range(n) if i != j):
            self.diag = tuple(self.matrix[i][i] for i in range(n))
        self._den = _lcm_den(v for row in self.matrix for v in row)
        den = self._den
        self._imat = tuple(tuple(v * den if type(v) is int else v.numerator * (den // v.denominator)
                                 for v in row) for row in self.matrix)
        self._fmat = tuple(tuple(float(v) for v in row) for row in self.matrix)
        self._fdiag = None if self.diag is None else tuple(float(d) for d in self.diag)
        self._minkowski = (self.diag is not None and self.diag[0] == 1
                           and all(d == -1 for d in self.diag[1:]))

    @property
    def signature(self) -> tuple:
        if self._signature is None:
            if self.diag is not None:
                pos = sum(1 for d in self.diag if d > 0)
                neg = sum(1 for d in self.diag if d < 0)
                self._signature = (pos, neg, self.dim - pos - neg)
            else:
                self._signature = signature_of(self.matrix)
        return self._signature

    def _q_int(self, X) -> int:
        M, n = self._imat, self.dim
        if self.diag is not None:
            return sum(M[i][i] * X[i] * X[i] for i in range(n))
        return sum(M[i][j] * X[i] * X[j] for i in range(n) for j in range(n))

    @classmethod
    def diagonal(cls, entries):
        n = len(entries)
        return cls([[entries[i] if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def minkowski(cls, n: int):
        return _canonical("minkowski", n) if cls is QuadraticForm else cls.diagonal([1] + [-1] * (n - 1))

    @classmethod
    def euclidean(cls, n: int):
        return _canonical("euclidean", n) if cls is QuadraticForm else cls.diagonal([1] * n)

    @property
    def is_minkowski(self) -> bool:
        return self._minkowski

    @property
    def positive_definite(self) -> bool:
        return self.signature == (self.dim, 0, 0)

    def __repr__(self):
        return f"QuadraticForm(dim={self.dim}, signature={self.signature})"

    def _check(self, x):
        if len(x) != self.dim:
            raise StructuralError(f"vector of length {len(x)} for form of dimension {self.dim}")

    def bilinear(self, x, y) -> Scalar:
        x, y = _coords(x), _coords(y)
        n = self.dim
        if len(x) != n or len(y) != n:
            self._check(x)
            self._check(y)
        if all_exact(*x, *y):
            dx, dy = _lcm_den(x), _lcm_den(y)
            X = [int(v * dx) for v in x]
            Y = [int(v * dy) for v in y]
            if self.diag is not None:
                s = sum(self._imat[i][i] * X[i] * Y[i] for i in range(n))
            else:
                s = sum(self._imat[i][j] * X[i] * Y[j] for i in range(n) for j in range(n))
            return rational(Fraction(s, dx * dy * self._den))
        if self._fdiag is not None:
            return math.fsum(d * a * b for d, a, b in zip(self._fdiag, x, y))
        M = self._fmat
        return math.fsum(M[i][j] * x[i] * y[j] for i in range(n) for j in range(n))

    def q(self, x) -> Scalar:
        return self.bilinear(x, x)

    def length(self, x, policy: TolerancePolicy = DEFAULT_POLICY) -> Scalar:
        return sqrt_scalar(self.q(x), policy)


@functools.lru_cache(maxsize=64)
def _canonical(kind: str, n: int) -> QuadraticForm:
    # forms are never mutated after construction, so sharing instances is safe
    if n < 1:
        raise StructuralError("dimension must be positive")
    head = 1 if kind == "euclidean" else -1
    return QuadraticForm.diagonal([1] + [head] * (n - 1))


@dataclass(frozen=True)
class ConeVector:
    coords: tuple
    q_value: Scalar

    def __len__(self):
        return len(self.coords)

    def __iter__(self):
        return iter(self.coords)

    def __getitem__(self, i):
        return self.coords[i]


def four_point_residual(form: QuadraticForm, x, y, z) -> Scalar:
    x, y, z = _coords(x), _coords(y), _coords(z)
    for v in (x, y, z):
        form._check(v)
    if all_exact(*x, *y, *z):
        # one common denominator keeps every evaluation in integers
        d = _lcm_den((*x, *y, *z))
        X, Y, Z = ([int(c * d) for c in v] for v in (x, y, z))
        qi = form._q_int
        add = lambda *vs: [sum(c) for c in zip(*vs)]  # noqa: E731
        r = (qi(add(X, Y, Z)) + qi(X) + qi(Y) + qi(Z)
             - qi(add(X, Y)) - qi(add(X, Z)) - qi(add(Y, Z)))
        return rational(Fraction(r, d * d * form._den))
    q = form.q
    lhs = q(vadd(x, y, z)) + q(x) + q(y) + q(z)
    rhs = q(vadd(x, y)) + q(vadd(x, z)) + q(vadd(y, z))
    return rational(lhs - rhs)


def _require_minkowski(form):
    if not form.is_minkowski:
        raise UnsupportedForm(
            "future-cone operations need the canonical form diag(1,-1,...,-1); "
            "transform coordinates first"
        )


def future_cone_contains(form: QuadraticForm, x, closed: bool = False,
                         policy: TolerancePolicy = DEFAULT_POLICY) -> bool:
    _require_minkowski(form)
    if isinstance(x, ConeVector):
        x, qx = x.coords, x.q_value
    else:
        qx = form.q(x)
    if closed:
        return cmp_ge(qx, 0, policy).ok and cmp_ge(x[0], 0, policy).ok
    # strict: both quantities must be positive beyond the tolerance band
    return cmp_ge(0, qx, policy) is Verdict.FAILS and cmp_ge(0, x[0], policy) is Verdict.FAILS


def _require_closed_cone(form, policy, **vectors):
    _require_minkowski(form)
    for name, v in vectors.items():
        if not future_cone_contains(form, v, closed=True, policy=policy):
            raise PreconditionError(f"{name} is not in the closed future cone", witness=name)


def azteca_margin(form: QuadraticForm, x, y, policy: TolerancePolicy = DEFAULT_POLICY) -> Scalar:
    """``(x^T Q y)^2 - q(x) q(y)``, nonnegative on the closed future cone."""
    _require_closed_cone(form, policy, x=x, y=y)
    b = form.bilinear(x, y)
    return rational(b * b - form.q(x) * form.q(y))


def reverse_triangle_margin(form: QuadraticForm, x, y, policy: TolerancePolicy = DEFAULT_POLICY) -> Scalar:
    """``l(x+y) - l(x) - l(y)``."""
    _require_closed_cone(form, policy, x=x, y=y)
    x, y = _coords(x), _coords(y)
    ln = lambda v: form.length(v, policy)  # noqa: E731
    return rational(ln(vadd(x, y)) - ln(x) - ln(y))


def _triple_lengths(form, x, y, z, policy):
    ln = lambda v: form.length(v, policy)  # noqa: E731
    singles = (ln(x), ln(y), ln(z))
    pairs = (ln(vadd(y, z)), ln(vadd(z, x)), ln(vadd(x, y)))
    return singles, pairs, ln(vadd(x, y, z))


def hlawka_margin(form: QuadraticForm, x, y, z, direction=Direction.FORWARD,
                  policy: TolerancePolicy = DEFAULT_POLICY) -> Scalar:
    direction = Direction(direction)
    x, y, z = _coords(x), _coords(y), _coords(z)
    if direction is Direction.REVERSE:
        if form.signature != (1, form.dim - 1, 0):
            raise UnsupportedForm(f"reverse Hlawka needs signature (1, n-1), got {form.signature}")
        _require_closed_cone(form, policy, x=x, y=y, z=z)
    elif not form.positive_definite:
        raise UnsupportedForm(f"forward Hlawka needs signature (n, 0), got {form.signature}")
    singles, pairs, whole = _triple_lengths(form, x, y, z, policy)
    m = rational(sum(singles) + whole - sum(pairs))
    return m if direction is Direction.FORWARD else -m


def raw_forward_margin(form: QuadraticForm, x, y, z, policy: TolerancePolicy = DEFAULT_POLICY) -> Scalar:
    """Forward Hlawka expression without any signature or cone precondition."""
    singles, pairs, whole = _triple_lengths(form, _coords(x), _coords(y), _coords(z), policy)
    return rational(sum(singles) + whole - sum(pairs))


def instance_from_triple(form: QuadraticForm, x, y, z,
                         policy: TolerancePolicy = DEFAULT_POLICY) -> HlawkaInstance:
    """Relation instance with ``eta = (x, y, z)``, ``xi = (y+z, z+x, x+y)``, ``f = l``.

    Its two-form vanishes by the four-point identity and its one-form equals
    the forward Hlawka margin.
    """
    x, y, z = _coords(x), _coords(y), _coords(z)
    singles, pairs, whole = _triple_lengths(form, x, y, z, policy)
    a = rational(sum(singles))
    if a == 0 or (not all_exact(a) and a <= policy.abs_tol):
        raise DegenerateTriple("l(x) + l(y) + l(z) = 0; the Hlawka inequality holds with equality")
    return HlawkaInstance(WeightedFunctional.counting(3), singles, pairs, a, whole)


@dataclass(frozen=True)
class MixedCounterexample:
    form: QuadraticForm
    generators: tuple
    triple_a: tuple
    triple_b: tuple
    q_values: tuple

    def forward_margin_a(self, policy: TolerancePolicy = DEFAULT_POLICY) -> Scalar:
        """Forward Hlawka margin on ``(v1, v2, v3)``; negative means Hlawka fails."""
        return raw_forward_margin(self.form, *self.triple_a, policy=policy)

    def reverse_margin_b(self, policy: TolerancePolicy = DEFAULT_POLICY) -> Scalar:
        """Reverse Hlawka margin on ``(v3, v4, v5)``; negative means the reverse inequality fails."""
        return -raw_forward_margin(self.form, *self.triple_b, policy=policy)


def build_mixed_counterexample(n: int, k: int, epsilon=Fraction(1, 100)) -> MixedCounterexample:
    """Generators on which both Hlawka and reverse Hlawka fail for signature ``(k, n-k)``."""
    if not (2 <= k <= n - 1):
        raise ValueError(f"need 2 <= k <= n-1, got n={n}, k={k}")
    epsilon = rational(Fraction(epsilon) if not isinstance(epsilon, float) else epsilon)
    if not (0 < epsilon < 1):
        raise ValueError(f"need 0 < epsilon < 1, got {epsilon}")
    form = QuadraticForm.diagonal([1] * k + [-1] * (n - k))
    e = epsilon
    v1 = (1, 1) + (e,) * (k - 2) + (1,) + (e,) * (n - k - 1)
    v3 = (1, 1) + (e,) * (n - 2)
    v4 = (2, 1) + (e,) * (n - 2)
    v5 = (1, 2) + (e,) * (n - 2)
    gens = (v1, v1, v3, v4, v5)
    q_values = tuple(form.q(v) for v in gens)
    return MixedCounterexample(form, gens, (v1, v1, v3), (v3, v4, v5), q_values)


def sampled_span_containment(form: QuadraticForm, generators: Sequence, count: int, seed: int):
    """Check ``q > 0`` on ``count`` random positive combinations of ``generators``.

    Returns ``(ok, witness)`` with the offending coefficients on failure.
    """
    rng = random.Random(seed)
    for _ in range(count):
        t = [Fraction(rng.randint(1, 1000), rng.randint(1, 1000)) for _ in generators]
        v = vadd(*(vscale(ti, g) for ti, g in zip(t, generators)))
        if form.q(v) <= 0:
            return False, tuple(t)
    return True, None


def sample_future_cone(n: int, count: int, seed: int) -> list:
    """Deterministic strict future-cone samples: ``x1 = |s| (1 + u) + u``."""
    if n < 2 or count < 1:
        raise ValueError("need n >= 2 and count >= 1")
    rng = random.Random(seed)
    form = QuadraticForm.minkowski(n)
    out = []
    for _ in range(count):
        s = [rng.uniform(-1.0, 1.0) for _ in range(n - 1)]
        u = 1.0 - rng.random()
        x = (math.hypot(*s) * (1 + u) + u, *s)
        out.append(ConeVector(x, form.q(x)))
    return out
