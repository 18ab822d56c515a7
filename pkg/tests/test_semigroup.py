import itertools
import math
import random
from fractions import Fraction

import pytest

from hlawka.integral import ConcaveMap
from hlawka.numerics import DomainError, PreconditionError, StructuralError
from hlawka.quadratic import QuadraticForm, hlawka_margin
from hlawka.semigroup import (
    SYMMDIFF_EXACT,
    SYMMDIFF_STATED,
    InvariantViolation,
    LpVectors,
    MeasurableSets,
    NonnegReals,
    check_strong_subadditive,
    check_superadditive,
    diamond,
    diamond_hlawka_margin,
    exhaustive_power_margins,
    hlawka_power_margin,
    lp_norm,
    lp_sum_power,
    measure,
    measure_identity_residuals,
    measure_table,
    pairs_of_triples,
    propagate_check,
    ressel_check,
)

UNION_K1 = 0.48941012044959214712  # 3 + sqrt(3) - 3 sqrt(2), mpmath


def _random_weights(rng, n):
    return [Fraction(rng.randint(0, 60), rng.randint(1, 9)) for _ in range(n)]


def test_lp_norm():
    assert lp_norm((3, -4), 2) == 5
    assert lp_norm((3, -4), 1) == 7
    assert lp_norm((3, -4), math.inf) == 4
    assert lp_norm((1, 1), 3) == pytest.approx(2 ** (1 / 3))


def test_power_margin_l2_matches_quadratic():
    s = LpVectors(2, 2)
    assert hlawka_power_margin(s, (1, 0), (0, 1), (-1, -1), 0) == pytest.approx(0, abs=1e-15)
    q = hlawka_margin(QuadraticForm.euclidean(2), (1, 0), (0, 1), (1, 1))
    assert hlawka_power_margin(s, (1, 0), (0, 1), (1, 1), 0) == pytest.approx(q, abs=1e-14)


def test_power_margin_union_counting():
    s = MeasurableSets([1, 1, 1], "union")
    assert hlawka_power_margin(s, 0b001, 0b010, 0b100, 0) == 0
    assert hlawka_power_margin(s, 0b001, 0b001, 0b001, 0) == 1
    assert hlawka_power_margin(s, 0b001, 0b010, 0b100, 1) == pytest.approx(UNION_K1, abs=1e-14)
    assert hlawka_power_margin(s, 0, 0, 0, 3) == 0


def test_measurable_sets_validation():
    with pytest.raises(ValueError):
        MeasurableSets([1, -1])
    with pytest.raises(ValueError):
        MeasurableSets([1], "intersection")
    with pytest.raises(StructuralError):
        MeasurableSets([1, 1]).F(0b100)


def test_invariant_violation():
    class Bad:
        name = "bad"

        def combine(self, x, y):
            return x + y

        def F(self, x):
            return x

    with pytest.raises(InvariantViolation):
        hlawka_power_margin(Bad(), 1, -3, 1, 0)


def test_measure_table_matches_direct():
    rng = random.Random(3)
    w = _random_weights(rng, 7)
    table = measure_table(w)
    assert all(table[b] == measure(w, b) for b in range(1 << 7))


def test_strong_subadditive_examples():
    rng = random.Random(0)
    ms = MeasurableSets(_random_weights(rng, 4), "union")
    pairs = [(a, b) for a in range(16) for b in range(16)]
    assert check_strong_subadditive(ms, pairs) == (True, None)
    assert check_strong_subadditive(MeasurableSets([1, 2, 3], "symmdiff"), [(a, b) for a in range(8) for b in range(8)])[0]
    lp = LpVectors(3, Fraction(3, 2))
    vecs = [tuple(rng.uniform(-1, 1) for _ in range(3)) for _ in range(40)]
    assert check_strong_subadditive(lp, list(zip(vecs, vecs[1:])))[0]
    ok, witness = check_strong_subadditive(NonnegReals(2), [(1, 1)])
    assert not ok and witness == (1, 1)


def test_superadditive_examples():
    assert check_superadditive(NonnegReals(2), [(1, 2), (Fraction(1, 3), 5)]) == (True, None)
    assert check_superadditive(NonnegReals(1), [(1, 2), (3, 4)]) == (True, None)
    ok, witness = check_superadditive(MeasurableSets([1, 1], "union"), [(0b01, 0b01)])
    assert not ok and witness == (0b01, 0b01)


def test_propagation_union_upwards():
    rng = random.Random(5)
    ms = MeasurableSets(_random_weights(rng, 5), "union")
    triples = [tuple(rng.randrange(32) for _ in range(3)) for _ in range(300)]
    rep = propagate_check(ms, triples, 0, range(0, 5))
    assert rep.branch == "strong_subadditive" and rep.ok and rep.premise_held == 300


def test_propagation_squares_downwards():
    rng = random.Random(6)
    triples = [tuple(Fraction(rng.randint(0, 50), rng.randint(1, 7)) for _ in range(3)) for _ in range(300)]
    rep = propagate_check(NonnegReals(2), triples, 0, range(-3, 1))
    assert rep.branch == "superadditive" and rep.ok and rep.premise_held == 300


def test_propagation_lp_upwards():
    rng = random.Random(7)
    for p in (1, Fraction(3, 2), 2):
        triples = [tuple(tuple(rng.uniform(-1, 1) for _ in range(3)) for _ in range(3)) for _ in range(200)]
        assert propagate_check(LpVectors(3, p), triples, 0, range(0, 5)).ok


def test_propagation_guards():
    with pytest.raises(PreconditionError):
        propagate_check(NonnegReals(2), [(1, 1, 1)], 0, range(0, 3))
    with pytest.raises(ValueError):
        propagate_check(NonnegReals(1), [(1, 1, 1)], -2, range(-2, 2))
    with pytest.raises(ValueError):
        propagate_check(NonnegReals(2), [(1, 1, 1)], 1, range(-1, 1))


def test_pairs_of_triples():
    s = NonnegReals(1)
    assert len(pairs_of_triples(s, [(1, 2, 3)])) == 8
    assert (3, 3) in pairs_of_triples(s, [(1, 2, 3)])


def _elementwise(weights, A, B, C):
    # per-point count of both sums, independent of the library's inclusion-exclusion code
    union = symm = triple = Fraction(0)
    for i, w in enumerate(weights):
        a, b, c = (A >> i) & 1, (B >> i) & 1, (C >> i) & 1
        union += w * (a + b + c - (a | b) - (b | c) - (c | a) + (a | b | c))
        symm += w * (a + b + c - (a ^ b) - (b ^ c) - (c ^ a) + (a ^ b ^ c))
        triple += w * (a & b & c)
    return union, symm, triple


def test_measure_identity_examples():
    assert measure_identity_residuals([1, 1], 0b01, 0b01, 0b01)[0] == 0
    assert measure_identity_residuals([1, 2, 3], 0b001, 0b010, 0b100) == (0, 0)


def test_measure_identity_union_exhaustive():
    rng = random.Random(42)
    w = _random_weights(rng, 5)
    table = measure_table(w)
    for A, B, C in itertools.product(range(32), repeat=3):
        assert measure_identity_residuals(w, A, B, C, table)[0] == 0


def test_symmdiff_coefficient_is_four():
    # a point in all three sets contributes 3 - 0 + 1 = 4 to the symmetric-difference sum
    rng = random.Random(42)
    w = _random_weights(rng, 5)
    table = measure_table(w)
    stated_failures = 0
    for A, B, C in itertools.product(range(32), repeat=3):
        u, s, t = _elementwise(w, A, B, C)
        assert u == t and s == 4 * t
        _, r3 = measure_identity_residuals(w, A, B, C, table)
        _, r4 = measure_identity_residuals(w, A, B, C, table, symmdiff_coefficient=SYMMDIFF_EXACT)
        assert r4 == 0 and r3 == t
        stated_failures += r3 != 0
    assert SYMMDIFF_STATED == 3 and stated_failures > 0


def test_exhaustive_power_margins_nonnegative():
    w = [1, 2, Fraction(1, 2)]
    for op in ("union", "symmdiff"):
        s = MeasurableSets(w, op)
        for k in range(4):
            for _, m in exhaustive_power_margins(s, k):
                assert m >= -1e-9
    with pytest.raises(ValueError):
        next(exhaustive_power_margins(MeasurableSets([1] * 11), 0))


def test_diamond():
    assert diamond((1, 2), (3, 4), 0) == (4, 6)
    assert diamond((3, 0), (4, 5), 1) == (5, 5)
    assert diamond((-3, 1), (2, -7), math.inf) == (3, 7)
    with pytest.raises(ValueError):
        diamond((-1,), (1,), 1)
    with pytest.raises(StructuralError):
        diamond((1,), (1, 2), 0)


def test_diamond_associative_commutative():
    rng = random.Random(9)
    for k in (0, 1, 2, math.inf):
        for _ in range(200):
            a, b, c = (tuple(rng.uniform(0, 3) for _ in range(4)) for _ in range(3))
            assert diamond(a, b, k) == pytest.approx(diamond(b, a, k))
            assert diamond(diamond(a, b, k), c, k) == pytest.approx(diamond(a, diamond(b, c, k), k), rel=1e-12)


def test_diamond_margin_examples():
    a = (1.0, 2.0, 0.5)
    for k, p in ((0, 2), (1, 4), (2, 8)):
        n = lambda v: lp_norm(v, p)  # noqa: E731
        aa = diamond(a, a, k)
        expected = 3 * n(a) + n(diamond(aa, a, k)) - 3 * n(aa)
        assert diamond_hlawka_margin(p, k, a, a, a) == pytest.approx(expected, abs=1e-12)
    q = hlawka_margin(QuadraticForm.euclidean(2), (1, 0), (0, 1), (1, 1))
    assert diamond_hlawka_margin(2, 0, (1, 0), (0, 1), (1, 1)) == pytest.approx(q, abs=1e-14)


def test_diamond_margin_sampled():
    rng = random.Random(10)
    for k in (0, 1, 2):
        for p in (2 ** k, 1.5 * 2 ** k, 2 ** (k + 1)):
            for _ in range(200):
                a, b, c = (tuple(rng.uniform(0, 5) for _ in range(3)) for _ in range(3))
                assert diamond_hlawka_margin(p, k, a, b, c) >= -1e-9
    for _ in range(200):
        a, b, c = (tuple(rng.uniform(0, 5) for _ in range(3)) for _ in range(3))
        assert diamond_hlawka_margin(math.inf, math.inf, a, b, c) >= -1e-9


def test_lp_sum_power_monotone():
    vals = [lp_sum_power(2.0, 3.0, t) for t in (1, 1.5, 2, 4, 8)]
    assert all(x >= y - 1e-12 for x, y in zip(vals, vals[1:]))


def test_ressel_identity_euclidean():
    rng = random.Random(12)
    norm2 = lambda v: lp_norm(v, 2)  # noqa: E731
    triples = [tuple(tuple(rng.uniform(-2, 2) for _ in range(3)) for _ in range(3)) for _ in range(300)]
    rep = ressel_check(norm2, ConcaveMap("identity"), triples)
    assert rep.ok and rep.checked == 300


def test_ressel_sqrt_integers_exhaustive():
    r = range(-5, 6)
    rep = ressel_check(abs, ConcaveMap("sqrt"), list(itertools.product(r, r, r)))
    assert rep.ok and rep.checked == 11 ** 3


def test_ressel_rejects_non_subadditive_norm():
    with pytest.raises(PreconditionError):
        ressel_check(lambda x: x * x, ConcaveMap("identity"), [(1, 1, 1)])


def test_pow_domain_inside_structure():
    with pytest.raises(ValueError):
        NonnegReals(2).F(-1)
    with pytest.raises(DomainError):
        from hlawka.numerics import pow_half_k

        pow_half_k(-1, 2)
