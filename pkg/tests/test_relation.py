import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from hlawka.numerics import StructuralError, Verdict
from hlawka.relation import (
    HlawkaInstance,
    InstanceError,
    SumMode,
    WeightedFunctional,
    adjudicate,
    check_controls,
    compute_forms,
    identity_residual,
    t_apply,
)

ONES = WeightedFunctional((1, 1, 1))


def classical():
    return HlawkaInstance(ONES, (1, 1, 1), (2, 2, 2), 3, 3)


def _oracle_forms(w, eta, xi, a, b):
    # coded independently of the library: plain Fractions, no shared helpers
    w, eta, xi = [Fraction(v) for v in w], [Fraction(v) for v in eta], [Fraction(v) for v in xi]
    a, b = Fraction(a), Fraction(b)
    T = lambda vals: sum(wi * v for wi, v in zip(w, vals))  # noqa: E731
    c = 2 * T(eta) / a
    c1 = (sum(w) - c) * b + T(eta) - T(xi)
    c2 = (sum(w) - c) * b * b + T([e * e for e in eta]) - T([x * x for x in xi])
    return c, c1, c2


def test_t_apply():
    assert t_apply(ONES, (1, 1, 1)) == 3
    assert t_apply(WeightedFunctional((0, 0, 0)), (7, -2, 9)) == 0
    assert t_apply(WeightedFunctional((Fraction(1, 2), Fraction(1, 3), Fraction(1, 6))), (6, 6, 6)) == 6
    with pytest.raises(StructuralError):
        t_apply(ONES, (1, 2))


def test_functional_rejects_negative_weight():
    with pytest.raises(ValueError):
        WeightedFunctional((1, -1))


def test_instance_rejects_degenerate():
    with pytest.raises(InstanceError):
        HlawkaInstance(ONES, (0, 0, 0), (0, 0, 0), 0, 1)
    with pytest.raises(InstanceError):
        HlawkaInstance(ONES, (0, 0, 0), (0, 0, 0), 1, -1)
    with pytest.raises(StructuralError):
        HlawkaInstance(ONES, (0, 0), (0, 0, 0), 1, 1)


def test_forms_classical_row():
    assert compute_forms(classical()) == (2, 0, 0)


def test_forms_zero_functions():
    inst = HlawkaInstance(ONES, (0, 0, 0), (0, 0, 0), 1, 1)
    assert compute_forms(inst) == (0, 3, 3)


def test_forms_match_duplicate_oracle():
    rng = random.Random(11)
    for _ in range(300):
        n = rng.randint(1, 6)
        w = [Fraction(rng.randint(0, 40), rng.randint(1, 9)) for _ in range(n)]
        eta = [Fraction(rng.randint(-50, 50), rng.randint(1, 9)) for _ in range(n)]
        xi = [Fraction(rng.randint(-50, 50), rng.randint(1, 9)) for _ in range(n)]
        a = Fraction(rng.choice([-1, 1]) * rng.randint(1, 50), rng.randint(1, 9))
        b = -a + Fraction(rng.randint(1, 50), 7)
        inst = HlawkaInstance(WeightedFunctional(w), eta, xi, a, b)
        assert compute_forms(inst) == _oracle_forms(w, eta, xi, a, b)


rat = st.fractions(min_value=-20, max_value=20, max_denominator=50)


@settings(max_examples=200)
@given(st.integers(1, 6).flatmap(lambda n: st.tuples(
    st.lists(st.fractions(0, 10, max_denominator=20), min_size=n, max_size=n),
    st.lists(rat, min_size=n, max_size=n),
    st.lists(rat, min_size=n, max_size=n))), rat, st.fractions(1, 30, max_denominator=20))
def test_identity_exact(arrays, a, shift):
    w, eta, xi = arrays
    if a == 0:
        a = Fraction(1, 3)
    inst = HlawkaInstance(WeightedFunctional(w), eta, xi, a, -a + shift)
    assert identity_residual(inst) == 0


def test_identity_zero_vectors():
    assert identity_residual(HlawkaInstance(ONES, (0, 0, 0), (0, 0, 0), 1, 1)) == 0


def test_identity_float_small():
    rng = random.Random(5)
    for _ in range(500):
        n = rng.randint(1, 8)
        inst = HlawkaInstance(
            WeightedFunctional([rng.uniform(0, 10) for _ in range(n)]),
            [rng.uniform(-10, 10) for _ in range(n)],
            [rng.uniform(-10, 10) for _ in range(n)],
            rng.uniform(1, 10),
            rng.uniform(0, 10),
        )
        assert abs(identity_residual(inst)) < 1e-12 * 1e5


def test_controls_examples():
    assert check_controls(classical()) == (SumMode.LEQ_A, True)
    assert check_controls(HlawkaInstance(WeightedFunctional((1,)), (5,), (5,), 1, 1)) == (SumMode.GEQ_A, True)
    two = WeightedFunctional((1, 1))
    assert check_controls(HlawkaInstance(two, (0, 5), (1, 0), 4, 10)) == (SumMode.NEITHER, True)


def test_controls_diff_failure_and_restrict():
    # gap b + eta - xi is -1 at the second point and 0 at the third
    inst = HlawkaInstance(ONES, (0, 0, 0), (0, 2, 1), 5, 1)
    assert check_controls(inst) == (SumMode.LEQ_A, False)
    # with restrict the zero-gap point is skipped, the negative one still fails
    assert check_controls(inst, restrict=True)[1] is False
    inst = HlawkaInstance(ONES, (0, 0, 9), (0, 0, 10), 5, 1)
    assert check_controls(inst) == (SumMode.NEITHER, True)
    # the only offending point has zero gap, so restrict drops it
    assert check_controls(inst, restrict=True) == (SumMode.LEQ_A, True)


def test_adjudicate_classical():
    rep = adjudicate(classical())
    assert rep.sum_mode is SumMode.LEQ_A and rep.diff_ok
    premises = {v.premise: v for v in rep.verdicts}
    assert premises["C2 >= 0"].conclusion_verdict is Verdict.HOLDS
    assert not rep.falsification and rep.identity_residual == 0


def test_adjudicate_neither_notes():
    rep = adjudicate(HlawkaInstance(WeightedFunctional((1, 1)), (0, 5), (1, 0), 4, 10))
    assert rep.verdicts == () and rep.note == "controls unmet"


def test_adjudicate_minkowski_geq():
    from hlawka import quadratic

    form = quadratic.QuadraticForm.minkowski(3)
    inst = quadratic.instance_from_triple(form, (2, 1, 0), (3, 1, 1), (4, -1, 1))
    rep = adjudicate(inst)
    assert rep.sum_mode is SumMode.GEQ_A and rep.diff_ok
    assert abs(rep.c2) < 1e-9
    assert any(v.conclusion == "C1 <= 0" and v.conclusion_verdict.ok for v in rep.verdicts)
    assert not rep.falsification


def test_falsification_flag():
    from hlawka.relation import Implication, RelationReport

    bad = Implication("C2 >= 0", "C1 >= 0", Verdict.HOLDS, Verdict.FAILS)
    edge = Implication("C2 >= 0", "C1 >= 0", Verdict.MARGINAL, Verdict.MARGINAL)
    assert bad.falsified and not edge.falsified
    rep = RelationReport(0, -1, 1, SumMode.LEQ_A, True, 0, (edge, bad))
    assert rep.falsification


def test_soundness_random_controlled():
    from hlawka.campaign import random_controlled_instance

    rng = random.Random(2024)
    for i in range(5000):
        rep = adjudicate(random_controlled_instance(rng, leq=i % 2 == 0))
        assert rep.diff_ok and rep.sum_mode in (SumMode.LEQ_A, SumMode.GEQ_A)
        assert not rep.falsification
