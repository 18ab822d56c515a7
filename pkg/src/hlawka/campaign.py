"""Seeded verification campaigns and JSON reports.

Every trial draws from its own ``random.Random`` seeded by
``blake2b(seed, suite, check, trial)``, so reports are a pure function of the
configuration and trials could run in any order.
"""

from __future__ import annotations

import hashlib
import itertools
import json
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction

from . import __version__, integral, quadratic, relation, semigroup
from .numerics import DEFAULT_POLICY, HlawkaError, TolerancePolicy, Verdict, cmp_ge, scalar_to_json

SCHEMA = "hlawka-report/1"
SUITES = ("identities", "relation", "quadratic", "semigroup", "integral", "counterexample")
EXPECTED_LABEL = "expected (mixed-signature counterexample)"

DEFAULT_TRIALS = {
    "four_point": 10_000,
    "relation_identity": 10_000,
    "inner_identity": 10_000,
    "soundness": 100_000,
    "p2_forward": 10_000,
    "p1_reverse": 10_000,
    "propagation": 1_000,
    "diamond": 1_000,
    "groupmain": 10_000,
    "t_consistency": 1_000,
    "ttw00": 1_000,
    "violators": 100,
}

DEFAULT_PARAMS = {
    "p1_dims": [2, 3, 4, 8],
    "p2_dims": [1, 2, 3, 8],
    "ground_size": 5,
    "counterexample_n": [3, 4, 5, 6],
    "counterexample_k": None,
    "epsilon": "1/100",
    "containment_samples": 1000,
}


@dataclass(frozen=True)
class CampaignConfig:
    suite: str = "all"
    trials: int | None = None
    seed: int = 0
    tolerance: TolerancePolicy = DEFAULT_POLICY
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.suite != "all" and self.suite not in SUITES:
            raise ValueError(f"unknown suite {self.suite!r}; expected one of {SUITES + ('all',)}")
        if self.trials is not None and self.trials < 1:
            raise ValueError("trials must be positive")
        unknown = set(self.params) - set(DEFAULT_PARAMS)
        if unknown:
            raise ValueError(f"unknown campaign parameters {sorted(unknown)}")

    def n_trials(self, check: str) -> int:
        return self.trials if self.trials is not None else DEFAULT_TRIALS[check]

    def param(self, key):
        return self.params.get(key, DEFAULT_PARAMS[key])


def derive_seed(seed: int, *parts) -> int:
    h = hashlib.blake2b("/".join(map(str, (seed, *parts))).encode(), digest_size=8)
    return int.from_bytes(h.digest(), "big")


def _j(x):
    if isinstance(x, (tuple, list)):
        return [_j(v) for v in x]
    if isinstance(x, dict):
        return {k: _j(v) for k, v in x.items()}
    if isinstance(x, (int, Fraction, float)) and not isinstance(x, bool):
        return scalar_to_json(x)
    return x


@dataclass
class Tally:
    checked: int = 0
    holds: int = 0
    marginal: int = 0
    falsifications: list = field(default_factory=list)

    def record(self, verdict: Verdict, instance=None, margins=None, expected=False, label=""):
        self.checked += 1
        if verdict is Verdict.HOLDS:
            self.holds += 1
        elif verdict is Verdict.MARGINAL:
            self.marginal += 1
        else:
            entry = {"instance": _j(instance), "margins": _j(margins), "expected": expected}
            if label:
                entry["label"] = label
            self.falsifications.append(entry)

    def to_json(self):
        return {
            "checked": self.checked,
            "holds": self.holds,
            "marginal": self.marginal,
            "falsifications": self.falsifications,
        }


class SuiteResult:
    def __init__(self):
        self.checks = {}

    def tally(self, name) -> Tally:
        return self.checks.setdefault(name, Tally())

    def to_json(self):
        total = Tally()
        checks = {}
        for name, t in self.checks.items():
            total.checked += t.checked
            total.holds += t.holds
            total.marginal += t.marginal
            total.falsifications += [dict(f, check=name) for f in t.falsifications]
            checks[name] = {k: v for k, v in t.to_json().items() if k != "falsifications"}
            checks[name]["falsifications"] = len(t.falsifications)
        out = total.to_json()
        out["checks"] = checks
        return out


def _rat(rng, lo=-10, hi=10, max_den=9):
    d = rng.randint(1, max_den)
    return Fraction(rng.randint(lo * d, hi * d), d)


def _exact_zero(x) -> Verdict:
    return Verdict.HOLDS if x == 0 else Verdict.FAILS


# -- identities ---------------------------------------------------------------


def random_rational_form(rng, n):
    M = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            M[i][j] = M[j][i] = _rat(rng)
    return quadratic.QuadraticForm(M)


def random_rational_instance(rng, size=None) -> relation.HlawkaInstance:
    size = size or rng.randint(1, 8)
    weights = [_rat(rng, 0, 10) for _ in range(size)]
    eta = [_rat(rng) for _ in range(size)]
    xi = [_rat(rng) for _ in range(size)]
    a = _rat(rng)
    while a == 0:
        a = _rat(rng)
    b = -a + _rat(rng, 0, 10)
    while a + b <= 0:
        b += 1
    return relation.HlawkaInstance(relation.WeightedFunctional(weights), eta, xi, a, b)


def _instance_json(inst: relation.HlawkaInstance):
    return {
        "weights": list(inst.functional.weights),
        "f_eta": list(inst.f_eta),
        "f_xi": list(inst.f_xi),
        "a": inst.a,
        "b": inst.b,
    }


def suite_identities(cfg: CampaignConfig) -> SuiteResult:
    res = SuiteResult()
    t = res.tally("four_point")
    for i in range(cfg.n_trials("four_point")):
        rng = random.Random(derive_seed(cfg.seed, "identities", "four_point", i))
        n = rng.randint(1, 8)
        form = random_rational_form(rng, n)
        x, y, z = ([_rat(rng) for _ in range(n)] for _ in range(3))
        r = quadratic.four_point_residual(form, x, y, z)
        t.record(_exact_zero(r), {"Q": form.matrix, "x": x, "y": y, "z": z}, {"residual": r})
    t = res.tally("relation_identity")
    for i in range(cfg.n_trials("relation_identity")):
        rng = random.Random(derive_seed(cfg.seed, "identities", "relation_identity", i))
        inst = random_rational_instance(rng)
        r = relation.identity_residual(inst)
        t.record(_exact_zero(r), _instance_json(inst), {"residual": r})
    t = res.tally("inner_identity")
    for i in range(cfg.n_trials("inner_identity")):
        rng = random.Random(derive_seed(cfg.seed, "identities", "inner_identity", i))
        size, d = rng.randint(1, 8), rng.randint(1, 6)
        m = integral.DiscreteMeasure([_rat(rng, 0, 10) for _ in range(size)])
        f = [tuple(_rat(rng) for _ in range(d)) for _ in range(size)]
        r = integral.inner_identity_residual(m, f)
        t.record(_exact_zero(r), {"weights": m.weights, "f": f}, {"residual": r})
    return res


# -- relation soundness -------------------------------------------------------


def random_controlled_instance(rng, leq: bool) -> relation.HlawkaInstance:
    """Float instance whose controls put it in mode LEQ_a (or GEQ_a) with diff_ok."""
    size = rng.randint(1, 8)
    weights = [rng.uniform(0, 10) for _ in range(size)]
    eta = [rng.uniform(-10, 10) for _ in range(size)]
    xi = [rng.uniform(-10, 10) for _ in range(size)]
    sums = [e + x for e, x in zip(eta, xi)]
    slack = rng.choice((0.0, rng.uniform(0, 5)))
    a = (max(sums) + slack) if leq else (min(sums) - slack)
    if abs(a) < 0.1:
        a += 0.2 if leq else -0.2
    b = max(max(x - e for e, x in zip(eta, xi)), -a + 0.1) + rng.choice((0.0, rng.uniform(0, 5)))
    return relation.HlawkaInstance(relation.WeightedFunctional(weights), eta, xi, a, b)


def suite_relation(cfg: CampaignConfig) -> SuiteResult:
    res = SuiteResult()
    t = res.tally("soundness")
    pol = cfg.tolerance
    for i in range(cfg.n_trials("soundness")):
        rng = random.Random(derive_seed(cfg.seed, "relation", "soundness", i))
        try:
            inst = random_controlled_instance(rng, leq=bool(i % 2 == 0))
        except relation.InstanceError:
            continue
        rep = relation.adjudicate(inst, False, pol)
        verdict = Verdict.HOLDS
        if rep.falsification:
            verdict = Verdict.FAILS
        elif any(v.conclusion_verdict is Verdict.MARGINAL for v in rep.verdicts):
            verdict = Verdict.MARGINAL
        t.record(verdict, _instance_json(inst), {"C1": rep.c1, "C2": rep.c2, "mode": rep.sum_mode.value})
    return res


# -- quadratic ----------------------------------------------------------------


def _relation_consistency(t, form, x, y, z, pol):
    try:
        inst = quadratic.instance_from_triple(form, x, y, z, pol)
    except quadratic.DegenerateTriple:
        t.record(Verdict.HOLDS)
        return
    rep = relation.adjudicate(inst, False, pol)
    v = Verdict.FAILS if rep.falsification else Verdict.HOLDS
    t.record(v, {"x": x, "y": y, "z": z}, {"C1": rep.c1, "C2": rep.c2, "mode": rep.sum_mode.value})


def suite_quadratic(cfg: CampaignConfig) -> SuiteResult:
    res = SuiteResult()
    pol = cfg.tolerance
    fwd, cons = res.tally("p2_forward"), res.tally("theorem_consistency")
    for n in cfg.param("p2_dims"):
        form = quadratic.QuadraticForm.euclidean(n)
        for i in range(cfg.n_trials("p2_forward")):
            rng = random.Random(derive_seed(cfg.seed, "quadratic", "p2", n, i))
            x, y, z = (tuple(rng.gauss(0, 1) for _ in range(n)) for _ in range(3))
            m = quadratic.hlawka_margin(form, x, y, z, quadratic.Direction.FORWARD, pol)
            fwd.record(cmp_ge(m, 0, pol), {"n": n, "x": x, "y": y, "z": z}, {"forward": m})
            _relation_consistency(cons, form, x, y, z, pol)
    rev, az, tri, clo = (res.tally(k) for k in ("p1_reverse", "azteca", "reverse_triangle", "cone_closure"))
    for n in cfg.param("p1_dims"):
        form = quadratic.QuadraticForm.minkowski(n)
        for i in range(cfg.n_trials("p1_reverse")):
            x, y, z = quadratic.sample_future_cone(n, 3, derive_seed(cfg.seed, "quadratic", "p1", n, i))
            m = quadratic.hlawka_margin(form, x, y, z, quadratic.Direction.REVERSE, pol)
            rev.record(cmp_ge(m, 0, pol), {"n": n, "x": x.coords, "y": y.coords, "z": z.coords}, {"reverse": m})
            for u, v in ((x, y), (y, z), (z, x)):
                pair = {"n": n, "x": u.coords, "y": v.coords}
                a = quadratic.azteca_margin(form, u, v, pol)
                az.record(cmp_ge(a, 0, pol), pair, {"azteca": a})
                r = quadratic.reverse_triangle_margin(form, u, v, pol)
                tri.record(cmp_ge(r, 0, pol), pair, {"reverse_triangle": r})
                inside = quadratic.future_cone_contains(form, quadratic.vadd(u, v), False, pol)
                clo.record(Verdict.HOLDS if inside else Verdict.FAILS, pair)
            _relation_consistency(cons, form, x.coords, y.coords, z.coords, pol)
    eq = res.tally("azteca_equality")
    for n in cfg.param("p1_dims"):
        form = quadratic.QuadraticForm.minkowski(n)
        rng = random.Random(derive_seed(cfg.seed, "quadratic", "azteca_equality", n))
        for _ in range(100):
            s = [_rat(rng, -1, 1) for _ in range(n - 1)]
            x = (sum(abs(c) for c in s) + 1, *s)
            lam = _rat(rng, 0, 5) + Fraction(1, 7)
            m = quadratic.azteca_margin(form, x, quadratic.vscale(lam, x), pol)
            eq.record(_exact_zero(m), {"x": x, "lambda": lam}, {"azteca": m})
    return res


# -- semigroup ----------------------------------------------------------------


def suite_semigroup(cfg: CampaignConfig) -> SuiteResult:
    res = SuiteResult()
    pol = cfg.tolerance
    size = cfg.param("ground_size")
    rng = random.Random(derive_seed(cfg.seed, "semigroup", "weights"))
    weights = [_rat(rng, 0, 10) for _ in range(size)]
    table = semigroup.measure_table(weights)
    tu, ts, tx = (res.tally(k) for k in ("measure_union_identity", "measure_symmdiff_identity",
                                         "measure_symmdiff_identity_exact"))
    for A, B, C in itertools.product(range(1 << size), repeat=3):
        u, s = semigroup.measure_identity_residuals(weights, A, B, C, table)
        # the exact variant differs from the stated one by mu(A & B & C)
        x = s - table[A & B & C]
        inst = {"weights": weights, "A": A, "B": B, "C": C}
        tu.record(_exact_zero(u), inst, {"union": u})
        ts.record(_exact_zero(s), inst, {"symmdiff": s})
        tx.record(_exact_zero(x), inst, {"symmdiff_exact": x})

    t = res.tally("measure_power")
    for op in ("union", "symmdiff"):
        structure = semigroup.MeasurableSets(weights, op)
        for k in range(5):
            for (A, B, C), m in semigroup.exhaustive_power_margins(structure, k):
                t.record(cmp_ge(m, 0, pol), {"op": op, "k": k, "A": A, "B": B, "C": C}, {"margin": m})

    t = res.tally("propagation")
    n_trip = cfg.n_trials("propagation")
    configs = []
    for op in ("union", "symmdiff"):
        configs.append((semigroup.MeasurableSets(weights, op), 0, range(0, 5),
                        lambda r: r.randrange(1 << size)))
    for p in (1, Fraction(3, 2), 2):
        configs.append((semigroup.LpVectors(3, p), 0, range(0, 5),
                        lambda r: tuple(r.uniform(-1, 1) for _ in range(3))))
    configs.append((semigroup.NonnegReals(2), 0, range(-3, 1), lambda r: _rat(r, 0, 5)))
    for ci, (structure, k0, ks, draw) in enumerate(configs):
        r = random.Random(derive_seed(cfg.seed, "semigroup", "propagation", ci))
        triples = [(draw(r), draw(r), draw(r)) for _ in range(n_trip)]
        rep = semigroup.propagate_check(structure, triples, k0, ks, pol)
        bad = {idx for idx, _, _ in rep.events}
        for idx, trip in enumerate(triples):
            if idx in bad:
                ev = [(k, m) for j, k, m in rep.events if j == idx]
                t.record(Verdict.FAILS, {"structure": structure.name, "triple": trip, "k0": k0},
                         {f"k={k}": m for k, m in ev})
            else:
                t.record(Verdict.HOLDS)

    t = res.tally("diamond")
    cases = [(k, p) for k in (0, 1, 2) for p in (2 ** k, 1.5 * 2 ** k, 2 ** (k + 1))]
    cases.append((math.inf, math.inf))
    for k, p in cases:
        for i in range(cfg.n_trials("diamond")):
            r = random.Random(derive_seed(cfg.seed, "semigroup", "diamond", k, p, i))
            m_dim = r.randint(1, 5)
            a, b, c = (tuple(r.uniform(0, 1) for _ in range(m_dim)) for _ in range(3))
            m = semigroup.diamond_hlawka_margin(p, k, a, b, c)
            t.record(cmp_ge(m, 0, pol), {"k": str(k), "p": str(p), "a": a, "b": b, "c": c}, {"margin": m})

    t = res.tally("ressel")
    S = integral.ConcaveMap("sqrt")
    triples = list(itertools.product(range(-5, 6), repeat=3))
    rep = semigroup.ressel_check(abs, S, triples, pol)
    for _ in range(rep.checked - len(rep.violations)):
        t.record(Verdict.HOLDS)
    for idx, m in rep.violations:
        t.record(Verdict.FAILS, {"triple": triples[idx], "S": "sqrt"}, {"margin": m})
    return res


# -- integral -----------------------------------------------------------------


def _gauss_vec(rng, d):
    return tuple(rng.gauss(0, 1) for _ in range(d))


def suite_integral(cfg: CampaignConfig) -> SuiteResult:
    res = SuiteResult()
    pol = cfg.tolerance
    t = res.tally("groupmain")
    maps = integral.ALL_CONCAVE_MAPS
    for i in range(cfg.n_trials("groupmain")):
        rng = random.Random(derive_seed(cfg.seed, "integral", "groupmain", i))
        S = maps[i % len(maps)]
        size, d = rng.randint(1, 6), rng.randint(1, 4)
        m = integral.DiscreteMeasure([rng.uniform(0, 3) for _ in range(size)])
        g_hat = [_gauss_vec(rng, d) for _ in range(size)]
        tg = integral.aggregate(m, g_hat) if rng.random() < 0.5 else _gauss_vec(rng, d)
        probe = integral.GroupmainInstance(m, g_hat, tg, S, 1.0)
        s_hat, s_rest, _ = probe.images(pol)
        need = max(h + r for h, r in zip(s_hat, s_rest))
        A = max(need, 1e-3) * (1 + rng.choice((0.0, rng.uniform(0, 1))))
        inst = integral.GroupmainInstance(m, g_hat, tg, S, A)
        two, one, C = integral.groupmain_margins(inst, pol)
        v = Verdict.HOLDS
        if cmp_ge(two, 0, pol).ok:
            v = cmp_ge(one, 0, pol)
        t.record(v, {"weights": m.weights, "g_hat": g_hat, "Tg": tg, "S": S.kind, "A": A},
                 {"two_form": two, "one_form": one, "C": C})

    t = res.tally("t_consistency")
    for i in range(cfg.n_trials("t_consistency")):
        rng = random.Random(derive_seed(cfg.seed, "integral", "t_consistency", i))
        size, d = rng.randint(2, 6), rng.randint(1, 4)
        m = integral.DiscreteMeasure.counting(size)
        f = [_gauss_vec(rng, d) for _ in range(size)]
        a = integral.t_variant_margin(m, f, 1, pol)
        b = integral.integral_hlawka_margin(m, f, f, pol)
        ok = abs(a - b) <= pol.abs_tol
        t.record(Verdict.HOLDS if ok else Verdict.FAILS, {"f": f}, {"t_variant": a, "integral": b})

    t = res.tally("ttw00")
    m3 = integral.DiscreteMeasure.counting(3)
    for i in range(cfg.n_trials("ttw00")):
        rng = random.Random(derive_seed(cfg.seed, "integral", "ttw00", i))
        d = rng.randint(1, 6)
        x, y, z = (_gauss_vec(rng, d) for _ in range(3))
        ttw = integral.t_variant_margin(m3, [x, y, z], 1, pol)
        hl = quadratic.hlawka_margin(quadratic.QuadraticForm.euclidean(d), x, y, z, "forward", pol)
        gm = integral.GroupmainInstance(m3, [x, y, z], integral.aggregate(m3, [x, y, z]),
                                        integral.ConcaveMap("identity"),
                                        sum(integral.norm(v) for v in (x, y, z)))
        _, one, _ = integral.groupmain_margins(gm, pol)
        ok = abs(ttw - hl) <= pol.abs_tol and abs(one - hl) <= pol.abs_tol and cmp_ge(ttw, 0, pol).ok
        t.record(Verdict.HOLDS if ok else Verdict.FAILS, {"x": x, "y": y, "z": z},
                 {"ttw00": ttw, "hlawka": hl, "groupmain": one})

    t = res.tally("premise_violators")
    for i in range(cfg.n_trials("violators")):
        rng = random.Random(derive_seed(cfg.seed, "integral", "violators", i))
        got, want, info = designed_violator(rng, i % 4)
        t.record(Verdict.HOLDS if got == want else Verdict.FAILS, info, {"witness": got, "expected": want})
    return res


def designed_violator(rng, which: int):
    """Instance violating one premise checker at a single known atom.

    All other atoms carry zero values, which the checkers exempt or satisfy
    with equality.  Returns ``(reported_witness, expected_witness, info)``.
    """
    size, d = rng.randint(2, 6), rng.randint(1, 4)
    j = rng.randrange(size)
    v = _gauss_vec(rng, d)
    f = [v if i == j else (0.0,) * d for i in range(size)]
    if which == 0:
        m = integral.DiscreteMeasure([rng.uniform(0.5, 2) for _ in range(size)])
        S = integral.ALL_CONCAVE_MAPS[rng.randrange(4)]
        # Tg on the ray of v keeps S|v| + S|Tg| != S|v - Tg|, so atom j is never exempt
        tg = tuple(rng.uniform(1.5, 3) * c for c in v)
        sv = S(integral.norm(v))
        sr = S(integral.norm(tuple(a - b for a, b in zip(tg, v))))
        inst = integral.GroupmainInstance(m, f, tg, S, (sv + sr) / 2)
        ok, witness = integral.groupmain_premises(inst)
        return witness, j, {"kind": "groupmain", "weights": m.weights, "g_hat": f, "Tg": tg, "A": inst.A}
    if which == 1:
        m = integral.DiscreteMeasure([rng.uniform(0.5, 2) for _ in range(size)])
        t = m.weights[j] + rng.uniform(0.5, 3)
        call = lambda: integral.t_variant_margin(m, f, t)  # noqa: E731
        info = {"kind": "t_variant", "weights": m.weights, "f": f, "t": t}
    elif which == 2:
        w = [rng.uniform(0.5, 2) for _ in range(size)]
        w[j] = rng.uniform(0.1, 0.9)
        m = integral.DiscreteMeasure(w)
        call = lambda: integral.integral_hlawka_margin(m, f, f)  # noqa: E731
        info = {"kind": "integral_hlawka", "weights": m.weights, "f": f}
    else:
        mu = [rng.uniform(0.5, 2) for _ in range(size)]
        lam = mu[j] + rng.uniform(0.5, 3)
        call = lambda: integral.weighted_variant_margin(mu, f, lam)  # noqa: E731
        info = {"kind": "weighted_variant", "mu": mu, "x": f, "lambda": lam}
    try:
        call()
    except HlawkaError as exc:
        return getattr(exc, "witness", None), j, info
    return None, j, info


# -- counterexample -----------------------------------------------------------


def suite_counterexample(cfg: CampaignConfig) -> SuiteResult:
    res = SuiteResult()
    pol = cfg.tolerance
    eps = Fraction(str(cfg.param("epsilon")))
    threshold = 1e3 * pol.abs_tol
    ks = cfg.param("counterexample_k")
    ns = cfg.param("counterexample_n")
    ns = [ns] if isinstance(ns, int) else ns
    gens_t, span_t, ce_t = res.tally("generators_positive"), res.tally("sampled_containment"), res.tally("mixed_signature")
    for n in ns:
        for k in ([ks] if isinstance(ks, int) else range(2, n)):
            ce = quadratic.build_mixed_counterexample(n, k, eps)
            tag = {"n": n, "k": k, "epsilon": eps}
            gens_t.record(Verdict.HOLDS if all(q > 0 for q in ce.q_values) else Verdict.FAILS,
                          tag, {"q": list(ce.q_values)})
            ok, witness = quadratic.sampled_span_containment(
                ce.form, ce.generators, cfg.param("containment_samples"),
                derive_seed(cfg.seed, "counterexample", "span", n, k))
            span_t.record(Verdict.HOLDS if ok else Verdict.FAILS, dict(tag, coefficients=witness))
            fa = ce.forward_margin_a(pol)
            rb = ce.reverse_margin_b(pol)
            for name, margin, triple in (("forward_A", fa, ce.triple_a), ("reverse_B", rb, ce.triple_b)):
                reproduced = margin < -threshold
                ce_t.record(Verdict.FAILS, dict(tag, triple=triple, inequality=name), {name: margin},
                            expected=reproduced,
                            label=EXPECTED_LABEL if reproduced else "counterexample not reproduced")
    return res


_RUNNERS = {
    "identities": suite_identities,
    "relation": suite_relation,
    "quadratic": suite_quadratic,
    "semigroup": suite_semigroup,
    "integral": suite_integral,
    "counterexample": suite_counterexample,
}


def run_campaign(config: CampaignConfig) -> dict:
    suites = SUITES if config.suite == "all" else (config.suite,)
    out = {
        "schema": SCHEMA,
        "environment": {
            "seed": config.seed,
            "tolerance": {"abs_tol": config.tolerance.abs_tol, "rel_tol": config.tolerance.rel_tol},
            "trials": config.trials,
            "params": {k: config.param(k) for k in sorted(DEFAULT_PARAMS)},
            "version": __version__,
        },
        "suites": {},
    }
    unexpected = 0
    for name in suites:
        body = _RUNNERS[name](config).to_json()
        unexpected += sum(1 for f in body["falsifications"] if not f["expected"])
        out["suites"][name] = body
    out["unexpected_falsifications"] = unexpected
    return out


def dumps(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True, ensure_ascii=False) + "\n"
