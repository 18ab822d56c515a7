"""JSON instance files: parsing and single-instance evaluation."""

from __future__ import annotations

import json
import math
from pathlib import Path

from . import integral, quadratic, relation, semigroup
from .numerics import (
    DEFAULT_POLICY,
    HlawkaError,
    TolerancePolicy,
    Verdict,
    cmp_ge,
    parse_scalar,
    scalar_to_json,
)

KINDS = ("relation", "quadratic", "semigroup", "integral")


class SchemaError(HlawkaError, ValueError):
    """Instance file does not match its kind's schema; ``location`` is a JSON path."""

    def __init__(self, message, location="$"):
        super().__init__(f"{location}: {message}")
        self.location = location


def _get(obj, key, loc, required=True, default=None):
    if not isinstance(obj, dict):
        raise SchemaError("expected an object", loc)
    if key not in obj:
        if required:
            raise SchemaError(f"missing key {key!r}", loc)
        return default
    return obj[key]


def _scalar(v, loc):
    try:
        return parse_scalar(v)
    except (ValueError, TypeError) as exc:
        raise SchemaError(str(exc), loc) from exc


def _vector(v, loc):
    if not isinstance(v, list):
        raise SchemaError("expected a list", loc)
    return tuple(_scalar(x, f"{loc}[{i}]") for i, x in enumerate(v))


def _matrix(v, loc):
    if not isinstance(v, list) or not v:
        raise SchemaError("expected a non-empty list of rows", loc)
    return [_vector(row, f"{loc}[{i}]") for i, row in enumerate(v)]


def load(path) -> dict:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise SchemaError(f"cannot read {path}: {exc.strerror}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid JSON: {exc.msg}", f"line {exc.lineno} col {exc.colno}") from exc


def parse_relation(obj) -> relation.HlawkaInstance:
    weights = _vector(_get(obj, "weights", "$"), "$.weights")
    try:
        return relation.HlawkaInstance(
            relation.WeightedFunctional(weights),
            _vector(_get(obj, "f_eta", "$"), "$.f_eta"),
            _vector(_get(obj, "f_xi", "$"), "$.f_xi"),
            _scalar(_get(obj, "a", "$"), "$.a"),
            _scalar(_get(obj, "b", "$"), "$.b"),
        )
    except relation.StructuralError as exc:
        raise SchemaError(str(exc)) from exc


def _j(x):
    if isinstance(x, (tuple, list)):
        return [_j(v) for v in x]
    return scalar_to_json(x)


def relation_report_json(rep: relation.RelationReport) -> dict:
    return {
        "c": _j(rep.c),
        "C1": _j(rep.c1),
        "C2": _j(rep.c2),
        "sum_mode": rep.sum_mode.value,
        "diff_ok": rep.diff_ok,
        "identity_residual": _j(rep.identity_residual),
        "implications": [
            {
                "premise": v.premise,
                "conclusion": v.conclusion,
                "premise_verdict": v.premise_verdict.value,
                "conclusion_verdict": v.conclusion_verdict.value,
            }
            for v in rep.verdicts
        ],
        "falsification": rep.falsification,
        "note": rep.note,
    }


def _guard(fn):
    """Evaluate ``fn``; a precondition failure becomes an error entry instead of aborting."""
    try:
        return fn(), None
    except (HlawkaError, ValueError) as exc:
        err = {"error": str(exc)}
        w = getattr(exc, "witness", None)
        if w is not None:
            err["witness"] = w if isinstance(w, (int, str)) else repr(w)
        return None, err


def verify_relation(obj, policy):
    inst = parse_relation(obj)
    rep = relation.adjudicate(inst, bool(obj.get("restrict", False)), policy)
    return relation_report_json(rep), rep.falsification


def verify_quadratic(obj, policy):
    Q = _matrix(_get(obj, "Q", "$"), "$.Q")
    vecs = _get(obj, "vectors", "$")
    x, y, z = (_vector(_get(vecs, k, "$.vectors"), f"$.vectors.{k}") for k in "xyz")
    direction = _get(obj, "direction", "$", required=False, default="forward")
    if direction not in ("forward", "reverse"):
        raise SchemaError("direction must be 'forward' or 'reverse'", "$.direction")
    try:
        form = quadratic.QuadraticForm(Q)
    except quadratic.StructuralError as exc:
        raise SchemaError(str(exc), "$.Q") from exc
    out = {
        "signature": list(form.signature),
        "four_point_residual": _j(quadratic.four_point_residual(form, x, y, z)),
    }
    falsified = False
    margin = quadratic.hlawka_margin(form, x, y, z, direction, policy)
    out["hlawka_margin"] = _j(margin)
    out["direction"] = direction
    out["verdict"] = cmp_ge(margin, 0, policy).value
    falsified = cmp_ge(margin, 0, policy) is Verdict.FAILS
    if direction == "reverse":
        pairs = {"xy": (x, y), "yz": (y, z), "zx": (z, x)}
        out["azteca"] = {k: _j(quadratic.azteca_margin(form, *p, policy=policy)) for k, p in pairs.items()}
        out["reverse_triangle"] = {
            k: _j(quadratic.reverse_triangle_margin(form, *p, policy=policy)) for k, p in pairs.items()
        }
    inst, err = _guard(lambda: quadratic.instance_from_triple(form, x, y, z, policy))
    if inst is None:
        out["relation"] = err
    else:
        rep = relation.adjudicate(inst, False, policy)
        out["relation"] = relation_report_json(rep)
        falsified = falsified or rep.falsification
    return out, falsified


def _subset(v, loc):
    if isinstance(v, int) and not isinstance(v, bool):
        return v
    if isinstance(v, list) and all(isinstance(i, int) and i >= 0 for i in v):
        bits = 0
        for i in v:
            bits |= 1 << i
        return bits
    raise SchemaError("a set is a bitmask integer or a list of element indices", loc)


def _p(v, loc):
    if v in ("inf", "infinity"):
        return math.inf
    return _scalar(v, loc)


def parse_semigroup(obj):
    carrier = _get(obj, "carrier", "$")
    triple = _get(obj, "triple", "$")
    if not isinstance(triple, list) or len(triple) != 3:
        raise SchemaError("triple must be a list of three elements", "$.triple")
    if carrier == "lp":
        p = _p(_get(obj, "p", "$"), "$.p")
        elems = [_vector(t, f"$.triple[{i}]") for i, t in enumerate(triple)]
        structure = semigroup.LpVectors(len(elems[0]), p)
    elif carrier == "measure":
        weights = _vector(_get(obj, "weights", "$"), "$.weights")
        structure = semigroup.MeasurableSets(weights, _get(obj, "op", "$", required=False, default="union"))
        elems = [_subset(t, f"$.triple[{i}]") for i, t in enumerate(triple)]
    elif carrier == "nonneg":
        structure = semigroup.NonnegReals(_scalar(obj.get("exponent", 1), "$.exponent"))
        elems = [_scalar(t, f"$.triple[{i}]") for i, t in enumerate(triple)]
    else:
        raise SchemaError("carrier must be 'lp', 'measure' or 'nonneg'", "$.carrier")
    k = _get(obj, "k", "$")
    if not isinstance(k, int) or isinstance(k, bool):
        raise SchemaError("k must be an integer", "$.k")
    return structure, elems, k


def verify_semigroup(obj, policy):
    structure, (x, y, z), k = parse_semigroup(obj)
    m = semigroup.hlawka_power_margin(structure, x, y, z, k, policy)
    out = {"structure": structure.name, "k": k, "margin": _j(m), "verdict": cmp_ge(m, 0, policy).value}
    if isinstance(structure, semigroup.MeasurableSets):
        u, s = semigroup.measure_identity_residuals(structure.weights, x, y, z)
        _, e = semigroup.measure_identity_residuals(structure.weights, x, y, z,
                                                    symmdiff_coefficient=semigroup.SYMMDIFF_EXACT)
        out["measure_identity_residuals"] = {"union": _j(u), "symmdiff": _j(s), "symmdiff_exact": _j(e)}
    return out, False


def verify_integral(obj, policy):
    weights = _vector(_get(obj, "weights", "$"), "$.weights")
    raw_f = _get(obj, "f", "$")
    if not isinstance(raw_f, list):
        raise SchemaError("expected a list of vectors", "$.f")
    f = [_vector(v, f"$.f[{i}]") for i, v in enumerate(raw_f)]
    try:
        measure = integral.DiscreteMeasure(weights)
        integral.aggregate(measure, f)
    except (HlawkaError, ValueError) as exc:
        raise SchemaError(str(exc)) from exc
    out = {
        "aggregate": _j(integral.aggregate(measure, f)),
        "inner_identity_residual": _j(integral.inner_identity_residual(measure, f)),
    }
    margins = {}
    val, err = _guard(lambda: integral.t_variant_margin(measure, f, 1, policy))
    margins["ttw00"] = err or _j(val)
    if "g" in obj:
        g = [_vector(v, f"$.g[{i}]") for i, v in enumerate(obj["g"])]
        val, err = _guard(lambda: integral.integral_hlawka_margin(measure, f, g, policy))
        margins["integral_hlawka"] = err or _j(val)
    if "t" in obj:
        t = _scalar(obj["t"], "$.t")
        val, err = _guard(lambda: integral.t_variant_margin(measure, f, t, policy))
        margins["t_variant"] = err or _j(val)
    if "perm" in obj:
        perm = obj["perm"]
        val, err = _guard(lambda: integral.rearrangement_margin(measure, f, perm, policy))
        margins["rearrangement"] = err or _j(val)
    if "A" in obj:
        S = integral.ConcaveMap.from_json(obj.get("S", {"kind": "identity"}))
        tg = _vector(obj["Tg"], "$.Tg") if "Tg" in obj else integral.aggregate(measure, f)
        A = _scalar(obj["A"], "$.A")
        inst, err = _guard(lambda: integral.GroupmainInstance(measure, f, tg, S, A))
        if inst is None:
            margins["groupmain"] = err
        else:
            val, err = _guard(lambda: integral.groupmain_margins(inst, policy))
            margins["groupmain"] = err or dict(zip(("two_form", "one_form", "C"), _j(val)))
    out["margins"] = margins
    falsified = False
    for name in ("ttw00", "integral_hlawka", "t_variant", "rearrangement"):
        v = margins.get(name)
        if isinstance(v, dict) and "error" not in v:
            if cmp_ge(parse_scalar(v), 0, policy) is Verdict.FAILS:
                falsified = True
    gm = margins.get("groupmain")
    if isinstance(gm, dict) and "error" not in gm:
        two, one = parse_scalar(gm["two_form"]), parse_scalar(gm["one_form"])
        if cmp_ge(two, 0, policy).ok and cmp_ge(one, 0, policy) is Verdict.FAILS:
            falsified = True
    return out, falsified


_VERIFIERS = {
    "relation": verify_relation,
    "quadratic": verify_quadratic,
    "semigroup": verify_semigroup,
    "integral": verify_integral,
}


def evaluate(obj, kind: str, policy: TolerancePolicy = DEFAULT_POLICY):
    """Return ``(breakdown, falsified)`` for a parsed instance object."""
    if kind not in _VERIFIERS:
        raise SchemaError(f"unknown kind {kind!r}; expected one of {KINDS}")
    return _VERIFIERS[kind](obj, policy)
