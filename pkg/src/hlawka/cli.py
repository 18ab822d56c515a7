"""``hlawka`` command line.

Exit codes: 0 no unexpected falsification, 1 unexpected falsification found,
2 usage or parse error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from fractions import Fraction

from . import __version__, campaign, instances, quadratic
from .numerics import HlawkaError, TolerancePolicy, scalar_to_json

log = logging.getLogger("hlawka")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(2, f"{self.prog}: error: {message}\n")


def _policy(args) -> TolerancePolicy:
    return TolerancePolicy(args.tol_abs, args.tol_rel)


def _emit(report: dict, path=None):
    text = campaign.dumps(report)
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _param(text):
    key, sep, value = text.partition("=")
    if not sep:
        raise argparse.ArgumentTypeError(f"expected KEY=VALUE, got {text!r}")
    try:
        return key, json.loads(value)
    except json.JSONDecodeError:
        return key, value


def cmd_verify(args) -> int:
    obj = instances.load(args.file)
    breakdown, falsified = instances.evaluate(obj, args.kind, _policy(args))
    report = {
        "schema": campaign.SCHEMA,
        "kind": args.kind,
        "result": breakdown,
        "falsification": falsified,
        "environment": {
            "tolerance": {"abs_tol": args.tol_abs, "rel_tol": args.tol_rel},
            "version": __version__,
        },
    }
    _emit(report, args.json)
    return 1 if falsified else 0


def cmd_campaign(args) -> int:
    cfg = campaign.CampaignConfig(
        suite=args.suite,
        trials=args.trials,
        seed=args.seed,
        tolerance=_policy(args),
        params=dict(args.param or ()),
    )
    log.info("running suite %s with seed %d", cfg.suite, cfg.seed)
    report = campaign.run_campaign(cfg)
    _emit(report, args.json)
    for name, body in report["suites"].items():
        log.info("%s: checked=%d holds=%d marginal=%d falsifications=%d", name,
                 body["checked"], body["holds"], body["marginal"], len(body["falsifications"]))
    return 1 if report["unexpected_falsifications"] else 0


def cmd_counterexample(args) -> int:
    pol = _policy(args)
    eps = Fraction(args.eps)
    ce = quadratic.build_mixed_counterexample(args.n, args.k, eps)
    ok, witness = quadratic.sampled_span_containment(ce.form, ce.generators, args.samples, args.seed)
    fa, rb = ce.forward_margin_a(pol), ce.reverse_margin_b(pol)
    threshold = 1e3 * pol.abs_tol
    j = lambda v: [scalar_to_json(c) for c in v]  # noqa: E731
    report = {
        "schema": campaign.SCHEMA,
        "n": args.n,
        "k": args.k,
        "epsilon": scalar_to_json(eps),
        "signature": list(ce.form.signature),
        "generators": {f"v{i + 1}": j(v) for i, v in enumerate(ce.generators)},
        "q_values": j(ce.q_values),
        "forward_margin_A": scalar_to_json(fa),
        "reverse_margin_B": scalar_to_json(rb),
        "forward_fails_A": fa < -threshold,
        "reverse_fails_B": rb < -threshold,
        "sampled_containment": {"samples": args.samples, "ok": ok,
                                "witness": None if witness is None else [str(t) for t in witness]},
    }
    _emit(report, args.json)
    reproduced = report["forward_fails_A"] and report["reverse_fails_B"] and ok
    return 0 if reproduced else 1


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="hlawka", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def tolerances(sp):
        sp.add_argument("--tol-abs", type=float, default=1e-9)
        sp.add_argument("--tol-rel", type=float, default=1e-12)
        sp.add_argument("--json", metavar="OUT", help="write the JSON report here instead of stdout")

    v = sub.add_parser("verify", help="evaluate a single instance file")
    v.add_argument("file")
    v.add_argument("--kind", required=True, choices=instances.KINDS)
    tolerances(v)
    v.set_defaults(func=cmd_verify)

    c = sub.add_parser("campaign", help="run seeded verification suites")
    c.add_argument("--suite", default="all", choices=campaign.SUITES + ("all",))
    c.add_argument("--trials", type=int, default=None, help="trials per check (default: per-check)")
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--param", action="append", type=_param, metavar="KEY=VALUE",
                   help=f"suite parameter, one of {sorted(campaign.DEFAULT_PARAMS)}")
    tolerances(c)
    c.set_defaults(func=cmd_campaign)

    x = sub.add_parser("counterexample", help="reproduce the mixed-signature counterexample")
    x.add_argument("--n", type=int, required=True)
    x.add_argument("--k", type=int, required=True)
    x.add_argument("--eps", default="1/100", help="epsilon as P/Q")
    x.add_argument("--samples", type=int, default=1000, help="positive combinations for containment")
    x.add_argument("--seed", type=int, default=0)
    tolerances(x)
    x.set_defaults(func=cmd_counterexample)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except instances.SchemaError as exc:
        print(f"hlawka: parse error: {exc}", file=sys.stderr)
        return 2
    except (HlawkaError, ValueError, ZeroDivisionError) as exc:
        print(f"hlawka: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
