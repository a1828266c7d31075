"""Command-line front end.

Subcommands: build-lp, round, precluster, evaluate, verify, bench.  Exit
codes: 0 success, 1 property violation (verify), 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from normcc import kernels, metric, norms, pipeline, sampled, verify
from normcc.bench import run_bench
from normcc.graph import GraphFormatError
from normcc.pipeline import ConfigError, RunConfig


def _add_graph_source(p: argparse.ArgumentParser) -> None:
    p.add_argument("--input", metavar="PATH", help="edge-list file")
    p.add_argument("--gen", metavar="SPEC",
                   help="generator spec, e.g. star:6 | complete:8 | "
                        "gnp:100,0.1 | planted:60,4,0.9,0.05")


def _add_params(p: argparse.ArgumentParser) -> None:
    p.add_argument("--beta", type=float, default=None)
    p.add_argument("--lambda", dest="lam", type=float,
                   default=None, help="pre-clustering light threshold")
    p.add_argument("--epsilon", type=float, default=0.05)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", metavar="PATH", default=None)


def _config(args, **overrides) -> RunConfig:
    fields = dict(
        input=args.input,
        gen=args.gen,
        beta=args.beta,
        epsilon=args.epsilon,
        seed=args.seed,
        out=args.out,
    )
    if getattr(args, "lam", None) is not None:
        fields["lam"] = args.lam
    if getattr(args, "norms", None):
        fields["norms"] = tuple(args.norms)
    if getattr(args, "oracle", False):
        fields["oracle"] = True
    fields.update(overrides)
    return RunConfig(**fields)


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _cmd_build_lp(args) -> int:
    if args.pipeline not in ("exact", "sampled"):
        raise ConfigError("build-lp supports pipelines exact and sampled")
    cfg = _config(args, pipeline=args.pipeline,
                  rounding="parallel" if args.pipeline == "sampled" else "seq")
    cfg.validate()
    g = pipeline.load_graph(cfg)
    if args.pipeline == "exact":
        sol = metric.build_exact(g, cfg.resolved_beta())
    else:
        scfg = sampled.SketchConfig(epsilon=cfg.epsilon,
                                    beta=cfg.resolved_beta(), seed=cfg.seed)
        sol, _, _ = sampled.build_sampled(g, scfg)
    payload = json.loads(sol.to_json())
    payload["labels"] = g.all_labels()
    _emit(json.dumps(payload, sort_keys=True) + "\n", cfg.out)
    return 0


def _cmd_round(args) -> int:
    cfg = _config(args, pipeline=args.pipeline, rounding=args.rounding)
    report = pipeline.run(cfg)
    _emit(pipeline.report_json(report), cfg.out)
    return 0


def _cmd_precluster(args) -> int:
    cfg = _config(args, pipeline="precluster", precluster_mode=args.mode)
    report = pipeline.run(cfg)
    _emit(pipeline.report_json(report), cfg.out)
    return 0


def _cmd_evaluate(args) -> int:
    cfg = _config(args, pipeline="exact")
    g = pipeline.load_graph(cfg)
    with open(args.clustering, "r", encoding="utf-8") as fh:
        payload = json.load(fh)
    label_to_id = {lab: u for u, lab in enumerate(g.all_labels())}
    assignment = np.full(g.n, -1, dtype=np.int64)
    for label, cid in payload["assignment"].items():
        if label not in label_to_id:
            raise ConfigError(f"clustering mentions unknown vertex {label!r}")
        assignment[label_to_id[label]] = int(cid)
    if (assignment < 0).any():
        raise ConfigError("clustering does not cover every vertex")
    cost = norms.disagreements(g, assignment)
    out = {
        "schema": pipeline.SCHEMA_VERSION,
        "graph": {"n": g.n, "m": g.m},
        "disagreements": cost.tolist(),
        "norms": {spec: norms.as_spec(spec).evaluate(cost)
                  for spec in cfg.norms},
    }
    _emit(json.dumps(out, sort_keys=True) + "\n", cfg.out)
    return 0


def _cmd_verify(args) -> int:
    if args.criteria:
        unknown = [c for c in args.criteria if c not in verify.CHECKS]
        if unknown:
            raise ConfigError(f"unknown criteria: {unknown} "
                              f"(valid: 1..{max(verify.CHECKS)})")
    results = verify.run_all(quick=args.quick, only=args.criteria,
                             seed=args.seed)
    for res in results:
        print(res.line())
    summary = {
        "schema": pipeline.SCHEMA_VERSION,
        "passed": all(r.passed for r in results),
        "results": [vars(r) for r in results],
    }
    if args.out:
        _emit(json.dumps(summary, sort_keys=True) + "\n", args.out)
    return 0 if summary["passed"] else 1


def _cmd_bench(args) -> int:
    results = run_bench(n=args.n, seed=args.seed)
    results["backend_in_use"] = kernels.BACKEND
    _emit(json.dumps(results, sort_keys=True, indent=2) + "\n", args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="normcc",
        description="correlation clustering with simultaneous guarantees "
                    "for every monotone symmetric norm")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build-lp", help="construct the fractional solution")
    _add_graph_source(p)
    _add_params(p)
    p.add_argument("--pipeline", choices=["exact", "sampled"], default="exact")
    p.set_defaults(fn=_cmd_build_lp)

    p = sub.add_parser("round", help="construct and round to a clustering")
    _add_graph_source(p)
    _add_params(p)
    p.add_argument("--pipeline", choices=["exact", "sampled"], default="exact")
    p.add_argument("--rounding", choices=["seq", "parallel"], default="seq")
    p.add_argument("--norms", action="append", metavar="SPEC",
                   help="top:K | lp:P | lp:inf | ordered:w1,w2,... "
                        "(repeatable)")
    p.add_argument("--oracle", action="store_true",
                   help="exhaustive top-k ratio sweep (small n only)")
    p.set_defaults(fn=_cmd_round)

    p = sub.add_parser("precluster", help="constant-round pre-clustering")
    _add_graph_source(p)
    _add_params(p)
    p.add_argument("--mode", choices=["exact", "sketch"], default="exact")
    p.add_argument("--norms", action="append", metavar="SPEC")
    p.add_argument("--oracle", action="store_true")
    p.set_defaults(fn=_cmd_precluster)

    p = sub.add_parser("evaluate", help="norm values of a stored clustering")
    _add_graph_source(p)
    _add_params(p)
    p.add_argument("--clustering", required=True, metavar="PATH",
                   help="clustering JSON produced by round/precluster")
    p.add_argument("--norms", action="append", metavar="SPEC")
    p.set_defaults(fn=_cmd_evaluate)

    p = sub.add_parser("verify", help="run the property suites")
    p.add_argument("--quick", action="store_true",
                   help="reduced corpus sizes for a smoke run")
    p.add_argument("--criteria", type=int, action="append",
                   help="restrict to specific criterion ids (repeatable)")
    p.add_argument("--seed", type=int, default=20240601)
    p.add_argument("--out", metavar="PATH", default=None)
    p.set_defaults(fn=_cmd_verify)

    p = sub.add_parser("bench", help="compare compiled and fallback kernels")
    p.add_argument("--n", type=int, default=2000)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--out", metavar="PATH", default=None)
    p.set_defaults(fn=_cmd_bench)
    return ap


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.fn(args)
    except (ConfigError, GraphFormatError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
