"""End-to-end runs: ingestion/generation -> construction -> rounding or
pre-clustering -> norm evaluation -> optional oracle sweep, with a JSON
report.  Reports are byte-identical for identical configurations."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass

import numpy as np

from normcc import graph as graphmod
from normcc import metric, norms, oracle, precluster, rounding, sampled
from normcc.graph import Graph

SCHEMA_VERSION = 1


class ConfigError(ValueError):
    """Invalid or incompatible run configuration."""


@dataclass(frozen=True)
class RunConfig:
    input: str | None = None
    gen: str | None = None
    pipeline: str = "exact"            # exact | sampled | precluster
    rounding: str = "seq"              # seq | parallel
    beta: float | None = None          # pipeline-dependent default
    lam: float = precluster.DEFAULT_LAMBDA
    epsilon: float = 0.05
    seed: int = 0
    norms: tuple[str, ...] = ("lp:1", "lp:2", "lp:inf")
    oracle: bool = False
    out: str | None = None
    precluster_mode: str = "exact"     # exact | sketch

    def resolved_beta(self) -> float:
        if self.beta is not None:
            return self.beta
        if self.pipeline == "precluster":
            return precluster.DEFAULT_BETA
        return metric.DEFAULT_BETA

    def validate(self) -> None:
        if (self.input is None) == (self.gen is None):
            raise ConfigError("exactly one of input path or generator spec")
        if self.pipeline not in ("exact", "sampled", "precluster"):
            raise ConfigError(f"unknown pipeline {self.pipeline!r}")
        if self.rounding not in ("seq", "parallel"):
            raise ConfigError(f"unknown rounding {self.rounding!r}")
        if self.pipeline == "sampled" and self.rounding != "parallel":
            raise ConfigError(
                "the sampled construction carries triangle slack; "
                "sequential rounding refuses it (use parallel)")
        if self.pipeline in ("sampled", "precluster") or self.rounding == "parallel":
            if not 0.0 < self.epsilon <= rounding.MAX_EPSILON:
                raise ConfigError("epsilon must be in (0, 1/20]")
        for spec in self.norms:
            norms.as_spec(spec)


def load_graph(cfg: RunConfig) -> Graph:
    if cfg.input is not None:
        with open(cfg.input, "r", encoding="utf-8") as fh:
            return graphmod.load_edge_list(fh)
    return graphmod.generate(cfg.gen, seed=cfg.seed)


def clustering_payload(g: Graph, assignment: np.ndarray) -> dict:
    byid: dict[int, list[str]] = {}
    for u, c in enumerate(assignment.tolist()):
        byid.setdefault(int(c), []).append(g.label_of(u))
    clusters = [byid[c] for c in sorted(byid)]
    return {
        "clusters": clusters,
        "assignment": {g.label_of(u): int(c)
                       for u, c in enumerate(assignment.tolist())},
    }


def ratio_sweep(cost_c: np.ndarray, opt_values: np.ndarray) -> dict:
    """Per-k ratio top_k(cost_C)/opt_k; 0/0 counts as exactly optimal and a
    positive cost against a zero optimum is flagged instead of emitting an
    infinity (keeps the report valid JSON)."""
    sweep = norms.top_k_sweep(cost_c)
    ratios: list[float | None] = []
    flagged: list[int] = []
    exact = True
    for k, (c, o) in enumerate(zip(sweep.tolist(), opt_values.tolist()),
                               start=1):
        if o > 0:
            ratios.append(c / o)
            exact = exact and c <= o
        elif c <= 1e-9:
            ratios.append(0.0)
        else:
            ratios.append(None)
            flagged.append(k)
            exact = False
    finite = [r for r in ratios if r is not None]
    return {
        "topk_cost": sweep.tolist(),
        "opt_topk": opt_values.tolist(),
        "ratio_per_k": ratios,
        "max_ratio": max(finite) if finite and not flagged else
                     (None if flagged else 0.0),
        "violations_k": flagged,
        "exact_optimal": exact,
    }


def run(cfg: RunConfig) -> dict:
    cfg.validate()
    g = load_graph(cfg)
    beta = cfg.resolved_beta()
    report: dict = {
        "schema": SCHEMA_VERSION,
        "config": {**asdict(cfg), "beta": beta},
        "graph": {"n": g.n, "m": g.m,
                  "source": cfg.input if cfg.input else f"gen:{cfg.gen}"},
    }

    cost_x = None
    ledger_payload: dict = {}
    if cfg.pipeline == "precluster":
        res = precluster.precluster(
            g, beta=beta, lam=cfg.lam, mode=cfg.precluster_mode,
            cfg=sampled.SketchConfig(epsilon=cfg.epsilon, beta=beta,
                                     seed=cfg.seed))
        assignment = res.assignment
        density = precluster.component_density_check(g, res)
        report["precluster"] = {
            "heavy": int(res.heavy.sum()),
            "light": int(g.n - res.heavy.sum()),
            "density_check": density,
            "ratio_bound": precluster.ratio_bound(beta, cfg.lam),
        }
        # agreement marking and components each take one logical round
        ledger_payload = {"mode": "precluster", "logical_rounds": 2}
    else:
        if cfg.pipeline == "exact":
            sol = metric.build_exact(g, beta)
            solution_extra = {}
        else:
            # the construction runs at epsilon/3 so its triangle slack is
            # exactly the epsilon the rounding stage tolerates
            scfg = sampled.SketchConfig(epsilon=cfg.epsilon / 3.0, beta=beta,
                                        seed=cfg.seed)
            sol, _, cands = sampled.build_sampled(g, scfg)
            solution_extra = {"candidates": len(cands),
                              "tau_agree": scfg.tau_agree(g.n),
                              "tau_lp": scfg.tau_lp(g.n)}
        report["solution"] = {
            "support_size": sol.support_size,
            "slack": sol.triangle_slack,
            **solution_extra,
        }
        cost_x = norms.fractional_disagreements(g, sol)
        if cfg.rounding == "seq":
            assignment = rounding.round_sequential(g, sol)
            ledger_payload = {"mode": "seq",
                              "rounds": int(len(np.unique(assignment)))}
            factor = rounding.SEQ_FACTOR
        else:
            assignment, ledger = rounding.round_parallel(
                g, sol, cfg.epsilon, cfg.seed)
            ledger_payload = {"mode": "parallel", **ledger.to_dict()}
            factor = rounding.parallel_factor(cfg.epsilon)

    cost_c = norms.disagreements(g, assignment)
    report["clustering"] = clustering_payload(g, assignment)
    report["disagreements"] = cost_c.tolist()
    report["norms"] = {spec: norms.as_spec(spec).evaluate(cost_c)
                       for spec in cfg.norms}
    if cost_x is not None:
        ratios = rounding.per_vertex_ratio(cost_c, cost_x)
        report["fractional"] = {
            "cost_x": cost_x.tolist(),
            "per_vertex_ratio": [r if np.isfinite(r) else None
                                 for r in ratios.tolist()],
            "max_ratio": (float(ratios.max()) if np.isfinite(ratios.max())
                          else None),
            "guarantee": factor,
            "violations": [int(u) for u in
                           np.flatnonzero(~np.isfinite(ratios))],
        }
    report["ledger"] = ledger_payload

    if cfg.oracle:
        if g.n > oracle.MAX_N:
            raise ConfigError(
                f"oracle verification is capped at n = {oracle.MAX_N}")
        table = oracle.opt_table(g)
        report["oracle"] = ratio_sweep(cost_c, table.values)
    return report


def report_json(report: dict) -> str:
    return json.dumps(report, sort_keys=True) + "\n"
