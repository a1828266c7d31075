"""Property verification driving both the CLI `verify` subcommand and the
acceptance test suite.

Each criterion is a function returning a CheckResult; the random corpora are
seeded and cached so repeated criteria reuse the same instances.  Sizes
follow the acceptance contract; quick mode shrinks them for smoke runs.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass

import numpy as np

from normcc import kernels, metric, norms, oracle, precluster, rounding, sampled
from normcc.graph import (Graph, generate_complete, generate_gnp,
                          generate_planted, generate_star)
from normcc.pipeline import RunConfig, report_json, run

TRIANGLE_TOL = 1e-9
PER_VERTEX_TOL = 1e-9
E2E_SEQ_BOUND = 63.3
PRECLUSTER_BOUND = 359.0


@dataclass
class CheckResult:
    cid: int
    name: str
    passed: bool
    checked: int
    violations: int
    worst: float | None = None
    detail: str = ""

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        worst = "" if self.worst is None else f" worst={self.worst:.6g}"
        return (f"{status} [{self.cid:2d}] {self.name}: "
                f"checked={self.checked} violations={self.violations}"
                f"{worst} {self.detail}".rstrip())


def _random_graph(rng: random.Random, n_lo: int, n_hi: int, tag: int) -> Graph:
    n = rng.randint(n_lo, n_hi)
    kind = rng.random()
    if kind < 0.55:
        p = rng.choice([0.05, 0.1, 0.2, 0.35, 0.5, 0.7, 0.9])
        return generate_gnp(n, p, seed=tag)
    if kind < 0.85:
        c = rng.randint(2, max(2, min(8, n // 2)))
        return generate_planted(n, c, rng.uniform(0.6, 0.95),
                                rng.uniform(0.0, 0.15), seed=tag)
    if kind < 0.95:
        return generate_star(n)
    return generate_complete(n)


class Corpora:
    """Seeded graph families shared across criteria, built lazily."""

    def __init__(self, quick: bool = False, seed: int = 20240601):
        self.quick = quick
        self.seed = seed
        self._cache: dict[str, object] = {}

    def _scale(self, full: int, quick: int) -> int:
        return quick if self.quick else full

    def _memo(self, key, builder):
        if key not in self._cache:
            self._cache[key] = builder()
        return self._cache[key]

    def small(self) -> list[Graph]:
        def build():
            rng = random.Random(f"{self.seed}:small")
            return [_random_graph(rng, 2, 8, self.seed * 1000 + i)
                    for i in range(self._scale(200, 40))]
        return self._memo("small", build)

    def small_exact(self):
        """(graph, agreement, solution, cost_x) per small instance."""
        def build():
            out = []
            for g in self.small():
                agree = metric.build_agreement_exact(g)
                sol = metric.build_metric_exact(g, agree)
                out.append((g, agree, sol, norms.fractional_disagreements(g, sol)))
            return out
        return self._memo("small_exact", build)

    def small_opts(self) -> list[np.ndarray]:
        return self._memo("small_opts",
                          lambda: [oracle.opt_table(g).values for g in self.small()])

    def metric50(self) -> list[Graph]:
        def build():
            rng = random.Random(f"{self.seed}:metric50")
            return [_random_graph(rng, 4, 50, self.seed * 2000 + i)
                    for i in range(self._scale(50, 10))]
        return self._memo("metric50", build)

    def medium200(self) -> list[Graph]:
        def build():
            rng = random.Random(f"{self.seed}:medium200")
            return [_random_graph(rng, 20, 200, self.seed * 3000 + i)
                    for i in range(self._scale(50, 8))]
        return self._memo("medium200", build)

    def medium_exact(self):
        def build():
            out = []
            for g in self.medium200():
                sol = metric.build_exact(g)
                out.append((g, sol, norms.fractional_disagreements(g, sol)))
            return out
        return self._memo("medium_exact", build)

    def density200(self) -> list[Graph]:
        def build():
            rng = random.Random(f"{self.seed}:density200")
            return [_random_graph(rng, 2, 200, self.seed * 4000 + i)
                    for i in range(self._scale(100, 20))]
        return self._memo("density200", build)

    def sampled500(self) -> list[Graph]:
        def build():
            rng = random.Random(f"{self.seed}:sampled500")
            out = []
            for i in range(self._scale(10, 2)):
                if rng.random() < 0.75:
                    # community structure so the agreement graph and the
                    # candidate -pairs are nonempty
                    c = 500 // rng.choice([8, 15, 25])
                    out.append(generate_planted(
                        500, c, rng.choice([0.85, 0.95]),
                        rng.choice([0.001, 0.005]),
                        seed=self.seed * 5000 + i))
                else:
                    out.append(generate_gnp(500, rng.choice([0.02, 0.1]),
                                            seed=self.seed * 5000 + i))
            return out
        return self._memo("sampled500", build)

    def sketch1000(self) -> list[Graph]:
        def build():
            rng = random.Random(f"{self.seed}:sketch1000")
            out = []
            for i in range(self._scale(6, 2)):
                n = rng.randint(400, 1000)
                if rng.random() < 0.5:
                    out.append(generate_gnp(n, rng.choice([0.01, 0.03, 0.08]),
                                            seed=self.seed * 6000 + i))
                else:
                    out.append(generate_planted(n, rng.randint(4, 20), 0.8,
                                                0.01, seed=self.seed * 6000 + i))
            return out
        return self._memo("sketch1000", build)


# --------------------------------------------------------------------------
# criteria


def check_triangle_inequality(corp: Corpora) -> CheckResult:
    """Exact solutions are metrics: x_uv + x_uw >= x_vw on all triples."""
    worst = 0.0
    checked = violations = 0
    for g in corp.metric50():
        sol = metric.build_exact(g)
        x = sol.to_dense()
        for u in range(g.n):
            slack = x[u][:, None] + x[u][None, :] - x
            worst = max(worst, float(-slack.min()))
            checked += g.n * g.n
            violations += int((slack < -TRIANGLE_TOL).sum())
    return CheckResult(1, "exact metric satisfies the triangle inequality",
                       violations == 0, checked, violations, worst)


def check_degree_similarity(corp: Corpora) -> CheckResult:
    """Kept edges join vertices of similar degree."""
    checked = violations = 0
    for g in corp.metric50():
        agree = metric.build_agreement_exact(g)
        hu, hv = agree.kept_edges()
        deg = g.deg
        lo = np.minimum(deg[hu], deg[hv])
        hi = np.maximum(deg[hu], deg[hv])
        checked += len(hu)
        violations += int(((1.0 - agree.beta) * hi > lo).sum())
    return CheckResult(2, "kept edges have similar endpoint degrees",
                       violations == 0, checked, violations)


def check_fractional_topk_gap(corp: Corpora) -> CheckResult:
    """Fractional costs stay within the certified top-k gap of the optimum."""
    worst = 0.0
    checked = violations = 0
    for (g, _, _, cost_x), opt in zip(corp.small_exact(), corp.small_opts()):
        sweep = norms.top_k_sweep(cost_x)
        for c, o in zip(sweep.tolist(), opt.tolist()):
            checked += 1
            if o > 0:
                worst = max(worst, c / o)
                if c > metric.TOPK_GAP * o:
                    violations += 1
            elif c > TRIANGLE_TOL:
                violations += 1
    return CheckResult(3, "fractional top-k cost within 12.66 of optimal",
                       violations == 0, checked, violations, worst)


def check_sequential_per_vertex(corp: Corpora) -> CheckResult:
    """Sequential rounding: cost_C(u) <= 5 cost_x(u) everywhere."""
    worst = 0.0
    checked = violations = 0
    small = [(g, sol, cx) for g, _, sol, cx in corp.small_exact()]
    for g, sol, cost_x in small + corp.medium_exact():
        assignment = rounding.round_sequential(g, sol)
        cost_c = norms.disagreements(g, assignment)
        checked += g.n
        excess = cost_c - rounding.SEQ_FACTOR * cost_x
        worst = max(worst, float(excess.max()))
        violations += int((excess > PER_VERTEX_TOL).sum())
    return CheckResult(4, "sequential rounding is a per-vertex 5-approximation",
                       violations == 0, checked, violations, worst)


def check_e2e_simultaneous(corp: Corpora) -> CheckResult:
    """Exact pipeline + sequential rounding: top-k ratio <= 63.3 for all k."""
    worst = 0.0
    checked = violations = 0
    for (g, _, sol, _), opt in zip(corp.small_exact(), corp.small_opts()):
        assignment = rounding.round_sequential(g, sol)
        sweep = norms.top_k_sweep(norms.disagreements(g, assignment))
        for c, o in zip(sweep.tolist(), opt.tolist()):
            checked += 1
            if o > 0:
                worst = max(worst, c / o)
                if c > E2E_SEQ_BOUND * o:
                    violations += 1
            elif c > TRIANGLE_TOL:
                violations += 1
    return CheckResult(5, "end-to-end simultaneous top-k ratio within 63.3",
                       violations == 0, checked, violations, worst)


def check_parallel_per_vertex(corp: Corpora, epsilon: float = 0.05,
                              seeds: int = 20) -> CheckResult:
    """Parallel rounding: cost_C(u) <= (5 + 55 eps) cost_x(u) on every run."""
    factor = rounding.parallel_factor(epsilon)
    worst = 0.0
    checked = violations = 0
    seeds = seeds if not corp.quick else 3
    for g, sol, cost_x in corp.medium_exact():
        for s in range(seeds):
            assignment, _ = rounding.round_parallel(g, sol, epsilon, seed=s)
            cost_c = norms.disagreements(g, assignment)
            checked += g.n
            excess = cost_c - factor * cost_x
            worst = max(worst, float(excess.max()))
            violations += int((excess > PER_VERTEX_TOL).sum())
    return CheckResult(6, "parallel rounding per-vertex (5 + 55 eps) bound",
                       violations == 0, checked, violations, worst)


def check_sampled_fidelity(corp: Corpora, epsilon: float = 0.2,
                           seeds: int = 5) -> CheckResult:
    """Sampled distances stay within (1 + eps) of the exact ones on all but
    a 1/n fraction of the support, and sampled triples respect the 3 eps
    triangle slack."""
    checked = violations = 0
    worst_frac = 0.0
    seeds = seeds if not corp.quick else 2
    triples = 10**6 if not corp.quick else 10**4
    for g in corp.sampled500():
        for s in range(seeds):
            cfg = sampled.SketchConfig(epsilon=epsilon, seed=s)
            sol, agree, cands = sampled.build_sampled(g, cfg)
            exact = metric.build_metric_exact(g, agree)
            xd = exact.to_dense()
            td = sol.to_dense()
            eu, ev = g.edge_array()
            bad = int((td[eu, ev] > (1 + epsilon) * xd[eu, ev] + 1e-12).sum())
            ku, kv = cands.us, cands.vs
            if len(ku):
                bad += int(((1 - td[ku, kv])
                            > (1 + epsilon) * (1 - xd[ku, kv]) + 1e-12).sum())
            supported = len(eu) + len(ku)
            frac = bad / max(supported, 1)
            worst_frac = max(worst_frac, frac)
            checked += 1
            if frac > 1.0 / g.n:
                violations += 1
            rng = np.random.default_rng(1000 + s)
            t = rng.integers(0, g.n, size=(triples, 3))
            slack = (td[t[:, 0], t[:, 1]] + td[t[:, 0], t[:, 2]]
                     + 3 * epsilon - td[t[:, 1], t[:, 2]])
            checked += 1
            if (slack < -TRIANGLE_TOL).any():
                violations += 1
    return CheckResult(7, "sampled construction fidelity and 3-eps triangles",
                       violations == 0, checked, violations, worst_frac)


def check_candidate_set(corp: Corpora, epsilon: float = 0.2,
                        seeds: int = 5) -> CheckResult:
    """|K| = O(m log n / eps) with constant at most 32, and close -pairs
    land in K in at least 99% of runs."""
    checked = violations = 0
    worst_c = 0.0
    want = hits = 0
    seeds = seeds if not corp.quick else 2
    for g in corp.sampled500():
        for s in range(seeds):
            cfg = sampled.SketchConfig(epsilon=epsilon, seed=s)
            agree = sampled.agreement_sketch(g, cfg)
            cands = sampled.candidate_pairs(g, agree, cfg)
            bound = 32.0 * max(g.m, 1) * math.log(g.n) / epsilon
            cval = len(cands) / (max(g.m, 1) * math.log(g.n) / epsilon)
            worst_c = max(worst_c, cval)
            checked += 1
            if len(cands) > bound:
                violations += 1
            exact = metric.build_metric_exact(g, agree)
            keys = cands.key_set(g.n)
            close = exact.xs <= 1.0 - epsilon
            non_edge = ~g.is_edge_batch(exact.us, exact.vs)
            sel = close & non_edge
            want += int(sel.sum())
            pair_keys = (exact.us[sel].astype(np.int64) * g.n
                         + exact.vs[sel])
            hits += sum(1 for kk in pair_keys.tolist() if kk in keys)
    cover = hits / want if want else 1.0
    if cover < 0.99:
        violations += 1
    return CheckResult(8, "candidate set small yet covers close -pairs",
                       violations == 0, checked + want, violations, worst_c,
                       detail=f"coverage={cover:.4f}")


def check_precluster_density(corp: Corpora) -> CheckResult:
    """Every multi-vertex output component is internally dense."""
    checked = violations = 0
    for g in corp.density200():
        res = precluster.precluster(g)
        rep = precluster.component_density_check(g, res)
        checked += rep["checked"]
        violations += len(rep["violations"])
    return CheckResult(9, "pre-clustering components are dense",
                       violations == 0, checked, violations)


def check_precluster_ratio(corp: Corpora) -> CheckResult:
    """Pre-clustering top-k ratio within the closed-form bound (359 at the
    defaults); also re-checks the parameter budget."""
    param_ok = (8.0 * precluster.DEFAULT_BETA + precluster.DEFAULT_LAMBDA
                <= precluster.PARAM_BUDGET + 1e-12)
    worst = 0.0
    checked = violations = 0 if param_ok else 1
    for g, opt in zip(corp.small(), corp.small_opts()):
        res = precluster.precluster(g)
        sweep = norms.top_k_sweep(norms.disagreements(g, res.assignment))
        for c, o in zip(sweep.tolist(), opt.tolist()):
            checked += 1
            if o > 0:
                worst = max(worst, c / o)
                if c > PRECLUSTER_BOUND * o:
                    violations += 1
            elif c > TRIANGLE_TOL:
                violations += 1
    return CheckResult(10, "pre-clustering simultaneous ratio within 359",
                       violations == 0, checked, violations, worst)


def check_norm_identities(corp: Corpora) -> CheckResult:
    """Ordered norms decompose into top-k sums; lp:1 and lp:inf coincide
    with top-n and top-1."""
    rng = np.random.default_rng(77)
    trials = 1000 if not corp.quick else 100
    checked = violations = 0
    worst = 0.0
    for _ in range(trials):
        n = int(rng.integers(1, 65))
        vec = rng.integers(0, n, size=n).astype(np.float64)
        w = np.sort(rng.random(n))[::-1]
        lhs = norms.ordered_norm(w, vec)
        wk = norms.topk_decomposition(w)
        rhs = float(sum(wk[k - 1] * norms.top_k(vec, k)
                        for k in range(1, n + 1)))
        worst = max(worst, abs(lhs - rhs))
        checked += 3
        if abs(lhs - rhs) > 1e-9:
            violations += 1
        if norms.lp_norm(vec, 1) != norms.top_k(vec, n):
            violations += 1
        if norms.lp_norm(vec, np.inf) != norms.top_k(vec, 1):
            violations += 1
    return CheckResult(11, "ordered norms reduce to top-k sums",
                       violations == 0, checked, violations, worst)


def check_sketch_agreement(corp: Corpora, epsilon: float = 0.2,
                           seeds: int = 5) -> CheckResult:
    """Sketch decisions match exact agreement outside the ambiguous band in
    at least 99.9% of per-edge decisions."""
    total = wrong = 0
    seeds = seeds if not corp.quick else 2
    for g in corp.sketch1000():
        us, vs = g.edge_array()
        deg = g.deg
        common = kernels.pair_common_counts(g.indptr, g.indices, us, vs)
        symdiff = deg[us] + deg[vs] - 2 * common
        m_uv = np.maximum(deg[us], deg[vs])
        keys = us.astype(np.int64) * g.n + vs
        for s in range(seeds):
            cfg = sampled.SketchConfig(epsilon=epsilon, seed=s)
            agree = sampled.agreement_sketch(g, cfg)
            hu, hv = agree.kept_edges()
            kept = np.isin(keys, hu.astype(np.int64) * g.n + hv)
            must_keep = symdiff <= cfg.beta * m_uv
            must_drop = symdiff >= (1 + epsilon) * cfg.beta * m_uv
            total += int(must_keep.sum()) + int(must_drop.sum())
            wrong += int((must_keep & ~kept).sum())
            wrong += int((must_drop & kept).sum())
    rate = 1.0 - wrong / max(total, 1)
    return CheckResult(12, "agreement sketch matches exact decisions",
                       rate >= 0.999, total, wrong, rate)


def check_round_ledger(corp: Corpora, epsilon: float = 0.05,
                       seeds: int = 20) -> CheckResult:
    """Parallel rounding on sparse 10^4-vertex graphs finishes within
    5 log^3(n)/eps rounds in at least 95% of runs (soft, reported)."""
    n = 10**4 if not corp.quick else 2000
    seeds = seeds if not corp.quick else 3
    bound = 5.0 * math.log(n) ** 3 / epsilon
    over = 0
    worst = 0
    for s in range(seeds):
        g = generate_planted(n, n // 8, 0.85, 2.0 / n, seed=9000 + s)
        sol = metric.build_exact(g)
        _, ledger = rounding.round_parallel(g, sol, epsilon, seed=s)
        worst = max(worst, ledger.num_rounds)
        if ledger.num_rounds > bound:
            over += 1
    return CheckResult(13, "round ledger stays within 5 log^3(n)/eps",
                       over <= max(0, int(0.05 * seeds)), seeds, over,
                       float(worst), detail=f"bound={bound:.0f}")


def check_determinism(corp: Corpora) -> CheckResult:
    """Byte-identical reports for identical run configurations."""
    configs = [
        RunConfig(gen="gnp:60,0.15", pipeline="exact", rounding="seq",
                  seed=5, oracle=False),
        RunConfig(gen="gnp:60,0.15", pipeline="exact", rounding="parallel",
                  seed=5),
        RunConfig(gen="planted:60,4,0.9,0.05", pipeline="sampled",
                  rounding="parallel", seed=5),
        RunConfig(gen="gnp:60,0.3", pipeline="precluster", seed=5),
        RunConfig(gen="complete:6", pipeline="exact", rounding="seq",
                  oracle=True, norms=("top:1", "lp:inf", "ordered:2,1,1,1,0,0")),
    ]
    checked = violations = 0
    for cfg in configs:
        first = report_json(run(cfg))
        second = report_json(run(cfg))
        checked += 1
        if first.encode() != second.encode():
            violations += 1
    return CheckResult(14, "pipelines are byte-identical given the config",
                       violations == 0, checked, violations)


CHECKS = {
    1: check_triangle_inequality,
    2: check_degree_similarity,
    3: check_fractional_topk_gap,
    4: check_sequential_per_vertex,
    5: check_e2e_simultaneous,
    6: check_parallel_per_vertex,
    7: check_sampled_fidelity,
    8: check_candidate_set,
    9: check_precluster_density,
    10: check_precluster_ratio,
    11: check_norm_identities,
    12: check_sketch_agreement,
    13: check_round_ledger,
    14: check_determinism,
}


def run_all(quick: bool = False, only: list[int] | None = None,
            seed: int = 20240601) -> list[CheckResult]:
    corp = Corpora(quick=quick, seed=seed)
    cids = sorted(only) if only else sorted(CHECKS)
    return [CHECKS[c](corp) for c in cids]
