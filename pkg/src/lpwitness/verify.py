"""Property suites for the dual-witness machinery.

Each suite returns a dict with a boolean "passed" plus the measured
residuals/rates, and is driven both by the CLI `verify` subcommand and by
the acceptance tests, so the numbers printed on the console are exactly the
numbers the test suite checks.
"""

from __future__ import annotations

import numpy as np

from . import bounds as bounds_mod
from .channel import Channel, bsc, param_for_gamma, sample_llrs
from .lp import dual_value, lp_decode, ml_decode_bruteforce, polytope_constraints
from .minsum import choose_U, run_modified_msa
from .tanner import CodeParams, construct_regular
from .witness import (AttenuationSchedule, aggregate, closed_form_tau,
                      even_weight_vectors, flat_schedule, geometric_schedule,
                      witness)

REL_TOL = 1e-9


def _aggregation_residual(graph, llrs, depth, sched):
    log = run_modified_msa(graph, llrs, depth, 0.0)
    d = aggregate(graph, log, depth, sched)
    sums = np.bincount(graph.edge_var, weights=d.tau, minlength=graph.n_vars)
    target = d.scale * llrs
    rel = np.abs(sums - target) / (d.scale * np.maximum(1.0, np.abs(llrs)))
    return float(rel.max()), d.scale


def aggregation_suite(j_weight=3, k_weight=4, depth=2, n=480, min_girth=10,
                      trials=100, seed=7, alpha=None) -> dict:
    """Summed-over-roots assignment satisfies sum_j tau_ij = T * lambda_i.

    alpha=None checks the unattenuated identity; otherwise the supplied
    attenuation vector is used and T adapts accordingly.
    """
    graph = construct_regular(CodeParams(n, j_weight, k_weight, seed=seed),
                              min_girth)
    sched = flat_schedule(depth) if alpha is None else AttenuationSchedule(alpha)
    rng = np.random.default_rng(seed)
    worst = 0.0
    scale = None
    for _ in range(trials):
        llrs = rng.standard_normal(n)
        res, scale = _aggregation_residual(graph, llrs, depth, sched)
        worst = max(worst, res)
    return {"passed": worst <= REL_TOL, "max_rel_residual": worst,
            "scale": scale, "trials": trials, "n": n, "depth": depth}


def check_minima_suite(k_weights=(3, 4, 5), trials=10_000, seed=11) -> dict:
    """Check-side structure for positive inputs: one negative entry in
    mu + nu whose magnitude equals the smallest positive entry, and a
    non-negative minimum over all even-weight words."""
    rng = np.random.default_rng(seed)
    worst_min = np.inf
    structure_ok = True
    for k in k_weights:
        mu = rng.exponential(1.0, size=(trials, k)) + 1e-12
        part = np.partition(mu, 1, axis=1)
        m1, m2 = part[:, 0], part[:, 1]
        # negated-minimum update of each edge's outgoing message
        nu = -np.where(mu == m1[:, None], m2[:, None], m1[:, None])
        w = mu + nu
        neg_counts = (w < 0).sum(axis=1)
        pos_min = np.where(w > 0, w, np.inf).min(axis=1)
        neg_mag = np.where(w < 0, -w, -np.inf).max(axis=1)
        if not (np.all(neg_counts == 1)
                and np.allclose(pos_min, neg_mag, rtol=1e-12, atol=1e-12)):
            structure_ok = False
        b = even_weight_vectors(k).astype(np.float64)
        worst_min = min(worst_min, float((w @ b.T).min()))
    return {"passed": structure_ok and worst_min >= -1e-12,
            "structure_ok": structure_ok, "worst_even_min": worst_min,
            "trials": trials}


def init_offset_suite(j_weight=3, k_weight=4, n=480, min_girth=10,
                      depths=(1, 2), trials=100, seed=13) -> dict:
    """Reconciliation of the negative-offset initialization.

    Exact for every input: mu with init -U equals the minimal-chain cost
    oracle plus (J-1)^L * U on each root edge.  The coarser literal form
    mu_U - mu_0 = (J-1)^L * U additionally requires the zero-init minimizers
    to use minimal chains; it always holds at L=1 and holds for nonnegative
    LLRs at deeper L, and is checked in exactly that domain.
    """
    graph = construct_regular(CodeParams(n, j_weight, k_weight, seed=seed),
                              min_girth)
    rng = np.random.default_rng(seed)
    roots = rng.integers(0, graph.n_checks, size=trials)
    worst_oracle = 0.0
    worst_literal = 0.0
    for depth in depths:
        offset = float((j_weight - 1) ** depth)
        for t in range(trials):
            llrs = rng.standard_normal(n)
            u = choose_U(llrs, j_weight)
            mu_u = run_modified_msa(graph, llrs, depth, -u).mu[depth - 1]
            j0 = int(roots[t])
            eids = graph.edge_ids_of_check(j0)
            rho = bounds_mod.min_chain_costs(graph, llrs, j0, depth)
            rel = np.abs(mu_u[eids] - (rho + offset * u)) / max(1.0, offset * u)
            worst_oracle = max(worst_oracle, float(rel.max()))

            # literal two-run comparison in its validity domain
            lit_llrs = llrs if depth == 1 else np.abs(llrs)
            u2 = choose_U(lit_llrs, j_weight)
            mu_u2 = run_modified_msa(graph, lit_llrs, depth, -u2).mu[depth - 1]
            mu_02 = run_modified_msa(graph, lit_llrs, depth, 0.0).mu[depth - 1]
            rel2 = np.abs(mu_u2 - mu_02 - offset * u2) / max(1.0, offset * u2)
            worst_literal = max(worst_literal, float(rel2.max()))
    return {"passed": worst_oracle <= REL_TOL and worst_literal <= REL_TOL,
            "max_rel_residual_oracle": worst_oracle,
            "max_rel_residual_literal": worst_literal,
            "depths": tuple(depths), "trials": trials}


def telescoping_suite(j_weight=3, k_weight=4, n=480, min_girth=10, depth=2,
                      trials=20, seed=17, geometric=True) -> dict:
    """Per-edge closed form of the aggregate equals the summed-over-roots
    computation, for both the geometric and a generic schedule."""
    graph = construct_regular(CodeParams(n, j_weight, k_weight, seed=seed),
                              min_girth)
    rng = np.random.default_rng(seed)
    if geometric:
        sched = geometric_schedule(k_weight, depth)
    else:
        sched = AttenuationSchedule(
            (1.0,) + tuple(rng.uniform(0.2, 2.0, depth - 1)))
    worst = 0.0
    for _ in range(trials):
        llrs = rng.standard_normal(n)
        u = choose_U(llrs, j_weight)
        log = run_modified_msa(graph, llrs, depth, -u)
        d = aggregate(graph, log, depth, sched)
        direct = closed_form_tau(graph, log, sched)
        scale = max(1.0, float(np.abs(d.tau).max()))
        worst = max(worst, float(np.abs(d.tau - direct).max()) / scale)
    return {"passed": worst <= REL_TOL, "max_rel_diff": worst,
            "geometric": geometric, "trials": trials}


def tree_words_suite(j_weight=3, k_weights=(3, 4), depths=(1, 2)) -> dict:
    """Brute-force enumeration on explicit trees arbitrates the weight and
    count formulas (and documents that the compact count rewrite differs)."""
    all_ok = True
    rows = []
    for k in k_weights:
        for depth in depths:
            w, c = bounds_mod.enumerate_tree_deviations(j_weight, k, depth)
            wf = bounds_mod.min_tree_codeword_weight(j_weight, depth)
            cf = bounds_mod.num_min_tree_codewords(j_weight, k, depth)
            compact = (k / 2) * (k - 1) ** (
                2 * sum((j_weight - 1) ** t for t in range(depth)))
            ok = (w == wf) and (c == cf)
            all_ok = all_ok and ok
            rows.append({"k": k, "depth": depth, "enum_weight": w,
                         "enum_count": c, "formula_weight": wf,
                         "formula_count": cf, "compact_count": compact,
                         "ok": ok})
    return {"passed": all_ok, "cases": rows}


def certificate_suite(n=480, min_girth=10, depth=2, p=0.01, trials=1000,
                      seed=23, j_weight=3, k_weight=4) -> dict:
    """Certificate soundness: every certified trial must have LP value 0
    (within 1e-8) so the all-zeros word is among the LP optima."""
    graph = construct_regular(CodeParams(n, j_weight, k_weight, seed=seed),
                              min_girth)
    cons = polytope_constraints(graph)
    ch = bsc(p)
    certified = 0
    violations = 0
    worst = 0.0
    for t in range(trials):
        llrs = sample_llrs(ch, n, [seed, t])
        res = witness(graph, llrs, depth)
        if not res.certified:
            continue
        certified += 1
        sol = lp_decode(graph, llrs, constraints=cons, unique_check=False)
        worst = max(worst, abs(sol.value))
        if abs(sol.value) > 1e-8:
            violations += 1
        if dual_value(res.assignment) > sol.value + 1e-7:
            violations += 1
    return {"passed": violations == 0, "trials": trials,
            "certified": certified, "violations": violations,
            "worst_certified_lp_value": worst}


def aj_bound_suite(j_weight=3, k_weight=4, depth=2, gamma=0.2,
                   trials=10_000, seed=29) -> dict:
    """Empirical failure rate of the root event on explicit trees stays
    below the union bound (with binomial 3-sigma slack)."""
    tree = bounds_mod.build_root_tree(j_weight, k_weight, depth)
    p = param_for_gamma("bsc", gamma)
    ch = Channel("bsc", p)
    b = even_weight_vectors(k_weight).astype(np.float64)[1:]
    root_eids = tree.edge_ids_of_check(0)
    failures = 0
    for t in range(trials):
        llrs = sample_llrs(ch, tree.n_vars, [seed, t])
        log = run_modified_msa(tree, llrs, depth, 0.0)
        if (b @ log.mu[depth - 1][root_eids]).min() <= 0.0:
            failures += 1
    phat = failures / trials
    bound = bounds_mod.p_aj_union_bound(j_weight, k_weight, depth, gamma)
    sigma = float(np.sqrt(max(phat * (1 - phat), 1.0 / trials) / trials))
    return {"passed": phat <= bound + 3 * sigma, "empirical": phat,
            "bound": bound, "sigma": sigma, "trials": trials,
            "bsc_p": p, "depth": depth}


def lp_ml_suite(n_matrices=50, llr_trials=100, seed=31, tol=1e-8) -> dict:
    """LP relaxation versus exhaustive ML on small random regular codes:
    LP value never exceeds ML value, and integral LP optima are ML optima."""
    rng = np.random.default_rng(seed)
    combos = [(2, 3, 12), (2, 4, 12), (3, 3, 9), (3, 4, 12), (2, 3, 9),
              (3, 3, 12), (3, 4, 8), (2, 4, 8)]
    checked = 0
    integral_hits = 0
    violations = 0
    for m_idx in range(n_matrices):
        j_wt, k_wt, n = combos[m_idx % len(combos)]
        graph = construct_regular(
            CodeParams(n, j_wt, k_wt, seed=1000 + m_idx), 4)
        cons = polytope_constraints(graph)
        for _ in range(llr_trials):
            llrs = rng.standard_normal(n)
            sol = lp_decode(graph, llrs, constraints=cons, unique_check=False)
            _, ml_val = ml_decode_bruteforce(graph, llrs)
            checked += 1
            if sol.value > ml_val + tol:
                violations += 1
            if sol.is_integral:
                integral_hits += 1
                if abs(sol.value - ml_val) > tol:
                    violations += 1
    return {"passed": violations == 0, "instances": checked,
            "integral": integral_hits, "violations": violations}


SUITES = {
    "aggregation": aggregation_suite,
    "check-minima": check_minima_suite,
    "init-offset": init_offset_suite,
    "telescoping": telescoping_suite,
    "tree-words": tree_words_suite,
    "certificate": certificate_suite,
    "aj-bound": aj_bound_suite,
    "lp-ml": lp_ml_suite,
}
