import itertools

import numpy as np
import pytest

from lpwitness.errors import DegreeTooSmall
from lpwitness.minsum import choose_U, run_modified_msa, run_standard_msa
from lpwitness.tanner import TannerGraph


def test_single_check_hand_values(single_check_graph):
    lam = np.array([2.0, 5.0, 3.0])
    log = run_modified_msa(single_check_graph, lam, 1, 0.0)
    assert np.array_equal(log.mu[0], lam)
    assert np.array_equal(log.nu[1], [-3.0, -2.0, -2.0])
    w = log.mu[0] + log.nu[1]
    assert np.array_equal(w, [-1.0, 3.0, 1.0])
    # exactly one negative entry whose magnitude is the smallest positive one
    assert (w < 0).sum() == 1
    assert np.isclose(-w[w < 0][0], w[w > 0].min())

    slog, hard = run_standard_msa(single_check_graph, lam, 1)
    assert np.array_equal(slog.nu[1], [3.0, 2.0, 2.0])
    assert not hard.any()


def test_zero_llrs_zero_fixed_point(girth8_graph):
    lam = np.zeros(girth8_graph.n_vars)
    log = run_modified_msa(girth8_graph, lam, 3, 0.0)
    assert not log.mu.any()
    assert not log.nu.any()


def test_standard_equals_negated_modified(girth8_graph, rng):
    lam = rng.standard_normal(girth8_graph.n_vars)
    mod = run_modified_msa(girth8_graph, lam, 4, 0.0)
    std, _ = run_standard_msa(girth8_graph, lam, 4)
    assert np.allclose(std.nu, -mod.nu)
    assert np.allclose(std.mu, mod.mu)


def test_hard_decision_all_zeros_for_positive_llrs(girth8_graph, rng):
    lam = np.abs(rng.standard_normal(girth8_graph.n_vars)) + 0.05
    _, hard = run_standard_msa(girth8_graph, lam, 3)
    assert not hard.any()


def test_rearranged_identity_every_round(girth8_graph, rng):
    g = girth8_graph
    lam = rng.standard_normal(g.n_vars)
    for init in (0.0, -choose_U(lam, 3)):
        log = run_modified_msa(g, lam, 3, init)
        for s in range(3):
            per_var = np.bincount(g.edge_var, weights=log.nu[s],
                                  minlength=g.n_vars)
            lhs = log.mu[s] + per_var[g.edge_var] - log.nu[s]
            assert np.allclose(lhs, lam[g.edge_var], rtol=1e-12, atol=1e-12)


def test_offset_init_keeps_mu_positive(girth10_graph, rng):
    g = girth10_graph
    for _ in range(10):
        lam = rng.standard_normal(g.n_vars) * 3.0
        u = choose_U(lam, 3)
        log = run_modified_msa(g, lam, 4, -u)
        assert (log.mu > 0).all()
        assert (log.nu <= 0).all()


def test_check_minima_structure_random_trials(rng):
    # >= 1e4 random positive configurations across K in {3,4,5}
    for k in (3, 4, 5):
        mu = rng.exponential(1.0, size=(4000, k)) + 1e-9
        part = np.partition(mu, 1, axis=1)
        m1, m2 = part[:, 0], part[:, 1]
        nu = -np.where(mu == m1[:, None], m2[:, None], m1[:, None])
        w = mu + nu
        assert ((w < 0).sum(axis=1) == 1).all()
        pos_min = np.where(w > 0, w, np.inf).min(axis=1)
        neg = -w[w < 0]
        assert np.allclose(pos_min, neg, rtol=1e-12)


def subtree_vars_and_checks(graph, i, j_from, hops):
    """Collect the subtree hanging off variable i away from check j_from."""
    vars_in, checks_in = {i}, set()
    frontier = [("v", i)]
    blocked = {("v", i): j_from}
    for _ in range(hops):
        nxt = []
        for kind, node in frontier:
            if kind == "v":
                for j in graph.var_neighbors[node]:
                    if j == blocked.get(("v", node)):
                        continue
                    if j not in checks_in:
                        checks_in.add(j)
                        nxt.append(("c", j))
            else:
                for w in graph.check_neighbors[node]:
                    if w not in vars_in:
                        vars_in.add(w)
                        nxt.append(("v", w))
                        blocked[("v", w)] = node
        frontier = nxt
    return sorted(vars_in), sorted(checks_in)


def brute_force_message(graph, llrs, i, j, hops):
    """Min-cost difference over all parity-valid subtree configurations with
    x_i fixed to 1 versus 0 (exact tree oracle for converged min-sum)."""
    vars_in, checks_in = subtree_vars_and_checks(graph, i, j, hops)
    idx = {v: t for t, v in enumerate(vars_in)}
    best = {0: np.inf, 1: np.inf}
    for bits in itertools.product((0, 1), repeat=len(vars_in)):
        ok = True
        for c in checks_in:
            parity = sum(bits[idx[v]] for v in graph.check_neighbors[c]
                         if v in idx) % 2
            if parity:
                ok = False
                break
        if not ok:
            continue
        cost = sum(llrs[v] * bits[idx[v]] for v in vars_in)
        b = bits[idx[i]]
        best[b] = min(best[b], cost)
    return best[1] - best[0]


def test_tree_exactness_against_brute_force():
    # two joined checks: a 5-variable tree
    g = TannerGraph.from_checks(5, [[0, 1, 2], [2, 3, 4]])
    rng = np.random.default_rng(3)
    for _ in range(5):
        lam = rng.standard_normal(5)
        log, _ = run_standard_msa(g, lam, 4)
        for e, (i, j) in enumerate(g.edges):
            oracle = brute_force_message(g, lam, i, j, hops=8)
            assert np.isclose(log.mu[-1][e], oracle, atol=1e-12), (i, j)


def test_degree_one_variables_supported():
    g = TannerGraph.from_checks(3, [[0, 1], [1, 2]])
    lam = np.array([1.0, -2.0, 0.5])
    log = run_modified_msa(g, lam, 1, 0.0)
    # variables 0 and 2 have degree one: mu equals lambda
    assert log.mu[0][g.edge_index[(0, 0)]] == 1.0
    assert log.mu[0][g.edge_index[(2, 1)]] == 0.5


def test_choose_u():
    assert choose_U(np.array([2.0, -3.0, 1.0]), 3) == 4.0
    assert choose_U(np.array([2.0, 3.0]), 3) == 3.0
    assert choose_U(np.array([-1.0, 5.0]), 4) == 1.5
    with pytest.raises(DegreeTooSmall):
        choose_U(np.array([1.0]), 2)


def test_message_log_json_schema(single_check_graph):
    lam = np.array([2.0, 5.0, 3.0])
    log = run_modified_msa(single_check_graph, lam, 2, 0.0)
    d = log.to_json_dict()
    assert d["L"] == 2
    assert d["init"] == 0.0
    assert len(d["mu"]) == 2 and len(d["nu"]) == 3
    assert len(d["mu"][0]) == single_check_graph.n_edges


def test_iteration_indexing_one_based(single_check_graph):
    lam = np.array([2.0, 5.0, 3.0])
    log = run_modified_msa(single_check_graph, lam, 2, 0.0)
    assert np.array_equal(log.nu_iter(1), np.zeros(3))
    assert np.array_equal(log.mu_iter(1), lam)


def test_check_minima_structure_degenerates_gracefully_on_ties():
    # two tied smallest magnitudes: no negative entry survives in mu + nu,
    # and the even-weight minimum is still non-negative
    g = TannerGraph.from_checks(4, [[0, 1, 2, 3]])
    lam = np.array([2.0, 2.0, 5.0, 7.0])
    log = run_modified_msa(g, lam, 1, 0.0)
    w = log.mu[0] + log.nu[1]
    assert np.array_equal(w, [0.0, 0.0, 3.0, 5.0])
    from lpwitness.witness import even_weight_vectors
    b = even_weight_vectors(4).astype(float)
    assert (b @ w).min() >= 0.0
