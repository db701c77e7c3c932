import json

import numpy as np
import pytest

from lpwitness.channel import bsc, sample_llrs
from lpwitness.errors import GirthTooSmall
from lpwitness.lp import dual_value, lp_decode
from lpwitness.minsum import choose_U, run_modified_msa
from lpwitness.tanner import ct_membership_count
from lpwitness.witness import (AttenuationSchedule, aggregate,
                               aggregation_scale, assign_ct,
                               check_dual_feasible, closed_form_tau,
                               even_weight_vectors, event_Aj, events_all,
                               flat_schedule, geometric_schedule, theta_of,
                               witness)


def test_even_weight_vectors():
    v3 = even_weight_vectors(3)
    assert [tuple(r) for r in v3] == [(0, 0, 0), (0, 1, 1), (1, 0, 1), (1, 1, 0)]
    assert even_weight_vectors(4).shape == (8, 4)
    assert [tuple(r) for r in even_weight_vectors(1)] == [(0,)]
    assert all(r.sum() % 2 == 0 for r in even_weight_vectors(6))


def test_schedules():
    s = geometric_schedule(4, 3)
    assert np.allclose(s.alpha, (1.0, 1 / 3, 1 / 9))
    assert np.allclose(s.beta, (1 / 3, 1 / 3))
    s2 = geometric_schedule(3, 2)
    assert np.allclose(s2.alpha, (1.0, 0.5))
    with pytest.raises(ValueError):
        geometric_schedule(2, 2)
    with pytest.raises(ValueError):
        AttenuationSchedule((0.5, 1.0))  # alpha[0] must be one
    with pytest.raises(ValueError):
        AttenuationSchedule((1.0, -1.0))


def test_assign_ct_single_check(single_check_graph):
    lam = np.array([2.0, 5.0, 3.0])
    log = run_modified_msa(single_check_graph, lam, 1, 0.0)
    tau = assign_ct(single_check_graph, log, 0, 1)
    assert tau == {(0, 0): 2.0, (1, 0): 5.0, (2, 0): 3.0}


def test_assign_ct_depth1_touches_only_root_edges(girth8_graph, rng):
    g = girth8_graph
    lam = rng.standard_normal(g.n_vars)
    log = run_modified_msa(g, lam, 1, 0.0)
    tau = assign_ct(g, log, 5, 1)
    assert set(tau) == {(i, 5) for i in g.check_neighbors[5]}
    for (i, j), val in tau.items():
        assert val == log.mu[0][g.edge_index[(i, j)]]


def test_assign_ct_flat_schedule_is_unattenuated(girth10_graph, rng):
    g = girth10_graph
    lam = rng.standard_normal(g.n_vars)
    log = run_modified_msa(g, lam, 2, 0.0)
    flat = assign_ct(g, log, 0, 2, flat_schedule(2))
    default = assign_ct(g, log, 0, 2)
    assert flat == default


def test_assign_ct_girth_gate(hamming_graph):
    lam = np.ones(7)
    log = run_modified_msa(hamming_graph, lam, 1, 0.0)
    with pytest.raises(GirthTooSmall):
        assign_ct(hamming_graph, log, 0, 1)


def test_aggregate_identity_unattenuated(girth10_graph, rng):
    g = girth10_graph
    lam = rng.standard_normal(g.n_vars)
    log = run_modified_msa(g, lam, 2, 0.0)
    d = aggregate(g, log, 2)
    assert d.scale == 21.0
    sums = np.bincount(g.edge_var, weights=d.tau, minlength=g.n_vars)
    rel = np.abs(sums - 21.0 * lam) / (21.0 * np.maximum(1.0, np.abs(lam)))
    assert rel.max() <= 1e-9


def test_aggregate_identity_attenuated(girth10_graph, rng):
    g = girth10_graph
    lam = rng.standard_normal(g.n_vars)
    log = run_modified_msa(g, lam, 2, 0.0)
    d = aggregate(g, log, 2, AttenuationSchedule((1.0, 1 / 3)))
    assert d.scale == 9.0
    sums = np.bincount(g.edge_var, weights=d.tau, minlength=g.n_vars)
    rel = np.abs(sums - 9.0 * lam) / (9.0 * np.maximum(1.0, np.abs(lam)))
    assert rel.max() <= 1e-9


def test_aggregate_matches_per_root_sum(girth10_graph, rng):
    g = girth10_graph
    lam = rng.standard_normal(g.n_vars)
    log = run_modified_msa(g, lam, 2, 0.0)
    sched = geometric_schedule(4, 2)
    d = aggregate(g, log, 2, sched)
    manual = np.zeros(g.n_edges)
    for j0 in range(g.n_checks):
        for (i, j), val in assign_ct(g, log, j0, 2, sched).items():
            manual[g.edge_index[(i, j)]] += val
    assert np.allclose(manual, d.tau, rtol=1e-9, atol=1e-12)


def test_aggregate_scale_is_membership_count(girth10_graph):
    # with alpha = 1 the divisor counts the trees containing a variable
    assert aggregation_scale(3, 4, flat_schedule(2)) == ct_membership_count(3, 4, 2)


def test_zero_llrs_give_zero_feasible_point(girth10_graph):
    g = girth10_graph
    lam = np.zeros(g.n_vars)
    log = run_modified_msa(g, lam, 2, 0.0)
    d = aggregate(g, log, 2)
    assert not d.tau.any()
    assert not d.theta.any()
    rep = check_dual_feasible(d, g, lam)
    assert rep.feasible and rep.max_equality_residual == 0.0
    assert dual_value(d) == 0.0


def test_telescoped_tau_matches_aggregate(girth10_graph, rng):
    g = girth10_graph
    lam = rng.standard_normal(g.n_vars)
    u = choose_U(lam, 3)
    log = run_modified_msa(g, lam, 2, -u)
    for sched in (geometric_schedule(4, 2), AttenuationSchedule((1.0, 0.7))):
        d = aggregate(g, log, 2, sched)
        direct = closed_form_tau(g, log, sched)
        scale = max(1.0, np.abs(d.tau).max())
        assert np.abs(d.tau - direct).max() / scale <= 1e-9


def test_geometric_closed_form_structure(girth10_graph, rng):
    # with alpha_l = (K-1)^-l the per-edge aggregate telescopes into
    # mu(L) + sum_t (J-1)^t (nu(L-t+1) + mu(L-t)) + (J-1)^L nu(1)
    g = girth10_graph
    lam = rng.standard_normal(g.n_vars)
    u = choose_U(lam, 3)
    depth = 2
    log = run_modified_msa(g, lam, depth, -u)
    d = aggregate(g, log, depth, geometric_schedule(4, depth))
    expected = log.mu[depth - 1].copy()
    for t in range(1, depth):
        expected += 2.0**t * (log.nu[depth - t] + log.mu[depth - t - 1])
    expected += 2.0**depth * log.nu[0]
    assert np.allclose(expected, d.tau, rtol=1e-9)


def test_theta_of_examples(single_check_graph):
    g = single_check_graph
    assert theta_of(np.array([2.0, 5.0, 3.0]), g, 0) == 0.0
    assert theta_of(np.array([-1.0, 3.0, 1.0]), g, 0) == 0.0
    assert theta_of(np.array([-5.0, 1.0, 1.0]), g, 0) == -4.0


def test_theta_nonpositive_random(girth8_graph, rng):
    tau = rng.standard_normal(girth8_graph.n_edges)
    for j in range(0, girth8_graph.n_checks, 9):
        assert theta_of(tau, girth8_graph, j) <= 0.0


def test_single_ct_assignment_not_feasible(girth10_graph, rng):
    g = girth10_graph
    lam = rng.standard_normal(g.n_vars) + 2.0
    log = run_modified_msa(g, lam, 2, 0.0)
    tau = np.zeros(g.n_edges)
    for (i, j), val in assign_ct(g, log, 0, 2).items():
        tau[g.edge_index[(i, j)]] = val
    from lpwitness.witness import DualAssignment, theta_all
    d = DualAssignment(tau=tau, theta=theta_all(tau, g), scale=1.0)
    rep = check_dual_feasible(d, g, lam)
    assert not rep.feasible  # distant variables have lambda != 0 but tau 0


def test_event_examples(single_check_graph):
    assert event_Aj(single_check_graph, np.array([2.0, -5.0, 3.0]), 0, 1) is False
    assert event_Aj(single_check_graph, np.array([2.0, -1.0, 3.0]), 0, 1) is True


def test_event_all_positive(girth10_graph, rng):
    lam = np.abs(rng.standard_normal(girth10_graph.n_vars)) + 0.01
    assert events_all(girth10_graph, lam, 2).all()


def test_event_girth_gate(hamming_graph):
    with pytest.raises(GirthTooSmall):
        event_Aj(hamming_graph, np.ones(7), 0, 1)


def test_witness_certifies_all_positive(girth10_graph, rng):
    lam = np.abs(rng.standard_normal(girth10_graph.n_vars)) + 0.01
    res = witness(girth10_graph, lam, 2)
    assert res.certified
    assert res.dual_value == pytest.approx(0.0, abs=1e-9)
    assert res.report.feasible
    assert not res.failed_checks


def test_witness_soundness_against_lp(girth10_graph):
    ch = bsc(0.02)
    certified = failures = 0
    for t in range(40):
        lam = sample_llrs(ch, girth10_graph.n_vars, [17, t])
        res = witness(girth10_graph, lam, 2)
        if res.certified:
            certified += 1
            sol = lp_decode(girth10_graph, lam, unique_check=False)
            assert abs(sol.value) <= 1e-8
            assert dual_value(res.assignment) <= sol.value + 1e-7
        else:
            failures += 1
    assert certified > 0  # p=0.02 is mild enough to certify most trials


def test_witness_failure_does_not_imply_lp_failure(girth10_graph):
    # hunt for an uncertified trial whose LP still decodes to all-zeros
    ch = bsc(0.05)
    for t in range(200):
        lam = sample_llrs(ch, girth10_graph.n_vars, [23, t])
        res = witness(girth10_graph, lam, 2)
        if not res.certified:
            sol = lp_decode(girth10_graph, lam, unique_check=False)
            if abs(sol.value) <= 1e-8:
                return
    pytest.fail("no one-sidedness example found at this noise level")


def test_witness_report_json(girth10_graph, rng):
    lam = np.abs(rng.standard_normal(girth10_graph.n_vars)) + 0.01
    res = witness(girth10_graph, lam, 2)
    d = json.loads(json.dumps(res.to_json_dict()))
    assert set(d) == {"certified", "dual_value", "theta",
                      "worst_equality_residual", "failed_checks"}
    assert len(d["theta"]) == girth10_graph.n_checks
    assert d["certified"] is True
