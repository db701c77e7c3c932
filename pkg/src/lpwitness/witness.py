"""Dual-feasible points for LP decoding built from min-sum message logs.

The construction assigns every edge within distance 2L of a root check a
message from the log (attenuated by depth), sums the per-root assignments
over all roots, and rescales.  The variable-side equality constraints then
hold automatically because each root's contribution at a variable is an
exact rearrangement of its LLR, and the check-side constraints reduce to
inner products of message vectors with even-weight binary words.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import GirthTooSmall
from .minsum import MessageLog, choose_U, run_modified_msa
from .tanner import TannerGraph

MU, NU = 0, 1


@lru_cache(maxsize=None)
def even_weight_vectors(k: int) -> np.ndarray:
    """All 2^(k-1) binary vectors of length k and even Hamming weight,
    lexicographic order (zero vector first), as a (2^(k-1), k) uint8 array."""
    if k < 1:
        raise ValueError("need k >= 1")
    words = np.arange(1 << k, dtype=np.uint32)
    bits = (words[:, None] >> np.arange(k - 1, -1, -1, dtype=np.uint32)) & 1
    even = bits[bits.sum(axis=1) % 2 == 0]
    return even.astype(np.uint8)


@dataclass(frozen=True)
class AttenuationSchedule:
    """Depth attenuation factors: edges at distance 2l+1 or 2l+2 from a root
    are scaled by alpha[l]; alpha[0] is fixed to one."""

    alpha: tuple

    def __post_init__(self):
        a = tuple(float(x) for x in self.alpha)
        object.__setattr__(self, "alpha", a)
        if len(a) < 1 or any(x <= 0 for x in a):
            raise ValueError("alpha must be a nonempty positive sequence")
        if a[0] != 1.0:
            raise ValueError("alpha[0] must equal 1")

    @property
    def depth(self) -> int:
        return len(self.alpha)

    @property
    def beta(self) -> tuple:
        """Consecutive ratios alpha[l]/alpha[l-1]."""
        a = self.alpha
        return tuple(a[i] / a[i - 1] for i in range(1, len(a)))


def flat_schedule(depth: int) -> AttenuationSchedule:
    """No attenuation: alpha identically one."""
    return AttenuationSchedule(tuple(1.0 for _ in range(depth)))


def geometric_schedule(k_weight: int, depth: int) -> AttenuationSchedule:
    """alpha[l] = (K-1)^-l, the choice that makes consecutive ratios 1/(K-1)
    and pairs each mu round with the following nu round in the per-edge
    expansion.  Requires K > 2."""
    if k_weight <= 2:
        raise ValueError("geometric schedule needs K > 2")
    return AttenuationSchedule(tuple((k_weight - 1.0) ** -l for l in range(depth)))


@dataclass(frozen=True)
class DualAssignment:
    """Candidate dual point: raw per-edge values `tau` (before rescaling),
    the normalization divisor `scale`, and per-check values `theta` computed
    from tau/scale."""

    tau: np.ndarray
    theta: np.ndarray
    scale: float

    @property
    def scaled_tau(self) -> np.ndarray:
        return self.tau / self.scale


@dataclass(frozen=True)
class FeasibilityReport:
    feasible: bool
    max_equality_residual: float
    min_slack: float


def _ct_root_layers(graph: TannerGraph, j0: int, depth: int):
    """Edges of the computation tree rooted at check j0: (edge ids, levels,
    kinds) where an edge at distance 2l+1 has kind MU and level l, distance
    2l+2 kind NU and level l.  Raises GirthTooSmall if the depth-2L edge
    neighborhood is not a tree."""
    n = graph.n_vars
    root = n + j0
    parent = {root: -1}
    eids, levels, kinds = [], [], []
    frontier = [root]
    for d in range(1, 2 * depth + 1):
        nxt = []
        level, kind = ((d - 1) // 2, MU) if d % 2 else ((d - 2) // 2, NU)
        checks_expand = d % 2 == 1  # nodes at depth d-1 are checks
        for u in frontier:
            if checks_expand:
                j = u - n
                steps = [(i, i, j) for i in graph.check_neighbors[j]]
            else:
                steps = [(n + j, u, j) for j in graph.var_neighbors[u]]
            for w, i, j in steps:
                if w == parent[u]:
                    continue
                if w in parent:
                    raise GirthTooSmall(
                        f"depth-{depth} tree around check {j0} closes a "
                        f"cycle; need girth >= {4 * depth + 2}")
                parent[w] = u
                nxt.append(w)
                eids.append(graph.edge_index[(i, j)])
                levels.append(level)
                kinds.append(kind)
        frontier = nxt
    return (np.asarray(eids, dtype=np.int64),
            np.asarray(levels, dtype=np.int64),
            np.asarray(kinds, dtype=np.int64))


def _ct_structure(graph: TannerGraph, depth: int):
    """Concatenated CT edge layers over all roots (sorted), cached per graph.

    Returns (per_root, eids, levels, kinds) where per_root is a tuple of the
    individual root layer triples and the remaining arrays are their
    concatenation in root order.
    """
    cached = graph._ct_cache.get(depth)
    if cached is not None:
        return cached
    per_root = tuple(_ct_root_layers(graph, j0, depth)
                     for j0 in range(graph.n_checks))
    eids = np.concatenate([r[0] for r in per_root])
    levels = np.concatenate([r[1] for r in per_root])
    kinds = np.concatenate([r[2] for r in per_root])
    structure = (per_root, eids, levels, kinds)
    graph._ct_cache[depth] = structure
    return structure


def _layer_values(log: MessageLog, sched: AttenuationSchedule,
                  eids, levels, kinds) -> np.ndarray:
    depth = sched.depth
    alpha = np.asarray(sched.alpha)
    mu_vals = log.mu[depth - 1 - levels, eids]
    nu_vals = log.nu[depth - 1 - levels, eids]
    return alpha[levels] * np.where(kinds == MU, mu_vals, nu_vals)


def assign_ct(graph: TannerGraph, log: MessageLog, j0: int, depth: int,
              sched: AttenuationSchedule | None = None) -> dict:
    """Single-root assignment: sparse mapping (variable, check) -> value for
    the edges within distance 2L of check j0.

    An edge at distance 2l+1 carries alpha[l] * mu round L-l, an edge at
    distance 2l+2 carries alpha[l] * nu round L-l; edges farther than 2L are
    zero.  Zero-valued entries are omitted from the mapping (so with zero
    init and L=1 only the root's own edges appear).
    """
    if sched is None:
        sched = flat_schedule(depth)
    if sched.depth != depth or log.iterations < depth:
        raise ValueError("schedule and log must cover the requested depth")
    eids, levels, kinds = _ct_root_layers(graph, j0, depth)
    vals = _layer_values(log, sched, eids, levels, kinds)
    return {graph.edges[e]: float(v) for e, v in zip(eids, vals) if v != 0.0}


def aggregation_scale(j_weight: int, k_weight: int,
                      sched: AttenuationSchedule) -> float:
    """Normalization divisor T = sum_l alpha[l-1] * J * [(K-1)(J-1)]^(l-1):
    the attenuated number of root trees containing a fixed variable."""
    step = (k_weight - 1) * (j_weight - 1)
    return float(sum(sched.alpha[l - 1] * j_weight * step ** (l - 1)
                     for l in range(1, sched.depth + 1)))


def theta_all(tau: np.ndarray, graph: TannerGraph) -> np.ndarray:
    """Largest feasible per-check dual value: min over even-weight local
    words x of <x, tau restricted to the check>.  Always <= 0."""
    out = np.empty(graph.n_checks)
    degs = graph.check_degrees
    for k in np.unique(degs):
        idx = np.flatnonzero(degs == k)
        rows = graph.check_edge_order[
            np.concatenate([np.arange(graph.check_starts[j],
                                      graph.check_starts[j] + k) for j in idx])
        ].reshape(len(idx), k)
        b = even_weight_vectors(int(k)).astype(np.float64)
        out[idx] = (tau[rows] @ b.T).min(axis=1)
    return out


def theta_of(tau: np.ndarray, graph: TannerGraph, j: int) -> float:
    """Largest feasible dual value of check j for edge values tau."""
    local = tau[graph.edge_ids_of_check(j)]
    b = even_weight_vectors(len(local)).astype(np.float64)
    return float((b @ local).min())


def aggregate(graph: TannerGraph, log: MessageLog, depth: int,
              sched: AttenuationSchedule | None = None) -> DualAssignment:
    """Sum the per-root assignments over every root check.

    The result divided by aggregation_scale() is dual feasible on girth-
    sufficient graphs: theta is computed from the scaled values.
    """
    if sched is None:
        sched = flat_schedule(depth)
    if sched.depth != depth or log.iterations < depth:
        raise ValueError("schedule and log must cover the requested depth")
    j_wt, k_wt = graph.regular_degrees()
    _, eids, levels, kinds = _ct_structure(graph, depth)
    vals = _layer_values(log, sched, eids, levels, kinds)
    tau = np.bincount(eids, weights=vals, minlength=graph.n_edges)
    scale = aggregation_scale(j_wt, k_wt, sched)
    theta = theta_all(tau / scale, graph)
    return DualAssignment(tau=tau, theta=theta, scale=scale)


def closed_form_tau(graph: TannerGraph, log: MessageLog,
                    sched: AttenuationSchedule) -> np.ndarray:
    """Per-edge closed form of the aggregated assignment.

    On a girth-sufficient graph exactly [(K-1)(J-1)]^l roots see an edge at
    distance 2l+1 and (J-1) times as many at distance 2l+2, so the aggregate
    telescopes into that edge's own message history:

        tau_e = sum_l alpha[l] * [(K-1)(J-1)]^l * (mu[L-l]_e + (J-1) nu[L-l]_e).
    """
    j_wt, k_wt = graph.regular_degrees()
    depth = sched.depth
    step = (k_wt - 1) * (j_wt - 1)
    tau = np.zeros(graph.n_edges)
    for l in range(depth):
        coef = sched.alpha[l] * step**l
        tau += coef * (log.mu[depth - 1 - l] + (j_wt - 1) * log.nu[depth - 1 - l])
    return tau


def check_dual_feasible(d: DualAssignment, graph: TannerGraph, llrs,
                        tol: float = 1e-9) -> FeasibilityReport:
    """Verify both dual constraint families on tau/scale.

    Equality: sum of scaled tau over each variable's edges equals its LLR,
    within tol * max(1, max |LLR|).  Inequality: theta_j <= <x, tau_j/scale>
    for all even-weight x, within -tol.
    """
    llrs = np.asarray(llrs, dtype=np.float64)
    scaled = d.scaled_tau
    sums = np.bincount(graph.edge_var, weights=scaled, minlength=graph.n_vars)
    max_eq = float(np.abs(sums - llrs).max())
    min_slack = float((theta_all(scaled, graph) - d.theta).min())
    scale_tol = tol * max(1.0, float(np.abs(llrs).max()))
    feasible = max_eq <= scale_tol and min_slack >= -tol
    return FeasibilityReport(feasible=feasible, max_equality_residual=max_eq,
                             min_slack=min_slack)


def event_Aj(graph: TannerGraph, llrs, j0: int, depth: int,
             log: MessageLog | None = None) -> bool:
    """True when every nonzero even-weight word at the root costs more than
    the all-zeros word on the depth-L tree rooted at check j0, as summarized
    by zero-init modified min-sum messages (exact on trees)."""
    _ct_structure(graph, depth)  # girth gate
    if log is None:
        log = run_modified_msa(graph, llrs, depth, 0.0)
    local = log.mu[depth - 1][graph.edge_ids_of_check(j0)]
    b = even_weight_vectors(len(local)).astype(np.float64)[1:]
    return bool((b @ local).min() > 0.0)


def events_all(graph: TannerGraph, llrs, depth: int,
               log: MessageLog | None = None) -> np.ndarray:
    """Vector of event_Aj over all checks from a single zero-init run."""
    _ct_structure(graph, depth)
    if log is None:
        log = run_modified_msa(graph, llrs, depth, 0.0)
    mu_last = log.mu[depth - 1]
    out = np.empty(graph.n_checks, dtype=bool)
    degs = graph.check_degrees
    for k in np.unique(degs):
        idx = np.flatnonzero(degs == k)
        rows = graph.check_edge_order[
            np.concatenate([np.arange(graph.check_starts[j],
                                      graph.check_starts[j] + k) for j in idx])
        ].reshape(len(idx), k)
        b = even_weight_vectors(int(k)).astype(np.float64)[1:]
        out[idx] = (mu_last[rows] @ b.T).min(axis=1) > 0.0
    return out


@dataclass(frozen=True)
class WitnessResult:
    assignment: DualAssignment
    certified: bool
    dual_value: float
    report: FeasibilityReport
    failed_checks: tuple

    def to_json_dict(self) -> dict:
        return {
            "certified": bool(self.certified),
            "dual_value": float(self.dual_value),
            "theta": [float(t) for t in self.assignment.theta],
            "worst_equality_residual": float(self.report.max_equality_residual),
            "failed_checks": [int(j) for j in self.failed_checks],
        }


def witness(graph: TannerGraph, llrs, depth: int,
            tol: float = 1e-9) -> WitnessResult:
    """Build the certified-or-not dual point for the all-zeros codeword.

    Runs modified min-sum with the negative-offset initialization (so all mu
    stay positive), aggregates with the geometric schedule, and certifies
    when the point is feasible and its value sum(theta) vanishes; a zero dual
    value proves the all-zeros word is among the LP optima.  The certificate
    is one-sided: failure to certify does not imply an LP error.
    """
    llrs = np.asarray(llrs, dtype=np.float64)
    j_wt, k_wt = graph.regular_degrees()
    if j_wt <= 2 or k_wt <= 2:
        raise ValueError("witness construction needs J > 2 and K > 2")
    u = choose_U(llrs, j_wt)
    log = run_modified_msa(graph, llrs, depth, -u)
    sched = geometric_schedule(k_wt, depth)
    d = aggregate(graph, log, depth, sched)
    report = check_dual_feasible(d, graph, llrs, tol)
    theta_tol = tol * max(1.0, float(np.abs(llrs).max()))
    dual_val = float(d.theta.sum())
    certified = bool(report.feasible and dual_val >= -theta_tol)
    failed = tuple(int(j) for j in np.flatnonzero(d.theta < -theta_tol))
    return WitnessResult(assignment=d, certified=certified,
                         dual_value=dual_val, report=report,
                         failed_checks=failed)
