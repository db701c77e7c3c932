"""Min-sum message passing with a full per-iteration message log.

Two engines share one kernel:

* standard min-sum: check messages are signed minima of the incoming
  magnitudes, zero initialization, hard decision from the final sums;
* modified min-sum: the check message is negated, which makes every
  variable-side update an exact rearrangement of lambda_i and lets the
  message log double as raw material for dual assignments.

Messages are stored per edge in the graph's lexicographic (variable, check)
edge order: mu[s-1] is the s-th variable-to-check round, nu[s-1] the s-th
check-to-variable round, nu[0] being the initialization.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegreeTooSmall
from .tanner import TannerGraph


@dataclass(frozen=True)
class MessageLog:
    """All messages of an L-iteration run: mu has shape (L, E), nu has shape
    (L+1, E) with nu[0] equal to init_value everywhere."""

    mu: np.ndarray
    nu: np.ndarray
    init_value: float

    @property
    def iterations(self) -> int:
        return self.mu.shape[0]

    def mu_iter(self, s: int) -> np.ndarray:
        """Variable-to-check messages of round s (1-based)."""
        return self.mu[s - 1]

    def nu_iter(self, s: int) -> np.ndarray:
        """Check-to-variable messages of round s (1-based; s=1 is the init)."""
        return self.nu[s - 1]

    def to_json_dict(self) -> dict:
        return {
            "L": int(self.iterations),
            "init": float(self.init_value),
            "mu": self.mu.tolist(),
            "nu": self.nu.tolist(),
        }


def _var_to_check(graph: TannerGraph, llrs, nu, sign: float) -> np.ndarray:
    """mu_{i,j} = lambda_i + sign * sum_{j' != j} nu_{i,j'} over edges."""
    per_var = np.bincount(graph.edge_var, weights=nu, minlength=graph.n_vars)
    return llrs[graph.edge_var] + sign * (per_var[graph.edge_var] - nu)


def _check_to_var(graph: TannerGraph, mu, negate: bool) -> np.ndarray:
    """Signed minimum over the check's other edges, optionally negated."""
    order = graph.check_edge_order
    starts = graph.check_starts
    gid = graph.edge_check[order]

    a = np.abs(mu[order])
    neg = (mu[order] < 0).astype(np.int64)
    min1 = np.minimum.reduceat(a, starts)
    is_min = a == min1[gid]
    n_min = np.add.reduceat(is_min.astype(np.int64), starts)
    masked = np.where(is_min, np.inf, a)
    min2 = np.minimum.reduceat(masked, starts)
    neg_tot = np.add.reduceat(neg, starts)

    mag = np.where(is_min & (n_min[gid] == 1), min2[gid], min1[gid])
    odd = (neg_tot[gid] - neg) % 2 == 1
    signed = np.where(odd, -mag, mag)
    if negate:
        signed = -signed
    out = np.empty_like(signed)
    out[order] = signed
    return out


def _run(graph, llrs, iterations, init_value, modified):
    llrs = np.asarray(llrs, dtype=np.float64)
    if llrs.shape != (graph.n_vars,):
        raise ValueError("LLR vector length does not match the graph")
    if iterations < 1:
        raise ValueError("need at least one iteration")
    if np.any(graph.check_degrees < 2):
        raise ValueError("checks of degree < 2 are not supported")
    e = graph.n_edges
    mu = np.empty((iterations, e))
    nu = np.empty((iterations + 1, e))
    nu[0] = init_value
    var_sign = -1.0 if modified else 1.0
    for s in range(iterations):
        mu[s] = _var_to_check(graph, llrs, nu[s], var_sign)
        nu[s + 1] = _check_to_var(graph, mu[s], negate=modified)
    return MessageLog(mu=mu, nu=nu, init_value=float(init_value))


def run_modified_msa(graph: TannerGraph, llrs, iterations: int,
                     init_value: float = 0.0) -> MessageLog:
    """Modified (negated check update) min-sum for a fixed iteration count.

    The returned log satisfies, exactly up to float rounding and for every
    edge and round s,

        mu[s]_{i,j} + sum_{j' in N(i) \\ {j}} nu[s]_{i,j'} = lambda_i.
    """
    return _run(graph, llrs, iterations, init_value, modified=True)


def run_standard_msa(graph: TannerGraph, llrs, iterations: int):
    """Standard min-sum with zero init.  Returns (MessageLog, hard decision).

    The hard decision takes sign(lambda_i + sum_j nu_{i,j}) after the last
    round, ties decoding to 0.
    """
    log = _run(graph, llrs, iterations, 0.0, modified=False)
    llrs = np.asarray(llrs, dtype=np.float64)
    total = llrs + np.bincount(graph.edge_var, weights=log.nu[-1],
                               minlength=graph.n_vars)
    return log, (total < 0).astype(np.uint8)


def choose_U(llrs, j_weight: int) -> float:
    """Initialization magnitude guaranteeing strictly positive mu at every
    round: |min(lambda)|/(J-2) plus a unit margin.  Requires J > 2."""
    if j_weight <= 2:
        raise DegreeTooSmall("variable degree must exceed 2")
    llrs = np.asarray(llrs, dtype=np.float64)
    return abs(float(llrs.min())) / (j_weight - 2) + 1.0
