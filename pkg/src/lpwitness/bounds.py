"""Closed-form combinatorics and error bounds for depth-L root trees.

Counting conventions: a depth-L tree rooted at a check has variable levels
at odd distances 1, 3, ..., 2L-1 (the deepest variables are leaves).  A
"deviation" is a nonzero parity-satisfying assignment whose restriction to
the root's neighborhood is nonzero.
"""

from __future__ import annotations

import math

import numpy as np

from .tanner import TannerGraph

UNBOUNDED_DEPTH = math.inf


def min_tree_codeword_weight(j_weight: int, depth: int) -> int:
    """Minimal deviation weight 2 * ((J-1)^L - 1) / (J-2): two root-level
    ones, each forced to propagate one new one per child check."""
    if j_weight <= 2 or depth < 1:
        raise ValueError("requires J > 2 and L >= 1")
    return 2 * ((j_weight - 1) ** depth - 1) // (j_weight - 2)


def num_min_tree_codewords(j_weight: int, k_weight: int, depth: int) -> int:
    """Number of minimal-weight deviations, product form:

        K(K-1)/2 * prod_{t=1}^{L-1} (K-1)^(2 (J-1)^t).

    The compact rewrite K/2 * (K-1)^(2(1+(J-1)+...)) that sometimes appears
    counts the root factor as (K-1)^2 instead of K(K-1)/2's single power of
    (K-1) and disagrees with explicit tree enumeration for L >= 2; the
    product form is the one enumeration confirms (see the tree-words tests).
    """
    if j_weight <= 2 or k_weight <= 2 or depth < 1:
        raise ValueError("requires J > 2, K > 2, L >= 1")
    count = k_weight * (k_weight - 1) // 2
    for t in range(1, depth):
        count *= (k_weight - 1) ** (2 * (j_weight - 1) ** t)
    return count


def p_aj_union_bound(j_weight: int, k_weight: int, depth: int,
                     gamma: float) -> float:
    """Union-bound value (K/2) * ((K-1) gamma)^(2((J-1)^L - 1)/(J-2)) on the
    probability that some root-nonzero tree word beats the all-zeros word.
    May exceed 1; evaluated in the log domain to survive large depths."""
    if not 0.0 < gamma < 1.0:
        raise ValueError("gamma must lie in (0,1)")
    exponent = min_tree_codeword_weight(j_weight, depth)
    log_val = math.log(k_weight / 2.0) + exponent * math.log((k_weight - 1) * gamma)
    try:
        return math.exp(log_val)
    except OverflowError:
        return math.inf


def pw_union_bound(n: int, j_weight: int, k_weight: int, gamma: float,
                   depth: int) -> float:
    """Word-error union bound over the N*J/K checks: (N J / K) times the
    per-root bound, equalling (N J / 2) ((K-1) gamma)^(...)."""
    if n < 1 or n * j_weight % k_weight != 0:
        raise ValueError("need N >= 1 with N*J divisible by K")
    return (n * j_weight / k_weight) * p_aj_union_bound(
        j_weight, k_weight, depth, gamma)


def max_depth_for_girth(girth_value):
    """Largest usable tree depth: max L with 4L + 2 <= girth, i.e.
    floor((girth - 2) / 4); unbounded for forests."""
    if girth_value == math.inf:
        return UNBOUNDED_DEPTH
    g = int(girth_value)
    if g < 4 or g % 2 != 0:
        raise ValueError("girth must be an even number >= 4 or infinity")
    return (g - 2) // 4


def depth_from_blocklength(n: int, j_weight: int, k_weight: int,
                           kappa: float) -> int:
    """Depth budget log(N) / (2 log((J-1)(K-1))) - kappa, floored; the
    additive constant is supplied by the caller."""
    if n < 2 or j_weight < 2 or k_weight < 2:
        raise ValueError("need N >= 2 and J, K >= 2")
    step = (j_weight - 1) * (k_weight - 1)
    return math.floor(math.log(n) / (2.0 * math.log(step)) - kappa)


def error_exponents(j_weight: int, k_weight: int) -> dict:
    """Exponents of N in the two-sided word-error envelope
    2^(-const * N^exp): the achievable upper exponent
    log(J-1) / (2 log((J-1)(K-1))) and the converse lower exponent
    2 log(J-1) / log((J-1)(K-1)), which is exactly four times larger."""
    if j_weight <= 2 or k_weight <= 2:
        raise ValueError("requires J > 2 and K > 2")
    num = math.log(j_weight - 1)
    den = math.log((j_weight - 1) * (k_weight - 1))
    return {"upper_exp": num / (2.0 * den), "lower_exp": 2.0 * num / den}


def gamma_threshold(k_weight: int) -> float:
    """Bhattacharyya threshold 1/(K-1) below which the union bounds decay."""
    if k_weight <= 2:
        raise ValueError("requires K > 2")
    return 1.0 / (k_weight - 1)


def build_root_tree(j_weight: int, k_weight: int, depth: int) -> TannerGraph:
    """Explicit depth-L tree rooted at check 0: the root has K variable
    children, interior variables have J-1 child checks, interior checks have
    K-1 variable children, and variables at distance 2L-1 are leaves."""
    if j_weight < 2 or k_weight < 2 or depth < 1:
        raise ValueError("requires J >= 2, K >= 2, L >= 1")
    var_count = 0
    check_count = 1
    check_children: list[list[int]] = [[]]
    var_children: list[list[int]] = []
    level_checks = [0]
    for d in range(depth):
        level_vars = []
        for c in level_checks:
            width = k_weight if c == 0 else k_weight - 1
            for _ in range(width):
                check_children[c].append(var_count)
                var_children.append([])
                level_vars.append(var_count)
                var_count += 1
        level_checks = []
        if d == depth - 1:
            break
        for v in level_vars:
            for _ in range(j_weight - 1):
                var_children[v].append(check_count)
                check_children.append([])
                level_checks.append(check_count)
                check_count += 1
    check_neighbors = [[] for _ in range(check_count)]
    for c, kids in enumerate(check_children):
        check_neighbors[c].extend(kids)
    for v, kids in enumerate(var_children):
        for c in kids:
            check_neighbors[c].append(v)
    return TannerGraph.from_checks(var_count, check_neighbors)


def enumerate_tree_deviations(j_weight: int, k_weight: int, depth: int):
    """Brute-force arbitration oracle: enumerate every parity-satisfying
    assignment on the explicit tree, keep those whose root-local word is
    nonzero, and return (min weight, number of minimum-weight words)."""
    from .lp import gf2_nullspace_basis

    tree = build_root_tree(j_weight, k_weight, depth)
    basis = gf2_nullspace_basis(tree.adjacency_matrix())
    k = basis.shape[0]
    if k > 26:
        raise ValueError("tree too large to enumerate")
    root_vars = np.asarray(tree.check_neighbors[0])
    best_weight = None
    best_count = 0
    chunk = 1 << 16
    for start in range(0, 1 << k, chunk):
        idx = np.arange(start, min(start + chunk, 1 << k), dtype=np.uint64)
        sel = ((idx[:, None] >> np.arange(k, dtype=np.uint64)) & 1).astype(np.uint8)
        words = (sel @ basis) % 2
        rooted = words[words[:, root_vars].any(axis=1)]
        if rooted.size == 0:
            continue
        weights = rooted.sum(axis=1)
        w = int(weights.min())
        c = int((weights == w).sum())
        if best_weight is None or w < best_weight:
            best_weight, best_count = w, c
        elif w == best_weight:
            best_count += c
    return best_weight, best_count


def min_chain_costs(graph: TannerGraph, llrs, j0: int, depth: int) -> np.ndarray:
    """Independent oracle for the subtree cost summaries: for each variable i
    adjacent to root check j0, the minimum LLR cost of a one-assignment on
    the depth-L subtree below edge (i, j0) that uses the fewest possible
    ones (one per child check, recursively).  Pure tree DP, no message
    passing involved."""
    llrs = np.asarray(llrs, dtype=np.float64)
    n = graph.n_vars

    def var_cost(i: int, parent_check: int, levels_left: int) -> float:
        total = llrs[i]
        if levels_left == 0:
            return total
        for j in graph.var_neighbors[i]:
            if j == parent_check:
                continue
            total += min(var_cost(w, j, levels_left - 1)
                         for w in graph.check_neighbors[j] if w != i)
        return total
    if n and depth >= 1:
        return np.array([var_cost(i, j0, depth - 1)
                         for i in graph.check_neighbors[j0]])
    raise ValueError("need a nonempty graph and L >= 1")
