"""Tanner graphs: construction, validation, girth, and alist serialization.

A Tanner graph is the bipartite adjacency structure of a binary parity-check
matrix: variable nodes on one side, check nodes on the other, one edge per
nonzero entry.  Graphs are immutable after construction; all neighbor lists
are kept sorted ascending so that identical inputs produce identical objects.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass

import numpy as np

from .errors import InconsistentWeights, InfeasibleGirth, ParseError


@dataclass(frozen=True)
class CodeParams:
    """Parameters of a random (J,K)-regular code: N variables of degree J,
    N*J/K checks of degree K."""

    n: int
    j_weight: int
    k_weight: int
    seed: int = 0

    def __post_init__(self):
        if self.j_weight < 2 or self.k_weight < 2:
            raise ValueError("column and row weights must be at least 2")
        if self.n * self.j_weight % self.k_weight != 0:
            raise ValueError(
                f"N*J = {self.n * self.j_weight} is not divisible by K = {self.k_weight}"
            )

    @property
    def n_checks(self) -> int:
        return self.n * self.j_weight // self.k_weight


class TannerGraph:
    """Immutable bipartite adjacency of N variable nodes and M check nodes.

    Edges are canonically keyed as (variable, check) pairs and carry a dense
    edge index in lexicographic order, which the message-passing and dual
    modules use for array storage.
    """

    def __init__(self, var_neighbors, n_checks):
        vn = tuple(tuple(sorted(set(row))) for row in var_neighbors)
        self.var_neighbors = vn
        self.n_vars = len(vn)
        self.n_checks = int(n_checks)
        for i, row in enumerate(vn):
            if len(row) != len(var_neighbors[i]):
                raise ValueError(f"repeated edge at variable {i}")
            if row and (row[0] < 0 or row[-1] >= self.n_checks):
                raise ValueError(f"check index out of range at variable {i}")

        cn = [[] for _ in range(self.n_checks)]
        for i, row in enumerate(vn):
            for j in row:
                cn[j].append(i)
        self.check_neighbors = tuple(tuple(c) for c in cn)

        # Lexicographic (variable, check) edge order.
        self.edges = tuple((i, j) for i in range(self.n_vars) for j in vn[i])
        self.edge_index = {e: k for k, e in enumerate(self.edges)}
        self.n_edges = len(self.edges)
        self.edge_var = np.fromiter((e[0] for e in self.edges), dtype=np.int64,
                                    count=self.n_edges)
        self.edge_check = np.fromiter((e[1] for e in self.edges), dtype=np.int64,
                                      count=self.n_edges)
        # Edge ids grouped by check, used for check-side message updates.
        order = np.lexsort((self.edge_var, self.edge_check))
        self.check_edge_order = order
        counts = np.bincount(self.edge_check, minlength=self.n_checks)
        self.check_degrees = counts
        self.check_starts = np.concatenate(([0], np.cumsum(counts)[:-1])).astype(np.int64)
        self.var_degrees = np.bincount(self.edge_var, minlength=self.n_vars)
        self._ct_cache = {}

    def __eq__(self, other):
        return (isinstance(other, TannerGraph)
                and self.n_checks == other.n_checks
                and self.var_neighbors == other.var_neighbors)

    def __hash__(self):
        return hash((self.n_checks, self.var_neighbors))

    def __repr__(self):
        return (f"TannerGraph(n_vars={self.n_vars}, n_checks={self.n_checks}, "
                f"n_edges={self.n_edges})")

    @classmethod
    def from_checks(cls, n_vars, check_neighbors):
        """Build from per-check variable lists (rows of H)."""
        vn = [[] for _ in range(n_vars)]
        for j, row in enumerate(check_neighbors):
            for i in row:
                vn[i].append(j)
        return cls(vn, len(check_neighbors))

    def adjacency_matrix(self) -> np.ndarray:
        """Dense binary parity-check matrix H (checks x variables)."""
        h = np.zeros((self.n_checks, self.n_vars), dtype=np.uint8)
        for i, j in self.edges:
            h[j, i] = 1
        return h

    def regular_degrees(self) -> tuple[int, int]:
        """Return (J, K) for a regular graph, else raise ValueError."""
        if self.n_vars == 0 or self.n_checks == 0:
            raise ValueError("empty graph has no degrees")
        j = int(self.var_degrees[0])
        k = int(self.check_degrees[0])
        if not (np.all(self.var_degrees == j) and np.all(self.check_degrees == k)):
            raise ValueError("graph is not (J,K)-regular")
        return j, k

    def is_regular(self, j_weight, k_weight) -> bool:
        try:
            return self.regular_degrees() == (j_weight, k_weight)
        except ValueError:
            return False

    def edge_ids_of_check(self, j) -> np.ndarray:
        """Edge ids of check j, ordered by ascending variable index."""
        s = self.check_starts[j]
        return self.check_edge_order[s:s + self.check_degrees[j]]


def girth(graph: TannerGraph):
    """Length of the shortest cycle (even, bipartite) or math.inf for forests.

    BFS from every variable node; the first non-tree edge seen closing two
    branch paths yields a candidate cycle length, and the minimum over all
    start nodes is exact because a BFS rooted on a shortest cycle finds it.
    """
    n, m = graph.n_vars, graph.n_checks
    total = n + m
    adj = [list() for _ in range(total)]
    for i, j in graph.edges:
        adj[i].append(n + j)
        adj[n + j].append(i)

    best = math.inf
    dist = np.full(total, -1, dtype=np.int64)
    parent = np.full(total, -1, dtype=np.int64)
    for src in range(n):
        dist[:] = -1
        parent[:] = -1
        dist[src] = 0
        q = deque([src])
        while q:
            u = q.popleft()
            if 2 * dist[u] >= best:
                break
            for w in adj[u]:
                if dist[w] < 0:
                    dist[w] = dist[u] + 1
                    parent[w] = u
                    q.append(w)
                elif parent[u] != w and parent[w] != u:
                    cand = dist[u] + dist[w] + 1
                    if cand < best:
                        best = cand
    return best


def _bfs_check_distances(var_adj, check_adj, src, n_checks):
    """Distance from variable `src` to every check (odd values; inf if
    unreachable).  Expands the whole connected component."""
    dist = np.full(n_checks, np.inf)
    seen_v = {src}
    frontier = [src]
    is_var = True
    depth = 0
    remaining = n_checks
    while frontier and remaining > 0:
        depth += 1
        nxt = []
        if is_var:
            for v in frontier:
                for c in var_adj[v]:
                    if dist[c] == np.inf:
                        dist[c] = depth
                        remaining -= 1
                        nxt.append(c)
        else:
            for c in frontier:
                for v in check_adj[c]:
                    if v not in seen_v:
                        seen_v.add(v)
                        nxt.append(v)
        frontier = nxt
        is_var = not is_var
    return dist


def construct_regular(params: CodeParams, min_girth: int, max_restarts: int = 80) -> TannerGraph:
    """Random (J,K)-regular Tanner graph with girth >= min_girth.

    Progressive edge growth: variables are processed in a random order and
    each new edge must land on a check at distance >= min_girth - 1 from the
    variable (or unreachable), so no cycle shorter than min_girth is ever
    closed.  Among admissible checks the farthest ones are preferred and ties
    go to the lowest current degree, then uniformly at random.  On a dead end
    the whole construction restarts with a fresh stream; deterministic given
    params.seed.
    """
    if min_girth < 4 or min_girth % 2 != 0:
        raise ValueError("min_girth must be an even number >= 4")
    n, j_wt, k_wt = params.n, params.j_weight, params.k_weight
    m = params.n_checks

    for attempt in range(max_restarts):
        rng = np.random.default_rng([params.seed, attempt])
        var_adj = [[] for _ in range(n)]
        check_adj = [[] for _ in range(m)]
        deg = np.zeros(m, dtype=np.int64)
        order = rng.permutation(n)
        failed = False
        for i in order:
            for _ in range(j_wt):
                open_checks = deg < k_wt
                if var_adj[i]:
                    dist = _bfs_check_distances(var_adj, check_adj, i, m)
                    admissible = open_checks & (dist >= min_girth - 1)
                    if not admissible.any():
                        failed = True
                        break
                    tier = admissible & (dist == dist[admissible].max())
                else:
                    tier = open_checks
                cand = np.flatnonzero(tier)
                low = cand[deg[cand] == deg[cand].min()]
                c = int(low[rng.integers(len(low))])
                var_adj[i].append(c)
                check_adj[c].append(i)
                deg[c] += 1
            if failed:
                break
        if not failed:
            g = TannerGraph(var_adj, m)
            assert g.is_regular(j_wt, k_wt)
            return g
    raise InfeasibleGirth(
        f"no ({j_wt},{k_wt})-regular graph with girth >= {min_girth} on "
        f"N={n} found in {max_restarts} attempts; N is likely too small"
    )


def ct_membership_count(j_weight: int, k_weight: int, depth: int) -> int:
    """Number of depth-L check-rooted computation trees containing a fixed
    variable node: sum over levels of J*[(K-1)(J-1)]^(l-1), exact integer."""
    if j_weight < 2 or k_weight < 2 or depth < 1:
        raise ValueError("requires J >= 2, K >= 2, L >= 1")
    step = (k_weight - 1) * (j_weight - 1)
    return sum(j_weight * step ** (level - 1) for level in range(1, depth + 1))


def save_alist(graph: TannerGraph) -> str:
    """Serialize to the standard alist text format (1-based, zero-padded)."""
    n, m = graph.n_vars, graph.n_checks
    max_col = max((len(r) for r in graph.var_neighbors), default=0)
    max_row = max((len(r) for r in graph.check_neighbors), default=0)
    lines = [f"{n} {m}", f"{max_col} {max_row}"]
    lines.append(" ".join(str(len(r)) for r in graph.var_neighbors))
    lines.append(" ".join(str(len(r)) for r in graph.check_neighbors))
    for row in graph.var_neighbors:
        padded = [x + 1 for x in row] + [0] * (max_col - len(row))
        lines.append(" ".join(str(x) for x in padded))
    for row in graph.check_neighbors:
        padded = [x + 1 for x in row] + [0] * (max_row - len(row))
        lines.append(" ".join(str(x) for x in padded))
    return "\n".join(lines) + "\n"


def load_alist(text) -> TannerGraph:
    """Parse alist text (str or bytes) into a TannerGraph.

    Raises ParseError with a 1-based line number on malformed input and
    InconsistentWeights when declared degrees disagree with the adjacency
    blocks or the two blocks disagree with each other.
    """
    if isinstance(text, bytes):
        text = text.decode("ascii")
    raw_lines = text.splitlines()

    def ints(lineno):
        if lineno > len(raw_lines):
            raise ParseError("unexpected end of input", line=lineno)
        try:
            return [int(t) for t in raw_lines[lineno - 1].split()]
        except ValueError:
            raise ParseError("non-integer token", line=lineno) from None

    head = ints(1)
    if len(head) != 2:
        raise ParseError("expected 'N M'", line=1)
    n, m = head
    if n < 0 or m < 0:
        raise ParseError("negative dimension", line=1)
    maxdeg = ints(2)
    if len(maxdeg) != 2:
        raise ParseError("expected 'maxColDeg maxRowDeg'", line=2)
    max_col, max_row = maxdeg
    col_deg = ints(3)
    if len(col_deg) != n:
        raise ParseError(f"expected {n} column degrees", line=3)
    row_deg = ints(4)
    if len(row_deg) != m:
        raise ParseError(f"expected {m} row degrees", line=4)
    if col_deg and max(col_deg) > max_col:
        raise InconsistentWeights("column degree exceeds declared maximum", line=3)
    if row_deg and max(row_deg) > max_row:
        raise InconsistentWeights("row degree exceeds declared maximum", line=4)

    var_neighbors = []
    for i in range(n):
        lineno = 5 + i
        entries = ints(lineno)
        nz = [x - 1 for x in entries if x != 0]
        if any(x < 0 or x >= m for x in nz):
            raise ParseError("check index out of range", line=lineno)
        if len(nz) != col_deg[i]:
            raise InconsistentWeights(
                f"variable {i} lists {len(nz)} checks, declared {col_deg[i]}",
                line=lineno)
        var_neighbors.append(sorted(nz))

    check_neighbors = []
    for j in range(m):
        lineno = 5 + n + j
        entries = ints(lineno)
        nz = [x - 1 for x in entries if x != 0]
        if any(x < 0 or x >= n for x in nz):
            raise ParseError("variable index out of range", line=lineno)
        if len(nz) != row_deg[j]:
            raise InconsistentWeights(
                f"check {j} lists {len(nz)} variables, declared {row_deg[j]}",
                line=lineno)
        check_neighbors.append(sorted(nz))

    edges_from_vars = {(i, j) for i, row in enumerate(var_neighbors) for j in row}
    edges_from_checks = {(i, j) for j, row in enumerate(check_neighbors) for i in row}
    if edges_from_vars != edges_from_checks:
        raise InconsistentWeights("variable and check adjacency blocks disagree")

    graph = TannerGraph(var_neighbors, m)
    return graph
