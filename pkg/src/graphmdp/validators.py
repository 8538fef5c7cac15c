"""Solution checkers, independent reference solvers, and the robustness
functional.

The reference solvers here (queue BFS, heap Dijkstra, Kruskal) are the
independent route against which environment outputs are judged; they
share no code with the environments' transitions.
"""

from __future__ import annotations

import heapq

import numpy as np

from . import kernels
from .errors import GraphMdpError
from .graphs import Graph

_TOL = 1e-9


def _weight_of(graph: Graph, weights, u: int, v: int) -> float:
    if isinstance(weights, dict):
        key = (u, v) if graph.directed else (min(u, v), max(u, v))
        return weights[key]
    i = graph.edge_id(u, v)
    return float(np.asarray(weights)[i])


# ---------------------------------------------------------------------------
# reference solvers

def reference_bfs_depths(graph: Graph, v_s: int) -> np.ndarray:
    """True BFS distances from v_s; -1 where unreachable."""
    depth = np.full(graph.node_count, -1, dtype=np.int64)
    depth[v_s] = 0
    queue = [v_s]
    while queue:
        nxt = []
        for u in queue:
            for v in graph.out_neighbors[u]:
                if depth[v] < 0:
                    depth[v] = depth[u] + 1
                    nxt.append(v)
        queue = nxt
    return depth


def reference_distances(graph: Graph, weights, v_s: int) -> np.ndarray:
    """Single-source shortest distances (Dijkstra; weights positive);
    np.inf where unreachable."""
    n = graph.node_count
    dist = np.full(n, np.inf)
    dist[v_s] = 0.0
    heap = [(0.0, v_s)]
    while heap:
        d, u = heapq.heappop(heap)
        if d > dist[u] + _TOL:
            continue
        for v in graph.out_neighbors[u]:
            nd = d + _weight_of(graph, weights, u, v)
            if nd < dist[v] - 1e-15:
                dist[v] = nd
                heapq.heappush(heap, (nd, v))
    return dist


class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))
        self.components = n

    def find(self, x: int) -> int:
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[ra] = rb
        self.components -= 1
        return True


def minimum_forest_weight(graph: Graph, weights, restrict=None) -> float:
    """Kruskal minimum spanning forest weight (optionally restricted to a
    node subset)."""
    order = sorted(
        range(graph.edge_count),
        key=lambda i: (_weight_of(graph, weights, *graph.edges[i]), i))
    uf = _UnionFind(graph.node_count)
    total = 0.0
    for i in order:
        u, v = graph.edges[i]
        if restrict is not None and (u not in restrict or v not in restrict):
            continue
        if uf.union(u, v):
            total += _weight_of(graph, weights, u, v)
    return total


def graph_component_count(graph: Graph) -> int:
    uf = _UnionFind(graph.node_count)
    for u, v in graph.edges:
        uf.union(u, v)
    return uf.components


# ---------------------------------------------------------------------------
# checkers

def check_bfs(graph: Graph, v_s: int, pred) -> bool:
    """pred is a tree rooted at v_s whose chain depths equal true BFS
    distances; unreachable nodes must self-point."""
    pred = np.asarray(pred, dtype=np.int64)
    depth = reference_bfs_depths(graph, v_s)
    if pred[v_s] != v_s:
        return False
    for v in range(graph.node_count):
        if v == v_s:
            continue
        if depth[v] < 0:
            if pred[v] != v:
                return False
        else:
            u = int(pred[v])
            if u == v or not graph.has_edge(u, v) or depth[u] != depth[v] - 1:
                return False
    return True


def check_dfs(graph: Graph, pred) -> bool:
    """Recursive subroot/cycle/descendant validity check for DFS forests.

    Two completions of the written procedure: pred edges must exist in the
    graph, and every active node must resolve to a subroot by following
    pred (pred cycles hanging off a valid root are rejected rather than
    silently skipped). Both are required for exact agreement with
    enumeration of real DFS executions.
    """
    n = graph.node_count
    pred = np.asarray(pred, dtype=np.int64)
    for v in range(n):
        if pred[v] != v and not graph.has_edge(int(pred[v]), v):
            return False

    directed_edges = []
    for u, v in graph.edges:
        directed_edges.append((u, v))
        if not graph.directed:
            directed_edges.append((v, u))

    def valid(active: frozenset) -> bool:
        if len(active) <= 1:
            return True
        subroots = {v for v in active if pred[v] == v or pred[v] not in active}
        if not subroots:
            return False
        root_of = {}
        for v in active:
            x, steps = v, 0
            seen = []
            while x not in subroots:
                if x in root_of:
                    break
                seen.append(x)
                x = int(pred[x])
                steps += 1
                if steps > len(active):
                    return False  # pred cycle never reaches a subroot
            root = root_of.get(x, x)
            for y in seen:
                root_of[y] = root
            root_of[v] = root
        if len(subroots) > 1:
            # subtree order must exist: contract trees, demand acyclicity
            carcs = {(root_of[u], root_of[v])
                     for u, v in directed_edges
                     if u in active and v in active and root_of[u] != root_of[v]}
            if _digraph_has_cycle(subroots, carcs):
                return False
        for root in subroots:
            descendants = frozenset(v for v in active
                                    if root_of[v] == root and v != root)
            if descendants and not valid(descendants):
                return False
        return True

    return valid(frozenset(range(n)))


def _digraph_has_cycle(nodes, arcs) -> bool:
    succ = {v: [] for v in nodes}
    for a, b in arcs:
        succ[a].append(b)
    WHITE, GREY, BLACK = 0, 1, 2
    colour = {v: WHITE for v in nodes}
    for start in nodes:
        if colour[start] != WHITE:
            continue
        stack = [(start, iter(succ[start]))]
        colour[start] = GREY
        while stack:
            v, it = stack[-1]
            advanced = False
            for w in it:
                if colour[w] == GREY:
                    return True
                if colour[w] == WHITE:
                    colour[w] = GREY
                    stack.append((w, iter(succ[w])))
                    advanced = True
                    break
            if not advanced:
                colour[v] = BLACK
                stack.pop()
    return False


def check_bellman_ford(graph: Graph, weights, v_s: int, pred, d) -> bool:
    """pred-induced path lengths and d must equal reference shortest
    distances (tolerance 1e-9); unreachable nodes self-point."""
    pred = np.asarray(pred, dtype=np.int64)
    d = np.asarray(d, dtype=np.float64)
    ref = reference_distances(graph, weights, v_s)
    if pred[v_s] != v_s:
        return False
    n = graph.node_count
    for v in range(n):
        if v == v_s:
            continue
        if not np.isfinite(ref[v]):
            if pred[v] != v:
                return False
            continue
        x, total, steps = v, 0.0, 0
        while x != v_s:
            u = int(pred[x])
            if u == x or not graph.has_edge(u, x):
                return False
            total += _weight_of(graph, weights, u, x)
            x = u
            steps += 1
            if steps > n:
                return False
        if abs(total - ref[v]) > _TOL or abs(d[v] - ref[v]) > _TOL:
            return False
    return True


def check_mst(graph: Graph, weights, pred) -> bool:
    """pred forms a spanning forest (one tree per component) whose weight
    equals the reference minimum spanning forest weight."""
    pred = np.asarray(pred, dtype=np.int64)
    uf = _UnionFind(graph.node_count)
    total = 0.0
    for v in range(graph.node_count):
        u = int(pred[v])
        if u == v:
            continue
        if not graph.has_edge(u, v):
            return False
        if not uf.union(u, v):
            return False
        total += _weight_of(graph, weights, u, v)
    if uf.components != graph_component_count(graph):
        return False
    return abs(total - minimum_forest_weight(graph, weights)) <= _TOL


# ---------------------------------------------------------------------------
# robustness functional

def critical_fraction_samples(graph: Graph, samples: int = 200,
                              rng_seed: int = 0) -> np.ndarray:
    """Per-sample critical fractions under uniformly random removal."""
    if graph.node_count < 2:
        raise GraphMdpError("critical fraction needs at least two nodes")
    adj = graph.dense_adjacency()
    rng = np.random.default_rng(rng_seed)
    orders = np.argsort(rng.random((samples, graph.node_count)),
                        axis=1).astype(np.int64)
    return kernels.xi_for_orders(adj, orders)


def critical_fraction(graph: Graph, strategy: str = "random",
                      samples: int = 200, rng_seed: int = 0) -> float:
    """Expected fraction of nodes removed before the graph disconnects.

    random: Monte Carlo mean over `samples` removal orders (deterministic
    given rng_seed). targeted: one deterministic highest-current-degree
    removal order, ties to the lowest index.
    """
    if strategy == "targeted":
        if graph.node_count < 2:
            raise GraphMdpError("critical fraction needs at least two nodes")
        adj = graph.dense_adjacency()
        order = kernels.targeted_order(adj)
        return float(kernels.xi_for_orders(adj, order[None, :])[0])
    if strategy == "random":
        return float(critical_fraction_samples(graph, samples, rng_seed).mean())
    raise GraphMdpError(f"unknown removal strategy {strategy!r}")
