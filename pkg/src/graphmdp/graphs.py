"""Sparse weighted graphs, random generators, and dataset persistence.

Graphs are immutable once constructed and safe to share across rollout
workers. All node indices are 0-based; undirected graphs store each edge
once in canonical (min, max) order and answer adjacency symmetrically.
"""

from __future__ import annotations

import gzip
import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import DatasetError, GraphMdpError


@dataclass(frozen=True)
class Graph:
    node_count: int
    edges: tuple[tuple[int, int], ...]
    directed: bool = False
    weights: tuple[float, ...] | None = None

    def __post_init__(self):
        n = self.node_count
        if n < 1:
            raise GraphMdpError("graph needs at least one node")
        canon = []
        for u, v in self.edges:
            if not (0 <= u < n and 0 <= v < n):
                raise GraphMdpError(f"edge ({u}, {v}) out of range for {n} nodes")
            if u == v:
                raise GraphMdpError(f"self-loop ({u}, {v}) not allowed")
            canon.append((u, v) if self.directed else (min(u, v), max(u, v)))
        if len(set(canon)) != len(canon):
            raise GraphMdpError("duplicate edges")
        object.__setattr__(self, "edges", tuple(canon))
        if self.weights is not None:
            if len(self.weights) != len(self.edges):
                raise GraphMdpError("every edge needs exactly one weight")
            object.__setattr__(self, "weights", tuple(float(w) for w in self.weights))

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    @cached_property
    def _edge_lookup(self) -> dict[tuple[int, int], int]:
        return {e: i for i, e in enumerate(self.edges)}

    def edge_id(self, u: int, v: int) -> int | None:
        """Index of edge (u, v) in self.edges, or None if absent."""
        if not self.directed and u > v:
            u, v = v, u
        return self._edge_lookup.get((u, v))

    def has_edge(self, u: int, v: int) -> bool:
        return self.edge_id(u, v) is not None

    def weight(self, u: int, v: int) -> float:
        if u == v:
            return 0.0
        i = self.edge_id(u, v)
        if i is None:
            raise GraphMdpError(f"({u}, {v}) is not an edge")
        return 1.0 if self.weights is None else self.weights[i]

    @cached_property
    def out_neighbors(self) -> tuple[tuple[int, ...], ...]:
        """Out-neighbors per node (symmetric closure for undirected graphs)."""
        adj = [[] for _ in range(self.node_count)]
        for u, v in self.edges:
            adj[u].append(v)
            if not self.directed:
                adj[v].append(u)
        return tuple(tuple(sorted(a)) for a in adj)

    @cached_property
    def directed_edges(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """(src, dst, edge_id) arrays; undirected edges appear both ways.

        edge_id maps each directed copy back to its row in self.edges so
        sparse edge features can be expanded without duplication.
        """
        src, dst, eid = [], [], []
        for i, (u, v) in enumerate(self.edges):
            src.append(u)
            dst.append(v)
            eid.append(i)
            if not self.directed:
                src.append(v)
                dst.append(u)
                eid.append(i)
        return (
            np.asarray(src, dtype=np.int64),
            np.asarray(dst, dtype=np.int64),
            np.asarray(eid, dtype=np.int64),
        )

    def dense_adjacency(self) -> np.ndarray:
        adj = np.zeros((self.node_count, self.node_count), dtype=np.bool_)
        for u, v in self.edges:
            adj[u, v] = True
            if not self.directed:
                adj[v, u] = True
        return adj

    def dense_weights(self) -> np.ndarray:
        """(n, n) weight matrix, 0 at absent edges (weights live in (0, 1])."""
        mat = np.zeros((self.node_count, self.node_count))
        for i, (u, v) in enumerate(self.edges):
            w = 1.0 if self.weights is None else self.weights[i]
            mat[u, v] = w
            if not self.directed:
                mat[v, u] = w
        return mat

    def connected(self) -> bool:
        """Weak connectivity (edge directions ignored)."""
        if self.node_count == 1:
            return True
        seen = {0}
        stack = [0]
        undirected = [[] for _ in range(self.node_count)]
        for u, v in self.edges:
            undirected[u].append(v)
            undirected[v].append(u)
        while stack:
            u = stack.pop()
            for v in undirected[u]:
                if v not in seen:
                    seen.add(v)
                    stack.append(v)
        return len(seen) == self.node_count


def _uniform_weights(m: int, rng: np.random.Generator) -> tuple[float, ...]:
    # (0, 1]: zero weights excluded so absence-of-edge stays unambiguous
    return tuple(1.0 - rng.random(m))


def with_uniform_weights(graph: Graph, rng_seed: int) -> Graph:
    """Attach U(0, 1] edge weights when the dataset lacks them."""
    if graph.weights is not None:
        return graph
    rng = np.random.default_rng(rng_seed)
    return Graph(graph.node_count, graph.edges, graph.directed,
                 _uniform_weights(graph.edge_count, rng))


def generate_er(n: int, p: float, rng_seed: int, *, directed: bool = False,
                weighted: bool = False, connected: bool = False) -> Graph:
    """Erdos-Renyi G(n, p); each (un)ordered pair is an edge with prob p.

    With connected=True, resamples (advancing the stream) until the graph
    is connected.
    """
    if n < 1:
        raise GraphMdpError("n must be >= 1")
    if not 0.0 <= p <= 1.0:
        raise GraphMdpError("p must lie in [0, 1]")
    rng = np.random.default_rng(rng_seed)
    pairs = [(u, v) for u in range(n) for v in range(n)
             if (u < v if not directed else u != v)]
    while True:
        draws = rng.random(len(pairs))
        edges = tuple(pair for pair, d in zip(pairs, draws) if d < p)
        weights = _uniform_weights(len(edges), rng) if weighted else None
        g = Graph(n, edges, directed, weights)
        if not connected or g.connected():
            return g


def generate_ba(n: int, m: int, rng_seed: int, *, weighted: bool = False) -> Graph:
    """Barabasi-Albert preferential attachment.

    Starts from a complete seed graph on m nodes; each new node attaches to
    m distinct existing nodes with degree-proportional probability. Always
    connected; edge count is C(m, 2) + m * (n - m).
    """
    if not 1 <= m < n:
        raise GraphMdpError("need 1 <= m < n")
    rng = np.random.default_rng(rng_seed)
    edges = [(u, v) for u in range(m) for v in range(u + 1, m)]
    # repeated-node list implements degree-proportional sampling
    repeated = [v for e in edges for v in e]
    for new in range(m, n):
        targets: set[int] = set()
        while len(targets) < m:
            if repeated:
                targets.add(int(repeated[int(rng.integers(len(repeated)))]))
            else:
                # degree-0 seed graph (m = 1): attach uniformly
                targets.add(int(rng.integers(new)))
        for t in sorted(targets):
            edges.append((t, new))
            repeated.extend((t, new))
    weights = _uniform_weights(len(edges), rng) if weighted else None
    return Graph(n, tuple(edges), False, weights)


def generate_complete(n: int, rng_seed: int) -> Graph:
    """Complete graph with U(0, 1] weights."""
    rng = np.random.default_rng(rng_seed)
    edges = tuple((u, v) for u in range(n) for v in range(u + 1, n))
    return Graph(n, edges, False, _uniform_weights(len(edges), rng))


def generate_euclidean(n: int, rng_seed: int) -> Graph:
    """Complete graph over random points in the unit square; weights are
    Euclidean distances."""
    rng = np.random.default_rng(rng_seed)
    pts = rng.random((n, 2))
    edges, weights = [], []
    for u in range(n):
        for v in range(u + 1, n):
            edges.append((u, v))
            weights.append(float(math.dist(pts[u], pts[v])))
    return Graph(n, tuple(edges), False, tuple(weights))


GENERATORS = {
    "er": generate_er,
    "ba": generate_ba,
    "complete": generate_complete,
    "euclidean": generate_euclidean,
}


# ---------------------------------------------------------------------------
# dataset files: header line, then per graph a `g n directed weighted m`
# line followed by m `u v [w]` edge lines

_HEADER = "graphmdp-dataset v1"


def _open_text(path, mode):
    path = str(path)
    if path.endswith(".gz"):
        return gzip.open(path, mode + "t", encoding="utf-8")
    return open(path, mode, encoding="utf-8")


def save_dataset(graphs: list[Graph], path) -> None:
    with _open_text(path, "w") as fh:
        fh.write(f"{_HEADER} {len(graphs)}\n")
        for g in graphs:
            fh.write(f"g {g.node_count} {int(g.directed)} "
                     f"{int(g.weights is not None)} {g.edge_count}\n")
            for i, (u, v) in enumerate(g.edges):
                if g.weights is None:
                    fh.write(f"{u} {v}\n")
                else:
                    fh.write(f"{u} {v} {g.weights[i]:.17g}\n")


def load_dataset(path) -> list[Graph]:
    graphs: list[Graph] = []
    with _open_text(path, "r") as fh:
        lines = fh.read().splitlines()
    if not lines or not lines[0].startswith(_HEADER):
        raise DatasetError("missing dataset header", line=1)
    try:
        count = int(lines[0].split()[-1])
    except ValueError:
        raise DatasetError("unreadable graph count in header", line=1)
    ln = 1
    for _ in range(count):
        if ln >= len(lines):
            raise DatasetError("unexpected end of file", line=ln + 1)
        parts = lines[ln].split()
        if len(parts) != 5 or parts[0] != "g":
            raise DatasetError(f"expected graph header, got {lines[ln]!r}", line=ln + 1)
        try:
            n, directed, weighted, m = (int(x) for x in parts[1:])
        except ValueError:
            raise DatasetError("unreadable graph header", line=ln + 1)
        ln += 1
        edges, weights = [], []
        for _ in range(m):
            if ln >= len(lines):
                raise DatasetError("unexpected end of file", line=ln + 1)
            fields = lines[ln].split()
            if len(fields) != (3 if weighted else 2):
                raise DatasetError(f"bad edge line {lines[ln]!r}", line=ln + 1)
            try:
                u, v = int(fields[0]), int(fields[1])
                if weighted:
                    weights.append(float(fields[2]))
            except ValueError:
                raise DatasetError(f"unreadable edge line {lines[ln]!r}", line=ln + 1)
            edges.append((u, v))
            ln += 1
        try:
            graphs.append(Graph(n, tuple(edges), bool(directed),
                                tuple(weights) if weighted else None))
        except GraphMdpError as exc:
            raise DatasetError(str(exc), line=ln)
    return graphs
