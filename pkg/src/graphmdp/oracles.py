"""Exact combinatorial oracles and approximation algorithms used to
generate expert demonstrations and evaluation baselines.

All solvers are deterministic: argmin scans break ties on the lowest
index and set-valued answers prefer the lexicographically smallest
optimum where ties can occur.
"""

from __future__ import annotations

import itertools

import numpy as np

from . import kernels
from .errors import GraphMdpError
from .graphs import Graph

_TIE = 1e-12


def tsp_exact_tour(dist: np.ndarray) -> tuple[list[int], float]:
    """Minimum-cost Hamiltonian cycle by Held-Karp DP, O(n^2 2^n).

    Returns (tour starting at node 0, cost). Deterministic: the DP keeps
    the first minimiser and the cycle direction is normalised so the
    second node is the smaller of the two neighbours of 0.
    """
    dist = np.asarray(dist, dtype=np.float64)
    n = dist.shape[0]
    if n > 16:
        raise GraphMdpError("exact solver capped at 16 nodes; use the weak expert")
    if n == 1:
        return [0], 0.0
    if n == 2:
        return [0, 1], 2.0 * dist[0, 1]
    cost, parent = kernels.held_karp_tables(dist)
    full = (1 << n) - 1
    totals = cost[full] + dist[:, 0]
    totals[0] = np.inf
    last = int(np.argmin(totals))
    best = float(totals[last])
    tour = [last]
    mask = full
    while last != 0:
        prev = int(parent[mask, last])
        mask ^= 1 << last
        last = prev
        tour.append(last)
    tour.reverse()
    if tour[-1] < tour[1]:
        tour = [0] + tour[:0:-1]
    return tour, best


def tsp_brute_force(dist: np.ndarray) -> tuple[list[int], float]:
    """Factorial enumeration of all tours; independent check for the DP."""
    dist = np.asarray(dist, dtype=np.float64)
    n = dist.shape[0]
    if n > 9:
        raise GraphMdpError("brute force capped at 9 nodes")
    if n == 1:
        return [0], 0.0
    best_cost, best_tour = np.inf, None
    for perm in itertools.permutations(range(1, n)):
        tour = (0,) + perm
        c = dist[tour[-1], 0]
        for a, b in zip(tour, tour[1:]):
            c += dist[a, b]
        if c < best_cost - _TIE or (abs(c - best_cost) <= _TIE
                                    and (best_tour is None or tour < best_tour)):
            best_cost, best_tour = c, tour
    tour = list(best_tour)
    if tour[-1] < tour[1]:
        tour = [0] + tour[:0:-1]
    return tour, float(best_cost)


def tour_cost(dist: np.ndarray, tour) -> float:
    c = dist[tour[-1], tour[0]]
    for a, b in zip(tour, tour[1:]):
        c += dist[a, b]
    return float(c)


# ---------------------------------------------------------------------------
# minimum vertex cover

def mvc_exact_cover(graph: Graph, weights: np.ndarray) -> frozenset[int]:
    """Minimum-weight vertex cover by branch and bound over edge
    branching; ties resolved to the lexicographically smallest node set."""
    n = graph.node_count
    if n > 24:
        raise GraphMdpError("exact cover capped at 24 nodes")
    w = np.asarray(weights, dtype=np.float64)
    edges = list(graph.edges)
    best = {"weight": np.inf, "cover": None}

    def lower_bound(chosen: set) -> float:
        # vertex-disjoint uncovered edges each force at least min(w_u, w_v)
        used = set()
        bound = 0.0
        for u, v in edges:
            if u in chosen or v in chosen or u in used or v in used:
                continue
            used.add(u)
            used.add(v)
            bound += min(w[u], w[v])
        return bound

    def search(chosen: set, weight: float):
        if weight + lower_bound(chosen) > best["weight"] + _TIE:
            return
        for u, v in edges:
            if u not in chosen and v not in chosen:
                search(chosen | {u}, weight + w[u])
                search(chosen | {v}, weight + w[v])
                return
        key = tuple(sorted(chosen))
        if weight < best["weight"] - _TIE or (
                abs(weight - best["weight"]) <= _TIE and key < best["cover"]):
            best["weight"] = weight
            best["cover"] = key

    search(set(), 0.0)
    return frozenset(best["cover"])


def mvc_exhaustive(graph: Graph, weights: np.ndarray) -> tuple[float, frozenset[int]]:
    """Scan all 2^n subsets (n <= 20); the independent route for the
    branch-and-bound solver."""
    n = graph.node_count
    if n > 20:
        raise GraphMdpError("exhaustive scan capped at 20 nodes")
    w = np.asarray(weights, dtype=np.float64)
    masks = np.arange(1 << n, dtype=np.int64)
    ok = np.ones(1 << n, dtype=bool)
    for u, v in graph.edges:
        ok &= (((masks >> u) | (masks >> v)) & 1).astype(bool)
    totals = np.zeros(1 << n)
    for v in range(n):
        totals[((masks >> v) & 1) == 1] += w[v]
    totals[~ok] = np.inf
    best = int(np.argmin(totals))
    cover = frozenset(v for v in range(n) if (best >> v) & 1)
    return float(totals[best]), cover


def mvc_approx(graph: Graph, weights: np.ndarray, eps: float = 0.1) -> frozenset[int]:
    """Parallel primal-dual 2/(1-eps) approximation.

    Every round raises each uncovered edge's dual by the smaller residual
    share of its endpoints; a vertex joins the cover once its duals reach
    (1-eps) of its weight. At least the globally tightest vertex joins per
    round, so at most n rounds run.
    """
    n = graph.node_count
    w = np.asarray(weights, dtype=np.float64)
    dual = np.zeros(n)
    cover = np.zeros(n, dtype=bool)
    for _ in range(n + 1):
        uncovered = [(u, v) for u, v in graph.edges
                     if not cover[u] and not cover[v]]
        if not uncovered:
            return frozenset(np.flatnonzero(cover))
        deg = np.zeros(n)
        for u, v in uncovered:
            deg[u] += 1
            deg[v] += 1
        share = np.full(n, np.inf)
        active = deg > 0
        share[active] = (w[active] - dual[active]) / deg[active]
        for u, v in uncovered:
            inc = min(share[u], share[v])
            dual[u] += inc
            dual[v] += inc
        cover |= dual >= (1.0 - eps) * w - 1e-12
    raise GraphMdpError("primal-dual rounds exceeded the vertex count")


def cover_weight(weights: np.ndarray, cover) -> float:
    w = np.asarray(weights, dtype=np.float64)
    return float(sum(w[v] for v in cover))


def is_vertex_cover(graph: Graph, cover) -> bool:
    cover = set(cover)
    return all(u in cover or v in cover for u, v in graph.edges)
