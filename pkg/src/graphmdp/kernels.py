"""Hot numeric kernels, JIT-compiled with numba by default.

Set GRAPHMDP_PURE_NUMPY=1 to select the pure-numpy fallback path instead
(`graphmdp bench` times the two against each other). Both paths implement
identical semantics, including gradient tie-splitting in segment_max.
"""

import os

import numpy as np

PURE_NUMPY = os.environ.get("GRAPHMDP_PURE_NUMPY", "0") == "1"

if not PURE_NUMPY:
    try:
        from numba import njit
    except ImportError:  # pragma: no cover - numba is a hard dep, but be safe
        PURE_NUMPY = True

USE_NUMBA = not PURE_NUMPY


# ---------------------------------------------------------------------------
# segment reductions (edges -> nodes, nodes -> graphs)

def _segment_sum_np(values, segments, num_segments):
    out = np.zeros((num_segments, values.shape[1]), dtype=values.dtype)
    np.add.at(out, segments, values)
    return out


def _segment_sum_loop(values, segments, num_segments):
    out = np.zeros((num_segments, values.shape[1]), dtype=values.dtype)
    for i in range(values.shape[0]):
        s = segments[i]
        for j in range(values.shape[1]):
            out[s, j] += values[i, j]
    return out


def _segment_max_np(values, segments, num_segments):
    # empty segments keep the sentinel; callers clamp them
    out = np.full((num_segments, values.shape[1]), -1e30, dtype=values.dtype)
    np.maximum.at(out, segments, values)
    return out


def _segment_max_loop(values, segments, num_segments):
    out = np.full((num_segments, values.shape[1]), -1e30, dtype=values.dtype)
    for i in range(values.shape[0]):
        s = segments[i]
        for j in range(values.shape[1]):
            if values[i, j] > out[s, j]:
                out[s, j] = values[i, j]
    return out


def _segment_max_backward_np(values, segments, maxima, grad_out):
    eq = (values == maxima[segments]).astype(values.dtype)
    counts = _segment_sum_np(eq, segments, maxima.shape[0])
    counts = np.maximum(counts, 1.0)
    return eq * (grad_out / counts)[segments]


def _segment_max_backward_loop(values, segments, maxima, grad_out):
    n_seg = maxima.shape[0]
    counts = np.zeros((n_seg, values.shape[1]), dtype=values.dtype)
    for i in range(values.shape[0]):
        s = segments[i]
        for j in range(values.shape[1]):
            if values[i, j] == maxima[s, j]:
                counts[s, j] += 1.0
    grad = np.zeros_like(values)
    for i in range(values.shape[0]):
        s = segments[i]
        for j in range(values.shape[1]):
            if values[i, j] == maxima[s, j]:
                grad[i, j] = grad_out[s, j] / counts[s, j]
    return grad


def _segment_count_np(segments, num_segments):
    return np.bincount(segments, minlength=num_segments).astype(np.float64)


# ---------------------------------------------------------------------------
# critical-fraction removal simulations
#
# Removing nodes in a given order and asking when the remainder first
# disconnects is evaluated backwards: add nodes in reverse order under a
# union-find and record, for every suffix, whether it is connected.

def _xi_single_py(adj, order):
    n = adj.shape[0]
    parent = np.arange(n, dtype=np.int64)
    added = np.zeros(n, dtype=np.bool_)
    connected = np.zeros(n + 1, dtype=np.bool_)
    ncomp = 0
    for j in range(1, n + 1):
        v = order[n - j]
        added[v] = True
        ncomp += 1
        for u in range(n):
            if added[u] and adj[v, u]:
                ru = u
                while parent[ru] != ru:
                    parent[ru] = parent[parent[ru]]
                    ru = parent[ru]
                rv = v
                while parent[rv] != rv:
                    parent[rv] = parent[parent[rv]]
                    rv = parent[rv]
                if ru != rv:
                    parent[ru] = rv
                    ncomp -= 1
        connected[j] = ncomp == 1
    for k in range(1, n):
        if not connected[n - k]:
            return k / n
    return (n - 1) / n


def _xi_for_orders_py(adj, orders):
    out = np.empty(orders.shape[0], dtype=np.float64)
    for s in range(orders.shape[0]):
        out[s] = _xi_single_py(adj, orders[s])
    return out


def _targeted_order_py(adj):
    n = adj.shape[0]
    deg = np.zeros(n, dtype=np.int64)
    for v in range(n):
        for u in range(n):
            if adj[v, u]:
                deg[v] += 1
    alive = np.ones(n, dtype=np.bool_)
    order = np.empty(n, dtype=np.int64)
    for k in range(n):
        best = -1
        best_deg = -1
        for v in range(n):
            if alive[v] and deg[v] > best_deg:
                best = v
                best_deg = deg[v]
        order[k] = best
        alive[best] = False
        for u in range(n):
            if alive[u] and adj[best, u]:
                deg[u] -= 1
    return order


# ---------------------------------------------------------------------------
# Held-Karp exact TSP: cost/parent tables over (visited-subset, last-node)

def _held_karp_loop(dist):
    n = dist.shape[0]
    full = 1 << n
    cost = np.full((full, n), np.inf)
    parent = np.full((full, n), -1, dtype=np.int64)
    cost[1, 0] = 0.0
    for mask in range(1, full):
        if mask & 1 == 0:
            continue
        for last in range(n):
            c = cost[mask, last]
            if c == np.inf or (mask >> last) & 1 == 0:
                continue
            for v in range(1, n):
                if (mask >> v) & 1 == 1:
                    continue
                nm = mask | (1 << v)
                nc = c + dist[last, v]
                if nc < cost[nm, v]:
                    cost[nm, v] = nc
                    parent[nm, v] = last
    return cost, parent


if USE_NUMBA:
    segment_sum = njit(cache=True)(_segment_sum_loop)
    segment_max = njit(cache=True)(_segment_max_loop)
    segment_max_backward = njit(cache=True)(_segment_max_backward_loop)
    _xi_single = njit(cache=True)(_xi_single_py)

    @njit(cache=True)
    def xi_for_orders(adj, orders):
        out = np.empty(orders.shape[0], dtype=np.float64)
        for s in range(orders.shape[0]):
            out[s] = _xi_single(adj, orders[s])
        return out

    targeted_order = njit(cache=True)(_targeted_order_py)
    held_karp_tables = njit(cache=True)(_held_karp_loop)
else:
    segment_sum = _segment_sum_np
    segment_max = _segment_max_np
    segment_max_backward = _segment_max_backward_np
    xi_for_orders = _xi_for_orders_py
    targeted_order = _targeted_order_py
    held_karp_tables = _held_karp_loop

segment_count = _segment_count_np
