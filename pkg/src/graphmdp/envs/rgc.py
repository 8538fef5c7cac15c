"""Robust graph construction: add edges (two node selections each) to
maximise the expected critical fraction under node removal.

Within one episode the random-removal estimator reuses a fixed set of
removal permutations drawn at reset, so the objective is a deterministic
function of the current adjacency and step rewards telescope exactly.
"""

from __future__ import annotations

import math

import numpy as np

from ..errors import SchemaError
from ..features import FeatureDef, FeatureKind
from ..graphs import Graph
from ..mdp import MdpState
from .. import kernels
from .base import Environment


class RgcEnv(Environment):
    name = "rgc"
    phase_count = 2
    has_objective = True

    def __init__(self, tau: float = 0.05, strategy: str = "random",
                 samples: int = 200):
        if strategy not in ("random", "targeted"):
            raise SchemaError(f"unknown removal strategy {strategy!r}")
        self.tau = tau
        self.strategy = strategy
        self.samples = samples

    def input_defs(self):
        return []

    def state_defs(self):
        return [FeatureDef("adj", "edge", FeatureKind.MASK, "state", initial=1)] \
            + self.phase_defs() \
            + [FeatureDef("tau_l", "graph", FeatureKind.SCALAR, "state", initial=1.0)]

    def budget(self, graph: Graph) -> int:
        n = graph.node_count
        return math.ceil(self.tau * (n * n - n) / 2)

    def horizon(self, graph: Graph) -> int:
        return 2 * self.budget(graph)

    def setup(self, state, env_rng):
        g = state.graph
        if g.directed:
            raise SchemaError("rgc runs on undirected graphs only")
        adj = g.dense_adjacency()
        state.cache["adj"] = adj
        if self.strategy == "random":
            orders = np.argsort(env_rng.random((self.samples, g.node_count)),
                                axis=1).astype(np.int64)
            state.cache["orders"] = orders
        state.cache["F_memo"] = {}
        state.cache["F0"] = self._estimate(state, adj)

    def _estimate(self, state, adj: np.ndarray) -> float:
        memo = state.cache["F_memo"]
        key = adj.tobytes()
        if key not in memo:
            if self.strategy == "targeted":
                order = kernels.targeted_order(adj)
                memo[key] = float(kernels.xi_for_orders(adj, order[None, :])[0])
            else:
                memo[key] = float(kernels.xi_for_orders(
                    adj, state.cache["orders"]).mean())
        return memo[key]

    def objective(self, state) -> float:
        return self._estimate(state, state.cache["adj"]) - state.cache["F0"]

    def action_mask(self, state) -> np.ndarray:
        adj = state.cache["adj"]
        n = state.n
        if state.phase == 1:
            # a node qualifies if at least one incident pair is still absent
            return adj.sum(axis=1) < n - 1
        psi1 = state.psi(1)
        mask = ~adj[psi1]
        mask[psi1] = False
        return mask

    def transition(self, state: MdpState, v: int) -> None:
        if state.phase == 2:
            u = state.psi(1)
            adj = state.cache["adj"]
            adj[u, v] = True
            adj[v, u] = True
            n = state.n
            state.state.set_graph(
                "tau_l", state.state.get("tau_l") - 1.0 / (n * n - n))
            edges = state.state.edges + ((min(u, v), max(u, v)),)
            state.state.rebind_edges(edges, {"adj": np.ones(len(edges))})
        self.select(state, v)

    def is_terminal(self, state) -> bool:
        if state.t >= self.horizon(state.graph):
            return True
        return state.phase == 1 and not self.action_mask(state).any()

    def edge_arrays(self, state):
        src, dst = np.nonzero(state.cache["adj"])
        return src.astype(np.int64), dst.astype(np.int64), \
            {"adj": np.ones(len(src))}

    def candidate_rewards(self, state):
        actions = np.flatnonzero(self.action_mask(state))
        if state.phase == 1:
            return actions, np.zeros(len(actions))
        adj = state.cache["adj"]
        u = state.psi(1)
        current = self._estimate(state, adj)
        rewards = np.empty(len(actions))
        for i, v in enumerate(actions):
            adj[u, v] = True
            adj[v, u] = True
            rewards[i] = self._estimate(state, adj) - current
            adj[u, v] = False
            adj[v, u] = False
        return actions, rewards

    def copy_state(self, state: MdpState) -> MdpState:
        new = super().copy_state(state)
        new.cache["adj"] = state.cache["adj"].copy()
        return new
