"""TSP environment: constructive tour building on a complete graph.

pred holds next-in-tour pointers; the partial objective is the open path
in insertion order plus the closing edge back to the start, which makes
step rewards telescope to the terminal tour objective.
"""

from __future__ import annotations

import numpy as np

from ..errors import SchemaError
from ..features import FeatureDef, FeatureKind
from ..graphs import Graph
from ..mdp import MdpState
from .base import Environment
from .bellman_ford import _dense


class TspEnv(Environment):
    name = "tsp"
    phase_count = 1
    has_objective = True
    needs_edge_weights = True
    needs_start_node = True

    def input_defs(self):
        return [
            FeatureDef("A", "edge", FeatureKind.SCALAR, "input"),
            FeatureDef("v_s", "node", FeatureKind.MASK_ONE, "input"),
        ]

    def state_defs(self):
        return [FeatureDef("in_tour", "node", FeatureKind.MASK, "state", initial=0)] \
            + self.phase_defs() \
            + [FeatureDef("pred", "node", FeatureKind.POINTER, "state", initial="self")]

    def horizon(self, graph: Graph) -> int:
        return graph.node_count

    def setup(self, state, env_rng):
        g = state.graph
        if g.directed or g.edge_count != g.node_count * (g.node_count - 1) // 2:
            raise SchemaError("tsp needs a complete undirected graph")
        state.cache["v_s"] = int(np.argmax(state.inputs.get("v_s")))
        state.cache["W"] = _dense(g, state.inputs.get("A"))

    def action_mask(self, state) -> np.ndarray:
        in_tour = state.state.get("in_tour")
        if in_tour.sum() == 0.0:
            mask = np.zeros(state.n, dtype=bool)
            mask[state.cache["v_s"]] = True
            return mask
        return in_tour == 0.0

    def transition(self, state: MdpState, v: int) -> None:
        store = state.state
        store.set_node("in_tour", v, 1.0)
        u = state.psi(1)
        if u is not None:
            pred = store.get("pred")
            store.set_node("pred", v, pred[u])
            store.set_node("pred", u, v)
        self.select(state, v)

    def is_terminal(self, state) -> bool:
        return bool((state.state.get("in_tour") == 1.0).all())

    def objective(self, state) -> float:
        in_tour = state.state.get("in_tour") == 1.0
        pred = state.state.get("pred")
        W = state.cache["W"]
        idx = np.flatnonzero(in_tour)
        return -float(W[idx, pred[idx]].sum())

    def candidate_rewards(self, state):
        mask = self.action_mask(state)
        actions = np.flatnonzero(mask)
        u = state.psi(1)
        if u is None:
            return actions, np.zeros(len(actions))
        W = state.cache["W"]
        v_s = state.cache["v_s"]
        rewards = W[u, v_s] - W[u, actions] - W[actions, v_s]
        return actions, rewards
