"""MST-Prim environment: phase 1 marks a node (dequeues it), phase 2
relaxes one neighbour's key/pred into the priority queue."""

from __future__ import annotations

import numpy as np

from ..features import FeatureDef, FeatureKind
from ..graphs import Graph
from ..mdp import MdpState
from ..validators import minimum_forest_weight
from .base import Environment
from .bellman_ford import _dense

_TOL = 1e-9


class MstPrimEnv(Environment):
    name = "mst_prim"
    phase_count = 2
    needs_edge_weights = True
    needs_start_node = True

    def input_defs(self):
        return [
            FeatureDef("A", "edge", FeatureKind.SCALAR, "input"),
            FeatureDef("v_s", "node", FeatureKind.MASK_ONE, "input"),
        ]

    def state_defs(self):
        return self.phase_defs() + [
            FeatureDef("pred", "node", FeatureKind.POINTER, "state", initial="self"),
            FeatureDef("key", "node", FeatureKind.SCALAR, "state", initial=0),
            FeatureDef("mark", "node", FeatureKind.MASK, "state", initial=0),
            FeatureDef("in_queue", "node", FeatureKind.MASK, "state", initial=0),
        ]

    def horizon(self, graph: Graph) -> int:
        return self.phase_count * graph.node_count ** 2

    def setup(self, state, env_rng):
        g = state.graph
        v_s = int(np.argmax(state.inputs.get("v_s")))
        state.cache["v_s"] = v_s
        W = _dense(g, state.inputs.get("A"))
        state.cache["W"] = W
        comp = _component(g, v_s)
        state.cache["component"] = comp
        weights = {e: w for e, w in zip(g.edges, state.inputs.get("A"))}
        state.cache["ref_weight"] = minimum_forest_weight(g, weights, restrict=comp)

    def action_mask(self, state) -> np.ndarray:
        mask = np.zeros(state.n, dtype=bool)
        if state.phase == 1:
            psi1 = state.psi(1)
            if psi1 is None:
                mask[state.cache["v_s"]] = True
                return mask
            mask = state.state.get("in_queue") == 1.0
            mask = mask.copy()
            mask[psi1] = True
            return mask
        for u in state.graph.out_neighbors[state.psi(1)]:
            mask[u] = True
        return mask

    def transition(self, state: MdpState, v: int) -> None:
        store = state.state
        if state.phase == 1:
            store.set_node("mark", v, 1.0)
            store.set_node("in_queue", v, 0.0)
        else:
            u = state.psi(1)
            if state.graph.has_edge(u, v) and store.get("mark")[v] == 0.0:
                w = state.cache["W"][u, v]
                if store.get("in_queue")[v] == 0.0 or w < store.get("key")[v]:
                    store.set_node("pred", v, u)
                    store.set_node("key", v, w)
                    store.set_node("in_queue", v, 1.0)
        self.select(state, v)

    def is_terminal(self, state) -> bool:
        if state.phase != 1:
            return False
        pred = state.state.get("pred")
        tree = np.flatnonzero(pred != np.arange(state.n))
        comp = state.cache["component"]
        if len(tree) != len(comp) - 1:
            return False
        total = sum(state.cache["W"][v, pred[v]] for v in tree)
        return abs(total - state.cache["ref_weight"]) <= _TOL


def _component(graph: Graph, start: int) -> frozenset[int]:
    seen = {start}
    stack = [start]
    while stack:
        u = stack.pop()
        for v in graph.out_neighbors[u]:
            if v not in seen:
                seen.add(v)
                stack.append(v)
    return frozenset(seen)
