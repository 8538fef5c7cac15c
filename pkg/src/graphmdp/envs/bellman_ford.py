"""Bellman-Ford environment: phase 1 picks a relaxation source, phase 2
assigns d, mask, and pred of one of its neighbours."""

from __future__ import annotations

import numpy as np

from ..features import FeatureDef, FeatureKind
from ..graphs import Graph
from ..mdp import MdpState
from ..validators import reference_distances
from .base import Environment

_TOL = 1e-9


class BellmanFordEnv(Environment):
    name = "bellman_ford"
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
            FeatureDef("mask", "node", FeatureKind.MASK, "state", initial=0),
            FeatureDef("d", "node", FeatureKind.SCALAR, "state", initial=0),
        ]

    def horizon(self, graph: Graph) -> int:
        return self.phase_count * (graph.node_count - 1) * graph.edge_count

    def setup(self, state, env_rng):
        g = state.graph
        v_s = int(np.argmax(state.inputs.get("v_s")))
        state.cache["v_s"] = v_s
        weights = {e: w for e, w in zip(g.edges, state.inputs.get("A"))}
        state.cache["W"] = _dense(g, state.inputs.get("A"))
        ref = reference_distances(g, weights, v_s)
        state.cache["ref"] = ref
        state.cache["reachable"] = np.isfinite(ref)

    def action_mask(self, state) -> np.ndarray:
        if state.phase == 1:
            # the source stays selectable even though its mask bit never
            # flips: its remaining edges have to be relaxable from it
            mask = state.state.get("mask") == 1.0
            mask = mask.copy()
            mask[state.cache["v_s"]] = True
            return mask
        mask = np.zeros(state.n, dtype=bool)
        for u in state.graph.out_neighbors[state.psi(1)]:
            mask[u] = True
        return mask

    def transition(self, state: MdpState, v: int) -> None:
        if state.phase == 2:
            psi1 = state.psi(1)
            if state.graph.has_edge(psi1, v):
                d = state.state.get("d")
                d[v] = d[psi1] + state.cache["W"][psi1, v]
                state.state.set_node("mask", v, 1.0)
                state.state.set_node("pred", v, psi1)
        self.select(state, v)

    def is_terminal(self, state) -> bool:
        if state.phase != 1:
            return False
        reachable = state.cache["reachable"]
        d = state.state.get("d")
        return bool(np.all(np.abs(d[reachable] - state.cache["ref"][reachable])
                           <= _TOL))


def _dense(graph: Graph, edge_values) -> np.ndarray:
    mat = np.zeros((graph.node_count, graph.node_count))
    for (u, v), w in zip(graph.edges, edge_values):
        mat[u, v] = w
        if not graph.directed:
            mat[v, u] = w
    return mat
