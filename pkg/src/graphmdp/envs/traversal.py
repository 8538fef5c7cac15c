"""BFS and DFS environments.

Both share one transition: a phase-1 choice picks a node, a phase-2
choice marks (parent, child) reached and points the child's pred at the
parent. BFS narrows the masks so phase 1 is an already-reached frontier
parent (first move forced to the start node) and phase 2 an unreached
neighbour; DFS keeps the permissive masks and allows selecting the
phase-1 node itself again, which turns it into a self-pointing root.
"""

from __future__ import annotations

import numpy as np

from ..errors import SchemaError
from ..features import FeatureDef, FeatureKind
from ..graphs import Graph
from ..mdp import MdpState
from .base import Environment


class _TraversalEnv(Environment):
    phase_count = 2

    def state_defs(self):
        return self.phase_defs() + [
            FeatureDef("pred", "node", FeatureKind.POINTER, "state", initial="self"),
            FeatureDef("reach", "node", FeatureKind.MASK, "state", initial=0),
        ]

    def horizon(self, graph: Graph) -> int:
        return self.phase_count * (graph.node_count - 1)

    def transition(self, state: MdpState, v: int) -> None:
        if state.phase == 2:
            psi1 = state.psi(1)
            reach = state.state.get("reach")
            reach[psi1] = 1.0
            reach[v] = 1.0
            state.state.set_node("pred", v, psi1)
        self.select(state, v)


class BfsEnv(_TraversalEnv):
    name = "bfs"
    needs_start_node = True

    def input_defs(self):
        return [
            FeatureDef("v_s", "node", FeatureKind.MASK_ONE, "input"),
            FeatureDef("adj", "edge", FeatureKind.SCALAR, "input"),
        ]

    def setup(self, state, env_rng):
        if state.graph.directed:
            raise SchemaError("bfs runs on undirected graphs only")
        state.cache["v_s"] = int(np.argmax(state.inputs.get("v_s")))

    def _frontier(self, state) -> np.ndarray:
        """Reached nodes that still have an unreached neighbour."""
        reach = state.state.get("reach")
        out = np.zeros(state.n, dtype=bool)
        for v in range(state.n):
            if reach[v] == 1.0 and any(reach[u] == 0.0
                                       for u in state.graph.out_neighbors[v]):
                out[v] = True
        return out

    def action_mask(self, state) -> np.ndarray:
        reach = state.state.get("reach")
        mask = np.zeros(state.n, dtype=bool)
        if state.phase == 1:
            if reach.sum() == 0.0:
                v_s = state.cache["v_s"]
                if state.graph.out_neighbors[v_s]:
                    mask[v_s] = True
                return mask
            return self._frontier(state)
        psi1 = state.psi(1)
        for u in state.graph.out_neighbors[psi1]:
            if reach[u] == 0.0:
                mask[u] = True
        return mask

    def is_terminal(self, state) -> bool:
        if state.phase != 1:
            return False
        reach = state.state.get("reach")
        if reach.sum() == 0.0:
            # nothing traversed yet: terminal only if the start is isolated
            return not state.graph.out_neighbors[state.cache["v_s"]]
        return not self._frontier(state).any()


class DfsEnv(_TraversalEnv):
    name = "dfs"

    def input_defs(self):
        return [FeatureDef("adj", "edge", FeatureKind.SCALAR, "input")]

    def action_mask(self, state) -> np.ndarray:
        if state.phase == 1:
            return np.ones(state.n, dtype=bool)
        mask = np.zeros(state.n, dtype=bool)
        psi1 = state.psi(1)
        for u in state.graph.out_neighbors[psi1]:
            mask[u] = True
        # selecting the phase-1 node again marks it a self-pointing root
        mask[psi1] = True
        return mask

    def is_terminal(self, state) -> bool:
        return state.phase == 1 and bool(
            (state.state.get("reach") == 1.0).all())
