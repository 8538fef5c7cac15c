"""Minimum vertex cover environment: select nodes until every edge has a
covered endpoint; the objective is the negated cover weight."""

from __future__ import annotations

import numpy as np

from ..errors import SchemaError
from ..features import FeatureDef, FeatureKind
from ..graphs import Graph
from ..mdp import MdpState
from .base import Environment


class MvcEnv(Environment):
    name = "mvc"
    phase_count = 1
    has_objective = True
    needs_node_weights = True

    def input_defs(self):
        return [
            FeatureDef("adj", "edge", FeatureKind.MASK, "input", initial=1),
            FeatureDef("w", "node", FeatureKind.SCALAR, "input"),
        ]

    def state_defs(self):
        return [FeatureDef("in_cover", "node", FeatureKind.MASK, "state", initial=0)] \
            + self.phase_defs()

    def horizon(self, graph: Graph) -> int:
        return graph.node_count

    def setup(self, state, env_rng):
        if state.graph.directed:
            raise SchemaError("mvc runs on undirected graphs only")

    def action_mask(self, state) -> np.ndarray:
        return state.state.get("in_cover") == 0.0

    def transition(self, state: MdpState, v: int) -> None:
        state.state.set_node("in_cover", v, 1.0)
        self.select(state, v)

    def is_terminal(self, state) -> bool:
        cover = state.state.get("in_cover")
        return all(cover[u] == 1.0 or cover[v] == 1.0
                   for u, v in state.graph.edges)

    def objective(self, state) -> float:
        cover = state.state.get("in_cover") == 1.0
        return -float(state.inputs.get("w")[cover].sum())

    def candidate_rewards(self, state):
        actions = np.flatnonzero(self.action_mask(state))
        return actions, -state.inputs.get("w")[actions]
