"""Shared environment contract: schema, reset, phased node selection, and
the generic step with mask enforcement and difference rewards."""

from __future__ import annotations

import numpy as np

from ..errors import InvalidActionError, SchemaError
from ..features import FeatureDef, FeatureKind, FeatureStore
from ..graphs import Graph, with_uniform_weights
from ..mdp import MdpState, StepResult


class Environment:
    """One problem binding: feature schema, transition, mask, horizon,
    terminal test, and (optionally) an objective J.

    Instances are immutable and shared across episodes; all per-episode
    data lives on the MdpState.
    """

    name: str = ""
    phase_count: int = 1
    has_objective: bool = False
    needs_edge_weights: bool = False
    needs_node_weights: bool = False
    needs_start_node: bool = False

    # -- schema ---------------------------------------------------------

    def input_defs(self) -> list[FeatureDef]:
        raise NotImplementedError

    def state_defs(self) -> list[FeatureDef]:
        raise NotImplementedError

    def phase_defs(self) -> list[FeatureDef]:
        """Phase counter and per-phase last-selection indicators."""
        defs = [FeatureDef("p", "graph", FeatureKind.CATEGORICAL, "state",
                           categories=self.phase_count, initial=1)]
        for m in range(1, self.phase_count + 1):
            defs.append(FeatureDef(f"psi_{m}", "node", FeatureKind.CATEGORICAL,
                                   "state", categories=2, initial=0))
        return defs

    def schema(self) -> list[FeatureDef]:
        return self.input_defs() + self.state_defs()

    # -- episode setup ----------------------------------------------------

    def make_inputs(self, graph: Graph, rng: np.random.Generator) -> FeatureStore:
        """Build the input store, sampling whatever the dataset lacks.

        Consumption order is fixed (edge weights, node weights, start node)
        so trajectories replay bit-exactly from their seed.
        """
        if self.needs_edge_weights and graph.weights is None:
            graph = with_uniform_weights(graph, int(rng.integers(2**63)))
        store = FeatureStore(graph, self.input_defs(), "input")
        if self.needs_edge_weights:
            store.fill_edges("A", np.asarray(graph.weights))
        if "adj" in store.defs:
            store.fill_edges("adj", np.ones(graph.edge_count))
        if self.needs_node_weights:
            store.fill_node("w", 1.0 - rng.random(graph.node_count))
        if self.needs_start_node:
            v_s = np.zeros(graph.node_count)
            v_s[int(rng.integers(graph.node_count))] = 1.0
            store.fill_node("v_s", v_s)
        return store

    def reset(self, graph: Graph, inputs: FeatureStore,
              env_rng: np.random.Generator | None = None) -> MdpState:
        expected = {d.name for d in self.input_defs()}
        got = set(inputs.defs)
        if expected != got:
            missing = expected - got
            extra = got - expected
            bad = ", ".join(sorted(missing | extra))
            raise SchemaError(f"{self.name}: input schema mismatch on {bad}")
        inputs.validate()
        state = FeatureStore(inputs.graph, self.state_defs(), "state")
        mdp = MdpState(inputs.graph, inputs, state)
        mdp.cache["psi"] = [None] * self.phase_count
        self.setup(mdp, env_rng or np.random.default_rng(0))
        if self.has_objective:
            mdp.cache["J"] = self.objective(mdp)
        return mdp

    def setup(self, state: MdpState, env_rng: np.random.Generator) -> None:
        """Hook for per-episode caches (reference solutions etc.)."""

    # -- contract to implement --------------------------------------------

    def horizon(self, graph: Graph) -> int:
        raise NotImplementedError

    def action_mask(self, state: MdpState) -> np.ndarray:
        raise NotImplementedError

    def is_terminal(self, state: MdpState) -> bool:
        raise NotImplementedError

    def transition(self, state: MdpState, v: int) -> None:
        raise NotImplementedError

    def objective(self, state: MdpState) -> float:
        raise NotImplementedError(f"{self.name} defines no objective")

    # -- generic stepping ---------------------------------------------------

    def select(self, state: MdpState, v: int) -> None:
        """psi_p <- v, then p <- p mod P + 1."""
        p = state.phase
        name = f"psi_{p}"
        if name in state.state.defs:
            ind = np.zeros(state.n)
            ind[v] = 1.0
            state.state.fill_node(name, ind)
        state.cache["psi"][p - 1] = v
        state.phase = p % self.phase_count + 1
        state.state.set_graph("p", state.phase)

    def step(self, state: MdpState, v: int) -> StepResult:
        v = int(v)
        mask = self.action_mask(state)
        if not (0 <= v < state.n) or not mask[v]:
            raise InvalidActionError(f"{self.name}: invalid action {v} at t={state.t}")
        self.transition(state, v)
        state.t += 1
        state.state.validate()
        reward = 0.0
        if self.has_objective:
            j_after = self.objective(state)
            reward = j_after - state.cache["J"]
            state.cache["J"] = j_after
        terminal = self.is_terminal(state)
        truncated = state.t >= self.horizon(state.graph)
        return StepResult(state, reward, terminal, truncated)

    # -- features exposed to the network ------------------------------------

    def edge_arrays(self, state: MdpState):
        """(src, dst, {name: per-directed-edge values}) for message passing.

        Default: the static input graph, undirected edges expanded both
        ways. Environments whose graph mutates override this.
        """
        src, dst, eid = state.graph.directed_edges
        feats = {}
        for store in (state.inputs, state.state):
            for fname, d in store.defs.items():
                if d.location == "edge":
                    feats[fname] = np.asarray(store.values[fname])[eid]
        return src, dst, feats

    # -- optional fast path for the greedy weak expert ----------------------

    def candidate_rewards(self, state: MdpState):
        """(actions, one-step rewards) without mutating state, or None to
        make callers fall back to copy-and-step evaluation."""
        return None

    def copy_state(self, state: MdpState) -> MdpState:
        new = MdpState(state.graph, state.inputs, state.state.copy(),
                       state.phase, state.t)
        new.cache = dict(state.cache)
        new.cache["psi"] = list(state.cache["psi"])
        return new
