"""Generic MDP machinery: episode state, the rollout engine, and
trajectory persistence.

States are exclusively owned by one rollout and mutated in place; the
trajectory files store action sequences plus the episode seed, and states
are reproduced by replaying the deterministic transitions.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DatasetError, GraphMdpError, PolicyError
from .features import FeatureStore
from .graphs import Graph


@dataclass
class MdpState:
    graph: Graph
    inputs: FeatureStore
    state: FeatureStore
    phase: int = 1
    t: int = 0
    cache: dict = field(default_factory=dict)

    @property
    def n(self) -> int:
        return self.graph.node_count

    def psi(self, m: int):
        """Node last selected in phase m (None before any selection)."""
        return self.cache["psi"][m - 1]


@dataclass
class StepResult:
    next_state: MdpState
    reward: float
    terminal: bool
    truncated: bool

    @property
    def done(self) -> bool:
        return self.terminal or self.truncated


@dataclass
class Trajectory:
    env_name: str
    graph_id: int
    seed: int
    actions: list[int]
    rewards: list[float]
    expert_probs: list[np.ndarray] | None = None
    terminal: bool = False
    truncated: bool = False

    @property
    def length(self) -> int:
        return len(self.actions)

    @property
    def total_reward(self) -> float:
        return float(sum(self.rewards))


def episode_rngs(seed: int):
    """Fixed-order child streams for one episode: (inputs, actions, env)."""
    ss = np.random.SeedSequence(int(seed))
    kids = ss.spawn(3)
    return tuple(np.random.default_rng(k) for k in kids)


def episode_seed(base_seed: int, episode_index: int) -> int:
    return int(base_seed) ^ int(episode_index)


def sample_action(probs: np.ndarray, mode: str, temperature: float | None,
                  rng: np.random.Generator | None) -> int:
    """Pick an action from a distribution.

    greedy: argmax with lowest-index tie-breaking. sample: draws from
    pi_lambda(a) proportional to pi(a)^(1/lambda); lambda = 0 routes to
    greedy so evaluation stays reproducible.
    """
    if mode == "greedy" or (mode == "sample" and not temperature):
        return int(np.argmax(probs))
    if mode != "sample":
        raise GraphMdpError(f"unknown action mode {mode!r}")
    support = probs > 0.0
    logp = np.full_like(probs, -np.inf)
    logp[support] = np.log(probs[support]) / temperature
    logp -= logp.max()
    p = np.exp(logp)
    p /= p.sum()
    return int(rng.choice(len(probs), p=p))


def rollout(env, graph: Graph, policy, *, mode: str = "greedy",
            temperature: float | None = None, seed: int = 0,
            graph_id: int = 0, inputs: FeatureStore | None = None,
            collect_probs: bool = False, max_steps: int | None = None) -> Trajectory:
    """Run one full episode and record it.

    `policy` maps a state to an action distribution over nodes, supported
    only on mask-allowed actions. Deterministic given (env, graph, policy,
    seed); per-episode randomness comes from the seed's child streams.
    """
    input_rng, action_rng, env_rng = episode_rngs(seed)
    if inputs is None:
        inputs = env.make_inputs(graph, input_rng)
    state = env.reset(graph, inputs, env_rng=env_rng)
    traj = Trajectory(env.name, graph_id, seed, [], [],
                      expert_probs=[] if collect_probs else None)
    horizon = env.horizon(graph)
    if max_steps is not None:
        horizon = min(horizon, max_steps)
    if env.is_terminal(state):
        traj.terminal = True
        return traj
    while True:
        probs = np.asarray(policy(state), dtype=np.float64)
        mask = env.action_mask(state)
        if probs[~mask].sum() > 1e-9 or probs[mask].sum() <= 0.0:
            raise PolicyError("policy places its mass outside the action mask")
        action = sample_action(probs, mode, temperature, action_rng)
        if collect_probs:
            traj.expert_probs.append(probs.copy())
        result = env.step(state, action)
        traj.actions.append(int(action))
        traj.rewards.append(float(result.reward))
        if result.terminal:
            traj.terminal = True
        if result.truncated or state.t >= horizon:
            traj.truncated = True
        if traj.terminal or traj.truncated:
            return traj


def replay(env, graph: Graph, traj: Trajectory,
           inputs: FeatureStore | None = None):
    """Yield (state, action, probs) just before each recorded step is
    re-applied; use replay_final for only the end state."""
    input_rng, _, env_rng = episode_rngs(traj.seed)
    if inputs is None:
        inputs = env.make_inputs(graph, input_rng)
    state = env.reset(graph, inputs, env_rng=env_rng)
    for i, action in enumerate(traj.actions):
        probs = traj.expert_probs[i] if traj.expert_probs else None
        yield state, action, probs
        env.step(state, action)


def replay_final(env, graph: Graph, traj: Trajectory) -> MdpState:
    """Re-run a stored trajectory and return the final state."""
    input_rng, _, env_rng = episode_rngs(traj.seed)
    inputs = env.make_inputs(graph, input_rng)
    state = env.reset(graph, inputs, env_rng=env_rng)
    for action in traj.actions:
        env.step(state, action)
    return state


# ---------------------------------------------------------------------------
# trajectory files: per trajectory a `traj <env> <graph_id> <seed> <steps>
# <terminal> <truncated>` header, then one `t action reward [probs...]`
# line per step

def save_trajectories(trajs: list[Trajectory], path) -> None:
    from .graphs import _open_text

    with _open_text(path, "w") as fh:
        fh.write(f"graphmdp-trajectories v1 {len(trajs)}\n")
        for tr in trajs:
            fh.write(f"traj {tr.env_name} {tr.graph_id} {tr.seed} "
                     f"{tr.length} {int(tr.terminal)} {int(tr.truncated)}\n")
            for t in range(tr.length):
                line = f"{t} {tr.actions[t]} {tr.rewards[t]:.17g}"
                if tr.expert_probs is not None:
                    line += " " + " ".join(f"{p:.17g}" for p in tr.expert_probs[t])
                fh.write(line + "\n")


def load_trajectories(path) -> list[Trajectory]:
    from .graphs import _open_text

    with _open_text(path, "r") as fh:
        lines = fh.read().splitlines()
    if not lines or not lines[0].startswith("graphmdp-trajectories v1"):
        raise DatasetError("missing trajectory header", line=1)
    count = int(lines[0].split()[-1])
    out = []
    ln = 1
    for _ in range(count):
        parts = lines[ln].split()
        if len(parts) != 7 or parts[0] != "traj":
            raise DatasetError(f"expected trajectory header, got {lines[ln]!r}",
                               line=ln + 1)
        env_name, gid, seed, steps, term, trunc = parts[1:]
        ln += 1
        tr = Trajectory(env_name, int(gid), int(seed), [], [],
                        expert_probs=None, terminal=bool(int(term)),
                        truncated=bool(int(trunc)))
        probs_seen = False
        for t in range(int(steps)):
            fields = lines[ln].split()
            if len(fields) < 3 or int(fields[0]) != t:
                raise DatasetError(f"bad step line {lines[ln]!r}", line=ln + 1)
            tr.actions.append(int(fields[1]))
            tr.rewards.append(float(fields[2]))
            if len(fields) > 3:
                if not probs_seen:
                    tr.expert_probs = []
                    probs_seen = True
                tr.expert_probs.append(np.array([float(x) for x in fields[3:]]))
            ln += 1
        out.append(tr)
    return out
