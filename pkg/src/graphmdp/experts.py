"""Expert action-distribution policies, greedy weak experts, and
demonstration collection.

Each expert maps an MdpState to a probability vector over nodes whose
support lies inside the environment's action mask; querying one on a
terminal state raises ExpertError.
"""

from __future__ import annotations

import functools
import multiprocessing

import numpy as np

from .errors import ExpertError, GraphMdpError
from .mdp import Trajectory, episode_seed, rollout
from .oracles import mvc_exact_cover, tsp_exact_tour


def _uniform(n: int, members) -> np.ndarray:
    members = list(members)
    if not members:
        raise ExpertError("expert has no eligible action")
    probs = np.zeros(n)
    probs[members] = 1.0 / len(members)
    return probs


def _onehot(n: int, v: int) -> np.ndarray:
    probs = np.zeros(n)
    probs[v] = 1.0
    return probs


def _pred_depths(pred: np.ndarray, reached: np.ndarray) -> np.ndarray:
    """Chain length to the self-pointing root for reached nodes; 0 for
    unreached ones (so they never dominate a deepest-open scan)."""
    n = len(pred)
    depths = np.zeros(n, dtype=np.int64)
    for v in range(n):
        if not reached[v]:
            continue
        x, steps = v, 0
        while pred[x] != x:
            x = int(pred[x])
            steps += 1
            if steps > n:
                raise ExpertError("pred chain does not terminate")
        depths[v] = steps
    return depths


# ---------------------------------------------------------------------------
# BFS / DFS

def expert_bfs(state) -> np.ndarray:
    g = state.graph
    reach = state.state.get("reach")
    if state.phase == 1:
        if reach.sum() == 0.0:
            v_s = state.cache["v_s"]
            if not g.out_neighbors[v_s]:
                raise ExpertError("bfs expert on a terminal state")
            return _onehot(state.n, v_s)
        frontier = [v for v in range(state.n) if reach[v] == 1.0
                    and any(reach[u] == 0.0 for u in g.out_neighbors[v])]
        if not frontier:
            raise ExpertError("bfs expert on a terminal state")
        depths = _pred_depths(state.state.get("pred"), reach == 1.0)
        d_min = min(depths[v] for v in frontier)
        return _uniform(state.n, [v for v in frontier if depths[v] == d_min])
    psi1 = state.psi(1)
    return _uniform(state.n, [u for u in g.out_neighbors[psi1]
                              if reach[u] == 0.0])


def expert_dfs(state) -> np.ndarray:
    g = state.graph
    reach = state.state.get("reach")
    colour = np.zeros(state.n, dtype=np.int64)
    for v in range(state.n):
        if reach[v] == 1.0:
            colour[v] = 2 if all(reach[u] == 1.0 for u in g.out_neighbors[v]) else 1
    if state.phase == 1:
        open_nodes = [v for v in range(state.n) if colour[v] != 2]
        if not open_nodes:
            raise ExpertError("dfs expert on a terminal state")
        depths = _pred_depths(state.state.get("pred"), reach == 1.0)
        d_max = max(depths[v] for v in open_nodes)
        eligible = [v for v in open_nodes if colour[v] == 1 and depths[v] == d_max]
        if not eligible:
            eligible = [v for v in open_nodes if colour[v] == 0 and depths[v] == d_max]
        return _uniform(state.n, eligible)
    psi1 = state.psi(1)
    candidates = [u for u in g.out_neighbors[psi1]
                  if u != psi1 and reach[u] == 0.0]
    if not candidates and reach[psi1] == 0.0:
        candidates = [psi1]
    return _uniform(state.n, candidates)


# ---------------------------------------------------------------------------
# Bellman-Ford

def _bf_candidates(state, u: int) -> list[int]:
    d = state.state.get("d")
    mask = state.state.get("mask")
    W = state.cache["W"]
    v_s = state.cache["v_s"]
    out = []
    for v in state.graph.out_neighbors[u]:
        if v == u:
            continue
        # the source is visited by convention: never re-relax it
        if d[u] + W[u, v] < d[v] or (mask[v] == 0.0 and v != v_s):
            out.append(v)
    return out


def expert_bellman_ford(state) -> np.ndarray:
    if state.phase == 2:
        return _uniform(state.n, _bf_candidates(state, state.psi(1)))
    mask = state.state.get("mask")
    v_s = state.cache["v_s"]
    scan = {v for v in range(state.n) if mask[v] == 1.0} | {v_s}
    possible = [v for v in sorted(scan) if _bf_candidates(state, v)]
    return _uniform(state.n, possible)


# ---------------------------------------------------------------------------
# MST-Prim

def _prim_useful(state, u: int) -> list[int]:
    store = state.state
    mark, key, in_queue = (store.get("mark"), store.get("key"),
                           store.get("in_queue"))
    W = state.cache["W"]
    return [v for v in state.graph.out_neighbors[u]
            if v != u and mark[v] == 0.0
            and (key[v] > W[u, v] or in_queue[v] == 0.0)]


def expert_mst_prim(state) -> np.ndarray:
    if state.phase == 2:
        return _uniform(state.n, _prim_useful(state, state.psi(1)))
    psi1 = state.psi(1)
    if psi1 is None:
        return _onehot(state.n, state.cache["v_s"])  # first expansion seed
    if _prim_useful(state, psi1):
        return _onehot(state.n, psi1)  # maintain the current node if possible
    in_queue = state.state.get("in_queue")
    key = state.state.get("key")
    queued = sorted((v for v in range(state.n) if in_queue[v] == 1.0),
                    key=lambda v: (key[v], v))
    for u in queued:
        if _prim_useful(state, u):
            return _onehot(state.n, u)
    raise ExpertError("mst expert on a terminal state")


# ---------------------------------------------------------------------------
# TSP / MVC oracle-backed experts

def expert_tsp(state) -> np.ndarray:
    tour = state.cache.get("oracle_tour")
    if tour is None:
        full, _ = tsp_exact_tour(state.cache["W"])
        v_s = state.cache["v_s"]
        at = full.index(v_s)
        tour = full[at:] + full[:at]
        state.cache["oracle_tour"] = tour
    in_tour = state.state.get("in_tour")
    k = int(in_tour.sum())
    if k >= state.n:
        raise ExpertError("tsp expert on a terminal state")
    if k == 0:
        return _onehot(state.n, tour[0])
    psi1 = state.psi(1)
    nxt = tour[(tour.index(psi1) + 1) % state.n]
    if in_tour[nxt] == 1.0:
        raise ExpertError("tsp expert off the oracle tour")
    return _onehot(state.n, nxt)


def expert_mvc(state) -> np.ndarray:
    cover = state.cache.get("oracle_cover")
    if cover is None:
        cover = mvc_exact_cover(state.graph, state.inputs.get("w"))
        state.cache["oracle_cover"] = cover
    in_cover = state.state.get("in_cover")
    remaining = [v for v in sorted(cover) if in_cover[v] == 0.0]
    return _uniform(state.n, remaining)


def make_cover_expert(cover) -> "callable":
    """Expert that selects uniformly from a fixed cover (used to replay
    the approximation algorithm as a policy)."""
    def policy(state):
        in_cover = state.state.get("in_cover")
        return _uniform(state.n, [v for v in sorted(cover)
                                  if in_cover[v] == 0.0])
    return policy


EXPERTS = {
    "bfs": expert_bfs,
    "dfs": expert_dfs,
    "bellman_ford": expert_bellman_ford,
    "mst_prim": expert_mst_prim,
    "tsp": expert_tsp,
    "mvc": expert_mvc,
}


def make_expert(env) -> "callable":
    try:
        return EXPERTS[env.name]
    except KeyError:
        raise GraphMdpError(
            f"{env.name} has no strong expert; use the weak expert") from None


# ---------------------------------------------------------------------------
# greedy weak experts

def _candidate_rewards(env, state):
    fast = env.candidate_rewards(state)
    if fast is not None:
        return fast
    actions = np.flatnonzero(env.action_mask(state))
    rewards = np.empty(len(actions))
    for i, a in enumerate(actions):
        probe = env.copy_state(state)
        rewards[i] = env.step(probe, int(a)).reward
    return actions, rewards


def _argmax_lowest(actions, scores) -> int:
    best_i = 0
    for i in range(1, len(actions)):
        if scores[i] > scores[best_i] + 1e-12:
            best_i = i
    return int(actions[best_i])


def weak_expert_action(env, state) -> int:
    """One-step-reward greedy action; on phase 1 of a two-phase
    environment the step reward is identically zero, so the pick is
    edge-greedy: score each node by its best completion reward."""
    mask = env.action_mask(state)
    if not mask.any():
        raise ExpertError("weak expert on a terminal state")
    if env.phase_count == 2 and state.phase == 1:
        actions = np.flatnonzero(mask)
        scores = np.empty(len(actions))
        for i, u in enumerate(actions):
            probe = env.copy_state(state)
            env.step(probe, int(u))
            _, completions = _candidate_rewards(env, probe)
            scores[i] = completions.max() if len(completions) else -np.inf
        return _argmax_lowest(actions, scores)
    actions, rewards = _candidate_rewards(env, state)
    return _argmax_lowest(actions, rewards)


def weak_expert_policy(env) -> "callable":
    def policy(state):
        return _onehot(state.n, weak_expert_action(env, state))
    return policy


def mvc_coverage_greedy(state) -> np.ndarray:
    """Alternative MVC baseline: maximise uncovered-degree per weight
    (the literal one-step-reward greedy just picks the lightest node)."""
    in_cover = state.state.get("in_cover")
    w = state.inputs.get("w")
    gain = np.zeros(state.n)
    for u, v in state.graph.edges:
        if in_cover[u] == 0.0 and in_cover[v] == 0.0:
            gain[u] += 1.0
            gain[v] += 1.0
    actions = np.flatnonzero(in_cover == 0.0)
    return _onehot(len(in_cover), _argmax_lowest(actions, gain[actions] / w[actions]))


# ---------------------------------------------------------------------------
# demonstration collection

def _collect_one(env, graphs, base_seed, collect_probs, mode, temperature,
                 policy_name, episode: int) -> Trajectory:
    graph_id = episode % len(graphs)
    policy = make_expert(env) if policy_name == "expert" else weak_expert_policy(env)
    return rollout(env, graphs[graph_id], policy, mode=mode,
                   temperature=temperature, seed=episode_seed(base_seed, episode),
                   graph_id=graph_id, collect_probs=collect_probs)


def collect_demos(env, graphs, episodes: int, base_seed: int = 0, *,
                  policy: str = "expert", workers: int = 1) -> list[Trajectory]:
    """Run the expert over a dataset and record trajectories.

    Strong experts are sampled from their full distribution (stored with
    the trajectory); the weak expert is deterministic and stores actions
    only. Per-episode seeds make results independent of `workers`.
    """
    if policy == "expert":
        fn = functools.partial(_collect_one, env, graphs, base_seed, True,
                               "sample", 1.0, "expert")
    elif policy == "weak":
        fn = functools.partial(_collect_one, env, graphs, base_seed, False,
                               "greedy", None, "weak")
    else:
        raise GraphMdpError(f"unknown demo policy {policy!r}")
    if workers > 1:
        with multiprocessing.Pool(workers) as pool:
            return pool.map(fn, range(episodes))
    return [fn(i) for i in range(episodes)]
