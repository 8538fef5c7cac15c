"""Graph-algorithm execution as MDPs with imitation- and RL-trained
node-selection policies."""

from .graphs import (Graph, generate_ba, generate_complete, generate_er,
                     generate_euclidean, load_dataset, save_dataset,
                     with_uniform_weights)
from .features import FeatureDef, FeatureKind, FeatureStore
from .mdp import (MdpState, StepResult, Trajectory, load_trajectories,
                  replay, replay_final, rollout, save_trajectories)
from .envs import make_env

__all__ = [
    "Graph", "generate_er", "generate_ba", "generate_complete",
    "generate_euclidean", "save_dataset", "load_dataset",
    "with_uniform_weights", "FeatureKind", "FeatureDef", "FeatureStore",
    "MdpState", "StepResult", "Trajectory", "rollout", "replay",
    "replay_final", "save_trajectories", "load_trajectories", "make_env",
]

__version__ = "0.1.0"
