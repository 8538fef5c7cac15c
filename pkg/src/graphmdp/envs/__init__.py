"""Environment registry; names are stable CLI identifiers."""

from ..errors import GraphMdpError
from .base import Environment
from .bellman_ford import BellmanFordEnv
from .mst_prim import MstPrimEnv
from .mvc import MvcEnv
from .rgc import RgcEnv
from .traversal import BfsEnv, DfsEnv
from .tsp import TspEnv

ENV_CLASSES = {
    "bfs": BfsEnv,
    "dfs": DfsEnv,
    "bellman_ford": BellmanFordEnv,
    "mst_prim": MstPrimEnv,
    "tsp": TspEnv,
    "mvc": MvcEnv,
    "rgc": RgcEnv,
}


def make_env(name: str, **kwargs) -> Environment:
    try:
        cls = ENV_CLASSES[name]
    except KeyError:
        raise GraphMdpError(
            f"unknown environment {name!r}; choose from {sorted(ENV_CLASSES)}")
    return cls(**kwargs)


__all__ = ["Environment", "ENV_CLASSES", "make_env", "BfsEnv", "DfsEnv",
           "BellmanFordEnv", "MstPrimEnv", "TspEnv", "MvcEnv", "RgcEnv"]
