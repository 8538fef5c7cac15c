"""Typed named features at node/edge/graph locations.

Two stores per episode: one for immutable inputs and one for mutable
state; together they are the full MDP state. Edge-located values are
defined only on existing edges (sparse restriction) and every value must
satisfy its kind's invariant at all times.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import SchemaError
from .graphs import Graph


class FeatureKind(Enum):
    SCALAR = "scalar"
    MASK = "mask"
    MASK_ONE = "mask_one"
    CATEGORICAL = "categorical"
    POINTER = "pointer"


@dataclass(frozen=True)
class FeatureDef:
    """One schema entry: a named feature at a location with a kind.

    For categorical features `categories` declares the valid value range
    [0, categories); `initial` is the reset fill (node pointers default to
    self, which callers express with initial="self").
    """

    name: str
    location: str  # node | edge | graph
    kind: FeatureKind
    stage: str  # input | state
    categories: int | None = None
    initial: object = None

    def __post_init__(self):
        if self.location not in ("node", "edge", "graph"):
            raise SchemaError(f"{self.name}: bad location {self.location!r}")
        if self.stage not in ("input", "state"):
            raise SchemaError(f"{self.name}: bad stage {self.stage!r}")
        if self.kind is FeatureKind.CATEGORICAL and self.categories is None:
            raise SchemaError(f"{self.name}: categorical needs a category count")


class FeatureStore:
    """Concrete values for one stage of a schema, validated on write.

    Node values are float64/int64 arrays of length node_count, edge values
    align with the store's edge list (initially the graph's edges; RGC
    rebinds them as its graph grows), graph values are scalars.
    """

    def __init__(self, graph: Graph, defs: list[FeatureDef], stage: str):
        self.graph = graph
        self.stage = stage
        self.defs = {d.name: d for d in defs}
        for d in defs:
            if d.stage != stage:
                raise SchemaError(f"{d.name}: stage {d.stage} in a {stage} store")
        self.edges: tuple[tuple[int, int], ...] = graph.edges
        self._edge_lookup = {e: i for i, e in enumerate(self.edges)}
        self.values: dict[str, object] = {}
        for d in defs:
            self.values[d.name] = self._initial_value(d)

    def _initial_value(self, d: FeatureDef):
        n = self.graph.node_count
        if d.location == "graph":
            return 0.0 if d.initial is None else d.initial
        if d.location == "edge":
            fill = 0.0 if d.initial is None else float(d.initial)
            return np.full(len(self.edges), fill)
        if d.kind is FeatureKind.POINTER:
            if d.initial in (None, "self"):
                return np.arange(n, dtype=np.int64)
            return np.full(n, int(d.initial), dtype=np.int64)
        fill = 0.0 if d.initial is None else float(d.initial)
        return np.full(n, fill)

    def _def(self, name: str) -> FeatureDef:
        try:
            return self.defs[name]
        except KeyError:
            raise SchemaError(f"unknown feature {name!r}") from None

    def get(self, name: str):
        self._def(name)
        return self.values[name]

    def set_graph(self, name: str, value):
        d = self._def(name)
        if d.location != "graph":
            raise SchemaError(f"{name} is not graph-located")
        self.values[name] = value
        self._check_one(d)

    def set_node(self, name: str, index: int, value):
        d = self._def(name)
        if d.location != "node":
            raise SchemaError(f"{name} is not node-located")
        self.values[name][index] = value
        self._check_one(d)

    def fill_node(self, name: str, values: np.ndarray):
        d = self._def(name)
        if d.location != "node":
            raise SchemaError(f"{name} is not node-located")
        arr = np.asarray(values)
        if arr.shape != (self.graph.node_count,):
            raise SchemaError(f"{name}: expected shape ({self.graph.node_count},)")
        self.values[name] = arr.astype(self.values[name].dtype)
        self._check_one(d)

    def set_edge(self, name: str, u: int, v: int, value):
        d = self._def(name)
        if d.location != "edge":
            raise SchemaError(f"{name} is not edge-located")
        key = (u, v) if self.graph.directed else (min(u, v), max(u, v))
        i = self._edge_lookup.get(key)
        if i is None:
            raise SchemaError(f"{name}: ({u}, {v}) is not an edge")
        self.values[name][i] = value
        self._check_one(d)

    def fill_edges(self, name: str, values):
        d = self._def(name)
        if d.location != "edge":
            raise SchemaError(f"{name} is not edge-located")
        arr = np.asarray(values, dtype=np.float64)
        if arr.shape != (len(self.edges),):
            raise SchemaError(f"{name}: expected one value per edge")
        self.values[name] = arr
        self._check_one(d)

    def rebind_edges(self, edges: tuple[tuple[int, int], ...],
                     edge_values: dict[str, np.ndarray]):
        """Replace the edge set (environments whose graph grows)."""
        self.edges = tuple(edges)
        self._edge_lookup = {e: i for i, e in enumerate(self.edges)}
        for name, vals in edge_values.items():
            d = self._def(name)
            if d.location != "edge":
                raise SchemaError(f"{name} is not edge-located")
            arr = np.asarray(vals, dtype=np.float64)
            if arr.shape != (len(self.edges),):
                raise SchemaError(f"{name}: expected one value per edge")
            self.values[name] = arr
            self._check_one(d)

    # -- validation ---------------------------------------------------------

    def _check_one(self, d: FeatureDef):
        v = self.values[d.name]
        n = self.graph.node_count
        if d.location == "graph":
            if d.kind is FeatureKind.CATEGORICAL:
                if not (isinstance(v, (int, np.integer)) and 0 <= int(v) < d.categories + 1):
                    raise SchemaError(f"{d.name}: categorical value {v!r} out of range")
            return
        arr = np.asarray(v)
        if d.kind is FeatureKind.MASK:
            if not np.isin(arr, (0.0, 1.0)).all():
                raise SchemaError(f"{d.name}: mask values must be 0 or 1")
        elif d.kind is FeatureKind.MASK_ONE:
            if not np.isin(arr, (0.0, 1.0)).all() or arr.sum() != 1.0:
                raise SchemaError(f"{d.name}: mask_one needs exactly one 1")
        elif d.kind is FeatureKind.POINTER:
            if arr.min(initial=0) < 0 or arr.max(initial=0) >= n:
                raise SchemaError(f"{d.name}: pointer values must be node indices")
        elif d.kind is FeatureKind.CATEGORICAL:
            if arr.min(initial=0) < 0 or arr.max(initial=0) >= d.categories:
                raise SchemaError(f"{d.name}: categorical values out of range")
        if not np.isfinite(arr).all():
            raise SchemaError(f"{d.name}: non-finite values")

    def validate(self):
        for d in self.defs.values():
            self._check_one(d)

    def copy(self) -> "FeatureStore":
        new = object.__new__(FeatureStore)
        new.graph = self.graph
        new.stage = self.stage
        new.defs = self.defs
        new.edges = self.edges
        new._edge_lookup = self._edge_lookup
        new.values = {k: (v.copy() if isinstance(v, np.ndarray) else v)
                      for k, v in self.values.items()}
        return new
