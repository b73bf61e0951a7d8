"""Weighted qudit graph states: adjacency-rank entropy and the Z-measurement fast path."""

from __future__ import annotations

from collections.abc import Iterable
from dataclasses import dataclass

import networkx as nx  # type: ignore[import-untyped]
import numpy as np

from boundary_mipt.core.gfq import FpMatrix, rank_fp, validate_modulus
from boundary_mipt.core.tableau import StabilizerTableau


@dataclass(frozen=True, eq=False)
class WeightedGraph:
    """Symmetric adjacency over Z_q with zero diagonal; entry w_mn is the CP^w weight."""

    adjacency: np.ndarray
    q: int

    def __post_init__(self) -> None:
        q = validate_modulus(self.q)
        adj = np.mod(np.array(self.adjacency, dtype=np.int64, copy=True), q)
        if adj.ndim != 2 or adj.shape[0] != adj.shape[1]:
            raise ValueError(f"adjacency must be square, got shape {adj.shape}")
        if not np.array_equal(adj, adj.T):
            raise ValueError("adjacency must be symmetric")
        if np.any(np.diag(adj)):
            raise ValueError("adjacency must have a zero diagonal")
        adj.setflags(write=False)
        object.__setattr__(self, "adjacency", adj)
        object.__setattr__(self, "q", q)

    @classmethod
    def empty(cls, n_vertices: int, q: int) -> "WeightedGraph":
        return cls(np.zeros((n_vertices, n_vertices), dtype=np.int64), q)

    @classmethod
    def from_edges(
        cls, n_vertices: int, edges: Iterable[tuple[int, int] | tuple[int, int, int]], q: int
    ) -> "WeightedGraph":
        """Build from ``(m, n)`` or ``(m, n, w)`` tuples; a missing weight means 1."""
        adj = np.zeros((n_vertices, n_vertices), dtype=np.int64)
        for edge in edges:
            m, n = int(edge[0]), int(edge[1])
            w = int(edge[2]) if len(edge) > 2 else 1
            if m == n:
                raise ValueError(f"self-loop on vertex {m}")
            adj[m, n] = adj[n, m] = w
        return cls(adj, q)

    @property
    def n_vertices(self) -> int:
        return int(self.adjacency.shape[0])

    def edges(self) -> list[tuple[int, int, int]]:
        """Nonzero edges ``(m, n, w)`` with m < n, in row-major order."""
        ms, ns = np.nonzero(np.triu(self.adjacency, k=1))
        return [(int(m), int(n), int(self.adjacency[m, n])) for m, n in zip(ms, ns)]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, WeightedGraph):
            return NotImplemented
        return self.q == other.q and np.array_equal(self.adjacency, other.adjacency)

    def __hash__(self) -> int:
        return hash((self.q, self.adjacency.tobytes()))


def graph_entropy(graph: WeightedGraph, region: Iterable[int]) -> int:
    """S_A = rank_q of the adjacency block between ``region`` and its complement."""
    inside = sorted({int(v) for v in region})
    if inside and (inside[0] < 0 or inside[-1] >= graph.n_vertices):
        raise ValueError(f"region {inside} outside [0, {graph.n_vertices})")
    mask = np.zeros(graph.n_vertices, dtype=bool)
    mask[inside] = True
    block = graph.adjacency[np.ix_(mask, ~mask)]
    if block.size == 0:
        return 0
    return rank_fp(FpMatrix(block, graph.q))


def z_measure_graph(graph: WeightedGraph, vertex: int) -> WeightedGraph:
    """Measuring Z on ``vertex`` cuts every bond touching it."""
    if not 0 <= vertex < graph.n_vertices:
        raise ValueError(f"vertex {vertex} out of range for {graph.n_vertices} vertices")
    adj = graph.adjacency.copy()
    adj[vertex, :] = 0
    adj[:, vertex] = 0
    return WeightedGraph(adj, graph.q)


def to_tableau(graph: WeightedGraph) -> StabilizerTableau:
    """Generator n is X_n prod_m Z_m^{w_mn}: T_X = identity, T_Z = adjacency."""
    n = graph.n_vertices
    return StabilizerTableau(np.eye(n, dtype=np.int64), graph.adjacency, graph.q)


def to_networkx(graph: WeightedGraph) -> nx.Graph:
    """Undirected networkx view with a ``weight`` attribute per edge."""
    g = nx.Graph()
    g.add_nodes_from(range(graph.n_vertices))
    g.add_weighted_edges_from(graph.edges())
    return g


def from_networkx(g: nx.Graph, q: int, *, weight: str = "weight") -> WeightedGraph:
    """Inverse of ``to_networkx``; nodes must be labelled 0..n-1."""
    nodes = sorted(g.nodes)
    if nodes != list(range(len(nodes))):
        raise ValueError("graph nodes must be labelled 0..n-1")
    edges = [(u, v, int(data.get(weight, 1))) for u, v, data in g.edges(data=True)]
    return WeightedGraph.from_edges(len(nodes), edges, q)
