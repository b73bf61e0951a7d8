"""Shared fixtures for the boundary_mipt test suite."""

from __future__ import annotations

import pytest

from boundary_mipt.core.graph_state import WeightedGraph
from boundary_mipt.core.models import LatticeSpec
from boundary_mipt.core.streams import TrajectoryStreams

# Six-qubit example graph, 1-indexed edges as drawn: before measurement, after Z on
# qubit 2, and after X on qubit 2 (up to local unitaries).
SIX_QUBIT_EDGES = [(1, 2), (2, 3), (2, 4), (2, 5), (3, 4), (1, 4), (3, 6)]
SIX_QUBIT_AFTER_Z = [(3, 4), (1, 4), (3, 6)]
SIX_QUBIT_AFTER_X = [(1, 4), (3, 6), (1, 3), (1, 5), (4, 5)]


def _six_qubit_graph(edges: list[tuple[int, int]]) -> WeightedGraph:
    return WeightedGraph.from_edges(6, [(m - 1, n - 1) for m, n in edges], 2)


@pytest.fixture
def six_qubit_graph() -> WeightedGraph:
    return _six_qubit_graph(SIX_QUBIT_EDGES)


@pytest.fixture
def six_qubit_after_z() -> WeightedGraph:
    return _six_qubit_graph(SIX_QUBIT_AFTER_Z)


@pytest.fixture
def six_qubit_after_x() -> WeightedGraph:
    return _six_qubit_graph(SIX_QUBIT_AFTER_X)


@pytest.fixture
def small_lattice() -> LatticeSpec:
    return LatticeSpec(lx=4, ly=5)


@pytest.fixture
def streams() -> TrajectoryStreams:
    return TrajectoryStreams(seed=7, trajectory=3)
