"""Lattice geometry, one-layer CP graph circuits and the four-layer diluted Clifford circuit.

Site (x, y) has index x + Lx*y. Rows are open in y; x is periodic unless ``bc_x`` is open.

Clifford layers (one time step = layers 1..4, in order):

    1  vertical bonds (x, y)-(x, y+1) with y even
    2  vertical bonds with y odd
    3  horizontal bonds (x, y)-(x+1, y) with x even
    4  horizontal bonds with x odd
"""

from __future__ import annotations

from collections.abc import Iterator

import networkx as nx  # type: ignore[import-untyped]
import numpy as np

from boundary_mipt.core.clifford import symplectic_closure
from boundary_mipt.core.graph_state import WeightedGraph
from boundary_mipt.core.models import CliffordCircuitSpec, LatticeSpec
from boundary_mipt.core.streams import TrajectoryStreams
from boundary_mipt.core.tableau import StabilizerTableau, apply_symplectic

Bond = tuple[int, int]
LAYERS = (1, 2, 3, 4)


def lattice_graph(spec: LatticeSpec) -> nx.Graph:
    """Nearest-neighbour lattice as a networkx graph on site indices."""
    grid = nx.grid_2d_graph(spec.lx, spec.ly, periodic=(spec.bc_x == "periodic", False))
    return nx.relabel_nodes(grid, {(x, y): spec.site(x, y) for x, y in grid.nodes})


def horizontal_bonds(spec: LatticeSpec, y: int) -> list[Bond]:
    """Bonds (x, y)-(x+1, y) of one row, wrapping in x for periodic boundaries."""
    last = spec.lx if spec.bc_x == "periodic" else spec.lx - 1
    return [(spec.site(x, y), spec.site((x + 1) % spec.lx, y)) for x in range(last)]


def vertical_bonds(spec: LatticeSpec, y: int) -> list[Bond]:
    """Bonds (x, y-1)-(x, y) joining row ``y`` to the row above; none for y = 0."""
    if y == 0:
        return []
    return [(spec.site(x, y - 1), spec.site(x, y)) for x in range(spec.lx)]


def row_edge_weights(
    spec: LatticeSpec, q: int, streams: TrajectoryStreams, y: int
) -> tuple[list[Bond], np.ndarray]:
    """Bonds introduced with row ``y`` (horizontal first, then vertical) and their CP weights."""
    bonds = horizontal_bonds(spec, y) + vertical_bonds(spec, y)
    weights = streams.edge_weights(y, spec.lx * 2, q)
    return bonds, weights[: len(bonds)]


def build_graph_state(spec: LatticeSpec, q: int, streams: TrajectoryStreams) -> WeightedGraph:
    """CP graph state on the full lattice; q = 2 gives unit weights."""
    adj = np.zeros((spec.n_sites, spec.n_sites), dtype=np.int64)
    for y in range(spec.ly):
        bonds, weights = row_edge_weights(spec, q, streams, y)
        for (m, n), w in zip(bonds, weights):
            adj[m, n] = adj[n, m] = w
    return WeightedGraph(adj, q)


def is_vertical_layer(layer: int) -> bool:
    _check_layer(layer)
    return layer in (1, 2)


def _check_layer(layer: int) -> None:
    if layer not in LAYERS:
        raise ValueError(f"layer must be one of {LAYERS}, got {layer}")


def layer_row_bonds(spec: LatticeSpec, layer: int, y: int) -> list[Bond]:
    """Bonds of ``layer`` whose upper site lies in row ``y``."""
    _check_layer(layer)
    if layer in (1, 2):
        if y % 2 != layer - 1 or y + 1 >= spec.ly:
            return []
        return [(spec.site(x, y), spec.site(x, y + 1)) for x in range(spec.lx)]
    parity = layer - 3
    return [
        (spec.site(x, y), spec.site((x + 1) % spec.lx, y))
        for x in range(parity, spec.lx, 2)
        if spec.bc_x == "periodic" or x + 1 < spec.lx
    ]


def clifford_layer_bonds(spec: LatticeSpec, layer: int) -> list[Bond]:
    """All bonds of one layer, row by row; a vertex-disjoint matching."""
    _check_layer(layer)
    return [bond for y in range(spec.ly) for bond in layer_row_bonds(spec, layer, y)]


def iter_layer_gates(
    spec: LatticeSpec,
    circuit: CliffordCircuitSpec,
    streams: TrajectoryStreams,
    step: int,
    layer: int,
    y: int,
) -> Iterator[tuple[Bond, int]]:
    """Placed gates ``(bond, closure index)`` of one layer row, drawn from its keyed stream."""
    bonds = layer_row_bonds(spec, layer, y)
    if not bonds:
        return
    closure = symplectic_closure(2)
    presence, choice = streams.gate_draws(step, layer, y, len(bonds), len(closure))
    for bond, u, k in zip(bonds, presence, choice):
        if u < circuit.p_gate:
            yield bond, int(k)


def apply_shallow_clifford(
    tableau: StabilizerTableau,
    spec: LatticeSpec,
    circuit: CliffordCircuitSpec,
    streams: TrajectoryStreams,
) -> StabilizerTableau:
    """Apply t steps of the four diluted layers to a full-lattice tableau, in time order.

    Raises:
        ValueError: If the tableau is not over q = 2 or does not match the lattice.
    """
    if tableau.q != 2:
        raise ValueError(f"the shallow Clifford circuit is sampled for q = 2 only, got q={tableau.q}")
    if tableau.n_sites != spec.n_sites:
        raise ValueError(f"tableau has {tableau.n_sites} sites, lattice has {spec.n_sites}")
    closure = symplectic_closure(2)
    for step in range(circuit.t):
        for layer in LAYERS:
            for y in range(spec.ly):
                for bond, k in iter_layer_gates(spec, circuit, streams, step, layer, y):
                    apply_symplectic(tableau, closure.gate(k, bond))
    return tableau
