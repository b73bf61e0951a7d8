"""Row-by-row bulk measurement drivers and their full-lattice counterparts.

The streaming drivers hold only a window of lattice rows in the tableau: rows are added
at the bottom, gates are applied once their causal predecessors are in place, and a row
is measured and discarded as soon as no further gate touches it. The full-lattice drivers
build everything first and measure afterwards; both return the same boundary state.

Returned tableaux hold the kept rows only: the top row in columns 0..Lx-1 and, when the
bottom row is kept, that row in columns Lx..2Lx-1.
"""

from __future__ import annotations

import logging
from collections.abc import Iterable

import numpy as np

from boundary_mipt.core.clifford import symplectic_closure
from boundary_mipt.core.graph_state import WeightedGraph, to_tableau, z_measure_graph
from boundary_mipt.core.lattice import (
    LAYERS,
    apply_shallow_clifford,
    build_graph_state,
    is_vertical_layer,
    iter_layer_gates,
    row_edge_weights,
)
from boundary_mipt.core.models import (
    GRAPH_DEFAULT_WINDOW,
    GRAPH_MIN_WINDOW,
    CliffordCircuitSpec,
    LatticeSpec,
    MeasurementPolicy,
    clifford_window,
)
from boundary_mipt.core.streams import TrajectoryStreams
from boundary_mipt.core.tableau import (
    MeasurementOp,
    StabilizerTableau,
    apply_cp,
    apply_symplectic,
    measure_site,
)

logger = logging.getLogger("boundary_mipt")

X_BASIS = (1, 0)
Z_BASIS = (0, 1)


def row_bases(
    policy: MeasurementPolicy, streams: TrajectoryStreams, y: int, lx: int
) -> list[tuple[int, int]]:
    """(a, b) exponents of the operator measured on each site of row ``y``."""
    if policy.basis == "clifford":
        return [Z_BASIS] * lx
    mask = streams.x_basis_mask(y, lx, policy.p_x)
    return [X_BASIS if is_x else Z_BASIS for is_x in mask]


class _RowWindow:
    """Tableau plus the lattice row held in each block of Lx columns."""

    def __init__(self, tableau: StabilizerTableau, lx: int, rows: Iterable[int]) -> None:
        self.tableau = tableau
        self.lx = lx
        self.rows = list(rows)

    def copy(self) -> "_RowWindow":
        return _RowWindow(self.tableau.copy(), self.lx, self.rows)

    def add_row(self, y: int) -> None:
        self.tableau.add_sites(self.lx)
        self.rows.append(y)

    def column(self, site: int) -> int:
        y, x = divmod(site, self.lx)
        return self.rows.index(y) * self.lx + x

    def row_columns(self, y: int) -> list[int]:
        base = self.rows.index(y) * self.lx
        return list(range(base, base + self.lx))

    def measure_rows(self, ys: Iterable[int], bases_for: "dict[int, list[tuple[int, int]]]") -> None:
        """Measure every site of the given rows, then discard them together."""
        targets = list(ys)
        if not targets:
            return
        columns: list[int] = []
        for y in targets:
            cols = self.row_columns(y)
            for col, (a, b) in zip(cols, bases_for[y]):
                measure_site(self.tableau, MeasurementOp(col, a, b))
            columns.extend(cols)
        self.tableau.discard_sites(columns)
        self.rows = [r for r in self.rows if r not in targets]


def _bulk_rows(rows: Iterable[int], bottom: int | None) -> list[int]:
    return [r for r in rows if r != 0 and r != bottom]


# ---------------------------------------------------------------------------
# Graph model
# ---------------------------------------------------------------------------


def stream_graph_boundary(
    spec: LatticeSpec,
    q: int,
    policy: MeasurementPolicy,
    streams: TrajectoryStreams,
    *,
    window: int = GRAPH_DEFAULT_WINDOW,
    keep_bottom: bool = False,
    heights: Iterable[int] | None = None,
) -> dict[int, StabilizerTableau]:
    """Boundary state of the CP graph model for every requested lattice height.

    All heights come out of one pass: rows are drawn from streams keyed by their row
    index, so the first h rows of a taller lattice are exactly the height-h lattice.

    Raises:
        ValueError: If the window is below three rows or a height is out of range.
    """
    if window < GRAPH_MIN_WINDOW:
        raise ValueError(f"window must hold at least {GRAPH_MIN_WINDOW} rows, got {window}")
    targets = {spec.ly} if heights is None else {int(h) for h in heights}
    lowest = 3 if keep_bottom else 2
    bad = sorted(h for h in targets if not lowest <= h <= spec.ly)
    if bad:
        raise ValueError(f"heights {bad} outside [{lowest}, {spec.ly}]")

    state = _RowWindow(StabilizerTableau.product_state(0, q), spec.lx, [])
    bases: dict[int, list[tuple[int, int]]] = {}
    snapshots: dict[int, StabilizerTableau] = {}
    for y in range(spec.ly):
        state.add_row(y)
        bases[y] = row_bases(policy, streams, y, spec.lx)
        bonds, weights = row_edge_weights(spec, q, streams, y)
        for (m, n), w in zip(bonds, weights):
            apply_cp(state.tableau, state.column(m), state.column(n), int(w))
        while len(state.rows) >= window and len(state.rows) > 2:
            state.measure_rows([state.rows[1]], bases)
        height = y + 1
        if height in targets:
            snap = state if height == spec.ly else state.copy()
            snap.measure_rows(_bulk_rows(snap.rows, y if keep_bottom else None), bases)
            snapshots[height] = snap.tableau
    return snapshots


def full_graph_boundary(
    spec: LatticeSpec,
    q: int,
    policy: MeasurementPolicy,
    streams: TrajectoryStreams,
    *,
    keep_bottom: bool = False,
) -> StabilizerTableau:
    """Unwindowed reference: full graph state, then every bulk row measured in order."""
    state = _RowWindow(to_tableau(build_graph_state(spec, q, streams)), spec.lx, range(spec.ly))
    bases = {y: row_bases(policy, streams, y, spec.lx) for y in range(spec.ly)}
    bottom = spec.ly - 1 if keep_bottom else None
    state.measure_rows(_bulk_rows(range(spec.ly), bottom), bases)
    return state.tableau


def z_only_boundary_graph(
    spec: LatticeSpec, q: int, streams: TrajectoryStreams, *, keep_bottom: bool = False
) -> WeightedGraph:
    """Graph fast path for p_x = 0: Z measurements just cut the bulk out of the graph."""
    graph = build_graph_state(spec, q, streams)
    kept = list(range(spec.lx))
    if keep_bottom:
        kept += [spec.site(x, spec.ly - 1) for x in range(spec.lx)]
    for site in range(spec.n_sites):
        if site not in kept:
            graph = z_measure_graph(graph, site)
    return WeightedGraph(graph.adjacency[np.ix_(kept, kept)], q)


# ---------------------------------------------------------------------------
# Clifford model
# ---------------------------------------------------------------------------


def clifford_schedule(t: int) -> list[tuple[int, int, int]]:
    """``(step, layer, c)`` in time order, c = vertical layers at or after this one."""
    entries = [(step, layer) for step in range(t) for layer in LAYERS]
    out: list[tuple[int, int, int]] = []
    remaining = 0
    for step, layer in reversed(entries):
        if is_vertical_layer(layer):
            remaining += 1
        out.append((step, layer, remaining))
    return out[::-1]


def _rows_released(layer: int, c: int, sweep: int, ly: int) -> range:
    """Upper rows y of the layer's bonds first applied at ``sweep``.

    A bond reaching down to row r is applied at sweep max(0, r - c), which keeps every
    gate after its predecessors and finishes row Y exactly at sweep Y.
    """
    reach = 1 if is_vertical_layer(layer) else 0
    if sweep == 0:
        return range(0, min(ly, c - reach + 1))
    y = sweep + c - reach
    return range(y, y + 1) if 0 <= y < ly else range(0)


def stream_clifford_boundary(
    spec: LatticeSpec,
    circuit: CliffordCircuitSpec,
    streams: TrajectoryStreams,
    *,
    window: int | None = None,
    keep_bottom: bool = False,
) -> StabilizerTableau:
    """Boundary state of the diluted Clifford circuit.

    The driver holds ``window`` rows, the boundary row plus rows built ahead of the
    measurement front; ``None`` holds the 2t+2 light-cone minimum. Rows built early are
    untouched product qubits until their gates are released, so any window at or above
    the minimum gives the same state.

    Raises:
        ValueError: If the window is below 2t+2 rows or the two-edge lattice is too short.
    """
    minimum = clifford_window(circuit.t)
    window = minimum if window is None else window
    if window < minimum:
        raise ValueError(f"window {window} is smaller than the light cone ({minimum} rows)")
    if keep_bottom and spec.ly < 3:
        raise ValueError(f"two-edge geometry needs ly >= 3, got {spec.ly}")
    closure = symplectic_closure(2)
    schedule = clifford_schedule(circuit.t)
    policy = MeasurementPolicy(basis="clifford")
    state = _RowWindow(StabilizerTableau.product_state(0, 2), spec.lx, [])
    bottom = spec.ly - 1 if keep_bottom else None
    built = 0
    for sweep in range(spec.ly):
        while built <= min(spec.ly - 1, sweep + window - 2):
            state.add_row(built)
            built += 1
        for step, layer, c in schedule:
            for y in _rows_released(layer, c, sweep, spec.ly):
                for (m, n), k in iter_layer_gates(spec, circuit, streams, step, layer, y):
                    gate = closure.gate(k, (state.column(m), state.column(n)))
                    apply_symplectic(state.tableau, gate)
        if sweep != 0 and sweep != bottom:
            state.measure_rows([sweep], {sweep: row_bases(policy, streams, sweep, spec.lx)})
    return state.tableau


def full_clifford_boundary(
    spec: LatticeSpec,
    circuit: CliffordCircuitSpec,
    streams: TrajectoryStreams,
    *,
    keep_bottom: bool = False,
) -> StabilizerTableau:
    """Unwindowed reference for the Clifford model."""
    tableau = StabilizerTableau.product_state(spec.n_sites, 2)
    apply_shallow_clifford(tableau, spec, circuit, streams)
    state = _RowWindow(tableau, spec.lx, range(spec.ly))
    policy = MeasurementPolicy(basis="clifford")
    bases = {y: row_bases(policy, streams, y, spec.lx) for y in range(spec.ly)}
    bottom = spec.ly - 1 if keep_bottom else None
    state.measure_rows(_bulk_rows(range(spec.ly), bottom), bases)
    return state.tableau
