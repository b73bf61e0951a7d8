"""Streaming drivers must reproduce the full-lattice boundary state exactly."""

from __future__ import annotations

import numpy as np
import pytest

from boundary_mipt.core.gfq import FpMatrix, rank_fp
from boundary_mipt.core.graph_state import graph_entropy
from boundary_mipt.core.models import CliffordCircuitSpec, LatticeSpec, MeasurementPolicy
from boundary_mipt.core.streaming import (
    clifford_schedule,
    full_clifford_boundary,
    full_graph_boundary,
    stream_clifford_boundary,
    stream_graph_boundary,
    z_only_boundary_graph,
)
from boundary_mipt.core.streams import TrajectoryStreams
from boundary_mipt.core.tableau import StabilizerTableau, entropy_region


def same_stabilizer_group(t1: StabilizerTableau, t2: StabilizerTableau) -> bool:
    """Phase-free equality: stacking both generator sets adds no rank."""
    if t1.q != t2.q or t1.n_sites != t2.n_sites:
        return False
    stacked = FpMatrix(np.vstack([t1.as_matrix().data, t2.as_matrix().data]), t1.q)
    return rank_fp(stacked) == t1.n_sites


# ---------------------------------------------------------------------------
# Graph model
# ---------------------------------------------------------------------------


class TestGraphStreaming:
    @pytest.mark.parametrize("q", [2, 3])
    @pytest.mark.parametrize("window", [3, 4, 6])
    @pytest.mark.parametrize("keep_bottom", [False, True])
    def test_matches_full_lattice(self, q: int, window: int, keep_bottom: bool) -> None:
        spec = LatticeSpec(lx=4, ly=7)
        policy = MeasurementPolicy(p_x=0.5)
        for trajectory in range(3):
            streams = TrajectoryStreams(seed=11, trajectory=trajectory)
            streamed = stream_graph_boundary(
                spec, q, policy, streams, window=window, keep_bottom=keep_bottom
            )[spec.ly]
            full = full_graph_boundary(spec, q, policy, streams, keep_bottom=keep_bottom)
            streamed.check_invariants()
            assert streamed.n_sites == (2 if keep_bottom else 1) * spec.lx
            assert same_stabilizer_group(streamed, full)

    def test_heights_match_separate_lattices(self) -> None:
        policy = MeasurementPolicy(p_x=0.3)
        streams = TrajectoryStreams(seed=5, trajectory=0)
        snapshots = stream_graph_boundary(
            LatticeSpec(lx=4, ly=8), 3, policy, streams, keep_bottom=True, heights=range(3, 9)
        )
        assert sorted(snapshots) == list(range(3, 9))
        for height, tableau in snapshots.items():
            full = full_graph_boundary(
                LatticeSpec(lx=4, ly=height), 3, policy, streams, keep_bottom=True
            )
            assert same_stabilizer_group(tableau, full)

    def test_z_only_fast_path(self) -> None:
        spec = LatticeSpec(lx=6, ly=5)
        streams = TrajectoryStreams(seed=2, trajectory=4)
        graph = z_only_boundary_graph(spec, 3, streams)
        tableau = full_graph_boundary(spec, 3, MeasurementPolicy(p_x=0.0), streams)
        for length in range(1, spec.lx):
            region = list(range(length))
            assert graph_entropy(graph, region) == entropy_region(tableau, region)

    def test_window_too_small(self) -> None:
        with pytest.raises(ValueError, match="at least 3 rows"):
            stream_graph_boundary(
                LatticeSpec(lx=4, ly=4), 2, MeasurementPolicy(), TrajectoryStreams(0, 0), window=2
            )

    def test_height_out_of_range(self) -> None:
        with pytest.raises(ValueError, match="outside"):
            stream_graph_boundary(
                LatticeSpec(lx=4, ly=4),
                2,
                MeasurementPolicy(),
                TrajectoryStreams(0, 0),
                keep_bottom=True,
                heights=[2],
            )


# ---------------------------------------------------------------------------
# Clifford model
# ---------------------------------------------------------------------------


class TestCliffordStreaming:
    def test_schedule_counts_remaining_vertical_layers(self) -> None:
        assert clifford_schedule(1) == [(0, 1, 2), (0, 2, 1), (0, 3, 0), (0, 4, 0)]
        assert [c for _, _, c in clifford_schedule(2)] == [4, 3, 2, 2, 2, 1, 0, 0]

    @pytest.mark.parametrize("t", [1, 2])
    @pytest.mark.parametrize("keep_bottom", [False, True])
    def test_matches_full_lattice(self, t: int, keep_bottom: bool) -> None:
        spec = LatticeSpec(lx=4, ly=8)
        circuit = CliffordCircuitSpec(t=t, p_gate=0.7)
        for trajectory in range(3):
            streams = TrajectoryStreams(seed=3, trajectory=trajectory)
            streamed = stream_clifford_boundary(spec, circuit, streams, keep_bottom=keep_bottom)
            full = full_clifford_boundary(spec, circuit, streams, keep_bottom=keep_bottom)
            streamed.check_invariants()
            assert same_stabilizer_group(streamed, full)

    def test_open_boundary_matches(self) -> None:
        spec = LatticeSpec(lx=6, ly=6, bc_x="open")
        circuit = CliffordCircuitSpec(t=1, p_gate=1.0)
        streams = TrajectoryStreams(seed=8, trajectory=1)
        assert same_stabilizer_group(
            stream_clifford_boundary(spec, circuit, streams),
            full_clifford_boundary(spec, circuit, streams),
        )

    def test_two_edge_needs_three_rows(self) -> None:
        with pytest.raises(ValueError, match="ly >= 3"):
            stream_clifford_boundary(
                LatticeSpec(lx=4, ly=2),
                CliffordCircuitSpec(t=1, p_gate=0.5),
                TrajectoryStreams(0, 0),
                keep_bottom=True,
            )

    @pytest.mark.parametrize("window", [6, 7, 10])
    def test_wider_window_gives_same_state(self, window: int) -> None:
        spec = LatticeSpec(lx=4, ly=8)
        circuit = CliffordCircuitSpec(t=2, p_gate=0.8)
        for trajectory in range(3):
            streams = TrajectoryStreams(seed=5, trajectory=trajectory)
            wide = stream_clifford_boundary(spec, circuit, streams, window=window, keep_bottom=True)
            wide.check_invariants()
            assert same_stabilizer_group(
                wide, full_clifford_boundary(spec, circuit, streams, keep_bottom=True)
            )

    def test_window_below_light_cone(self) -> None:
        with pytest.raises(ValueError, match="light cone"):
            stream_clifford_boundary(
                LatticeSpec(lx=4, ly=6),
                CliffordCircuitSpec(t=2, p_gate=0.5),
                TrajectoryStreams(0, 0),
                window=5,
            )
