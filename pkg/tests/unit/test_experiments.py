"""Tests for the measurement protocols."""

from __future__ import annotations

import math

import pytest

from boundary_mipt.core.experiments import (
    chord_length,
    cross_ratio,
    fraction_region,
    interval_region,
    parse_quadruple,
    run_entropy_trace,
    run_mutual_info,
    run_strip_entropy,
    run_two_edge_purification,
)
from boundary_mipt.core.models import CliffordCircuitSpec, Geometry, LatticeSpec, MeasurementPolicy

LX = 8


# ---------------------------------------------------------------------------
# Geometry helpers
# ---------------------------------------------------------------------------


class TestGeometryHelpers:
    def test_chord_is_maximal_at_half_ring(self) -> None:
        assert chord_length(LX / 2, LX) == pytest.approx(LX / math.pi)
        assert chord_length(-3, LX) == chord_length(3, LX)

    def test_cross_ratio_matches_chords(self) -> None:
        eta = cross_ratio(0, 2, 5, 6, 16)
        expected = (chord_length(2, 16) * chord_length(1, 16)) / (
            chord_length(5, 16) * chord_length(4, 16)
        )
        assert eta == pytest.approx(expected)
        assert 0 < eta < 1

    def test_cross_ratio_needs_ordered_points(self) -> None:
        with pytest.raises(ValueError, match="positions"):
            cross_ratio(0, 3, 2, 5, 16)

    def test_parse_quadruple(self) -> None:
        assert parse_quadruple("1:3:6:7") == (1, 3, 6, 7)
        with pytest.raises(ValueError, match="mutual-information"):
            parse_quadruple("0:4")

    def test_fraction_region(self) -> None:
        assert fraction_region(16, 0.25).describe() == "0:4"
        assert fraction_region(4, 0.01).describe() == "0:1"

    def test_interval_region_wraps_start(self) -> None:
        assert interval_region(8, 2, start=9).intervals == ((1, 2),)


# ---------------------------------------------------------------------------
# Strip entropy
# ---------------------------------------------------------------------------


class TestStripEntropy:
    @pytest.mark.parametrize("q", [2, 3])
    def test_z_only_boundary_is_a_ring(self, q: int) -> None:
        regions = [interval_region(LX, length) for length in range(1, LX)]
        records = run_strip_entropy(
            LatticeSpec(lx=LX, ly=LX), q, MeasurementPolicy(p_x=0.0), regions, 3, seed=1
        )
        assert len(records) == 3 * (LX - 1)
        for record in records:
            length = int(record.region.split(":")[1])
            assert record.value == (1 if length in (1, LX - 1) else 2)
            assert (record.model, record.q, record.param) == ("graph", q, 0.0)

    def test_entropy_bounded_by_region_size(self) -> None:
        records = run_strip_entropy(
            LatticeSpec(lx=LX, ly=6), 3, MeasurementPolicy(p_x=0.6), interval_region(LX, 3), 5, 2
        )
        assert all(0 <= r.value <= 3 for r in records)

    def test_worker_count_does_not_change_records(self) -> None:
        args = (LatticeSpec(lx=LX, ly=6), 2, MeasurementPolicy(p_x=0.5), interval_region(LX, 4), 4, 9)
        assert run_strip_entropy(*args, workers=1) == run_strip_entropy(*args, workers=2)

    def test_same_seed_same_records(self) -> None:
        args = (LatticeSpec(lx=LX, ly=6), 3, MeasurementPolicy(p_x=0.5), interval_region(LX, 2), 3)
        assert run_strip_entropy(*args, 4) == run_strip_entropy(*args, 4)

    def test_rejects_two_edge_geometry(self) -> None:
        region = Geometry(kind="cylinder-two-edge", intervals=((0, 2),))
        with pytest.raises(ValueError, match="strip-top"):
            run_strip_entropy(LatticeSpec(lx=LX, ly=4), 2, MeasurementPolicy(), region, 1, 0)

    def test_rejects_region_outside_ring(self) -> None:
        with pytest.raises(ValueError, match="length"):
            run_strip_entropy(
                LatticeSpec(lx=LX, ly=4), 2, MeasurementPolicy(), interval_region(LX, 9), 1, 0
            )

    def test_clifford_needs_qubits(self) -> None:
        with pytest.raises(ValueError, match="q = 2"):
            run_strip_entropy(
                LatticeSpec(lx=LX, ly=4),
                3,
                MeasurementPolicy(basis="clifford"),
                interval_region(LX, 2),
                1,
                0,
                circuit=CliffordCircuitSpec(t=1, p_gate=0.5),
            )

    def test_empty_clifford_circuit_has_no_entanglement(self) -> None:
        records = run_strip_entropy(
            LatticeSpec(lx=LX, ly=5),
            2,
            MeasurementPolicy(basis="clifford"),
            [interval_region(LX, k) for k in (1, 3, 4)],
            2,
            0,
            circuit=CliffordCircuitSpec(t=2, p_gate=0.0),
        )
        assert {r.model for r in records} == {"clifford"}
        assert all(r.value == 0 for r in records)

    def test_clifford_window_does_not_change_records(self) -> None:
        args = (
            LatticeSpec(lx=LX, ly=8),
            2,
            MeasurementPolicy(basis="clifford"),
            [interval_region(LX, k) for k in (2, 4)],
            3,
            1,
        )
        circuit = CliffordCircuitSpec(t=1, p_gate=0.7)
        narrow = run_strip_entropy(*args, circuit=circuit, window=4)
        assert run_strip_entropy(*args, circuit=circuit, window=8) == narrow
        with pytest.raises(ValueError, match="light cone"):
            run_strip_entropy(*args, circuit=circuit, window=3)


# ---------------------------------------------------------------------------
# Trace, mutual information, purification
# ---------------------------------------------------------------------------


class TestTrace:
    def test_final_height_matches_strip(self) -> None:
        spec = LatticeSpec(lx=LX, ly=6)
        policy = MeasurementPolicy(p_x=0.4)
        region = interval_region(LX, 3)
        trace = run_entropy_trace(spec, 3, policy, region, 3, seed=5)
        strip = run_strip_entropy(spec, 3, policy, region, 3, seed=5)
        assert sorted({r.ly for r in trace}) == [2, 3, 4, 5, 6]
        assert [r for r in trace if r.ly == 6] == strip


class TestMutualInfo:
    def test_records_per_draw(self) -> None:
        records = run_mutual_info(
            LatticeSpec(lx=16, ly=6), 2, MeasurementPolicy(p_x=0.5), 3, seed=0, draws=5
        )
        assert len(records) == 15
        assert len({r.sample for r in records}) == 15
        for record in records:
            x1, x2, x3, x4 = parse_quadruple(record.region)
            assert 0 <= x1 < x2 < x3 < x4 < 16
            assert record.value >= 0

    def test_intervals_are_half_open(self) -> None:
        spec = LatticeSpec(lx=16, ly=6)
        policy = MeasurementPolicy(p_x=0.5)
        draws = 3
        records = run_mutual_info(spec, 2, policy, 2, seed=3, draws=draws)
        for record in records:
            x1, x2, x3, x4 = parse_quadruple(record.region)
            a = Geometry(intervals=((x1, x2 - x1),))
            b = Geometry(intervals=((x3, x4 - x3),))
            ab = Geometry(intervals=((x1, x2 - x1), (x3, x4 - x3)))
            trajectory = record.sample // draws
            strip = run_strip_entropy(spec, 2, policy, [a, b, ab], trajectory + 1, seed=3)
            s = {r.region: r.value for r in strip if r.sample == trajectory}
            expected = s[a.describe()] + s[b.describe()] - s[ab.describe()]
            assert record.value == expected

    def test_needs_a_draw(self) -> None:
        with pytest.raises(ValueError, match="draws"):
            run_mutual_info(LatticeSpec(lx=8, ly=4), 2, MeasurementPolicy(), 1, 0, draws=0)


class TestPurification:
    def test_z_only_graph_purifies_immediately(self) -> None:
        records = run_two_edge_purification(
            LatticeSpec(lx=LX, ly=6), 2, MeasurementPolicy(p_x=0.0), 2, 0, ly_values=[3, 4, 6]
        )
        assert sorted({r.ly for r in records}) == [3, 4, 6]
        assert {r.region for r in records} == {"top"}
        assert all(r.value == 0 for r in records)

    def test_top_entropy_bounded_by_width(self) -> None:
        records = run_two_edge_purification(
            LatticeSpec(lx=LX, ly=5), 3, MeasurementPolicy(p_x=0.7), 3, 1, ly_values=[3, 5]
        )
        assert all(0 <= r.value <= LX for r in records)

    def test_heights_below_three_rejected(self) -> None:
        with pytest.raises(ValueError, match="purification heights"):
            run_two_edge_purification(
                LatticeSpec(lx=LX, ly=6), 2, MeasurementPolicy(), 1, 0, ly_values=[2, 4]
            )

    def test_heights_above_lattice_rejected(self) -> None:
        with pytest.raises(ValueError, match="purification heights"):
            run_two_edge_purification(
                LatticeSpec(lx=LX, ly=4), 2, MeasurementPolicy(), 1, 0, ly_values=[5]
            )
