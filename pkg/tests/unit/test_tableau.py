"""Tests for the phase-free stabilizer tableau."""

from __future__ import annotations

import numpy as np
import pytest

from boundary_mipt.core.clifford import cp_matrix, generator_matrix
from boundary_mipt.core.tableau import (
    MeasurementOp,
    PauliString,
    StabilizerTableau,
    SymplecticGate,
    apply_cp,
    apply_symplectic,
    commutation_phase,
    entropy_region,
    is_symplectic,
    measure_site,
)

# ---------------------------------------------------------------------------
# Pauli strings
# ---------------------------------------------------------------------------


class TestPauliString:
    def test_exponents_reduced_mod_q(self) -> None:
        p = PauliString(np.array([4, -1]), np.array([0, 3]), 3)
        assert p.x_exps.tolist() == [1, 2]
        assert p.z_exps.tolist() == [0, 0]

    def test_length_mismatch_rejected(self) -> None:
        with pytest.raises(ValueError, match="equal length"):
            PauliString(np.array([1, 0]), np.array([1]), 2)

    def test_single_site(self) -> None:
        p = PauliString.single_site(3, 1, 1, 2, 5)
        assert p.x_exps.tolist() == [0, 1, 0]
        assert p.z_exps.tolist() == [0, 2, 0]
        assert p.n_sites == 3

    def test_x_and_z_commutation_phase(self) -> None:
        x = PauliString.single_site(1, 0, 1, 0, 3)
        z = PauliString.single_site(1, 0, 0, 1, 3)
        assert commutation_phase(x, z) == 2
        assert commutation_phase(z, x) == 1
        assert commutation_phase(x, x) == 0

    def test_phase_on_disjoint_sites_is_zero(self) -> None:
        a = PauliString.single_site(2, 0, 1, 1, 5)
        b = PauliString.single_site(2, 1, 3, 2, 5)
        assert commutation_phase(a, b) == 0

    def test_mismatched_fields_rejected(self) -> None:
        with pytest.raises(ValueError, match="different fields"):
            commutation_phase(
                PauliString.single_site(1, 0, 1, 0, 2), PauliString.single_site(1, 0, 1, 0, 3)
            )


# ---------------------------------------------------------------------------
# Tableau construction
# ---------------------------------------------------------------------------


class TestTableau:
    def test_product_state(self) -> None:
        t = StabilizerTableau.product_state(4, 3)
        t.check_invariants()
        assert t.n_sites == 4
        assert all(entropy_region(t, [s]) == 0 for s in range(4))

    def test_non_square_blocks_rejected(self) -> None:
        with pytest.raises(ValueError, match="square"):
            StabilizerTableau(np.zeros((2, 3)), np.zeros((2, 3)), 2)

    def test_from_rows(self) -> None:
        rows = [PauliString.single_site(2, s, 0, 1, 2) for s in range(2)]
        t = StabilizerTableau.from_rows(rows)
        assert t.rows() == rows

    def test_check_invariants_detects_anticommuting_rows(self) -> None:
        t = StabilizerTableau(np.array([[1, 0], [0, 0]]), np.array([[0, 0], [1, 0]]), 2)
        with pytest.raises(ValueError, match="do not commute"):
            t.check_invariants()

    def test_check_invariants_detects_dependent_rows(self) -> None:
        t = StabilizerTableau(np.array([[1, 0], [1, 0]]), np.zeros((2, 2)), 2)
        with pytest.raises(ValueError, match="dependent"):
            t.check_invariants()

    def test_copy_is_independent(self) -> None:
        t = StabilizerTableau.product_state(2, 2)
        clone = t.copy()
        apply_cp(clone, 0, 1, 1)
        assert not np.any(t.z)
        assert np.any(clone.z)

    def test_add_sites_appends_plus_states(self) -> None:
        t = StabilizerTableau.product_state(2, 3)
        apply_cp(t, 0, 1, 2)
        new = t.add_sites(2)
        assert list(new) == [2, 3]
        t.check_invariants()
        assert entropy_region(t, [0]) == 1
        assert entropy_region(t, [2]) == 0
        assert t.x[2:, 2:].tolist() == [[1, 0], [0, 1]]


# ---------------------------------------------------------------------------
# Gates
# ---------------------------------------------------------------------------


class TestGates:
    def test_cp_entangles_two_sites(self) -> None:
        t = apply_cp(StabilizerTableau.product_state(2, 2), 0, 1, 1)
        t.check_invariants()
        assert entropy_region(t, [0]) == 1
        assert t.z.tolist() == [[0, 1], [1, 0]]

    def test_cp_weight_zero_is_identity(self) -> None:
        t = apply_cp(StabilizerTableau.product_state(2, 5), 0, 1, 5)
        assert not np.any(t.z)

    def test_cp_same_site_rejected(self) -> None:
        with pytest.raises(ValueError, match="distinct"):
            apply_cp(StabilizerTableau.product_state(2, 2), 1, 1, 1)

    def test_cp_matrix_is_symplectic(self) -> None:
        for q in (2, 3, 5, 7):
            for w in range(q):
                assert is_symplectic(cp_matrix(w, q), q)

    def test_non_symplectic_gate_rejected(self) -> None:
        bad = np.eye(4, dtype=int)
        bad[0, 0] = 2
        with pytest.raises(ValueError, match="symplectic"):
            SymplecticGate((0, 1), bad, 3)

    def test_gate_sites_must_differ(self) -> None:
        with pytest.raises(ValueError, match="differ"):
            SymplecticGate((1, 1), np.eye(4, dtype=int), 2)

    def test_fourier_maps_x_to_z(self) -> None:
        t = StabilizerTableau.product_state(2, 3)
        apply_symplectic(t, SymplecticGate((0, 1), generator_matrix("F0", 3), 3))
        assert t.row(0) == PauliString.single_site(2, 0, 0, 1, 3)
        assert t.row(1) == PauliString.single_site(2, 1, 1, 0, 3)

    def test_symplectic_cp_matches_direct_cp(self) -> None:
        direct = apply_cp(StabilizerTableau.product_state(3, 5), 2, 0, 3)
        via_gate = apply_symplectic(
            StabilizerTableau.product_state(3, 5), SymplecticGate((2, 0), cp_matrix(3, 5), 5)
        )
        assert np.array_equal(direct.x, via_gate.x)
        assert np.array_equal(direct.z, via_gate.z)

    def test_gate_field_mismatch_rejected(self) -> None:
        gate = SymplecticGate((0, 1), np.eye(4, dtype=int), 3)
        with pytest.raises(ValueError, match="q=3"):
            apply_symplectic(StabilizerTableau.product_state(2, 2), gate)


# ---------------------------------------------------------------------------
# Measurement
# ---------------------------------------------------------------------------


class TestMeasurement:
    def test_z_measurement_on_plus_state_replaces_row(self) -> None:
        t = measure_site(StabilizerTableau.product_state(2, 2), MeasurementOp(0, 0, 1))
        assert t.row(0) == PauliString.single_site(2, 0, 0, 1, 2)
        t.check_invariants()

    def test_deterministic_measurement_leaves_tableau(self) -> None:
        t = StabilizerTableau.product_state(3, 3)
        before = t.as_matrix()
        measure_site(t, MeasurementOp(1, 2, 0))
        assert t.as_matrix() == before

    def test_measurement_disentangles_site(self) -> None:
        t = StabilizerTableau.product_state(3, 3)
        apply_cp(t, 0, 1, 1)
        apply_cp(t, 1, 2, 2)
        assert entropy_region(t, [1]) == 1
        measure_site(t, MeasurementOp(1, 1, 1))
        t.check_invariants()
        assert entropy_region(t, [1]) == 0

    def test_z_measurement_cuts_chain(self) -> None:
        t = StabilizerTableau.product_state(3, 2)
        apply_cp(t, 0, 1, 1)
        apply_cp(t, 1, 2, 1)
        assert entropy_region(t, [0]) == 1
        measure_site(t, MeasurementOp(1, 0, 1))
        assert entropy_region(t, [0]) == 0
        assert entropy_region(t, [2]) == 0

    def test_trivial_operator_rejected(self) -> None:
        with pytest.raises(ValueError, match="non-trivial"):
            measure_site(StabilizerTableau.product_state(2, 3), MeasurementOp(0, 3, 0))

    def test_site_out_of_range(self) -> None:
        with pytest.raises(ValueError, match="out of range"):
            measure_site(StabilizerTableau.product_state(2, 2), MeasurementOp(2, 0, 1))


# ---------------------------------------------------------------------------
# Discarding and entropy
# ---------------------------------------------------------------------------


class TestDiscardAndEntropy:
    def test_discard_measured_site(self) -> None:
        t = StabilizerTableau.product_state(3, 3)
        apply_cp(t, 0, 1, 1)
        apply_cp(t, 1, 2, 1)
        measure_site(t, MeasurementOp(1, 1, 0))
        t.discard_sites([1])
        assert t.n_sites == 2
        t.check_invariants()
        # X measurement on the middle of a chain joins the ends.
        assert entropy_region(t, [0]) == 1

    def test_discard_entangled_site_rejected(self) -> None:
        t = apply_cp(StabilizerTableau.product_state(2, 2), 0, 1, 1)
        with pytest.raises(ValueError, match="entangled"):
            t.discard_sites([0])

    def test_discard_nothing(self) -> None:
        t = StabilizerTableau.product_state(2, 2)
        t.discard_sites([])
        assert t.n_sites == 2

    def test_entropy_is_symmetric(self) -> None:
        rng = np.random.default_rng(3)
        t = StabilizerTableau.product_state(6, 3)
        for _ in range(12):
            i, j = rng.choice(6, size=2, replace=False)
            apply_cp(t, int(i), int(j), int(rng.integers(1, 3)))
        for region in ([0], [0, 1], [0, 2, 4], [1, 2, 3]):
            complement = [s for s in range(6) if s not in region]
            assert entropy_region(t, region) == entropy_region(t, complement)

    def test_empty_region(self) -> None:
        assert entropy_region(StabilizerTableau.product_state(2, 2), []) == 0

    def test_region_out_of_range(self) -> None:
        with pytest.raises(ValueError, match="outside"):
            entropy_region(StabilizerTableau.product_state(2, 2), [2])
