"""Tests for the bond-diluted Ising Monte Carlo."""

from __future__ import annotations

import math

import numpy as np
import pytest

from boundary_mipt.core.rbim import (
    IsingLattice,
    RbimResult,
    binder_crossing,
    binder_cumulant,
    checkerboard_sweep,
    exact_rbim_distribution,
    flip_probability,
    ising_energy,
    local_field,
    onsager_coupling,
    percolation_fraction,
    random_bond_lattice,
    rbim_records,
    run_rbim_mc,
    run_rbim_scan,
    sample_state_histogram,
    total_variation,
)

GRID = [0.3, 0.4, 0.5, 0.6, 0.7]


def _fabricated(size: int, p: float, u: float) -> RbimResult:
    return RbimResult(
        size=size, coupling=1.0, p_bond=p, sample=0, abs_m=0.0, m2=1.0, m4=3 * (1 - u),
        binder=u, bond_fraction=p,
    )


# ---------------------------------------------------------------------------
# Lattice and energy
# ---------------------------------------------------------------------------


class TestLattice:
    def test_bond_extremes(self) -> None:
        rng = np.random.default_rng(0)
        assert percolation_fraction(random_bond_lattice(8, 0.5, 1.0, rng)) == 1.0
        assert percolation_fraction(random_bond_lattice(8, 0.5, 0.0, rng)) == 0.0

    def test_odd_size_rejected(self) -> None:
        with pytest.raises(ValueError, match="even"):
            random_bond_lattice(5, 0.5, 0.5, np.random.default_rng(0))

    def test_bad_spins_rejected(self) -> None:
        k = np.ones((2, 2))
        with pytest.raises(ValueError, match="spins"):
            IsingLattice(np.zeros((2, 2)), k, k)

    def test_ordered_energy(self) -> None:
        k = np.full((4, 4), 0.3)
        assert ising_energy(np.ones((4, 4)), k, k) == pytest.approx(-0.3 * 32)

    def test_local_field_gives_flip_energy(self) -> None:
        rng = np.random.default_rng(4)
        lattice = random_bond_lattice(6, 0.7, 0.6, rng)
        h = local_field(lattice.spins, lattice.k_right, lattice.k_down)
        for i, j in [(0, 0), (2, 5), (5, 3)]:
            flipped = lattice.spins.copy()
            flipped[i, j] *= -1
            delta = ising_energy(flipped, lattice.k_right, lattice.k_down) - lattice.energy()
            assert delta == pytest.approx(2 * lattice.spins[i, j] * h[i, j])


# ---------------------------------------------------------------------------
# Heat-bath dynamics
# ---------------------------------------------------------------------------


class TestSweeps:
    def test_zero_field_flip_probability_is_half(self) -> None:
        assert np.array_equal(flip_probability(np.zeros(3)), np.full(3, 0.5))
        assert flip_probability(np.array([50.0]))[0] < 1e-20
        assert flip_probability(np.array([-50.0]))[0] == pytest.approx(1.0)

    def test_free_spins_flip_about_half(self) -> None:
        rng = np.random.default_rng(1)
        spins = rng.choice(np.array([-1, 1], dtype=np.int8), size=(40, 40))
        before = spins.copy()
        k = np.zeros((40, 40))
        checkerboard_sweep(spins, k, k, rng)
        flipped = float(np.mean(spins != before))
        assert flipped == pytest.approx(0.5, abs=0.06)

    def test_strong_field_holds_aligned_lattice(self) -> None:
        spins = np.ones((8, 8), dtype=np.int8)
        k = np.full((8, 8), 50.0)
        checkerboard_sweep(spins, k, k, np.random.default_rng(5))
        assert np.all(spins == 1)

    def test_detailed_balance_on_tiny_lattice(self) -> None:
        rng = np.random.default_rng(2)
        k = np.full((2, 2), 0.2)
        lattice = IsingLattice(np.ones((2, 2), dtype=np.int8), k, k)
        empirical = sample_state_histogram(lattice, 100_000, rng)
        assert total_variation(empirical, exact_rbim_distribution(k, k)) < 0.02

    @pytest.mark.slow
    def test_detailed_balance_long_chain(self) -> None:
        rng = np.random.default_rng(2)
        k = np.full((2, 2), 0.2)
        lattice = IsingLattice(np.ones((2, 2), dtype=np.int8), k, k)
        empirical = sample_state_histogram(lattice, 400_000, rng)
        assert total_variation(empirical, exact_rbim_distribution(k, k)) < 0.01

    def test_no_bonds_gives_independent_spins(self) -> None:
        result = run_rbim_mc(8, 0.4, 0.0, 4000, seed=6, burn_in=10)
        assert result.bond_fraction == 0.0
        assert result.m2 == pytest.approx(1 / 64, rel=0.15)
        assert abs(result.binder) < 0.1

    def test_exact_distribution_free_spins(self) -> None:
        k = np.zeros((2, 2))
        assert np.allclose(exact_rbim_distribution(k, k), 1 / 16)

    def test_enumeration_limit(self) -> None:
        k = np.zeros((6, 6))
        with pytest.raises(ValueError, match="spins"):
            exact_rbim_distribution(k, k)


# ---------------------------------------------------------------------------
# Runs and Binder analysis
# ---------------------------------------------------------------------------


class TestRuns:
    def test_run_is_seed_deterministic(self) -> None:
        a = run_rbim_mc(8, 0.4, 0.8, 50, seed=3, burn_in=10, sample=1)
        b = run_rbim_mc(8, 0.4, 0.8, 50, seed=3, burn_in=10, sample=1)
        assert a == b
        assert 0.0 <= a.abs_m <= 1.0
        assert a.m4 <= a.m2 <= 1.0

    def test_sweeps_must_be_positive(self) -> None:
        with pytest.raises(ValueError, match="sweeps"):
            run_rbim_mc(8, 0.4, 0.8, 0, seed=0)

    def test_scan_order_and_workers(self) -> None:
        args = ([8], [0.3, 0.5], [0.6, 1.0], 2, 20, 0)
        serial = run_rbim_scan(*args, workers=1)
        assert [(r.coupling, r.p_bond, r.sample) for r in serial] == [
            (c, p, s) for c in (0.3, 0.5) for p in (0.6, 1.0) for s in range(2)
        ]
        assert run_rbim_scan(*args, workers=2) == serial

    def test_records_per_observable(self) -> None:
        results = run_rbim_scan([8], [0.4], [1.0], 1, 10, 0)
        records = rbim_records(results, seed=0)
        assert sorted(r.region for r in records) == [
            "abs_m@K=0.40000000000000002",
            "binder@K=0.40000000000000002",
            "m2@K=0.40000000000000002",
            "m4@K=0.40000000000000002",
        ]
        assert {r.model for r in records} == {"statmech-rbim"}

    def test_binder_cumulant(self) -> None:
        assert binder_cumulant(1.0, 1.0) == pytest.approx(2 / 3)
        assert binder_cumulant(0.0, 0.0) == 0.0

    def test_binder_crossing(self) -> None:
        results = [_fabricated(8, p, 0.4 + 0.2 * (p - 0.5)) for p in GRID]
        results += [_fabricated(16, p, 0.4 + 0.4 * (p - 0.5)) for p in GRID]
        crossing = binder_crossing(results)
        assert crossing.kind == "pc"
        assert crossing.value == pytest.approx(0.5)

    def test_binder_crossing_needs_two_sizes(self) -> None:
        with pytest.raises(ValueError, match="2 sizes"):
            binder_crossing([_fabricated(8, p, 0.5) for p in GRID])

    def test_onsager_coupling(self) -> None:
        assert onsager_coupling() == pytest.approx(0.4406868, abs=1e-7)
        assert math.sinh(2 * onsager_coupling()) == pytest.approx(1.0)
