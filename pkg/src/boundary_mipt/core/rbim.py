"""Single-spin-flip Monte Carlo for the bond-diluted square-lattice Ising model.

Energy E = -sum K_ij s_i s_j with periodic boundaries; the temperature is absorbed into
the bond strengths. Sweeps update the two checkerboard sublattices in turn, each as one
vectorised heat-bath (Glauber) update.
"""

from __future__ import annotations

import itertools
import logging
import math
from collections import defaultdict
from collections.abc import Iterable, Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy.special import expit

from boundary_mipt.core.fits import curve_crossings, summarize_crossings
from boundary_mipt.core.models import FitResult, RunRecord
from boundary_mipt.core.streams import StreamTag, keyed_rng

logger = logging.getLogger("boundary_mipt")

OBSERVABLES = ("abs_m", "m2", "m4", "binder")
MAX_ENUMERATION_SITES = 16


@dataclass(frozen=True, eq=False)
class IsingLattice:
    """L x L spins with bond strengths: ``k_right[i, j]`` joins (i, j)-(i, j+1), ``k_down[i, j]`` (i, j)-(i+1, j)."""

    spins: np.ndarray
    k_right: np.ndarray
    k_down: np.ndarray

    def __post_init__(self) -> None:
        shape = self.spins.shape
        if len(shape) != 2 or shape[0] != shape[1]:
            raise ValueError(f"spins must be a square array, got shape {shape}")
        if self.k_right.shape != shape or self.k_down.shape != shape:
            raise ValueError("bond arrays must match the spin array shape")
        if not np.all(np.abs(self.spins) == 1):
            raise ValueError("spins must be +1 or -1")
        if np.any(self.k_right < 0) or np.any(self.k_down < 0):
            raise ValueError("bond strengths must be >= 0")

    @property
    def size(self) -> int:
        return int(self.spins.shape[0])

    def energy(self) -> float:
        return ising_energy(self.spins, self.k_right, self.k_down)


def ising_energy(spins: np.ndarray, k_right: np.ndarray, k_down: np.ndarray) -> float:
    s = spins.astype(float)
    return float(
        -np.sum(k_right * s * np.roll(s, -1, axis=1)) - np.sum(k_down * s * np.roll(s, -1, axis=0))
    )


def random_bond_lattice(size: int, coupling: float, p_bond: float, rng: np.random.Generator) -> IsingLattice:
    """Each bond has strength ``coupling`` with probability ``p_bond``, else 0; spins random.

    Raises:
        ValueError: If ``size`` is odd or below 2, or the coupling/probability is out of range.
    """
    if size < 2 or size % 2:
        raise ValueError(f"lattice size must be even and >= 2, got {size}")
    if coupling < 0:
        raise ValueError(f"coupling must be >= 0, got {coupling}")
    if not 0.0 <= p_bond <= 1.0:
        raise ValueError(f"p_bond must lie in [0, 1], got {p_bond}")
    k_right = np.where(rng.random((size, size)) < p_bond, coupling, 0.0)
    k_down = np.where(rng.random((size, size)) < p_bond, coupling, 0.0)
    spins = rng.choice(np.array([-1, 1], dtype=np.int8), size=(size, size))
    return IsingLattice(spins, k_right, k_down)


def percolation_fraction(lattice: IsingLattice) -> float:
    """Fraction of bonds with nonzero strength."""
    bonds = np.concatenate([lattice.k_right.ravel(), lattice.k_down.ravel()])
    return float(np.count_nonzero(bonds) / bonds.size)


def local_field(spins: np.ndarray, k_right: np.ndarray, k_down: np.ndarray) -> np.ndarray:
    """h_i = sum_j K_ij s_j over the four bonds of each site."""
    s = spins.astype(float)
    return (
        k_right * np.roll(s, -1, axis=1)
        + np.roll(k_right, 1, axis=1) * np.roll(s, 1, axis=1)
        + k_down * np.roll(s, -1, axis=0)
        + np.roll(k_down, 1, axis=0) * np.roll(s, 1, axis=0)
    )


def _sublattice_masks(size: int) -> tuple[np.ndarray, np.ndarray]:
    i, j = np.indices((size, size))
    even = (i + j) % 2 == 0
    return even, ~even


def flip_probability(delta: np.ndarray) -> np.ndarray:
    """Heat-bath acceptance 1 / (1 + exp(dE)); a spin with zero local field flips w.p. 1/2."""
    return expit(-delta)


def checkerboard_sweep(
    spins: np.ndarray, k_right: np.ndarray, k_down: np.ndarray, rng: np.random.Generator
) -> None:
    """One single-spin-flip sweep in place, one sublattice at a time.

    Sites of a sublattice share no bond, so each half-sweep resamples them independently
    from their conditional Boltzmann weights.
    """
    for mask in _sublattice_masks(spins.shape[0]):
        delta = 2.0 * spins * local_field(spins, k_right, k_down)
        accept = rng.random(spins.shape) < flip_probability(delta)
        spins[mask & accept] *= -1


@dataclass(frozen=True)
class RbimResult:
    """Chain averages for one disorder realisation."""

    size: int
    coupling: float
    p_bond: float
    sample: int
    abs_m: float
    m2: float
    m4: float
    binder: float
    bond_fraction: float


def binder_cumulant(m2: float, m4: float) -> float:
    """U4 = 1 - <m^4> / (3 <m^2>^2); 0 when <m^2> vanishes."""
    return 1.0 - m4 / (3.0 * m2**2) if m2 > 0 else 0.0


def run_rbim_mc(
    size: int,
    coupling: float,
    p_bond: float,
    sweeps: int,
    seed: int,
    *,
    burn_in: int = 0,
    sample: int = 0,
) -> RbimResult:
    """Magnetisation moments of one disordered lattice after ``burn_in`` discarded sweeps.

    Bonds are drawn from the sample's bond stream and compared against ``p_bond``, so the
    same sample shares its disorder uniforms across a p scan.
    """
    if sweeps < 1:
        raise ValueError(f"sweeps must be >= 1, got {sweeps}")
    if burn_in < 0:
        raise ValueError(f"burn_in must be >= 0, got {burn_in}")
    lattice = random_bond_lattice(
        size, coupling, p_bond, keyed_rng(seed, sample, StreamTag.RBIM_BONDS, size)
    )
    chain = keyed_rng(seed, sample, StreamTag.RBIM_CHAIN, size)
    spins = lattice.spins.copy()
    n = spins.size
    for _ in range(burn_in):
        checkerboard_sweep(spins, lattice.k_right, lattice.k_down, chain)
    mags = np.empty(sweeps)
    for k in range(sweeps):
        checkerboard_sweep(spins, lattice.k_right, lattice.k_down, chain)
        mags[k] = spins.sum() / n
    m2 = float(np.mean(mags**2))
    m4 = float(np.mean(mags**4))
    return RbimResult(
        size=size,
        coupling=float(coupling),
        p_bond=float(p_bond),
        sample=sample,
        abs_m=float(np.mean(np.abs(mags))),
        m2=m2,
        m4=m4,
        binder=binder_cumulant(m2, m4),
        bond_fraction=percolation_fraction(lattice),
    )


def _run_point(args: tuple[int, float, float, int, int, int, int]) -> RbimResult:
    size, coupling, p_bond, sweeps, seed, burn_in, sample = args
    return run_rbim_mc(size, coupling, p_bond, sweeps, seed, burn_in=burn_in, sample=sample)


def run_rbim_scan(
    sizes: Sequence[int],
    couplings: Sequence[float],
    p_values: Sequence[float],
    samples: int,
    sweeps: int,
    seed: int,
    *,
    burn_in: int = 0,
    workers: int = 1,
) -> list[RbimResult]:
    """Every (size, coupling, p, sample) point; results in that nested order."""
    points = [
        (size, coupling, p, sweeps, seed, burn_in, sample)
        for size, coupling, p, sample in itertools.product(sizes, couplings, p_values, range(samples))
    ]
    logger.info("rbim scan: %d chains of %d sweeps", len(points), sweeps)
    if workers > 1 and len(points) > 1:
        with ProcessPoolExecutor(max_workers=workers) as executor:
            return list(executor.map(_run_point, points))
    return [_run_point(point) for point in points]


def rbim_records(results: Iterable[RbimResult], seed: int) -> list[RunRecord]:
    """One record per observable; the region column carries ``observable@K=value``."""
    records = [
        RunRecord(
            model="statmech-rbim",
            q=0,
            lx=r.size,
            ly=r.size,
            param=r.p_bond,
            region=f"{name}@K={r.coupling:.17g}",
            sample=r.sample,
            seed=seed,
            value=getattr(r, name),
        )
        for r in results
        for name in OBSERVABLES
    ]
    return sorted(records, key=lambda rec: rec.sort_key)


def binder_curves(results: Iterable[RbimResult], axis: str = "p_bond") -> dict[int, dict[float, float]]:
    """U4 from disorder-averaged moments, per size, as a function of ``p_bond`` or ``coupling``."""
    if axis not in ("p_bond", "coupling"):
        raise ValueError(f"axis must be 'p_bond' or 'coupling', got {axis!r}")
    moments: dict[tuple[int, float], list[tuple[float, float]]] = defaultdict(list)
    for r in results:
        moments[(r.size, getattr(r, axis))].append((r.m2, r.m4))
    curves: dict[int, dict[float, float]] = defaultdict(dict)
    for (size, x), values in moments.items():
        m2 = float(np.mean([v[0] for v in values]))
        m4 = float(np.mean([v[1] for v in values]))
        curves[size][x] = binder_cumulant(m2, m4)
    return dict(curves)


def binder_crossing(results: Iterable[RbimResult], axis: str = "p_bond") -> FitResult:
    """Mean crossing of Binder curves between consecutive sizes."""
    curves = binder_curves(results, axis)
    if len(curves) < 2:
        raise ValueError(f"binder crossing needs >= 2 sizes, got {len(curves)}")
    kind = "pc" if axis == "p_bond" else "kc"
    return summarize_crossings(curve_crossings(curves), kind, f"{axis}, sizes {sorted(curves)}")


# ---------------------------------------------------------------------------
# Exact enumeration (tiny lattices)
# ---------------------------------------------------------------------------


def state_codes(spins: np.ndarray) -> int:
    """Row-major bit code of a configuration, bit k set when spin k is +1."""
    bits = (spins.ravel() > 0).astype(np.int64)
    return int(np.dot(bits, 1 << np.arange(bits.size, dtype=np.int64)))


def exact_rbim_distribution(k_right: np.ndarray, k_down: np.ndarray) -> np.ndarray:
    """Boltzmann probabilities exp(-E) / Z indexed by ``state_codes``."""
    size = k_right.shape[0]
    n = size * size
    if n > MAX_ENUMERATION_SITES:
        raise ValueError(f"exact enumeration supports <= {MAX_ENUMERATION_SITES} spins, got {n}")
    codes = np.arange(2**n)
    bits = (codes[:, None] >> np.arange(n)) & 1
    configs = (2 * bits - 1).reshape(-1, size, size)
    energies = np.array([ising_energy(c, k_right, k_down) for c in configs])
    weights = np.exp(-(energies - energies.min()))
    return weights / weights.sum()


def sample_state_histogram(
    lattice: IsingLattice, sweeps: int, rng: np.random.Generator
) -> np.ndarray:
    """Empirical distribution over ``state_codes`` after each of ``sweeps`` sweeps."""
    n = lattice.spins.size
    if n > MAX_ENUMERATION_SITES:
        raise ValueError(f"histograms support <= {MAX_ENUMERATION_SITES} spins, got {n}")
    spins = lattice.spins.copy()
    counts = np.zeros(2**n)
    for _ in range(sweeps):
        checkerboard_sweep(spins, lattice.k_right, lattice.k_down, rng)
        counts[state_codes(spins)] += 1
    return counts / counts.sum()


def total_variation(p: np.ndarray, r: np.ndarray) -> float:
    return 0.5 * float(np.abs(np.asarray(p) - np.asarray(r)).sum())


def onsager_coupling() -> float:
    """Critical coupling of the uniform square-lattice Ising model, 1/2 ln(1 + sqrt 2)."""
    return 0.5 * math.log(1 + math.sqrt(2))
