"""Dense state-vector reference for differential checks of the stabilizer engine."""

from __future__ import annotations

import itertools
import logging
from collections.abc import Sequence
from dataclasses import dataclass, field

import numpy as np

from boundary_mipt.core.clifford import symplectic_closure
from boundary_mipt.core.gfq import validate_modulus
from boundary_mipt.core.streams import StreamTag, keyed_rng
from boundary_mipt.core.tableau import (
    MeasurementOp,
    StabilizerTableau,
    SymplecticGate,
    apply_cp,
    apply_symplectic,
    entropy_region,
    measure_site,
)

logger = logging.getLogger("boundary_mipt")

MAX_AMPLITUDES = 2**20
NORM_TOLERANCE = 1e-10
ENTROPY_TOLERANCE = 1e-8


def _omega(q: int) -> complex:
    return np.exp(2j * np.pi / q)


def shift_matrix(q: int) -> np.ndarray:
    """X|j> = |j+1>."""
    return np.roll(np.eye(q, dtype=complex), 1, axis=0)


def clock_matrix(q: int) -> np.ndarray:
    """Z|j> = w^j |j>."""
    return np.diag(_omega(q) ** np.arange(q))


def fourier_matrix(q: int) -> np.ndarray:
    """F = sum w^{jk} |j><k| / sqrt(q); conjugates X to Z and Z to X^-1."""
    j, k = np.indices((q, q))
    return _omega(q) ** (j * k) / np.sqrt(q)


def phase_matrix(q: int) -> np.ndarray:
    """Conjugates X to XZ up to phase: diag(1, i) for q = 2, diag(w^{j(j-1)/2}) otherwise."""
    if q == 2:
        return np.diag([1.0, 1j])
    j = np.arange(q)
    return np.diag(_omega(q) ** (j * (j - 1) // 2))


@dataclass(frozen=True, eq=False)
class DenseState:
    """Amplitudes as a tensor with one axis of length q per site."""

    q: int
    amplitudes: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        q = validate_modulus(self.q)
        amps = np.asarray(self.amplitudes, dtype=complex)
        if amps.size > MAX_AMPLITUDES:
            raise ValueError(f"{amps.size} amplitudes exceed the limit {MAX_AMPLITUDES}")
        if any(dim != q for dim in amps.shape):
            raise ValueError(f"every axis must have length q={q}, got shape {amps.shape}")
        norm = float(np.linalg.norm(amps))
        if abs(norm - 1.0) > NORM_TOLERANCE:
            raise ValueError(f"state norm {norm} differs from 1")
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "amplitudes", amps)

    @property
    def n_sites(self) -> int:
        return self.amplitudes.ndim

    @classmethod
    def plus_state(cls, n_sites: int, q: int) -> "DenseState":
        """|+>^N: all amplitudes q^(-N/2)."""
        if q**n_sites > MAX_AMPLITUDES:
            raise ValueError(f"q^N = {q**n_sites} exceeds the limit {MAX_AMPLITUDES}")
        return cls(q, np.full((q,) * n_sites, q ** (-n_sites / 2), dtype=complex))


def apply_single_site(state: DenseState, site: int, unitary: np.ndarray) -> DenseState:
    moved = np.tensordot(unitary, state.amplitudes, axes=([1], [site]))
    return DenseState(state.q, np.moveaxis(moved, 0, site))


def dense_apply_cp(state: DenseState, i: int, j: int, w: int) -> DenseState:
    """Multiply each basis amplitude by w^{w mu_i mu_j}."""
    if i == j:
        raise ValueError(f"CP requires two distinct sites, got i = j = {i}")
    q = state.q
    mu = np.arange(q)
    phases = _omega(q) ** ((int(w) * np.outer(mu, mu)) % q)
    shape = [1] * state.n_sites
    shape[i] = q
    shape[j] = q
    block = phases if i < j else phases.T
    return DenseState(q, state.amplitudes * block.reshape(shape))


def dense_apply_symplectic(state: DenseState, gate: SymplecticGate) -> DenseState:
    """Lift a gate through its generator word; any consistent phase choice will do."""
    if not gate.word and not np.array_equal(gate.matrix, np.eye(4, dtype=np.int64)):
        raise ValueError("dense lift needs a gate carrying its generator word")
    out = state
    for name in gate.word:
        if name == "CP":
            out = dense_apply_cp(out, gate.sites[0], gate.sites[1], 1)
            continue
        site = gate.sites[int(name[1])]
        unitary = fourier_matrix(state.q) if name[0] == "F" else phase_matrix(state.q)
        out = apply_single_site(out, site, unitary)
    return out


def pauli_matrix(a: int, b: int, q: int) -> np.ndarray:
    """X^a Z^b on one site."""
    return np.linalg.matrix_power(shift_matrix(q), a % q) @ np.linalg.matrix_power(
        clock_matrix(q), b % q
    )


@dataclass(frozen=True)
class MeasurementOutcome:
    eigenvalue: complex
    probabilities: tuple[float, ...]


def dense_measure(
    state: DenseState, site: int, a: int, b: int, rng: np.random.Generator
) -> tuple[DenseState, MeasurementOutcome]:
    """Born-sample an eigenvalue of X^a Z^b on ``site``, project and renormalise."""
    q = state.q
    if a % q == 0 and b % q == 0:
        raise ValueError("measured operator must be non-trivial")
    eigenvalues, vectors = np.linalg.eig(pauli_matrix(a, b, q))
    vectors, _ = np.linalg.qr(vectors)
    moved = np.moveaxis(state.amplitudes, site, 0)
    coefficients = np.tensordot(vectors.conj().T, moved, axes=([1], [0]))
    probs = np.array([float(np.sum(np.abs(c) ** 2)) for c in coefficients])
    probs = probs / probs.sum()
    k = int(rng.choice(q, p=probs))
    projected = np.tensordot(vectors[:, k], coefficients[k], axes=0)
    projected /= np.linalg.norm(projected)
    outcome = MeasurementOutcome(complex(eigenvalues[k]), tuple(float(p) for p in probs))
    return DenseState(q, np.moveaxis(projected, 0, site)), outcome


def dense_entropy(state: DenseState, region: Sequence[int]) -> float:
    """Von Neumann entropy of the reduced state in dits (log base q)."""
    inside = sorted({int(s) for s in region})
    if not inside or len(inside) == state.n_sites:
        return 0.0
    outside = [s for s in range(state.n_sites) if s not in inside]
    matrix = np.transpose(state.amplitudes, inside + outside).reshape(
        state.q ** len(inside), -1
    )
    singular = np.linalg.svd(matrix, compute_uv=False)
    probs = singular**2
    probs = probs[probs > 1e-14]
    return float(-np.sum(probs * np.log(probs)) / np.log(state.q))


# ---------------------------------------------------------------------------
# Differential runs
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DifferentialResult:
    q: int
    n_sites: int
    sequences: int
    comparisons: int
    mismatches: tuple[str, ...]

    @property
    def passed(self) -> bool:
        return not self.mismatches


def _regions(n_sites: int, rng: np.random.Generator, limit: int) -> list[tuple[int, ...]]:
    if n_sites <= 6:
        return [
            combo
            for size in range(1, n_sites)
            for combo in itertools.combinations(range(n_sites), size)
        ]
    return [
        tuple(sorted(rng.choice(n_sites, size=int(rng.integers(1, n_sites)), replace=False)))
        for _ in range(limit)
    ]


def run_differential(
    q: int,
    n_sites: int,
    sequences: int,
    seed: int,
    *,
    depth: int = 12,
    random_regions: int = 24,
) -> DifferentialResult:
    """Random CP / symplectic / measurement sequences on both engines; compare entropies."""
    q = validate_modulus(q)
    if n_sites < 2:
        raise ValueError(f"need at least 2 sites, got {n_sites}")
    closure = symplectic_closure(q)
    mismatches: list[str] = []
    comparisons = 0
    for seq in range(sequences):
        rng = keyed_rng(seed, seq, StreamTag.ORACLE, q, n_sites)
        tableau = StabilizerTableau.product_state(n_sites, q)
        dense = DenseState.plus_state(n_sites, q)
        ops: list[str] = []
        for _ in range(depth):
            kind = int(rng.integers(3))
            i, j = (int(s) for s in rng.choice(n_sites, size=2, replace=False))
            if kind == 0:
                w = int(rng.integers(q))
                apply_cp(tableau, i, j, w)
                dense = dense_apply_cp(dense, i, j, w)
                ops.append(f"CP({i},{j},{w})")
            elif kind == 1:
                gate = closure.gate(int(rng.integers(len(closure))), (i, j))
                apply_symplectic(tableau, gate)
                dense = dense_apply_symplectic(dense, gate)
                ops.append(f"G({i},{j},{''.join(gate.word)})")
            else:
                a, b = 0, 0
                while a == 0 and b == 0:
                    a, b = (int(v) for v in rng.integers(q, size=2))
                measure_site(tableau, MeasurementOp(i, a, b))
                dense, _ = dense_measure(dense, i, a, b, rng)
                ops.append(f"M({i},{a},{b})")
        for region in _regions(n_sites, rng, random_regions):
            comparisons += 1
            expected = dense_entropy(dense, region)
            got = entropy_region(tableau, region)
            if abs(expected - got) > ENTROPY_TOLERANCE:
                mismatches.append(
                    f"seq {seq} region {region}: tableau {got}, dense {expected:.10f}; {' '.join(ops)}"
                )
    if mismatches:
        logger.warning("%d of %d entropy comparisons disagree", len(mismatches), comparisons)
    return DifferentialResult(q, n_sites, sequences, comparisons, tuple(mismatches))
