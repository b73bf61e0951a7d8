"""Two-qudit symplectic generators, Sp(4, q) closure and uniform Clifford sampling."""

from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from boundary_mipt.core.gfq import validate_modulus
from boundary_mipt.core.tableau import SymplecticGate

logger = logging.getLogger("boundary_mipt")

# Generator names: F = Fourier, P = phase, index = which site of the pair.
GENERATOR_NAMES: tuple[str, ...] = ("F0", "F1", "P0", "P1", "CP")

# Largest q for which Sp(4, q) is enumerated explicitly (|Sp(4,3)| = 51840).
MAX_CLOSURE_Q = 3


def fourier_block(q: int) -> np.ndarray:
    """(a, b) -> (-b, a)."""
    return np.array([[0, q - 1], [1, 0]], dtype=np.int64)


def phase_block(q: int) -> np.ndarray:
    """(a, b) -> (a, b + a)."""
    return np.array([[1, 0], [1, 1]], dtype=np.int64)


def cp_matrix(w: int, q: int) -> np.ndarray:
    """Symplectic action of CP^w on (a_i, b_i, a_j, b_j)."""
    w = int(w) % validate_modulus(q)
    return np.array(
        [[1, 0, 0, 0], [0, 1, w, 0], [0, 0, 1, 0], [w, 0, 0, 1]], dtype=np.int64
    )


def _embed(block: np.ndarray, site: int) -> np.ndarray:
    out = np.eye(4, dtype=np.int64)
    lo = 2 * site
    out[lo : lo + 2, lo : lo + 2] = block
    return out


def generator_matrix(name: str, q: int) -> np.ndarray:
    """4x4 matrix of one named generator."""
    q = validate_modulus(q)
    if name == "CP":
        return cp_matrix(1, q)
    if name in ("F0", "F1"):
        return _embed(fourier_block(q), int(name[1]))
    if name in ("P0", "P1"):
        return _embed(phase_block(q), int(name[1]))
    raise ValueError(f"unknown generator {name!r}; expected one of {GENERATOR_NAMES}")


def word_matrix(word: tuple[str, ...], q: int) -> np.ndarray:
    """Matrix of a generator word applied left to right (first letter acts first)."""
    out = np.eye(4, dtype=np.int64)
    for name in word:
        out = np.mod(generator_matrix(name, q) @ out, q)
    return out


@dataclass(frozen=True)
class SymplecticClosure:
    """All elements of Sp(4, q) with one generator word per element."""

    q: int
    matrices: np.ndarray
    words: tuple[tuple[str, ...], ...]

    def __len__(self) -> int:
        return len(self.words)

    def gate(self, index: int, sites: tuple[int, int]) -> SymplecticGate:
        return SymplecticGate(sites, self.matrices[index], self.q, word=self.words[index])


@lru_cache(maxsize=None)
def symplectic_closure(q: int) -> SymplecticClosure:
    """Enumerate Sp(4, q) by breadth-first search over generator products.

    Raises:
        ValueError: If ``q`` is above ``MAX_CLOSURE_Q``.
    """
    q = validate_modulus(q)
    if q > MAX_CLOSURE_Q:
        raise ValueError(f"explicit Sp(4, q) enumeration supports q <= {MAX_CLOSURE_Q}, got {q}")
    gens = [(name, generator_matrix(name, q)) for name in GENERATOR_NAMES]
    start = np.eye(4, dtype=np.int64)
    seen: dict[bytes, int] = {start.tobytes(): 0}
    matrices: list[np.ndarray] = [start]
    words: list[tuple[str, ...]] = [()]
    frontier: deque[int] = deque([0])
    while frontier:
        idx = frontier.popleft()
        current = matrices[idx]
        for name, g in gens:
            product = np.mod(g @ current, q)
            key = product.tobytes()
            if key in seen:
                continue
            seen[key] = len(matrices)
            matrices.append(product)
            words.append(words[idx] + (name,))
            frontier.append(len(matrices) - 1)
    logger.debug("Sp(4, %d) closure: %d elements", q, len(matrices))
    stacked = np.stack(matrices)
    stacked.setflags(write=False)
    return SymplecticClosure(q=q, matrices=stacked, words=tuple(words))


def sample_two_qubit_clifford(
    rng: np.random.Generator, sites: tuple[int, int] = (0, 1)
) -> SymplecticGate:
    """Uniform element of Sp(4, 2), i.e. a two-qubit Clifford modulo Paulis and phases."""
    closure = symplectic_closure(2)
    return closure.gate(int(rng.integers(len(closure))), sites)


def random_symplectic_gate(
    rng: np.random.Generator, sites: tuple[int, int], q: int, depth: int = 12
) -> SymplecticGate:
    """Gate built from a random generator word; works for any prime q."""
    q = validate_modulus(q)
    picks = rng.integers(len(GENERATOR_NAMES), size=depth)
    word = tuple(GENERATOR_NAMES[int(k)] for k in picks)
    return SymplecticGate(sites, word_matrix(word, q), q, word=word)
