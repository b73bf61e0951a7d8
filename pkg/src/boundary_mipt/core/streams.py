"""Keyed random streams: every draw is a pure function of (seed, trajectory, tag, coords).

Each key builds a fresh Philox (counter-based) generator through ``SeedSequence``, so the
streaming and full-lattice drivers consume identical values regardless of the order in
which rows are visited or which worker process evaluates a trajectory.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np


class StreamTag(enum.IntEnum):
    """Purpose of a random stream; part of the key."""

    EDGE_WEIGHTS = 1
    MEASURE_BASIS = 2
    GATES = 3
    INTERVALS = 4
    RBIM_BONDS = 5
    RBIM_CHAIN = 6
    ORACLE = 7


def keyed_rng(seed: int, trajectory: int, tag: StreamTag, *coords: int) -> np.random.Generator:
    """Independent generator for one key."""
    key = [int(seed), int(trajectory), int(tag), *(int(c) for c in coords)]
    if any(k < 0 for k in key):
        raise ValueError(f"stream key entries must be non-negative, got {key}")
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(key)))


@dataclass(frozen=True)
class TrajectoryStreams:
    """All streams of one trajectory."""

    seed: int
    trajectory: int

    def rng(self, tag: StreamTag, *coords: int) -> np.random.Generator:
        return keyed_rng(self.seed, self.trajectory, tag, *coords)

    def edge_weights(self, y: int, count: int, q: int) -> np.ndarray:
        """CP weights uniform in [1, q-1] for the bonds introduced with row ``y``."""
        return self.rng(StreamTag.EDGE_WEIGHTS, y).integers(1, q, size=count, dtype=np.int64)

    def x_basis_mask(self, y: int, lx: int, p_x: float) -> np.ndarray:
        """True where row ``y`` is measured in X."""
        return self.rng(StreamTag.MEASURE_BASIS, y).random(lx) < p_x

    def gate_draws(
        self, step: int, layer: int, y: int, count: int, n_elements: int
    ) -> tuple[np.ndarray, np.ndarray]:
        """(presence uniforms, group element indices) for the bonds of one layer row."""
        rng = self.rng(StreamTag.GATES, step, layer, y)
        return rng.random(count), rng.integers(n_elements, size=count)
