"""Closed-form ingredients of the permutation-spin model of the four-layer Haar circuit.

Two replicas leave two permutation spins per vertex (identity or swap). Averaging a gate
attaches a Weingarten weight to horizontal edges and q^(cycles) to the others; integrating
out intermediate spins gives Ising couplings, and four spins meeting in a plaquette carry
a four-body weight.
"""

from __future__ import annotations

import enum
import logging
import math
from dataclasses import dataclass, replace
from fractions import Fraction

import numpy as np

logger = logging.getLogger("boundary_mipt")

ORBITS: dict[str, tuple[int, int, int, int]] = {
    "aligned": (1, 1, 1, 1),
    "single_flip": (-1, 1, 1, 1),
    "adjacent_pair": (-1, -1, 1, 1),
    "staggered": (1, -1, 1, -1),
}


class AnsatzError(ValueError):
    """The exponential plaquette ansatz cannot represent the exact weights."""


class PermSpin(enum.Enum):
    """Relative permutation sigma^-1 tau of two replica spins."""

    IDENTITY = "identity"
    SWAP = "swap"


def _check_q(q: float) -> None:
    if not q >= 2:
        raise ValueError(f"q must be >= 2, got {q}")


def weingarten2(relative: PermSpin, q: float) -> float:
    """Wg(identity) = 1/(q^4 - 1), Wg(swap) = -1/(q^2 (q^4 - 1)) for local dimension q^2."""
    _check_q(q)
    if relative is PermSpin.IDENTITY:
        return 1.0 / (q**4 - 1)
    return -1.0 / (q**2 * (q**4 - 1))


def edge_weight(relative: PermSpin, q: float) -> float:
    """q^(number of cycles): q^2 for identity, q for swap."""
    _check_q(q)
    return float(q**2) if relative is PermSpin.IDENTITY else float(q)


def _pair_matrix(weight, q: float) -> np.ndarray:
    same = weight(PermSpin.IDENTITY, q)
    diff = weight(PermSpin.SWAP, q)
    return np.array([[same, diff], [diff, same]], dtype=float)


def contract_vertical_ratio(q: float) -> float:
    """Sum over a two-degree spin joining two edge weights: (q^4 + q^2) / (2 q^3)."""
    e = _pair_matrix(edge_weight, q)
    m = e @ e
    return float(m[0, 0] / m[0, 1])


def contract_horizontal_ratio(q: float) -> float:
    """Aligned/anti-aligned ratio of the Wg . E . E . Wg chain across a third-layer gate."""
    wg = _pair_matrix(weingarten2, q)
    e = _pair_matrix(edge_weight, q)
    m = wg @ e @ e @ wg
    return float(m[0, 0] / m[0, 1])


def coupling_jvert(q: float) -> float:
    """J_vert = 1/2 ln((q^2 + 1) / (2q))."""
    _check_q(q)
    return 0.5 * math.log((q**2 + 1) / (2 * q))


def coupling_jhoriz(q: float) -> float:
    """J_horiz = 1/2 ln((1 + 2q + 4q^2 + 2q^3 + q^4) / (2q (1 + q + q^2)))."""
    _check_q(q)
    return 0.5 * math.log((1 + 2 * q + 4 * q**2 + 2 * q**3 + q**4) / (2 * q * (1 + q + q**2)))


# ---------------------------------------------------------------------------
# Plaquette weight
# ---------------------------------------------------------------------------


def plaquette_coefficients(q: float) -> tuple[float, float, float]:
    """(four-body, nearest pair, diagonal pair) coefficients; all 1 at q = inf."""
    if math.isinf(q):
        return 1.0, 1.0, 1.0
    _check_q(q)
    u = float(q) ** 2
    base = u**2 + 6 * u + 1
    return (
        (u + 1) ** 4 / ((u - 1) ** 2 * base),
        (u + 1) ** 3 / ((u - 1) * base),
        (u + 1) ** 2 / base,
    )


def plaquette_expansion(q: float) -> tuple[float, float, float]:
    """Leading large-q form of the coefficients: (1 + 16/q^4, 1 - 2/q^2, 1 - 4/q^2)."""
    if math.isinf(q):
        return 1.0, 1.0, 1.0
    _check_q(q)
    return 1 + 16 / q**4, 1 - 2 / q**2, 1 - 4 / q**2


def _spin_terms(s1: int, s2: int, s3: int, s4: int) -> tuple[int, int, int]:
    for s in (s1, s2, s3, s4):
        if s not in (-1, 1):
            raise ValueError(f"spins must be +1 or -1, got {(s1, s2, s3, s4)}")
    return s1 * s2 * s3 * s4, s1 * s2 + s2 * s3 + s3 * s4 + s4 * s1, s1 * s3 + s2 * s4


def plaquette_weight(s1: int, s2: int, s3: int, s4: int, q: float) -> float:
    """1 + c4 s1s2s3s4 + c2 (nearest pairs) + c3 (diagonal pairs), constant prefactor dropped."""
    four, nearest, diagonal = _spin_terms(s1, s2, s3, s4)
    c4, c2, c3 = plaquette_coefficients(q)
    return 1 + c4 * four + c2 * nearest + c3 * diagonal


def plaquette_orbits(q: int) -> dict[str, Fraction]:
    """Exact plaquette weight on each global-flip orbit, in rational arithmetic."""
    _check_q(q)
    u = Fraction(int(q) ** 2)
    base = u**2 + 6 * u + 1
    c4 = (u + 1) ** 4 / ((u - 1) ** 2 * base)
    c2 = (u + 1) ** 3 / ((u - 1) * base)
    c3 = (u + 1) ** 2 / base
    out: dict[str, Fraction] = {}
    for name, spins in ORBITS.items():
        four, nearest, diagonal = _spin_terms(*spins)
        out[name] = 1 + c4 * four + c2 * nearest + c3 * diagonal
    return out


# ---------------------------------------------------------------------------
# Couplings
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Couplings:
    """Ising couplings at one q; ``j12``, ``j13``, ``j1234`` come from the plaquette fit."""

    q: float
    j_vert: float
    j_horiz: float
    j12: float
    j13: float
    j1234: float
    log_constant: float = 0.0
    flipped_orbits: tuple[str, ...] = ()
    residual: float = 0.0


_ANSATZ_MATRIX = np.array(
    [[1, *_spin_terms(*ORBITS[name])] for name in ORBITS], dtype=float
)


def ansatz_weight(couplings: Couplings, s1: int, s2: int, s3: int, s4: int) -> float:
    """exp(C + J1234 s1s2s3s4 + J12 (nearest) + J13 (diagonal))."""
    four, nearest, diagonal = _spin_terms(s1, s2, s3, s4)
    return math.exp(
        couplings.log_constant
        + couplings.j1234 * four
        + couplings.j12 * nearest
        + couplings.j13 * diagonal
    )


def effective_couplings(q: int, *, allow_negative: bool = True) -> Couplings:
    """Match log |W| on the four orbits to C + J1234 P + J12 (nearest) + J13 (diagonal).

    Four orbits and four unknowns make the solve exact; ``residual`` is the largest
    relative mismatch of the reconstructed magnitudes. Orbits with a negative exact weight
    are listed in ``flipped_orbits``.

    Raises:
        AnsatzError: If an orbit weight vanishes, or is negative and ``allow_negative`` is off.
    """
    orbits = plaquette_orbits(q)
    flipped = tuple(name for name, value in orbits.items() if value < 0)
    zero = [name for name, value in orbits.items() if value == 0]
    if zero:
        raise AnsatzError(f"plaquette weight vanishes on orbits {zero} at q={q}")
    if flipped:
        if not allow_negative:
            raise AnsatzError(f"plaquette weight is negative on orbits {list(flipped)} at q={q}")
        logger.warning("q=%d: negative plaquette orbits %s fitted by magnitude", q, list(flipped))
    logs = np.array([math.log(abs(float(orbits[name]))) for name in ORBITS])
    constant, j1234, j12, j13 = np.linalg.solve(_ANSATZ_MATRIX, logs)
    couplings = Couplings(
        q=q,
        j_vert=coupling_jvert(q),
        j_horiz=coupling_jhoriz(q),
        j12=float(j12),
        j13=float(j13),
        j1234=float(j1234),
        log_constant=float(constant),
        flipped_orbits=flipped,
    )
    residual = max(
        abs(ansatz_weight(couplings, *spins) / abs(float(orbits[name])) - 1.0)
        for name, spins in ORBITS.items()
    )
    return replace(couplings, residual=residual)
