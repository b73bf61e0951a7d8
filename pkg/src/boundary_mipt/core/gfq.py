"""Exact linear algebra over the prime field Z_q."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

_WORD_BITS = 64


@lru_cache(maxsize=256)
def is_prime(q: int) -> bool:
    """Deterministic trial division up to sqrt(q)."""
    if q < 2:
        return False
    if q < 4:
        return True
    if q % 2 == 0:
        return False
    d = 3
    while d * d <= q:
        if q % d == 0:
            return False
        d += 2
    return True


def validate_modulus(q: int) -> int:
    """Return ``q`` unchanged, raising ``ValueError`` when it is not prime."""
    if not isinstance(q, (int, np.integer)) or isinstance(q, bool):
        raise ValueError(f"modulus must be an integer, got {q!r}")
    if not is_prime(int(q)):
        raise ValueError(f"modulus must be prime, got {q}")
    return int(q)


def mod_inverse(a: int, q: int) -> int:
    """Return b with a*b = 1 (mod q).

    Raises:
        ValueError: If ``q`` is not prime or ``a`` is zero modulo ``q``.
    """
    q = validate_modulus(q)
    a = int(a) % q
    if a == 0:
        raise ValueError(f"0 has no inverse modulo {q}")
    return pow(a, -1, q)


@dataclass(frozen=True, eq=False)
class FpMatrix:
    """Dense matrix with entries in [0, q) for a prime modulus q."""

    data: np.ndarray
    q: int

    def __post_init__(self) -> None:
        q = validate_modulus(self.q)
        arr = np.array(self.data, dtype=np.int64, copy=True)
        if arr.ndim == 1 and arr.size == 0:
            arr = arr.reshape(0, 0)
        if arr.ndim != 2:
            raise ValueError(f"FpMatrix requires a 2D array, got shape {arr.shape}")
        if arr.size and (arr.min() < 0 or arr.max() >= q):
            raise ValueError(f"entries must lie in [0, {q})")
        arr.setflags(write=False)
        object.__setattr__(self, "data", arr)
        object.__setattr__(self, "q", q)

    @classmethod
    def reduce(cls, data: np.ndarray, q: int) -> "FpMatrix":
        """Build a matrix from arbitrary integers by reducing them mod q."""
        return cls(np.mod(np.asarray(data, dtype=np.int64), validate_modulus(q)), q)

    @property
    def rows(self) -> int:
        return int(self.data.shape[0])

    @property
    def cols(self) -> int:
        return int(self.data.shape[1])

    def transpose(self) -> "FpMatrix":
        return FpMatrix(self.data.T, self.q)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FpMatrix):
            return NotImplemented
        return self.q == other.q and np.array_equal(self.data, other.data)

    def __hash__(self) -> int:
        return hash((self.q, self.data.shape, self.data.tobytes()))


def rank_fp(matrix: FpMatrix) -> int:
    """Rank of ``matrix`` over Z_q.

    q = 2 goes through the bit-packed elimination; other primes use row reduction on
    flat element arrays. Both pivot on the first nonzero entry in column order.
    """
    if matrix.rows == 0 or matrix.cols == 0:
        return 0
    if matrix.q == 2:
        return rank_gf2_packed(matrix.data)
    return rank_mod_q(matrix.data, matrix.q)


def rank_mod_q(data: np.ndarray, q: int) -> int:
    """Gaussian elimination over Z_q on a copy of ``data``."""
    work = np.mod(np.array(data, dtype=np.int64, copy=True), q)
    n_rows, n_cols = work.shape
    rank = 0
    for col in range(n_cols):
        if rank == n_rows:
            break
        nonzero = np.flatnonzero(work[rank:, col])
        if nonzero.size == 0:
            continue
        pivot = rank + int(nonzero[0])
        if pivot != rank:
            work[[rank, pivot]] = work[[pivot, rank]]
        inv = pow(int(work[rank, col]), -1, q)
        work[rank] = (work[rank] * inv) % q
        below = rank + 1 + np.flatnonzero(work[rank + 1 :, col])
        if below.size:
            factors = work[below, col][:, None]
            work[below] = (work[below] - factors * work[rank]) % q
        rank += 1
    return rank


def pack_gf2_rows(data: np.ndarray) -> np.ndarray:
    """Pack a 0/1 matrix into little-endian uint64 words, bit c of the row = column c."""
    bits = np.asarray(data, dtype=np.uint8) & 1
    n_rows, n_cols = bits.shape
    n_words = max(1, -(-n_cols // _WORD_BITS))
    padded = np.zeros((n_rows, n_words * _WORD_BITS), dtype=np.uint8)
    padded[:, :n_cols] = bits
    packed = np.packbits(padded, axis=1, bitorder="little")
    return np.ascontiguousarray(packed).view("<u8")


def rank_gf2_packed(data: np.ndarray) -> int:
    """Rank over GF(2) with rows packed into machine words; row additions are XORs."""
    packed = pack_gf2_rows(data).copy()
    n_rows = packed.shape[0]
    n_cols = np.asarray(data).shape[1]
    one = np.uint64(1)
    rank = 0
    for col in range(n_cols):
        if rank == n_rows:
            break
        word, bit = divmod(col, _WORD_BITS)
        column_bits = (packed[rank:, word] >> np.uint64(bit)) & one
        nonzero = np.flatnonzero(column_bits)
        if nonzero.size == 0:
            continue
        pivot = rank + int(nonzero[0])
        if pivot != rank:
            packed[[rank, pivot]] = packed[[pivot, rank]]
        below = rank + 1 + np.flatnonzero(
            (packed[rank + 1 :, word] >> np.uint64(bit)) & one
        )
        if below.size:
            packed[below] ^= packed[rank]
        rank += 1
    return rank
