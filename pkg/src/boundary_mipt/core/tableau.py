"""Phase-free qudit stabilizer tableaux: Pauli strings, Clifford conjugation, measurement.

A Pauli string X^a Z^b is stored by its exponent vectors only; the global phase and
measurement outcome labels are dropped because every observable computed here (ranks,
entropies, mutual information) is independent of them.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field

import numpy as np

from boundary_mipt.core.gfq import FpMatrix, mod_inverse, rank_fp, validate_modulus

# Two-site symplectic form on (a_i, b_i, a_j, b_j); v1^T OMEGA v2 is the commutation phase.
_SITE_FORM = np.array([[0, -1], [1, 0]], dtype=np.int64)
TWO_SITE_FORM = np.kron(np.eye(2, dtype=np.int64), _SITE_FORM)


@dataclass(frozen=True, eq=False)
class PauliString:
    """Exponent vectors of one generalized Pauli string prod_i X_i^a_i Z_i^b_i."""

    x_exps: np.ndarray
    z_exps: np.ndarray
    q: int

    def __post_init__(self) -> None:
        q = validate_modulus(self.q)
        x = np.mod(np.asarray(self.x_exps, dtype=np.int64), q)
        z = np.mod(np.asarray(self.z_exps, dtype=np.int64), q)
        if x.ndim != 1 or x.shape != z.shape:
            raise ValueError(
                f"x and z exponent vectors must be 1D of equal length, got {x.shape} and {z.shape}"
            )
        x.setflags(write=False)
        z.setflags(write=False)
        object.__setattr__(self, "x_exps", x)
        object.__setattr__(self, "z_exps", z)
        object.__setattr__(self, "q", q)

    @classmethod
    def single_site(cls, n_sites: int, site: int, a: int, b: int, q: int) -> "PauliString":
        x = np.zeros(n_sites, dtype=np.int64)
        z = np.zeros(n_sites, dtype=np.int64)
        x[site] = a
        z[site] = b
        return cls(x, z, q)

    @property
    def n_sites(self) -> int:
        return int(self.x_exps.shape[0])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PauliString):
            return NotImplemented
        return (
            self.q == other.q
            and np.array_equal(self.x_exps, other.x_exps)
            and np.array_equal(self.z_exps, other.z_exps)
        )

    def __hash__(self) -> int:
        return hash((self.q, self.x_exps.tobytes(), self.z_exps.tobytes()))


def commutation_phase(p1: PauliString, p2: PauliString) -> int:
    """Return alpha with P1 P2 = w^alpha P2 P1, i.e. sum_i (b1_i a2_i - a1_i b2_i) mod q."""
    if p1.q != p2.q:
        raise ValueError(f"Pauli strings over different fields: q={p1.q} and q={p2.q}")
    if p1.n_sites != p2.n_sites:
        raise ValueError(f"Pauli string lengths differ: {p1.n_sites} != {p2.n_sites}")
    total = int(np.dot(p1.z_exps, p2.x_exps)) - int(np.dot(p1.x_exps, p2.z_exps))
    return total % p1.q


@dataclass(frozen=True)
class MeasurementOp:
    """Projective measurement of the single-site operator X^a Z^b."""

    site: int
    a: int
    b: int


@dataclass(frozen=True, eq=False)
class SymplecticGate:
    """Two-qudit Clifford gate represented by its 4x4 action on (a_i, b_i, a_j, b_j).

    ``word`` optionally records the generator sequence the matrix was built from, which
    lets the dense reference lift the gate to a unitary.
    """

    sites: tuple[int, int]
    matrix: np.ndarray
    q: int
    word: tuple[str, ...] = field(default=())

    def __post_init__(self) -> None:
        q = validate_modulus(self.q)
        i, j = (int(s) for s in self.sites)
        if i == j:
            raise ValueError(f"gate sites must differ, got ({i}, {j})")
        mat = np.mod(np.asarray(self.matrix, dtype=np.int64), q)
        if mat.shape != (4, 4):
            raise ValueError(f"symplectic gate matrix must be 4x4, got {mat.shape}")
        if not is_symplectic(mat, q):
            raise ValueError("gate matrix does not preserve the symplectic form")
        mat.setflags(write=False)
        object.__setattr__(self, "sites", (i, j))
        object.__setattr__(self, "matrix", mat)
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "word", tuple(self.word))


def is_symplectic(matrix: np.ndarray, q: int) -> bool:
    """True when M^T OMEGA M = OMEGA (mod q) for the two-site form."""
    m = np.asarray(matrix, dtype=np.int64)
    lhs = np.mod(m.T @ TWO_SITE_FORM @ m, q)
    return bool(np.array_equal(lhs, np.mod(TWO_SITE_FORM, q)))


class StabilizerTableau:
    """N generators over Z_q stored as an N x N X-exponent block and an N x N Z block.

    Row n holds generator n; column i holds site i. The tableau is a single-owner mutable
    value: the module-level operations update it in place and return it.
    """

    __slots__ = ("x", "z", "q")

    def __init__(self, x: np.ndarray, z: np.ndarray, q: int) -> None:
        self.q = validate_modulus(q)
        self.x = np.mod(np.array(x, dtype=np.int64, copy=True), self.q)
        self.z = np.mod(np.array(z, dtype=np.int64, copy=True), self.q)
        if self.x.ndim != 2 or self.x.shape != self.z.shape or self.x.shape[0] != self.x.shape[1]:
            raise ValueError(
                f"tableau blocks must be equal square matrices, got {self.x.shape} and {self.z.shape}"
            )

    @classmethod
    def product_state(cls, n_sites: int, q: int) -> "StabilizerTableau":
        """|+>^N: T_X = identity, T_Z = 0."""
        if n_sites < 0:
            raise ValueError(f"n_sites must be >= 0, got {n_sites}")
        return cls(np.eye(n_sites, dtype=np.int64), np.zeros((n_sites, n_sites), np.int64), q)

    @classmethod
    def from_rows(cls, rows: Sequence[PauliString]) -> "StabilizerTableau":
        if not rows:
            raise ValueError("at least one row is required")
        q = rows[0].q
        return cls(
            np.stack([r.x_exps for r in rows]), np.stack([r.z_exps for r in rows]), q
        )

    @property
    def n_sites(self) -> int:
        return int(self.x.shape[1])

    def row(self, index: int) -> PauliString:
        return PauliString(self.x[index], self.z[index], self.q)

    def rows(self) -> list[PauliString]:
        return [self.row(i) for i in range(self.x.shape[0])]

    def copy(self) -> "StabilizerTableau":
        return StabilizerTableau(self.x, self.z, self.q)

    def as_matrix(self) -> FpMatrix:
        """The N x 2N matrix [T_X, T_Z]."""
        return FpMatrix(np.hstack([self.x, self.z]), self.q)

    def check_invariants(self) -> None:
        """Raise ``ValueError`` unless rows pairwise commute and are independent."""
        gram = np.mod(self.z @ self.x.T - self.x @ self.z.T, self.q)
        if np.any(gram):
            i, j = np.argwhere(gram)[0]
            raise ValueError(f"generators {i} and {j} do not commute")
        rank = rank_fp(self.as_matrix())
        if rank != self.x.shape[0]:
            raise ValueError(f"generators are dependent: rank {rank} < {self.x.shape[0]}")

    def add_sites(self, count: int) -> range:
        """Append ``count`` fresh |+> sites; return their column indices."""
        n = self.n_sites
        total = n + count
        x = np.zeros((total, total), dtype=np.int64)
        z = np.zeros((total, total), dtype=np.int64)
        x[:n, :n] = self.x
        z[:n, :n] = self.z
        x[n:, n:] = np.eye(count, dtype=np.int64)
        self.x, self.z = x, z
        return range(n, total)

    def discard_sites(self, sites: Iterable[int]) -> None:
        """Drop sites that are in a product state with the rest (e.g. just measured).

        Column indices above a removed site shift down, matching ``np.delete``.

        Raises:
            ValueError: If a site is still entangled with the remaining sites.
        """
        targets = sorted({int(s) for s in sites})
        if not targets:
            return
        q = self.q
        active = np.ones(self.x.shape[0], dtype=bool)
        dropped_rows: list[int] = []
        for s in targets:
            xs, zs = self.x[:, s], self.z[:, s]
            touching = np.flatnonzero(active & ((xs != 0) | (zs != 0)))
            if touching.size == 0:
                raise ValueError(f"site {s} has no support among the remaining generators")
            k = int(touching[0])
            others = touching[1:]
            ak, bk = int(xs[k]), int(zs[k])
            if others.size:
                ai, bi = xs[others], zs[others]
                if np.any(np.mod(ai * bk - bi * ak, q)):
                    raise ValueError(f"site {s} is entangled with the remaining sites")
                if ak:
                    coeff = np.mod(ai * mod_inverse(ak, q), q)
                else:
                    coeff = np.mod(bi * mod_inverse(bk, q), q)
                self.x[others] = np.mod(self.x[others] - coeff[:, None] * self.x[k], q)
                self.z[others] = np.mod(self.z[others] - coeff[:, None] * self.z[k], q)
            active[k] = False
            dropped_rows.append(k)
        self.x = np.delete(np.delete(self.x, dropped_rows, axis=0), targets, axis=1)
        self.z = np.delete(np.delete(self.z, dropped_rows, axis=0), targets, axis=1)


def apply_cp(tableau: StabilizerTableau, i: int, j: int, w: int) -> StabilizerTableau:
    """Conjugate by CP_ij^w: z_j += w x_i and z_i += w x_j on every row."""
    if i == j:
        raise ValueError(f"CP requires two distinct sites, got i = j = {i}")
    q = tableau.q
    w = int(w) % q
    if w == 0:
        return tableau
    xi = tableau.x[:, i].copy()
    xj = tableau.x[:, j].copy()
    tableau.z[:, j] = (tableau.z[:, j] + w * xi) % q
    tableau.z[:, i] = (tableau.z[:, i] + w * xj) % q
    return tableau


def apply_symplectic(tableau: StabilizerTableau, gate: SymplecticGate) -> StabilizerTableau:
    """Multiply every row's (a_i, b_i, a_j, b_j) block by the gate matrix."""
    if gate.q != tableau.q:
        raise ValueError(f"gate over q={gate.q} applied to tableau over q={tableau.q}")
    i, j = gate.sites
    block = np.stack(
        [tableau.x[:, i], tableau.z[:, i], tableau.x[:, j], tableau.z[:, j]], axis=1
    )
    updated = np.mod(block @ gate.matrix.T, tableau.q)
    tableau.x[:, i] = updated[:, 0]
    tableau.z[:, i] = updated[:, 1]
    tableau.x[:, j] = updated[:, 2]
    tableau.z[:, j] = updated[:, 3]
    return tableau


def measure_site(tableau: StabilizerTableau, op: MeasurementOp) -> StabilizerTableau:
    """Projectively measure X^a Z^b on one site.

    Rows anticommuting with the operator are made to commute by multiplying with powers
    of the first such row (beta_i = -alpha_i / alpha_k mod q); that pivot row is then
    replaced by the measured operator. Deterministic outcomes leave the tableau as is.
    """
    q = tableau.q
    a, b = int(op.a) % q, int(op.b) % q
    if a == 0 and b == 0:
        raise ValueError("measured operator must be non-trivial: (a, b) = (0, 0) mod q")
    if not 0 <= op.site < tableau.n_sites:
        raise ValueError(f"site {op.site} out of range for {tableau.n_sites} sites")
    s = op.site
    alpha = (tableau.z[:, s] * a - tableau.x[:, s] * b) % q
    anticommuting = np.flatnonzero(alpha)
    if anticommuting.size == 0:
        return tableau
    k = int(anticommuting[0])
    others = anticommuting[1:]
    if others.size:
        beta = (-alpha[others] * mod_inverse(int(alpha[k]), q)) % q
        tableau.x[others] = (tableau.x[others] + beta[:, None] * tableau.x[k]) % q
        tableau.z[others] = (tableau.z[others] + beta[:, None] * tableau.z[k]) % q
    tableau.x[k] = 0
    tableau.z[k] = 0
    tableau.x[k, s] = a
    tableau.z[k, s] = b
    return tableau


def entropy_region(tableau: StabilizerTableau, region: Iterable[int]) -> int:
    """S_A = rank_q(T_A) - |A| in dits, for the columns of ``region`` in both blocks."""
    cols = sorted({int(c) for c in region})
    if not cols:
        return 0
    if cols[0] < 0 or cols[-1] >= tableau.n_sites:
        raise ValueError(f"region {cols} outside [0, {tableau.n_sites})")
    truncated = FpMatrix(np.hstack([tableau.x[:, cols], tableau.z[:, cols]]), tableau.q)
    return rank_fp(truncated) - len(cols)
