"""Dense finite-dimensional state algebra.

Everything downstream (entropies, channels, compound states) works with the
validated :class:`DensityOperator` built here, plus its spectral and rank-one
decompositions.  Dimensions stay small (<= 64), so dense eigensolves are the
workhorse throughout.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    DimensionMismatch,
    NotHermitian,
    NotPositive,
    NotUnitTrace,
)

HERMITIAN_TOL = 1e-10
TRACE_TOL = 1e-10
POSITIVITY_TOL = 1e-10
CLUSTER_TOL = 1e-8
MAX_DIM = 64


def _as_square_matrix(matrix) -> np.ndarray:
    arr = np.asarray(matrix, dtype=complex)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] < 1:
        raise DimensionMismatch(f"expected a square matrix, got shape {arr.shape}")
    if arr.shape[0] > MAX_DIM:
        raise DimensionMismatch(
            f"dimension {arr.shape[0]} exceeds the supported maximum {MAX_DIM}"
        )
    return arr


def _fix_phase(vector: np.ndarray) -> np.ndarray:
    """Rotate a global phase so the largest-magnitude entry is real positive."""
    idx = int(np.argmax(np.abs(vector)))
    pivot = vector[idx]
    if abs(pivot) < 1e-300:
        return vector
    return vector * (np.conj(pivot) / abs(pivot))


class DensityOperator:
    """A Hermitian, positive semidefinite, unit-trace matrix.

    Construction validates all three invariants and then rebuilds the matrix
    from its clamped spectrum, so stored eigenvalues are exact for the stored
    matrix.  The eigensystem is kept on the instance because nearly every
    consumer needs it again.
    """

    __slots__ = ("matrix", "eigenvalues", "eigenvectors")

    def __init__(
        self,
        matrix,
        *,
        hermitian_tol: float = HERMITIAN_TOL,
        trace_tol: float = TRACE_TOL,
        positivity_tol: float = POSITIVITY_TOL,
    ):
        arr = _as_square_matrix(matrix)
        herm_dev = float(np.max(np.abs(arr - arr.conj().T)))
        if herm_dev > hermitian_tol:
            raise NotHermitian(
                f"matrix deviates from Hermitian symmetry by {herm_dev:.3e} "
                f"(tolerance {hermitian_tol:.1e})",
                deviation=herm_dev,
            )
        herm = (arr + arr.conj().T) / 2.0
        trace_dev = abs(complex(np.trace(herm)) - 1.0)
        if trace_dev > trace_tol:
            raise NotUnitTrace(
                f"trace deviates from 1 by {trace_dev:.3e} (tolerance {trace_tol:.1e})",
                deviation=trace_dev,
            )
        w, v = np.linalg.eigh(herm)
        min_eig = float(w[0])
        if min_eig < -positivity_tol:
            raise NotPositive(
                f"smallest eigenvalue {min_eig:.3e} is below -{positivity_tol:.1e}",
                deviation=-min_eig,
            )
        w = np.clip(w, 0.0, 1.0)
        w = w / w.sum()
        rebuilt = (v * w) @ v.conj().T
        rebuilt = (rebuilt + rebuilt.conj().T) / 2.0
        rebuilt.flags.writeable = False
        w.flags.writeable = False
        v.flags.writeable = False
        self.matrix = rebuilt
        self.eigenvalues = w  # ascending, clamped to [0, 1], summing to 1
        self.eigenvectors = v

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @classmethod
    def pure(cls, vector) -> "DensityOperator":
        vec = np.asarray(vector, dtype=complex).reshape(-1)
        norm = np.linalg.norm(vec)
        if norm < 1e-12:
            raise NotUnitTrace("cannot build a pure state from the zero vector")
        vec = vec / norm
        return cls(np.outer(vec, vec.conj()))

    @classmethod
    def diagonal(cls, probs) -> "DensityOperator":
        return cls(np.diag(np.asarray(probs, dtype=float)).astype(complex))

    @classmethod
    def maximally_mixed(cls, dim: int) -> "DensityOperator":
        return cls(np.eye(dim, dtype=complex) / dim)

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return f"DensityOperator(dim={self.dim})"


def validate_density(matrix, **tolerances) -> DensityOperator:
    """Validate a raw matrix as a quantum state; see :class:`DensityOperator`."""
    return DensityOperator(matrix, **tolerances)


@dataclass(frozen=True)
class SpectralDecomposition:
    """Distinct eigenvalues with their eigenspace projectors."""

    eigenvalues: tuple[float, ...]
    projectors: tuple[np.ndarray, ...]
    dim: int

    def ranks(self) -> tuple[int, ...]:
        return tuple(int(round(np.real(np.trace(p)))) for p in self.projectors)

    def recompose(self) -> np.ndarray:
        out = np.zeros((self.dim, self.dim), dtype=complex)
        for lam, proj in zip(self.eigenvalues, self.projectors):
            out += lam * proj
        return out


@dataclass(frozen=True)
class SchattenDecomposition:
    """A rank-one resolution rho = sum_k w_k |v_k><v_k| over the support."""

    weights: tuple[float, ...]
    vectors: tuple[np.ndarray, ...]
    dim: int

    @property
    def projectors(self) -> tuple[np.ndarray, ...]:
        return tuple(np.outer(v, v.conj()) for v in self.vectors)

    def recompose(self) -> np.ndarray:
        out = np.zeros((self.dim, self.dim), dtype=complex)
        for w, v in zip(self.weights, self.vectors):
            out += w * np.outer(v, v.conj())
        return out


def _eigen_clusters(eigenvalues: np.ndarray, cluster_tol: float) -> list[list[int]]:
    """Group indices of (ascending) eigenvalues into near-degenerate clusters."""
    clusters: list[list[int]] = [[0]]
    for i in range(1, eigenvalues.size):
        if eigenvalues[i] - eigenvalues[clusters[-1][-1]] <= cluster_tol:
            clusters[-1].append(i)
        else:
            clusters.append([i])
    return clusters


def _canonical_cluster_basis(projector: np.ndarray, rank: int) -> list[np.ndarray]:
    """Deterministic orthonormal basis of an eigenspace.

    Gram-Schmidt over the projected standard basis depends only on the
    subspace, not on whatever basis the eigensolver happened to return.
    """
    dim = projector.shape[0]
    chosen: list[np.ndarray] = []
    for i in range(dim):
        cand = projector[:, i].copy()
        for u in chosen:
            cand -= u * (u.conj() @ cand)
        norm = np.linalg.norm(cand)
        if norm > 1e-6:
            chosen.append(_fix_phase(cand / norm))
        if len(chosen) == rank:
            break
    if len(chosen) < rank:  # pathological cancellation; fall back on eigh output
        w, v = np.linalg.eigh(projector)
        chosen = [_fix_phase(v[:, j]) for j in range(dim) if w[j] > 0.5][:rank]
    return chosen


def spectral_decompose(
    rho: DensityOperator, cluster_tol: float = CLUSTER_TOL
) -> SpectralDecomposition:
    """Distinct-eigenvalue resolution of a state, zero eigenvalues dropped.

    Eigenvalues closer than ``cluster_tol`` are merged into one eigenspace and
    represented by their mean.
    """
    w = rho.eigenvalues
    v = rho.eigenvectors
    values: list[float] = []
    projectors: list[np.ndarray] = []
    for cluster in _eigen_clusters(w, cluster_tol):
        lam = float(np.mean(w[cluster]))
        if lam <= 0.0:
            continue
        cols = v[:, cluster]
        projectors.append(cols @ cols.conj().T)
        values.append(lam)
    return SpectralDecomposition(tuple(values), tuple(projectors), rho.dim)


def random_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed unitary via QR of a complex Ginibre matrix."""
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    q, r = np.linalg.qr(g)
    d = np.diag(r)
    return q * (d / np.abs(d))


def schatten_decompose(
    rho: DensityOperator,
    strategy: str = "canonical",
    seed: int = 0,
    cluster_tol: float = CLUSTER_TOL,
) -> SchattenDecomposition:
    """Rank-one decomposition of a state over its support.

    ``strategy`` picks the basis inside each degenerate eigenspace:
    ``"canonical"`` is deterministic and basis-stable, while
    ``"seeded-random-unitary"`` rotates each degenerate eigenspace with a Haar
    unitary drawn from ``seed``.
    """
    if strategy not in ("canonical", "seeded-random-unitary"):
        raise ValueError(f"unknown degeneracy strategy: {strategy!r}")
    w = rho.eigenvalues
    v = rho.eigenvectors
    rng = np.random.default_rng(seed) if strategy == "seeded-random-unitary" else None
    weights: list[float] = []
    vectors: list[np.ndarray] = []
    for cluster in _eigen_clusters(w, cluster_tol):
        lam = float(np.mean(w[cluster]))
        if lam <= 0.0:
            continue
        rank = len(cluster)
        cols = v[:, cluster]
        basis = _canonical_cluster_basis(cols @ cols.conj().T, rank)
        if rng is not None and rank > 1:
            mix = random_unitary(rank, rng)
            stacked = np.column_stack(basis) @ mix
            basis = [_fix_phase(stacked[:, j]) for j in range(rank)]
        for vec in basis:
            weights.append(lam)
            vectors.append(vec)
    return SchattenDecomposition(tuple(weights), tuple(vectors), rho.dim)


def canonical_eigenbasis(matrix: np.ndarray, cluster_tol: float = CLUSTER_TOL):
    """Full deterministic eigenbasis of a Hermitian matrix, kernel included.

    Returns ``(eigenvalues, vectors)`` where both lists have the matrix
    dimension as length and eigenvalues repeat with multiplicity (cluster
    means), sorted ascending.
    """
    herm = (matrix + matrix.conj().T) / 2.0
    w, v = np.linalg.eigh(herm)
    values: list[float] = []
    vectors: list[np.ndarray] = []
    for cluster in _eigen_clusters(w, cluster_tol):
        lam = float(np.mean(w[cluster]))
        cols = v[:, cluster]
        basis = _canonical_cluster_basis(cols @ cols.conj().T, len(cluster))
        for vec in basis:
            values.append(lam)
            vectors.append(vec)
    return values, vectors


def tensor(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product of two operators."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.ndim != 2 or b.ndim != 2:
        raise DimensionMismatch("tensor expects two matrices")
    return np.kron(a, b)


def partial_trace(
    matrix: np.ndarray, dims: tuple[int, int], subsystem: int
) -> np.ndarray:
    """Trace out one tensor factor of an operator on H1 (x) H2.

    ``subsystem`` names the factor that is removed: ``1`` keeps the second
    factor, ``2`` keeps the first.
    """
    arr = np.asarray(matrix, dtype=complex)
    d1, d2 = dims
    if arr.shape != (d1 * d2, d1 * d2):
        raise DimensionMismatch(
            f"operator of shape {arr.shape} does not factor as {d1}x{d2}"
        )
    if subsystem not in (1, 2):
        raise DimensionMismatch(f"subsystem must be 1 or 2, got {subsystem}")
    blocks = arr.reshape(d1, d2, d1, d2)
    if subsystem == 1:
        return np.einsum("iaib->ab", blocks)
    return np.einsum("aibi->ab", blocks)


def random_density(
    dim: int, rng: np.random.Generator, rank: int | None = None
) -> DensityOperator:
    """Random full(ish)-rank state from a Ginibre factor G G^dagger."""
    rank = dim if rank is None else rank
    g = rng.standard_normal((dim, rank)) + 1j * rng.standard_normal((dim, rank))
    mat = g @ g.conj().T
    return DensityOperator(mat / np.real(np.trace(mat)))


def random_pure(dim: int, rng: np.random.Generator) -> DensityOperator:
    vec = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return DensityOperator.pure(vec)
