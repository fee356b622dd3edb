"""Shared oracles and generators used across the test modules.

Everything here recomputes expected values through deliberately simple,
independent code paths (plain Python loops, scalar math) so that library
results are checked against something other than themselves.
"""

from __future__ import annotations

import math

import numpy as np

from mutent import DensityOperator, QuantumChannel


def scalar_entropy(weights, base: float = math.e) -> float:
    """Plain -sum p log p over positive entries."""
    total = 0.0
    for w in weights:
        if w > 0.0:
            total -= w * math.log(w)
    return total / math.log(base)


def scalar_relative(p, q, base: float = math.e) -> float:
    """Plain sum p log(p/q); inf on support violation."""
    total = 0.0
    for a, b in zip(p, q):
        if a > 0.0:
            if b <= 0.0:
                return math.inf
            total += a * math.log(a / b)
    return total / math.log(base)


def eig_entropy(matrix, base: float = math.e) -> float:
    """Von Neumann entropy straight from numpy eigenvalues."""
    w = np.linalg.eigvalsh(np.asarray(matrix, dtype=complex))
    return scalar_entropy([float(x) for x in w if x > 1e-14], base)


def eig_relative(rho, sigma, base: float = math.e) -> float:
    """Umegaki relative entropy via two independent eigendecompositions.

    Written as the explicit double sum over eigenpairs, with no shared code
    with the package internals.
    """
    rho = np.asarray(rho, dtype=complex)
    sigma = np.asarray(sigma, dtype=complex)
    wr, vr = np.linalg.eigh(rho)
    ws, vs = np.linalg.eigh(sigma)
    total = 0.0
    for i, p in enumerate(wr):
        if p <= 1e-12:
            continue
        total += p * math.log(p)
        for j, q in enumerate(ws):
            overlap = abs(np.vdot(vs[:, j], vr[:, i])) ** 2
            if overlap < 1e-14:
                continue
            if q <= 1e-12:
                return math.inf
            total -= p * overlap * math.log(q)
    return total / math.log(base)


def ginibre(dim: int, seed: int, rank: int | None = None) -> DensityOperator:
    rng = np.random.default_rng(seed)
    r = dim if rank is None else rank
    g = rng.standard_normal((dim, r)) + 1j * rng.standard_normal((dim, r))
    m = g @ g.conj().T
    return DensityOperator(m / np.real(np.trace(m)))


def haar_unitary(dim: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    q, r = np.linalg.qr(g)
    d = np.diag(r)
    return q * (d / np.abs(d))


def channel_pool(dim: int, seed: int = 0) -> list[QuantumChannel]:
    """A spread of shipped channel constructions on one dimension."""
    rng = np.random.default_rng(seed)
    pool = [
        QuantumChannel.identity(dim),
        QuantumChannel.depolarizing(dim, 0.3),
        QuantumChannel.depolarizing(dim, 0.8),
        QuantumChannel.phase_damping(dim, 0.5),
        QuantumChannel.constant(ginibre(dim, seed + 17)),
    ]
    t = rng.random((dim, dim))
    t = t / t.sum(axis=0, keepdims=True)
    pool.append(QuantumChannel.classical_stochastic(t))
    return pool


def exhaustive_best_alignment_score(a, b, match, mismatch, gap):
    """Enumerate every gapped alignment (no gap-gap columns) and return the
    best achievable score.  Exponential; only for tiny inputs."""

    best = -math.inf
    stack = [(0, 0, 0.0)]
    while stack:
        i, j, score = stack.pop()
        if i == len(a) and j == len(b):
            best = max(best, score)
            continue
        if i < len(a) and j < len(b):
            sub = match if a[i] == b[j] else mismatch
            stack.append((i + 1, j + 1, score + sub))
        if i < len(a):
            stack.append((i + 1, j, score + gap))
        if j < len(b):
            stack.append((i, j + 1, score + gap))
    return best
