"""Classical and quantum entropy functionals.

All five operations compute in natural log internally and convert to the
requested base on output.  Relative entropies return the infinity marker when
the support condition fails instead of raising.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    ComputationError,
    DimensionMismatch,
    InvalidDistribution,
    LengthMismatch,
)
from .operators import DensityOperator

LN2 = math.log(2.0)
_BASE_FACTORS = {"e": 1.0, "2": LN2}

# Spectral floor for support tests and the squared-norm threshold a state's
# eigenvector must reach after projection onto the reference support.
SUPPORT_EIG_FLOOR = 1e-10
SUPPORT_NORM_TOL = 1e-8
CLASSICAL_ZERO = 1e-12
NEGATIVE_CLAMP = 1e-12


def _base_factor(base: str) -> float:
    try:
        return _BASE_FACTORS[base]
    except KeyError:
        raise ValueError(f"log base must be 'e' or '2', got {base!r}") from None


@dataclass(frozen=True)
class EntropyValue:
    """An entropy-like scalar tagged with its log base.

    ``from_nats`` clamps the tiny negative values that cancellation can
    produce; the plain constructor performs no clamping and is what signed
    quantities (e.g. disentanglement degrees) use.
    """

    value: float
    base: str = "e"

    @classmethod
    def from_nats(cls, nats: float, base: str = "e") -> "EntropyValue":
        factor = _base_factor(base)
        if math.isinf(nats):
            return cls(math.inf, base)
        if nats < 0.0:
            if nats < -NEGATIVE_CLAMP:
                raise ComputationError(
                    f"entropy evaluated to {nats:.3e} nats, below the "
                    f"-{NEGATIVE_CLAMP:.0e} clamping window"
                )
            nats = 0.0
        return cls(nats / factor, base)

    @classmethod
    def signed_from_nats(cls, nats: float, base: str = "e") -> "EntropyValue":
        return cls(nats / _base_factor(base), base)

    @property
    def is_infinite(self) -> bool:
        return math.isinf(self.value)

    @property
    def nats(self) -> float:
        if self.is_infinite:
            return math.inf if self.value > 0 else -math.inf
        return self.value * _base_factor(self.base)

    def in_base(self, base: str) -> "EntropyValue":
        if base == self.base:
            return self
        factor = _base_factor(base)
        if self.is_infinite:
            return EntropyValue(self.value, base)
        return EntropyValue(self.nats / factor, base)


class ProbabilityDistribution:
    """A finite probability vector; weights in [0, 1] summing to one."""

    __slots__ = ("weights",)

    def __init__(self, weights):
        arr = np.asarray(weights, dtype=float).reshape(-1)
        if arr.size == 0:
            raise InvalidDistribution("distribution needs at least one weight")
        low = float(arr.min())
        if low < -1e-10:
            raise InvalidDistribution(
                f"weight {low:.3e} is negative beyond tolerance", deviation=-low
            )
        arr = np.clip(arr, 0.0, 1.0)
        dev = abs(float(arr.sum()) - 1.0)
        if dev > 1e-10:
            raise InvalidDistribution(
                f"weights sum to 1{dev:+.3e} (tolerance 1e-10)", deviation=dev
            )
        arr.flags.writeable = False
        self.weights = arr

    def __len__(self) -> int:
        return int(self.weights.size)

    def __iter__(self):
        return iter(self.weights)


class JointDistribution:
    """A joint probability matrix over two finite event sets."""

    __slots__ = ("matrix",)

    def __init__(self, matrix):
        arr = np.asarray(matrix, dtype=float)
        if arr.ndim != 2 or arr.size == 0:
            raise InvalidDistribution("joint distribution must be a nonempty matrix")
        low = float(arr.min())
        if low < -1e-10:
            raise InvalidDistribution(
                f"joint weight {low:.3e} is negative beyond tolerance", deviation=-low
            )
        arr = np.clip(arr, 0.0, 1.0)
        dev = abs(float(arr.sum()) - 1.0)
        if dev > 1e-10:
            raise InvalidDistribution(
                f"joint weights sum to 1{dev:+.3e} (tolerance 1e-10)", deviation=dev
            )
        arr.flags.writeable = False
        self.matrix = arr

    @property
    def shape(self) -> tuple[int, int]:
        return self.matrix.shape

    def row_marginal(self) -> ProbabilityDistribution:
        return ProbabilityDistribution(self.matrix.sum(axis=1))

    def col_marginal(self) -> ProbabilityDistribution:
        return ProbabilityDistribution(self.matrix.sum(axis=0))


def shannon_entropy(dist: ProbabilityDistribution, base: str = "e") -> EntropyValue:
    """H(p) = -sum p_k log p_k with the 0 log 0 = 0 convention."""
    w = dist.weights
    pos = w[w > 0.0]
    return EntropyValue.from_nats(float(-(pos * np.log(pos)).sum()), base)


def classical_relative_entropy(
    mu: ProbabilityDistribution, nu: ProbabilityDistribution, base: str = "e"
) -> EntropyValue:
    """Kullback-Leibler divergence, infinite off the support of ``nu``."""
    a = mu.weights
    b = nu.weights
    if a.size != b.size:
        raise LengthMismatch(f"distributions have lengths {a.size} and {b.size}")
    if bool(np.any((a > CLASSICAL_ZERO) & (b <= CLASSICAL_ZERO))):
        return EntropyValue.from_nats(math.inf, base)
    mask = a > 0.0
    total = float((a[mask] * (np.log(a[mask]) - np.log(np.maximum(b[mask], 1e-300)))).sum())
    return EntropyValue.from_nats(total, base)


def classical_mutual_entropy(joint: JointDistribution, base: str = "e") -> EntropyValue:
    """I(A, B) = sum r_jk log(r_jk / (p_j q_k)) from a joint distribution."""
    r = joint.matrix
    p = r.sum(axis=1)
    q = r.sum(axis=0)
    total = 0.0
    rows, cols = np.nonzero(r > 0.0)
    for j, k in zip(rows, cols):
        total += r[j, k] * math.log(r[j, k] / (p[j] * q[k]))
    return EntropyValue.from_nats(total, base)


def von_neumann_entropy(rho: DensityOperator, base: str = "e") -> EntropyValue:
    """S(rho) = -tr rho log rho from the cached spectrum."""
    w = rho.eigenvalues
    pos = w[w > 0.0]
    return EntropyValue.from_nats(float(-(pos * np.log(pos)).sum()), base)


def _relative_entropy_nats(rho: DensityOperator, sigma: DensityOperator) -> float:
    """tr rho (log rho - log sigma), or inf if supp(rho) escapes supp(sigma).

    Works in the two eigenbases directly: the double sum over eigenpairs
    avoids matrix logarithms entirely and handles rank deficiency through the
    support test.
    """
    wa, va = rho.eigenvalues, rho.eigenvectors
    wb, vb = sigma.eigenvalues, sigma.eigenvectors
    sig_support = wb > SUPPORT_EIG_FLOOR
    log_wb = np.log(wb[sig_support]) if sig_support.any() else np.zeros(0)
    overlaps = np.abs(va.conj().T @ vb) ** 2  # overlaps[i, j] = |<u_i|v_j>|^2
    total = 0.0
    for i in range(wa.size):
        a = float(wa[i])
        if a <= 0.0:
            continue
        row = overlaps[i, sig_support]
        if a > SUPPORT_EIG_FLOOR:
            # Eigenvectors carrying real weight must sit inside range(sigma).
            if float(row.sum()) < 1.0 - SUPPORT_NORM_TOL:
                return math.inf
        total += a * math.log(a)
        total -= a * float((row * log_wb).sum())
    return total


def quantum_relative_entropy(
    rho: DensityOperator, sigma: DensityOperator, base: str = "e"
) -> EntropyValue:
    """Relative entropy of two states on the same space."""
    if rho.dim != sigma.dim:
        raise DimensionMismatch(
            f"states live on different dimensions: {rho.dim} vs {sigma.dim}"
        )
    return EntropyValue.from_nats(_relative_entropy_nats(rho, sigma), base)
