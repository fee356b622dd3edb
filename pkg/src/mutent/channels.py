"""CPTP channels, compound states, and quantum mutual entropy.

The mutual entropy of a state through a channel is a supremum over rank-one
decompositions of the input.  With a nondegenerate spectrum that supremum is
attained at the unique eigen-decomposition and the result is exact; with
degeneracies the decomposition search samples seeded unitary rotations inside
each degenerate eigenspace and reports a lower bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .entropy import (
    EntropyValue,
    ProbabilityDistribution,
    _relative_entropy_nats,
    von_neumann_entropy,
)
from .errors import (
    ComputationError,
    DecompositionMismatch,
    DimensionMismatch,
    InvalidChannel,
    LengthMismatch,
)
from .operators import (
    DensityOperator,
    SchattenDecomposition,
    partial_trace,
    random_unitary,
    schatten_decompose,
    spectral_decompose,
    _eigen_clusters,
    _fix_phase,
)

COMPLETENESS_TOL = 1e-9
RECONSTRUCTION_TOL = 1e-8
CROSS_CHECK_TOL = 1e-8


def _weyl_operators(dim: int) -> list[np.ndarray]:
    """The dim^2 discrete shift/phase unitaries (qubit case: I, X, Z, XZ)."""
    omega = np.exp(2j * np.pi / dim)
    shift = np.roll(np.eye(dim, dtype=complex), 1, axis=0)
    phase = np.diag(omega ** np.arange(dim))
    ops = []
    for a in range(dim):
        xa = np.linalg.matrix_power(shift, a)
        for b in range(dim):
            ops.append(xa @ np.linalg.matrix_power(phase, b))
    return ops


class QuantumChannel:
    """A completely positive trace-preserving map in Kraus form.

    An isometry into noise (x) output is accepted as well and reduced to the
    Kraus family it induces; the isometry is kept for inspection.
    """

    __slots__ = ("kraus", "input_dim", "output_dim", "kind", "params", "isometry", "noise_dim")

    def __init__(self, kraus, kind: str = "kraus", params: dict | None = None,
                 isometry: np.ndarray | None = None, noise_dim: int | None = None):
        ops = [np.asarray(k, dtype=complex) for k in kraus]
        if not ops:
            raise InvalidChannel("a channel needs at least one Kraus operator")
        out_d, in_d = ops[0].shape
        for k in ops:
            if k.shape != (out_d, in_d):
                raise InvalidChannel(
                    f"Kraus operators disagree on shape: {k.shape} vs {(out_d, in_d)}"
                )
        total = sum(k.conj().T @ k for k in ops)
        dev = float(np.max(np.abs(total - np.eye(in_d))))
        if dev > COMPLETENESS_TOL:
            raise InvalidChannel(
                f"Kraus completeness sum deviates from identity by {dev:.3e} "
                f"(tolerance {COMPLETENESS_TOL:.1e})",
                deviation=dev,
            )
        self.kraus = tuple(ops)
        self.input_dim = in_d
        self.output_dim = out_d
        self.kind = kind
        self.params = dict(params or {})
        self.isometry = isometry
        self.noise_dim = noise_dim

    # -- constructors ------------------------------------------------------

    @classmethod
    def from_kraus(cls, ops) -> "QuantumChannel":
        return cls(ops)

    @classmethod
    def from_isometry(cls, isometry, noise_dim: int) -> "QuantumChannel":
        ups = np.asarray(isometry, dtype=complex)
        if ups.ndim != 2 or ups.shape[0] % noise_dim != 0:
            raise InvalidChannel(
                f"isometry shape {ups.shape} does not factor over noise dim {noise_dim}"
            )
        dev = float(np.max(np.abs(ups.conj().T @ ups - np.eye(ups.shape[1]))))
        if dev > COMPLETENESS_TOL:
            raise InvalidChannel(
                f"isometry deviates from V*V = I by {dev:.3e}", deviation=dev
            )
        out_d = ups.shape[0] // noise_dim
        ops = [ups[i * out_d:(i + 1) * out_d, :] for i in range(noise_dim)]
        return cls(ops, kind="isometry", isometry=ups, noise_dim=noise_dim)

    @classmethod
    def identity(cls, dim: int) -> "QuantumChannel":
        return cls([np.eye(dim, dtype=complex)], kind="identity", params={"dim": dim})

    @classmethod
    def depolarizing(cls, dim: int, p: float) -> "QuantumChannel":
        if not 0.0 <= p <= 1.0:
            raise InvalidChannel(f"depolarizing weight must be in [0, 1], got {p}")
        ops = []
        weyl = _weyl_operators(dim)
        ops.append(math.sqrt(1.0 - p + p / dim**2) * weyl[0])
        for w in weyl[1:]:
            ops.append(math.sqrt(p / dim**2) * w)
        return cls(ops, kind="depolarizing", params={"dim": dim, "p": p})

    @classmethod
    def constant(cls, target: DensityOperator, input_dim: int | None = None) -> "QuantumChannel":
        """The channel sending every input to ``target``."""
        in_d = target.dim if input_dim is None else input_dim
        ops = []
        w, v = target.eigenvalues, target.eigenvectors
        for j in range(target.dim):
            if w[j] <= 0.0:
                continue
            for i in range(in_d):
                basis = np.zeros(in_d, dtype=complex)
                basis[i] = 1.0
                ops.append(math.sqrt(float(w[j])) * np.outer(v[:, j], basis))
        return cls(ops, kind="constant", params={"dim": in_d})

    @classmethod
    def phase_damping(cls, dim: int, p: float) -> "QuantumChannel":
        """Interpolates between the identity (p=0) and full dephasing (p=1)."""
        if not 0.0 <= p <= 1.0:
            raise InvalidChannel(f"damping weight must be in [0, 1], got {p}")
        ops = [math.sqrt(1.0 - p) * np.eye(dim, dtype=complex)]
        for i in range(dim):
            e = np.zeros((dim, dim), dtype=complex)
            e[i, i] = math.sqrt(p)
            ops.append(e)
        return cls(ops, kind="phase_damping", params={"dim": dim, "p": p})

    @classmethod
    def classical_stochastic(cls, transition) -> "QuantumChannel":
        """Embed a column-stochastic matrix as a channel on diagonal states."""
        t = np.asarray(transition, dtype=float)
        if t.ndim != 2:
            raise InvalidChannel("transition matrix must be two-dimensional")
        if float(t.min()) < -1e-12:
            raise InvalidChannel(f"negative transition probability {t.min():.3e}")
        col_dev = float(np.max(np.abs(t.sum(axis=0) - 1.0)))
        if col_dev > 1e-9:
            raise InvalidChannel(
                f"columns must each sum to 1, worst deviation {col_dev:.3e}",
                deviation=col_dev,
            )
        out_d, in_d = t.shape
        ops = []
        for i in range(out_d):
            for j in range(in_d):
                if t[i, j] <= 0.0:
                    continue
                k = np.zeros((out_d, in_d), dtype=complex)
                k[i, j] = math.sqrt(t[i, j])
                ops.append(k)
        return cls(ops, kind="stochastic", params={"matrix": t.tolist()})

    # -- action ------------------------------------------------------------

    def apply_matrix(self, matrix: np.ndarray) -> np.ndarray:
        """Linear action on an arbitrary matrix (no state validation)."""
        arr = np.asarray(matrix, dtype=complex)
        if arr.shape != (self.input_dim, self.input_dim):
            raise DimensionMismatch(
                f"channel expects {self.input_dim}x{self.input_dim} inputs, "
                f"got {arr.shape}"
            )
        out = np.zeros((self.output_dim, self.output_dim), dtype=complex)
        for k in self.kraus:
            out += k @ arr @ k.conj().T
        return out

    def apply(self, rho: DensityOperator) -> DensityOperator:
        return DensityOperator(self.apply_matrix(rho.matrix))

    def describe(self) -> dict:
        desc = {"kind": self.kind, "input_dim": self.input_dim, "output_dim": self.output_dim}
        desc.update({k: v for k, v in self.params.items() if k != "matrix"})
        return desc

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return f"QuantumChannel({self.kind}, {self.input_dim}->{self.output_dim})"


@dataclass(frozen=True)
class CompoundState:
    """The coupled input/output state sum_k w_k E_k (x) channel(E_k)."""

    theta: DensityOperator
    decomposition: SchattenDecomposition
    input_dim: int
    output_dim: int

    def input_marginal(self) -> np.ndarray:
        return partial_trace(self.theta.matrix, (self.input_dim, self.output_dim), 2)

    def output_marginal(self) -> np.ndarray:
        return partial_trace(self.theta.matrix, (self.input_dim, self.output_dim), 1)


def compound_state(
    rho: DensityOperator,
    channel: QuantumChannel,
    decomposition: SchattenDecomposition | None = None,
) -> CompoundState:
    """Build the compound state for a (state, channel) pair.

    The rank-one decomposition defaults to the canonical one; a supplied
    decomposition must rebuild ``rho`` within 1e-8.
    """
    if channel.input_dim != rho.dim:
        raise DimensionMismatch(
            f"channel input dim {channel.input_dim} != state dim {rho.dim}"
        )
    dec = schatten_decompose(rho) if decomposition is None else decomposition
    dev = float(np.max(np.abs(dec.recompose() - rho.matrix)))
    if dev > RECONSTRUCTION_TOL:
        raise DecompositionMismatch(
            f"decomposition rebuilds the state only within {dev:.3e} "
            f"(tolerance {RECONSTRUCTION_TOL:.1e})",
            deviation=dev,
        )
    theta = np.zeros(
        (rho.dim * channel.output_dim, rho.dim * channel.output_dim), dtype=complex
    )
    for w, vec in zip(dec.weights, dec.vectors):
        proj = np.outer(vec, vec.conj())
        theta += w * np.kron(proj, channel.apply_matrix(proj))
    return CompoundState(DensityOperator(theta), dec, rho.dim, channel.output_dim)


@dataclass(frozen=True)
class DecompositionSearch:
    """How to treat degenerate spectra when maximizing over decompositions.

    ``exact-nondegenerate`` evaluates the canonical decomposition only;
    ``sampled`` adds ``n_samples`` seeded unitary rotations inside degenerate
    eigenspaces; ``refined`` follows the best sample with a local
    hill-climbing pass of ``local_iterations`` steps.
    """

    mode: str = "exact-nondegenerate"
    n_samples: int = 32
    seed: int = 0
    local_iterations: int = 20

    def __post_init__(self):
        if self.mode not in ("exact-nondegenerate", "sampled", "refined"):
            raise ValueError(f"unknown search mode {self.mode!r}")


@dataclass(frozen=True)
class MutualEntropyReport:
    """Result of a decomposition-search mutual entropy evaluation."""

    entropy: EntropyValue
    status: str  # 'exact' | 'lower_bound'
    samples: int
    decomposition: SchattenDecomposition | None = None

    @property
    def value(self) -> float:
        return self.entropy.value


def _decomposition_objective_nats(
    dec: SchattenDecomposition, channel: QuantumChannel, out_avg: DensityOperator
) -> float:
    total = 0.0
    for w, vec in zip(dec.weights, dec.vectors):
        if w <= 0.0:
            continue
        out_k = channel.apply(DensityOperator.pure(vec))
        term = _relative_entropy_nats(out_k, out_avg)
        if math.isinf(term):
            return math.inf
        total += w * term
    return total


def _rotate_clusters(
    rho: DensityOperator,
    base_dec: SchattenDecomposition,
    clusters: list[list[int]],
    unitaries: list[np.ndarray],
) -> SchattenDecomposition:
    """Apply one unitary per degenerate cluster to the decomposition vectors."""
    vectors = list(base_dec.vectors)
    for cluster, u in zip(clusters, unitaries):
        if len(cluster) < 2:
            continue
        stacked = np.column_stack([vectors[i] for i in cluster]) @ u
        for pos, i in enumerate(cluster):
            vectors[i] = _fix_phase(stacked[:, pos])
    return SchattenDecomposition(base_dec.weights, tuple(vectors), base_dec.dim)


def mutual_entropy(
    rho: DensityOperator,
    channel: QuantumChannel,
    search: DecompositionSearch = DecompositionSearch(),
    base: str = "e",
) -> MutualEntropyReport:
    """Quantum mutual entropy of ``rho`` through ``channel``.

    Computed as the decomposition supremum of the weighted output relative
    entropies sum_k w_k S(channel(E_k), channel(rho)).
    """
    if channel.input_dim != rho.dim:
        raise DimensionMismatch(
            f"channel input dim {channel.input_dim} != state dim {rho.dim}"
        )
    out_avg = channel.apply(rho)
    canonical = schatten_decompose(rho)
    spectral = spectral_decompose(rho)
    degenerate = any(r > 1 for r in spectral.ranks())

    best_dec = canonical
    best = _decomposition_objective_nats(canonical, channel, out_avg)
    samples = 1

    if degenerate and search.mode in ("sampled", "refined"):
        # indices of decomposition entries grouped by (near-)equal weight
        clusters = _eigen_clusters(np.asarray(canonical.weights), 1e-8)
        rng = np.random.default_rng(search.seed)
        for _ in range(search.n_samples):
            unitaries = [
                random_unitary(len(c), rng) if len(c) > 1 else np.eye(1)
                for c in clusters
            ]
            cand = _rotate_clusters(rho, canonical, clusters, unitaries)
            val = _decomposition_objective_nats(cand, channel, out_avg)
            samples += 1
            if val > best:
                best, best_dec = val, cand
        if search.mode == "refined":
            step = 0.5
            cur_dec, cur_val = best_dec, best
            for _ in range(search.local_iterations):
                unitaries = []
                for c in clusters:
                    if len(c) > 1:
                        h = rng.standard_normal((len(c), len(c))) + 1j * rng.standard_normal(
                            (len(c), len(c))
                        )
                        h = (h + h.conj().T) / 2.0
                        wtmp, vtmp = np.linalg.eigh(h)
                        unitaries.append((vtmp * np.exp(1j * step * wtmp)) @ vtmp.conj().T)
                    else:
                        unitaries.append(np.eye(1))
                cand = _rotate_clusters(rho, cur_dec, clusters, unitaries)
                val = _decomposition_objective_nats(cand, channel, out_avg)
                samples += 1
                if val > cur_val:
                    cur_dec, cur_val = cand, val
                else:
                    step *= 0.5
            if cur_val > best:
                best, best_dec = cur_val, cur_dec

    status = "exact" if not degenerate else "lower_bound"
    return MutualEntropyReport(
        EntropyValue.from_nats(best, base), status, samples, best_dec
    )


def classical_input_mutual_entropy(
    probabilities: ProbabilityDistribution,
    states: list[DensityOperator],
    channel: QuantumChannel,
    base: str = "e",
) -> EntropyValue:
    """Mutual entropy for a classical source encoded into quantum letters.

    Computed as sum_k p_k S(channel(sigma_k), channel(sigma_mix)) and
    cross-checked against the entropy-difference form S(channel(sigma_mix)) -
    sum_k p_k S(channel(sigma_k)).
    """
    probs = probabilities.weights
    if len(states) != probs.size:
        raise LengthMismatch(
            f"{probs.size} probabilities but {len(states)} letter states"
        )
    dim = states[0].dim
    for s in states:
        if s.dim != dim:
            raise DimensionMismatch("letter states live on different dimensions")
    if channel.input_dim != dim:
        raise DimensionMismatch(
            f"channel input dim {channel.input_dim} != letter dim {dim}"
        )
    mix = np.zeros((dim, dim), dtype=complex)
    for p, s in zip(probs, states):
        mix += p * s.matrix
    out_mix = channel.apply(DensityOperator(mix))
    outputs = [channel.apply(s) for s in states]

    weighted = 0.0
    for p, out_k in zip(probs, outputs):
        if p <= 0.0:
            continue
        term = _relative_entropy_nats(out_k, out_mix)
        if math.isinf(term):
            return EntropyValue.from_nats(math.inf, base)
        weighted += p * term

    difference = von_neumann_entropy(out_mix).value - sum(
        p * von_neumann_entropy(out_k).value for p, out_k in zip(probs, outputs)
    )
    if abs(weighted - difference) > CROSS_CHECK_TOL:
        raise ComputationError(
            "the two classical-input mutual entropy forms disagree: "
            f"{weighted:.12f} vs {difference:.12f}"
        )
    return EntropyValue.from_nats(weighted, base)


@dataclass(frozen=True)
class FiniteDecompositionSearch:
    """Search domain for the supremum over finite non-orthogonal mixtures.

    Candidates are seeded random pure-state ensembles resolving the input
    state; the orthogonal decomposition itself is included by default, and
    callers may pin extra explicit decompositions (weight, state) to try.
    """

    max_components: int | None = None  # default: 2 * dim
    n_samples: int = 32
    seed: int = 0
    include_orthogonal: bool = True
    extra_decompositions: tuple = ()

    def components_cap(self, dim: int) -> int:
        return self.max_components if self.max_components else 2 * dim


def _ensemble_objective_nats(
    ensemble: list[tuple[float, DensityOperator]],
    channel: QuantumChannel,
    out_avg: DensityOperator,
) -> float:
    total = 0.0
    for w, state in ensemble:
        if w <= 1e-12:
            continue
        term = _relative_entropy_nats(channel.apply(state), out_avg)
        if math.isinf(term):
            return math.inf
        total += w * term
    return total


def pseudo_mutual_entropy(
    rho: DensityOperator,
    channel: QuantumChannel,
    search: FiniteDecompositionSearch = FiniteDecompositionSearch(),
    base: str = "e",
) -> MutualEntropyReport:
    """Supremum of the mutual entropy over finite non-orthogonal mixtures.

    Every ensemble {q_i, psi_i} resolving rho comes from an isometry applied
    to the weighted eigenvectors, so candidates are drawn by QR-ing seeded
    Gaussian matrices.  The value reported is the best found (a lower bound).
    """
    if channel.input_dim != rho.dim:
        raise DimensionMismatch(
            f"channel input dim {channel.input_dim} != state dim {rho.dim}"
        )
    out_avg = channel.apply(rho)
    canonical = schatten_decompose(rho)
    rank = len(canonical.weights)
    scaled = [
        math.sqrt(w) * v for w, v in zip(canonical.weights, canonical.vectors)
    ]  # columns of rho^(1/2) restricted to the support

    candidates: list[list[tuple[float, DensityOperator]]] = []
    if search.include_orthogonal:
        candidates.append(
            [
                (w, DensityOperator.pure(v))
                for w, v in zip(canonical.weights, canonical.vectors)
            ]
        )
    for extra in search.extra_decompositions:
        ensemble = [(float(w), state) for w, state in extra]
        total = np.zeros((rho.dim, rho.dim), dtype=complex)
        for w, state in ensemble:
            total += w * state.matrix
        dev = float(np.max(np.abs(total - rho.matrix)))
        if dev > RECONSTRUCTION_TOL:
            raise DecompositionMismatch(
                f"extra decomposition rebuilds the state only within {dev:.3e}",
                deviation=dev,
            )
        candidates.append(ensemble)

    rng = np.random.default_rng(search.seed)
    cap = max(search.components_cap(rho.dim), rank)
    for _ in range(search.n_samples):
        m = int(rng.integers(rank, cap + 1))
        g = rng.standard_normal((m, rank)) + 1j * rng.standard_normal((m, rank))
        q, _ = np.linalg.qr(g)  # m x rank, orthonormal columns
        ensemble = []
        for i in range(m):
            vec = sum(q[i, k] * scaled[k] for k in range(rank))
            weight = float(np.linalg.norm(vec) ** 2)
            if weight <= 1e-12:
                continue
            ensemble.append((weight, DensityOperator.pure(vec)))
        candidates.append(ensemble)

    best = -math.inf
    best_ensemble = None
    for ensemble in candidates:
        val = _ensemble_objective_nats(ensemble, channel, out_avg)
        if val > best:
            best, best_ensemble = val, ensemble
    return MutualEntropyReport(
        EntropyValue.from_nats(best, base), "lower_bound", len(candidates), None
    )
