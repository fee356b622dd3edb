"""Channel capacities as suprema of mutual entropies over state families.

Suprema over infinite families are estimated with a seeded multi-start
hill-climbing optimizer and reported as lower bounds; finite explicit
families are evaluated exhaustively and reported exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .channels import (
    DecompositionSearch,
    FiniteDecompositionSearch,
    QuantumChannel,
    mutual_entropy,
    pseudo_mutual_entropy,
)
from .entropy import (
    EntropyValue,
    ProbabilityDistribution,
    _relative_entropy_nats,
    von_neumann_entropy,
)
from .errors import ComputationError, DimensionMismatch, LengthMismatch
from .operators import DensityOperator, random_density


@dataclass(frozen=True)
class OptimizerConfig:
    """Multi-start hill climbing parameters for infinite state families."""

    n_starts: int = 256
    n_steps: int = 100
    initial_step: float = 0.3
    decay: float = 0.5
    min_step: float = 1e-6
    seed: int = 0


@dataclass(frozen=True)
class StateFamily:
    """The domain of a capacity supremum.

    ``all`` drives the optimizer over every state of the given dimension;
    ``explicit`` is a finite list evaluated exhaustively; ``parameterized``
    realizes ``n_candidates`` states from a seeded generator.
    """

    kind: str
    dim: int = 0
    states: tuple = ()
    generator: Callable[[np.random.Generator], DensityOperator] | None = None
    n_candidates: int = 0
    seed: int = 0

    @classmethod
    def all_states(cls, dim: int) -> "StateFamily":
        return cls(kind="all", dim=dim)

    @classmethod
    def explicit(cls, states) -> "StateFamily":
        states = tuple(states)
        if not states:
            raise LengthMismatch("an explicit family needs at least one state")
        return cls(kind="explicit", dim=states[0].dim, states=states)

    @classmethod
    def parameterized(cls, generator, n_candidates: int, seed: int = 0) -> "StateFamily":
        return cls(
            kind="parameterized",
            generator=generator,
            n_candidates=n_candidates,
            seed=seed,
        )

    def candidates(self) -> tuple[DensityOperator, ...]:
        if self.kind == "explicit":
            return self.states
        if self.kind == "parameterized":
            rng = np.random.default_rng(self.seed)
            return tuple(self.generator(rng) for _ in range(self.n_candidates))
        raise ValueError("the 'all' family has no finite candidate list")


@dataclass(frozen=True)
class CapacityReport:
    """A capacity estimate with its witness and search bookkeeping."""

    value: EntropyValue
    argmax: dict
    status: str  # 'exact' | 'lower_bound'
    evaluations: int


def _cayley_rotation(dim: int, step: float, rng: np.random.Generator) -> np.ndarray:
    """A small unitary exp-like kick built from a Cayley transform."""
    h = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    h = (h + h.conj().T) / 2.0
    half = 0.5j * step * h
    eye = np.eye(dim)
    return np.linalg.solve(eye + half, eye - half)


def optimize_over_states(
    objective_nats: Callable[[DensityOperator], float],
    dim: int,
    config: OptimizerConfig = OptimizerConfig(),
):
    """Maximize a state functional by seeded multi-start hill climbing.

    Starts at the maximally mixed state, the computational basis states, and
    random Ginibre states; each start alternates mixing proposals with small
    unitary kicks, halving the step on failure.  Returns
    ``(best_nats, best_state, evaluations)``.
    """
    rng = np.random.default_rng(config.seed)
    starts: list[DensityOperator] = [DensityOperator.maximally_mixed(dim)]
    for i in range(dim):
        e = np.zeros(dim)
        e[i] = 1.0
        starts.append(DensityOperator.pure(e))
    while len(starts) < config.n_starts:
        starts.append(random_density(dim, rng))

    best_val = -math.inf
    best_state = starts[0]
    evaluations = 0
    for start in starts:
        current = start
        cur_val = objective_nats(current)
        evaluations += 1
        step = config.initial_step
        for it in range(config.n_steps):
            if step < config.min_step:
                break
            if it % 2 == 0:
                other = random_density(dim, rng)
                cand_matrix = (1.0 - step) * current.matrix + step * other.matrix
            else:
                u = _cayley_rotation(dim, step, rng)
                cand_matrix = u @ current.matrix @ u.conj().T
            cand = DensityOperator(cand_matrix)
            val = objective_nats(cand)
            evaluations += 1
            if val > cur_val:
                current, cur_val = cand, val
            else:
                step *= config.decay
        if cur_val > best_val:
            best_val, best_state = cur_val, current
    return best_val, best_state, evaluations


def _family_supremum(objective_nats, family: StateFamily, config: OptimizerConfig):
    """Shared sup-over-family driver; returns (nats, state, evals, finite)."""
    if family.kind == "all":
        val, state, evals = optimize_over_states(objective_nats, family.dim, config)
        return val, state, evals, False
    candidates = family.candidates()
    best_val, best_state = -math.inf, None
    for state in candidates:
        val = objective_nats(state)
        if val > best_val:
            best_val, best_state = val, state
    return best_val, best_state, len(candidates), family.kind == "explicit"


def quantum_capacity(
    channel: QuantumChannel,
    family: StateFamily,
    config: OptimizerConfig = OptimizerConfig(),
    search: DecompositionSearch = DecompositionSearch(),
    base: str = "e",
) -> CapacityReport:
    """sup over the family of the quantum mutual entropy through ``channel``."""
    statuses: list[str] = []

    def objective(rho: DensityOperator) -> float:
        report = mutual_entropy(rho, channel, search)
        statuses.append(report.status)
        return report.entropy.nats

    val, state, evals, finite = _family_supremum(objective, family, config)
    exact = finite and all(s == "exact" for s in statuses)
    return CapacityReport(
        value=EntropyValue.from_nats(val, base),
        argmax={"state": state.matrix.tolist() if state is not None else None},
        status="exact" if exact else "lower_bound",
        evaluations=evals,
    )


def pseudo_capacity(
    channel: QuantumChannel,
    family: StateFamily,
    config: OptimizerConfig = OptimizerConfig(),
    search: FiniteDecompositionSearch = FiniteDecompositionSearch(),
    base: str = "e",
) -> CapacityReport:
    """sup over the family of the pseudo mutual entropy (always a lower bound
    dominating the orthogonal-decomposition value)."""

    def objective(rho: DensityOperator) -> float:
        return pseudo_mutual_entropy(rho, channel, search).entropy.nats

    val, state, evals, _ = _family_supremum(objective, family, config)
    return CapacityReport(
        value=EntropyValue.from_nats(val, base),
        argmax={"state": state.matrix.tolist() if state is not None else None},
        status="lower_bound",
        evaluations=evals,
    )


@dataclass(frozen=True)
class CodingScheme:
    """Quantum letter states for a classical source, plus an optional decoder.

    The decoder is a CPTP map whose output is read out in the computational
    basis, i.e. decoding always ends with full dephasing there.
    """

    letter_states: tuple
    decoder: QuantumChannel | None = None

    def __post_init__(self):
        if not self.letter_states:
            raise LengthMismatch("a coding scheme needs at least one letter state")
        dims = {s.dim for s in self.letter_states}
        if len(dims) != 1:
            raise DimensionMismatch("letter states live on different dimensions")

    @property
    def letter_dim(self) -> int:
        return self.letter_states[0].dim


def _dephase(op: DensityOperator) -> DensityOperator:
    return DensityOperator.diagonal(np.real(np.diag(op.matrix)))


def cqc_mutual_entropy(
    probabilities: ProbabilityDistribution,
    scheme: CodingScheme,
    channel: QuantumChannel,
    decoder: QuantumChannel | None = None,
    base: str = "e",
) -> EntropyValue:
    """Mutual entropy down the classical-quantum-classical chain.

    The source distribution is encoded into the scheme's letters, pushed
    through ``channel``, and (when a decoder is present) decoded and read out
    classically.  ``decoder`` overrides the scheme's own decoder.
    """
    probs = probabilities.weights
    letters = scheme.letter_states
    if probs.size != len(letters):
        raise LengthMismatch(
            f"{probs.size} probabilities but {len(letters)} letter states"
        )
    dec = scheme.decoder if decoder is None else decoder

    def push(state: DensityOperator) -> DensityOperator:
        out = channel.apply(state)
        if dec is not None:
            out = _dephase(dec.apply(out))
        return out

    mix_matrix = np.zeros((scheme.letter_dim, scheme.letter_dim), dtype=complex)
    for p, s in zip(probs, letters):
        mix_matrix += p * s.matrix
    out_mix = push(DensityOperator(mix_matrix))
    outputs = [push(s) for s in letters]

    weighted = 0.0
    for p, out_k in zip(probs, outputs):
        if p <= 0.0:
            continue
        term = _relative_entropy_nats(out_k, out_mix)
        if math.isinf(term):
            return EntropyValue.from_nats(math.inf, base)
        weighted += p * term
    difference = von_neumann_entropy(out_mix).value - sum(
        p * von_neumann_entropy(o).value for p, o in zip(probs, outputs)
    )
    if abs(weighted - difference) > 1e-8:
        raise ComputationError(
            "the two chain mutual entropy forms disagree: "
            f"{weighted:.12f} vs {difference:.12f}"
        )
    return EntropyValue.from_nats(weighted, base)


@dataclass(frozen=True)
class CqcCapacities:
    """The three nested chain capacities (fixed coding, free coding, free both)."""

    fixed: CapacityReport
    coding_free: CapacityReport
    coding_decoding_free: CapacityReport


def cqc_capacity(
    channel: QuantumChannel,
    p_family: list[ProbabilityDistribution],
    scheme_family: list[CodingScheme],
    decoder_family: list[QuantumChannel | None],
    base: str = "e",
) -> CqcCapacities:
    """Chain capacities over finite families.

    The first report freezes the first scheme and first decoder and varies the
    source only; the second frees the scheme; the third frees everything.
    Freezing to family members guarantees the monotone chain.
    """
    if not p_family or not scheme_family or not decoder_family:
        raise LengthMismatch("all three families must be nonempty")

    def sup(schemes, decoders):
        best = -math.inf
        arg = {}
        evals = 0
        for si, scheme in enumerate(schemes):
            for di, dec in enumerate(decoders):
                for pi, p in enumerate(p_family):
                    if p.weights.size != len(scheme.letter_states):
                        continue
                    val = cqc_mutual_entropy(p, scheme, channel, decoder=dec).nats
                    evals += 1
                    if val > best:
                        best = val
                        arg = {"p_index": pi, "scheme_index": si, "decoder_index": di}
        if evals == 0:
            raise LengthMismatch(
                "no source distribution matches any scheme's letter count"
            )
        return best, arg, evals

    def report(v, a, e):
        return CapacityReport(EntropyValue.from_nats(v, base), a, "exact", e)

    v1, a1, e1 = sup(scheme_family[:1], decoder_family[:1])
    v2, a2, e2 = sup(scheme_family, decoder_family[:1])
    v3, a3, e3 = sup(scheme_family, decoder_family)
    return CqcCapacities(report(v1, a1, e1), report(v2, a2, e2), report(v3, a3, e3))


def holevo_bound(
    probabilities: ProbabilityDistribution,
    letter_states: list[DensityOperator],
    channel: QuantumChannel,
    base: str = "e",
) -> EntropyValue:
    """S(channel(mix)) - sum_k p_k S(channel(sigma_k)).

    Integral forms are handled by passing a quadrature grid as the discrete
    ensemble.
    """
    probs = probabilities.weights
    if probs.size != len(letter_states):
        raise LengthMismatch(
            f"{probs.size} probabilities but {len(letter_states)} letter states"
        )
    dim = letter_states[0].dim
    mix = np.zeros((dim, dim), dtype=complex)
    for p, s in zip(probs, letter_states):
        mix += p * s.matrix
    out_mix = channel.apply(DensityOperator(mix))
    total = von_neumann_entropy(out_mix).value
    for p, s in zip(probs, letter_states):
        if p <= 0.0:
            continue
        total -= p * von_neumann_entropy(channel.apply(s)).value
    return EntropyValue.from_nats(total, base)
