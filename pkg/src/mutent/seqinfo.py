"""Aligned-pair event systems and entropy evolution rates.

An aligned pair induces a joint distribution over events, where event 0 is
the gap and the remaining events are the alphabet symbols in order.  Counting
is integer-exact; probabilities appear only at the final division.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .alignment import AlignedPair, Scoring, align
from .entropy import (
    EntropyValue,
    JointDistribution,
    ProbabilityDistribution,
    classical_mutual_entropy,
    shannon_entropy,
)
from .errors import DegenerateEntropy, MissingDistance
from .sequences import BioSequence

ENTROPY_FLOOR = 1e-12


@dataclass(frozen=True)
class SequenceEventSystem:
    """Joint and marginal event distributions of an aligned pair."""

    events: tuple[str, ...]  # gap first, then the alphabet in order
    joint: JointDistribution
    first_marginal: ProbabilityDistribution
    second_marginal: ProbabilityDistribution
    columns: int


def event_system(pair: AlignedPair) -> SequenceEventSystem:
    """Count aligned columns into an exact joint distribution."""
    alphabet = pair.alphabet
    events = (alphabet.gap,) + alphabet.symbols
    index = {sym: i for i, sym in enumerate(events)}
    counts = np.zeros((len(events), len(events)), dtype=np.int64)
    for x, y in pair.columns():
        counts[index[x], index[y]] += 1
    n = counts.sum()
    joint = JointDistribution(counts / n)
    first = ProbabilityDistribution(counts.sum(axis=1) / n)
    second = ProbabilityDistribution(counts.sum(axis=0) / n)
    dev = max(
        float(np.max(np.abs(joint.matrix.sum(axis=1) - first.weights))),
        float(np.max(np.abs(joint.matrix.sum(axis=0) - second.weights))),
    )
    if dev > 1e-12:
        raise DegenerateEntropy(
            f"joint marginals deviate from counted marginals by {dev:.3e}"
        )
    return SequenceEventSystem(events, joint, first, second, int(n))


@dataclass(frozen=True)
class EvolutionRates:
    """Entropies and rates of an aligned pair, in the requested log base."""

    s_a: float
    s_b: float
    i_ab: float
    r_ab: float
    rho_ab: float


def _entropies(system: SequenceEventSystem, base: str):
    s_a = shannon_entropy(system.first_marginal, base).value
    s_b = shannon_entropy(system.second_marginal, base).value
    if s_a <= ENTROPY_FLOOR or s_b <= ENTROPY_FLOOR:
        raise DegenerateEntropy(
            f"marginal entropies ({s_a:.3e}, {s_b:.3e}) leave the symmetrized "
            "rate undefined"
        )
    i_ab = classical_mutual_entropy(system.joint, base).value
    return s_a, s_b, i_ab


def entropy_evolution_rate(
    a: BioSequence,
    b: BioSequence,
    scoring: Scoring = Scoring(),
    base: str = "2",
) -> EvolutionRates:
    """Symmetrized information-retention rate and its complement.

    The pair is aligned, counted into an event system, and reduced to
    r = (I/S_A + I/S_B) / 2 with the evolution rate 1 - r.
    """
    system = event_system(align(a, b, scoring))
    s_a, s_b, i_ab = _entropies(system, base)
    r_ab = 0.5 * (i_ab / s_a + i_ab / s_b)
    rho_ab = 1.0 - r_ab
    if -1e-9 < rho_ab < 0.0:
        rho_ab = 0.0
    if 1.0 < rho_ab < 1.0 + 1e-9:
        rho_ab = 1.0
    return EvolutionRates(s_a, s_b, i_ab, r_ab, rho_ab)


def alt_rate(
    a: BioSequence,
    b: BioSequence,
    scoring: Scoring = Scoring(),
    base: str = "2",
) -> float:
    """The joint-entropy-normalized variant 1 - I/(S_A + S_B - I)."""
    system = event_system(align(a, b, scoring))
    s_a, s_b, i_ab = _entropies(system, base)
    return 1.0 - i_ab / (s_a + s_b - i_ab)


@dataclass(frozen=True)
class GeneticMatrix:
    """Symmetric pairwise evolution-rate distances with explicit gaps."""

    labels: tuple[str, ...]
    distances: np.ndarray  # NaN marks a pair whose rate is undefined
    missing: tuple[tuple[int, int], ...]

    def distance(self, i: int, j: int) -> float:
        d = float(self.distances[i, j])
        if math.isnan(d):
            raise MissingDistance(
                f"no distance between {self.labels[i]!r} and {self.labels[j]!r}"
            )
        return d


def genetic_matrix(
    sequences: list[BioSequence],
    scoring: Scoring = Scoring(),
    base: str = "2",
) -> GeneticMatrix:
    """All-pairs evolution rates; degenerate pairs are recorded as missing."""
    n = len(sequences)
    dist = np.zeros((n, n))
    missing: list[tuple[int, int]] = []
    for i in range(n):
        for j in range(i + 1, n):
            try:
                rho = entropy_evolution_rate(
                    sequences[i], sequences[j], scoring, base
                ).rho_ab
            except DegenerateEntropy:
                rho = math.nan
                missing.append((i, j))
            dist[i, j] = rho
            dist[j, i] = rho
    return GeneticMatrix(
        tuple(s.id for s in sequences), dist, tuple(missing)
    )
