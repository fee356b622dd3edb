"""Quantum mutual entropy toolkit with a sequence-information wing.

Quantum side: density operators, entropies, CPTP channels, mutual entropy
as a decomposition supremum, capacities, and entangled compound states.
Sequence side: global alignment, entropy evolution rates, distance matrices,
trees, and code-structure indices over the four-element field.
"""

from .alignment import AlignedPair, Scoring, align, align_symbols
from .capacity import (
    CapacityReport,
    CodingScheme,
    CqcCapacities,
    OptimizerConfig,
    StateFamily,
    cqc_capacity,
    cqc_mutual_entropy,
    holevo_bound,
    optimize_over_states,
    pseudo_capacity,
    quantum_capacity,
)
from .channels import (
    CompoundState,
    DecompositionSearch,
    FiniteDecompositionSearch,
    MutualEntropyReport,
    QuantumChannel,
    classical_input_mutual_entropy,
    compound_state,
    mutual_entropy,
    pseudo_mutual_entropy,
)
from .codes import ConvolutionalCode, CyclicCode
from .entanglement import (
    AmplitudeOperator,
    EntangledCompoundState,
    EntangledSearch,
    QEntropyReport,
    QEntropySearch,
    channel_entangled_capacity,
    channel_entangled_mutual,
    chaos_degree,
    classify,
    d_compound,
    disentanglement_degree,
    entangled_mutual_entropy,
    marginals,
    observable_action,
    q_compound,
    q_conditional,
    q_entropy,
    state_action,
)
from .entropy import (
    EntropyValue,
    JointDistribution,
    ProbabilityDistribution,
    classical_mutual_entropy,
    classical_relative_entropy,
    quantum_relative_entropy,
    shannon_entropy,
    von_neumann_entropy,
)
from .errors import (
    AlphabetMismatch,
    BasisNotOrthonormal,
    ComputationError,
    DecompositionMismatch,
    DegenerateEntropy,
    DimensionMismatch,
    InvalidAmplitude,
    InvalidBase,
    InvalidChannel,
    InvalidDistribution,
    InvalidSymbol,
    LengthMismatch,
    MarginalMismatch,
    MissingCodon,
    MissingDistance,
    MutentError,
    NotHermitian,
    NotPositive,
    NotUnitTrace,
    ParseError,
    UncorrectableBlock,
    ValidationError,
)
from .fasta import parse_fasta, read_fasta
from .gencode import (
    StructureIndexReport,
    amino_to_base,
    base_to_symbols,
    bases_to_amino,
    coding_pipeline,
    decode_pipeline,
    structure_index,
    symbols_to_bases,
)
from .operators import (
    DensityOperator,
    SchattenDecomposition,
    SpectralDecomposition,
    partial_trace,
    random_density,
    random_pure,
    random_unitary,
    schatten_decompose,
    spectral_decompose,
    tensor,
    validate_density,
)
from .phylo import PhyloTree, TreeNode, build_tree, neighbor_joining, upgma
from .seqinfo import (
    EvolutionRates,
    GeneticMatrix,
    SequenceEventSystem,
    alt_rate,
    entropy_evolution_rate,
    event_system,
    genetic_matrix,
)
from .sequences import AMINO, AMINO_X, BASE, GAP, Alphabet, BioSequence, builtin_alphabet

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
