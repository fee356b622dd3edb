"""Exception types shared across the toolkit.

Validation errors carry the measured deviation whenever one exists, so a
failure message always says which invariant broke and by how much.
"""


class MutentError(Exception):
    """Base class for every error raised by this package."""


class ValidationError(MutentError):
    """An input violated one of its documented invariants."""

    def __init__(self, message: str, deviation: float | None = None):
        super().__init__(message)
        self.deviation = deviation


class NotHermitian(ValidationError):
    pass


class NotUnitTrace(ValidationError):
    pass


class NotPositive(ValidationError):
    pass


class DimensionMismatch(MutentError):
    pass


class LengthMismatch(MutentError):
    pass


class InvalidDistribution(ValidationError):
    pass


class InvalidChannel(ValidationError):
    pass


class InvalidAmplitude(ValidationError):
    pass


class DecompositionMismatch(ValidationError):
    pass


class BasisNotOrthonormal(ValidationError):
    pass


class MarginalMismatch(ValidationError):
    pass


class AlphabetMismatch(MutentError):
    pass


class InvalidSymbol(MutentError):
    """A sequence contained a character outside its alphabet."""

    def __init__(self, message: str, position: int | None = None):
        super().__init__(message)
        self.position = position


class DegenerateEntropy(MutentError):
    """A marginal entropy is (numerically) zero, so entropy ratios are undefined."""


class MissingDistance(MutentError):
    pass


class InvalidBase(InvalidSymbol):
    pass


class MissingCodon(MutentError):
    pass


class UncorrectableBlock(MutentError):
    """Syndrome decoding failed on one block of a received word."""

    def __init__(self, message: str, block_index: int, syndrome: tuple[int, ...]):
        super().__init__(message)
        self.block_index = block_index
        self.syndrome = syndrome


class ParseError(MutentError):
    pass


class ComputationError(MutentError):
    pass
