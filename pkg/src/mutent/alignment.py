"""Global pairwise alignment with affine-free gap scoring.

Classic dynamic programming over the full table.  Ties in the traceback are
broken deterministically: diagonal first, then the move consuming a symbol of
the first sequence, then the move consuming a symbol of the second.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import AlphabetMismatch, LengthMismatch
from .sequences import Alphabet, BioSequence


@dataclass(frozen=True)
class Scoring:
    match: float = 1.0
    mismatch: float = -1.0
    gap: float = -2.0


@dataclass(frozen=True)
class AlignedPair:
    """Two gapped rows of equal length covering both input sequences."""

    a_gapped: tuple[str, ...]
    b_gapped: tuple[str, ...]
    score: float
    alphabet: Alphabet

    def __post_init__(self):
        gap = self.alphabet.gap
        if len(self.a_gapped) != len(self.b_gapped):
            raise LengthMismatch(
                f"gapped rows differ in length: {len(self.a_gapped)} vs "
                f"{len(self.b_gapped)}"
            )
        for col, (x, y) in enumerate(zip(self.a_gapped, self.b_gapped)):
            if x == gap and y == gap:
                raise LengthMismatch(f"column {col} aligns gap against gap")

    def __len__(self) -> int:
        return len(self.a_gapped)

    def stripped(self) -> tuple[tuple[str, ...], tuple[str, ...]]:
        gap = self.alphabet.gap
        return (
            tuple(s for s in self.a_gapped if s != gap),
            tuple(s for s in self.b_gapped if s != gap),
        )

    def columns(self):
        return zip(self.a_gapped, self.b_gapped)


def align_symbols(
    a: tuple[str, ...],
    b: tuple[str, ...],
    alphabet: Alphabet,
    scoring: Scoring = Scoring(),
) -> AlignedPair:
    """Needleman-Wunsch alignment of two raw symbol tuples."""
    n, m = len(a), len(b)
    table = np.zeros((n + 1, m + 1))
    table[:, 0] = scoring.gap * np.arange(n + 1)
    table[0, :] = scoring.gap * np.arange(m + 1)
    for i in range(1, n + 1):
        for j in range(1, m + 1):
            sub = scoring.match if a[i - 1] == b[j - 1] else scoring.mismatch
            table[i, j] = max(
                table[i - 1, j - 1] + sub,
                table[i - 1, j] + scoring.gap,
                table[i, j - 1] + scoring.gap,
            )

    gap = alphabet.gap
    rev_a: list[str] = []
    rev_b: list[str] = []
    i, j = n, m
    while i > 0 or j > 0:
        if i > 0 and j > 0:
            sub = scoring.match if a[i - 1] == b[j - 1] else scoring.mismatch
            if table[i, j] == table[i - 1, j - 1] + sub:
                rev_a.append(a[i - 1])
                rev_b.append(b[j - 1])
                i -= 1
                j -= 1
                continue
        if i > 0 and table[i, j] == table[i - 1, j] + scoring.gap:
            rev_a.append(a[i - 1])
            rev_b.append(gap)
            i -= 1
            continue
        rev_a.append(gap)
        rev_b.append(b[j - 1])
        j -= 1

    return AlignedPair(
        tuple(reversed(rev_a)),
        tuple(reversed(rev_b)),
        float(table[n, m]),
        alphabet,
    )


def align(
    a: BioSequence, b: BioSequence, scoring: Scoring = Scoring()
) -> AlignedPair:
    """Align two sequences sharing an alphabet."""
    if a.alphabet != b.alphabet:
        raise AlphabetMismatch(
            f"cannot align {a.alphabet.name} against {b.alphabet.name}"
        )
    return align_symbols(a.symbols, b.symbols, a.alphabet, scoring)
