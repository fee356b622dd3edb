"""Symbol alphabets and validated biological sequences."""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import InvalidSymbol

GAP = "*"


@dataclass(frozen=True)
class Alphabet:
    """A finite symbol set with a reserved gap character."""

    name: str
    symbols: tuple[str, ...]
    gap: str = GAP

    def __post_init__(self):
        if self.gap in self.symbols:
            raise InvalidSymbol(f"gap character {self.gap!r} collides with the alphabet")

    def __contains__(self, symbol: str) -> bool:
        return symbol in self.symbols

    def index(self, symbol: str) -> int:
        return self.symbols.index(symbol)


BASE = Alphabet("base", ("A", "C", "G", "T"))
AMINO = Alphabet("amino", tuple("ACDEFGHIKLMNPQRSTVWY"))
# amino acids plus the placeholder produced when a coded codon has no residue
AMINO_X = Alphabet("amino_x", tuple("ACDEFGHIKLMNPQRSTVWY") + ("X",))

_BUILTINS = {"base": BASE, "amino": AMINO, "amino_x": AMINO_X}


def builtin_alphabet(name: str) -> Alphabet:
    try:
        return _BUILTINS[name]
    except KeyError:
        raise InvalidSymbol(f"unknown alphabet {name!r}") from None


@dataclass(frozen=True)
class BioSequence:
    """A nonempty gap-free sequence over one alphabet."""

    id: str
    symbols: tuple[str, ...]
    alphabet: Alphabet
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if not self.symbols:
            raise InvalidSymbol(f"sequence {self.id!r} is empty")
        for pos, sym in enumerate(self.symbols):
            if sym not in self.alphabet:
                raise InvalidSymbol(
                    f"sequence {self.id!r} has symbol {sym!r} at position {pos}, "
                    f"not in the {self.alphabet.name} alphabet",
                    position=pos,
                )

    @classmethod
    def from_string(cls, seq_id: str, text: str, alphabet: Alphabet) -> "BioSequence":
        """Build from raw text, uppercasing lowercase symbols."""
        return cls(seq_id, tuple(text.upper()), alphabet)

    def __len__(self) -> int:
        return len(self.symbols)

    def as_string(self) -> str:
        return "".join(self.symbols)
