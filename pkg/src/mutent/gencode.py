"""Base/symbol conversion, codon translation, and the code-structure index.

Sequences travel a pipeline: bases map bijectively onto field symbols,
a systematic code transforms the symbol stream, and symbols map back to
bases.  The structure index compares pairwise evolution rates before and
after that transformation.
"""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass
from importlib import resources

from .alignment import Scoring
from .errors import (
    DegenerateEntropy,
    InvalidBase,
    MissingCodon,
    ValidationError,
)
from .sequences import AMINO_X, BASE, GAP, Alphabet, BioSequence
from .seqinfo import entropy_evolution_rate

DEFAULT_BASE_MAP = {"A": 0, "C": 1, "G": 2, "T": 3}

_BACKTRANSLATION_RESOURCE = "codon_backtranslation.json"

# Standard genetic code, DNA alphabet, first/second/third positions each
# running over T, C, A, G; stops written as "*".
_CODON_ORDER = "TCAG"
_CODON_PRODUCTS = "FFLLSSSSYY**CC*WLLLLPPPPHHQQRRRRIIIMTTTTNNKKSSRRVVVVAAAADDEEGGGG"

GENETIC_CODE = {
    b1 + b2 + b3: _CODON_PRODUCTS[16 * i + 4 * j + l]
    for i, b1 in enumerate(_CODON_ORDER)
    for j, b2 in enumerate(_CODON_ORDER)
    for l, b3 in enumerate(_CODON_ORDER)
}

STOP_PLACEHOLDER = "X"


def _check_base_map(mapping: dict[str, int] | None) -> dict[str, int]:
    if mapping is None:
        return DEFAULT_BASE_MAP
    if sorted(mapping) != sorted(BASE.symbols) or sorted(mapping.values()) != [
        0,
        1,
        2,
        3,
    ]:
        raise InvalidBase(
            "base map must be a bijection from {A, C, G, T} onto {0, 1, 2, 3}"
        )
    return mapping


def base_to_symbols(seq, mapping: dict[str, int] | None = None) -> tuple[int, ...]:
    """Map a base sequence onto field symbols; gaps are stripped with a warning."""
    mapping = _check_base_map(mapping)
    symbols = seq.symbols if isinstance(seq, BioSequence) else tuple(seq)
    out: list[int] = []
    stripped = 0
    for pos, sym in enumerate(symbols):
        if sym == GAP:
            stripped += 1
            continue
        if sym not in mapping:
            raise InvalidBase(f"symbol {sym!r} at position {pos} is not a base")
        out.append(mapping[sym])
    if stripped:
        warnings.warn(
            f"stripped {stripped} gap symbol(s) before symbol conversion",
            stacklevel=2,
        )
    return tuple(out)


def symbols_to_bases(
    symbols,
    mapping: dict[str, int] | None = None,
    id: str = "coded",
    meta: dict | None = None,
) -> BioSequence:
    """Inverse of base_to_symbols under the same (bijective) map."""
    mapping = _check_base_map(mapping)
    inverse = {v: k for k, v in mapping.items()}
    bases = []
    for pos, value in enumerate(symbols):
        value = int(value)
        if value not in inverse:
            raise InvalidBase(
                f"symbol {value!r} at position {pos} has no base image"
            )
        bases.append(inverse[value])
    return BioSequence(id=id, symbols=tuple(bases), alphabet=BASE, meta=meta or {})


def default_backtranslation_table() -> dict[str, str]:
    text = (
        resources.files("mutent") / "data" / _BACKTRANSLATION_RESOURCE
    ).read_text()
    return json.loads(text)


def amino_to_base(seq: BioSequence, table: dict[str, str] | None = None) -> BioSequence:
    """Back-translate an amino sequence, one pinned codon per residue."""
    if table is None:
        table = default_backtranslation_table()
    bases: list[str] = []
    for pos, sym in enumerate(seq.symbols):
        codon = table.get(sym)
        if codon is None:
            raise MissingCodon(
                f"no codon configured for residue {sym!r} at position {pos}"
            )
        if len(codon) != 3 or any(b not in BASE for b in codon):
            raise MissingCodon(
                f"configured codon {codon!r} for {sym!r} is not three bases"
            )
        bases.extend(codon)
    meta = dict(seq.meta)
    meta["source_alphabet"] = "amino"
    return BioSequence(id=seq.id, symbols=tuple(bases), alphabet=BASE, meta=meta)


def bases_to_amino(seq: BioSequence, id: str | None = None) -> BioSequence:
    """Forward-translate bases three at a time under the standard code.

    Stop codons become the placeholder residue, and a trailing partial
    codon is dropped with a warning.
    """
    n = len(seq.symbols)
    usable = n - n % 3
    if usable < n:
        warnings.warn(
            f"dropped {n - usable} trailing base(s) forming a partial codon",
            stacklevel=2,
        )
    if usable == 0:
        raise ValidationError("sequence holds no complete codon")
    residues = []
    for i in range(0, usable, 3):
        codon = "".join(seq.symbols[i : i + 3])
        product = GENETIC_CODE[codon]
        residues.append(STOP_PLACEHOLDER if product == "*" else product)
    return BioSequence(
        id=id if id is not None else seq.id,
        symbols=tuple(residues),
        alphabet=AMINO_X,
        meta=dict(seq.meta),
    )


def _is_base_alphabet(alphabet: Alphabet) -> bool:
    return set(alphabet.symbols) <= set(BASE.symbols)


def coding_pipeline(
    seq: BioSequence,
    code,
    mapping: dict[str, int] | None = None,
    table: dict[str, str] | None = None,
) -> BioSequence:
    """Base sequence -> symbols -> codewords -> base sequence.

    Amino-acid input is back-translated first.  The pad length used to
    square off the final block is recorded in the output metadata so the
    stream can be decoded back exactly.
    """
    base_seq = seq if _is_base_alphabet(seq.alphabet) else amino_to_base(seq, table)
    symbols = base_to_symbols(base_seq, mapping)
    coded, pad = code.encode(symbols)
    meta = dict(base_seq.meta)
    meta.update({"pad": pad, "code": code.describe(), "source_id": seq.id})
    return symbols_to_bases(coded, mapping, id=f"{seq.id}.coded", meta=meta)


def decode_pipeline(
    seq: BioSequence,
    code,
    mapping: dict[str, int] | None = None,
) -> BioSequence:
    """Invert coding_pipeline on a coded base sequence (pad from metadata)."""
    pad = int(seq.meta.get("pad", 0))
    info, _ = code.decode(base_to_symbols(seq, mapping), pad=pad)
    source = seq.meta.get("source_id", seq.id)
    return symbols_to_bases(info, mapping, id=str(source))


@dataclass(frozen=True)
class StructureIndexReport:
    """Mean absolute change of pairwise evolution rates under a code."""

    d_c: float
    pair_terms: tuple[float, ...]
    pairs: tuple[tuple[str, str], ...]
    code_id: str
    excluded: tuple[tuple[str, str], ...]

    @property
    def pair_count(self) -> int:
        return len(self.pair_terms)


def _code_id(code) -> str:
    spec = code.describe()
    if spec["kind"] == "cyclic":
        return f"cyclic(n={spec['n']},k={spec['k']})"
    return f"conv(taps={','.join(map(str, spec['taps']))})"


def structure_index(
    seqs: list[BioSequence],
    code,
    scoring: Scoring = Scoring(),
    base: str = "2",
    mapping: dict[str, int] | None = None,
    table: dict[str, str] | None = None,
) -> StructureIndexReport:
    """Compare pairwise evolution rates before and after coding.

    Amino-acid corpora are back-translated, coded, and translated forward
    again so both rate computations run on comparable alphabets.  Pairs
    whose rate is undefined on either side are excluded and counted.
    """
    if len(seqs) < 2:
        raise ValidationError("structure index needs at least two sequences")
    coded: list[BioSequence] = []
    for seq in seqs:
        coded_base = coding_pipeline(seq, code, mapping, table)
        if _is_base_alphabet(seq.alphabet):
            coded.append(coded_base)
        else:
            coded.append(bases_to_amino(coded_base, id=coded_base.id))
    terms: list[float] = []
    pairs: list[tuple[str, str]] = []
    excluded: list[tuple[str, str]] = []
    for i in range(len(seqs)):
        for j in range(i + 1, len(seqs)):
            label = (seqs[i].id, seqs[j].id)
            try:
                rho_plain = entropy_evolution_rate(
                    seqs[i], seqs[j], scoring, base
                ).rho_ab
                rho_coded = entropy_evolution_rate(
                    coded[i], coded[j], scoring, base
                ).rho_ab
            except DegenerateEntropy:
                excluded.append(label)
                continue
            terms.append(abs(rho_plain - rho_coded))
            pairs.append(label)
    if not terms:
        raise DegenerateEntropy(
            "every sequence pair has an undefined evolution rate"
        )
    d_c = math.fsum(terms) / len(terms)
    return StructureIndexReport(
        d_c=d_c,
        pair_terms=tuple(terms),
        pairs=tuple(pairs),
        code_id=_code_id(code),
        excluded=tuple(excluded),
    )
