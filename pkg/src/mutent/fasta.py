"""Minimal FASTA reading for the sequence pipelines.

Labels come from the first whitespace-delimited token of each header; the
remainder of the header line is kept as the description.  Lowercase symbols
are normalized and anything outside the alphabet is rejected with its
position.
"""

from __future__ import annotations

from pathlib import Path

from .errors import ParseError
from .sequences import Alphabet, BioSequence


def parse_fasta(text: str, alphabet: Alphabet) -> list[BioSequence]:
    records: list[tuple[str, str, list[str]]] = []  # (label, description, chunks)
    label = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith(">"):
            header = line[1:].strip()
            if not header:
                raise ParseError(f"empty FASTA header at line {lineno}")
            parts = header.split(None, 1)
            label = parts[0]
            description = parts[1] if len(parts) > 1 else ""
            records.append((label, description, []))
        else:
            if label is None:
                raise ParseError(
                    f"sequence data before any FASTA header at line {lineno}"
                )
            records[-1][2].append(line)
    if not records:
        raise ParseError("no FASTA records found")

    sequences = []
    for label, description, chunks in records:
        text_seq = "".join(chunks).upper()
        if not text_seq:
            raise ParseError(f"FASTA record {label!r} has no sequence data")
        for pos, ch in enumerate(text_seq):
            if ch not in alphabet.symbols:
                raise ParseError(
                    f"record {label!r}: character {ch!r} at position {pos} is not "
                    f"in the {alphabet.name} alphabet"
                )
        meta = {"description": description} if description else {}
        sequences.append(
            BioSequence(label, tuple(text_seq), alphabet, meta=meta)
        )
    return sequences


def read_fasta(path, alphabet: Alphabet) -> list[BioSequence]:
    return parse_fasta(Path(path).read_text(), alphabet)
