"""Command-line entry point.

Each subcommand loads its inputs, runs one computation, and prints a single
JSON object (keys sorted, one line unless --pretty) to stdout.  Failures
print {"error", "detail"} to stderr and exit 2 for parse problems or 3 for
computation problems.  Fixing the inputs and the seed fixes the output bytes.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from .alignment import Scoring
from .capacity import OptimizerConfig, StateFamily, pseudo_capacity, quantum_capacity
from .channels import (
    DecompositionSearch,
    FiniteDecompositionSearch,
    mutual_entropy,
    pseudo_mutual_entropy,
)
from .entanglement import EntangledSearch, channel_entangled_mutual
from .entropy import von_neumann_entropy
from .errors import MutentError, ParseError
from .fasta import read_fasta
from .gencode import structure_index
from .phylo import build_tree
from .seqinfo import alt_rate, entropy_evolution_rate, genetic_matrix
from .sequences import AMINO, AMINO_X, BASE, Alphabet, builtin_alphabet
from .serialize import (
    entropy_to_json,
    load_channel,
    load_code,
    load_density,
    matrix_to_json,
)


def _emit(payload: dict, pretty: bool) -> None:
    if pretty:
        print(json.dumps(payload, sort_keys=True, indent=2))
    else:
        print(json.dumps(payload, sort_keys=True))


def _value_or_marker(value: float):
    return "inf" if math.isinf(value) else value


def _detect_alphabet(path: str, requested: str) -> Alphabet:
    if requested != "auto":
        return builtin_alphabet(requested)
    try:
        with open(path, encoding="utf-8") as handle:
            text = handle.read()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    letters = {
        ch
        for line in text.splitlines()
        if not line.startswith(">")
        for ch in line.strip().upper()
    }
    for alphabet in (BASE, AMINO, AMINO_X):
        if letters <= set(alphabet.symbols):
            return alphabet
    raise ParseError(
        f"{path} uses symbols outside every built-in alphabet: "
        f"{sorted(letters - set(AMINO_X.symbols))}"
    )


def _load_fasta(path: str, alphabet_name: str):
    alphabet = _detect_alphabet(path, alphabet_name)
    try:
        return read_fasta(path, alphabet)
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc


def _scoring(args) -> Scoring:
    return Scoring(match=args.match, mismatch=args.mismatch, gap=args.gap)


def _add_scoring_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--match", type=float, default=1.0, help="alignment match score")
    parser.add_argument("--mismatch", type=float, default=-1.0, help="alignment mismatch score")
    parser.add_argument("--gap", type=float, default=-2.0, help="alignment gap score")
    parser.add_argument(
        "--alphabet",
        choices=("auto", "base", "amino", "amino_x"),
        default="auto",
        help="FASTA alphabet (default: detect from the records)",
    )


# -- subcommand handlers ----------------------------------------------------


def _cmd_entropy(args) -> dict:
    rho = load_density(args.state)
    return entropy_to_json(von_neumann_entropy(rho, args.base))


def _cmd_mutual(args) -> dict:
    rho = load_density(args.state)
    channel = load_channel(args.channel)
    if args.pseudo:
        report = pseudo_mutual_entropy(
            rho,
            channel,
            FiniteDecompositionSearch(n_samples=args.samples, seed=args.seed),
            base=args.base,
        )
    else:
        report = mutual_entropy(
            rho,
            channel,
            DecompositionSearch(mode=args.mode, n_samples=args.samples, seed=args.seed),
            base=args.base,
        )
    return {
        "value": _value_or_marker(report.value),
        "base": args.base,
        "status": report.status,
        "samples": report.samples,
    }


def _cmd_capacity(args) -> dict:
    channel = load_channel(args.channel)
    family = StateFamily.all_states(channel.input_dim)
    config = OptimizerConfig(n_starts=args.starts, n_steps=args.steps, seed=args.seed)
    if args.pseudo:
        report = pseudo_capacity(
            channel,
            family,
            config,
            FiniteDecompositionSearch(n_samples=args.samples, seed=args.seed),
            base=args.base,
        )
    else:
        report = quantum_capacity(
            channel,
            family,
            config,
            DecompositionSearch(mode="sampled", n_samples=args.samples, seed=args.seed),
            base=args.base,
        )
    argmax = report.argmax.get("state")
    return {
        "value": _value_or_marker(report.value.value),
        "base": args.base,
        "status": report.status,
        "evaluations": report.evaluations,
        "argmax": matrix_to_json(np.asarray(argmax)) if argmax is not None else None,
    }


def _cmd_entangle(args) -> dict:
    rho = load_density(args.state)
    channel = load_channel(args.channel)
    report = channel_entangled_mutual(
        rho,
        channel,
        args.cls,
        EntangledSearch(n_samples=args.samples, seed=args.seed),
        base=args.base,
    )
    return {
        "value": _value_or_marker(report.value),
        "base": args.base,
        "class": args.cls,
        "status": report.status,
        "samples": report.samples,
    }


def _cmd_genrate(args) -> dict:
    records = _load_fasta(args.fasta, args.alphabet)
    if len(records) < 2:
        raise ParseError(f"{args.fasta} holds {len(records)} record(s); need 2")
    a, b = records[0], records[1]
    scoring = _scoring(args)
    rates = entropy_evolution_rate(a, b, scoring, args.base)
    return {
        "a": a.id,
        "b": b.id,
        "base": args.base,
        "s_a": rates.s_a,
        "s_b": rates.s_b,
        "i_ab": rates.i_ab,
        "r": rates.r_ab,
        "rho": rates.rho_ab,
        "rho_alt": alt_rate(a, b, scoring, args.base),
    }


def _matrix_payload(matrix) -> dict:
    distances = [
        [None if math.isnan(x) else float(x) for x in row]
        for row in matrix.distances.tolist()
    ]
    return {
        "labels": list(matrix.labels),
        "distances": distances,
        "missing": [list(pair) for pair in matrix.missing],
    }


def _write_csv(matrix, path: str) -> None:
    import csv

    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["label", *matrix.labels])
        for label, row in zip(matrix.labels, matrix.distances.tolist()):
            writer.writerow([label, *["" if math.isnan(x) else repr(x) for x in row]])


def _cmd_matrix(args) -> dict:
    records = _load_fasta(args.fasta, args.alphabet)
    if len(records) < 2:
        raise ParseError(f"{args.fasta} holds {len(records)} record(s); need >= 2")
    matrix = genetic_matrix(records, _scoring(args), args.base)
    if args.csv:
        _write_csv(matrix, args.csv)
    return _matrix_payload(matrix)


def _cmd_tree(args) -> dict:
    records = _load_fasta(args.fasta, args.alphabet)
    if len(records) < 2:
        raise ParseError(f"{args.fasta} holds {len(records)} record(s); need >= 2")
    matrix = genetic_matrix(records, _scoring(args), args.base)
    tree = build_tree(matrix, method=args.method, drop_missing=args.drop_missing)
    newick = tree.newick()
    if args.newick:
        with open(args.newick, "w", encoding="utf-8") as handle:
            handle.write(newick + "\n")
    return {"method": args.method, "newick": newick, "leaves": tree.leaf_labels()}


def _cmd_code_index(args) -> dict:
    records = _load_fasta(args.fasta, args.alphabet)
    code = load_code(args.code)
    report = structure_index(records, code, _scoring(args), args.base)
    return {
        "code": report.code_id,
        "d_c": report.d_c,
        "pair_count": report.pair_count,
        "pairs": [list(pair) for pair in report.pairs],
        "terms": list(report.pair_terms),
        "excluded": [list(pair) for pair in report.excluded],
    }


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mutent",
        description="Entropy, channel, entanglement, and sequence-information tools.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, base_default):
        p.add_argument("--base", choices=("2", "e"), default=base_default,
                       help=f"log base for entropies (default {base_default})")
        p.add_argument("--pretty", action="store_true", help="indent the JSON output")

    p = sub.add_parser("entropy", help="von Neumann entropy of a state")
    p.add_argument("--state", required=True, help="density matrix JSON file")
    common(p, "e")
    p.set_defaults(handler=_cmd_entropy)

    p = sub.add_parser("mutual", help="mutual entropy of a state through a channel")
    p.add_argument("--state", required=True)
    p.add_argument("--channel", required=True, help="channel spec JSON file")
    p.add_argument("--seed", type=int, default=0, help="search seed (default 0)")
    p.add_argument("--samples", type=int, default=32,
                   help="decomposition samples under degeneracy (default 32)")
    p.add_argument("--mode", choices=("exact-nondegenerate", "sampled", "refined"),
                   default="refined", help="degenerate-spectrum search mode")
    p.add_argument("--pseudo", action="store_true",
                   help="search non-orthogonal finite decompositions instead")
    common(p, "e")
    p.set_defaults(handler=_cmd_mutual)

    p = sub.add_parser("capacity", help="capacity of a channel over all states")
    p.add_argument("--channel", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--samples", type=int, default=16,
                   help="decomposition samples per state (default 16)")
    p.add_argument("--starts", type=int, default=24, help="optimizer starts (default 24)")
    p.add_argument("--steps", type=int, default=60, help="optimizer steps per start (default 60)")
    p.add_argument("--pseudo", action="store_true",
                   help="maximize the pseudo mutual entropy instead")
    common(p, "e")
    p.set_defaults(handler=_cmd_capacity)

    p = sub.add_parser("entangle",
                       help="class-constrained entangled mutual entropy")
    p.add_argument("--state", required=True)
    p.add_argument("--channel", required=True)
    p.add_argument("--cls", choices=("q", "d", "c"), default="q",
                   help="compound-state class (default q)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--samples", type=int, default=16)
    common(p, "e")
    p.set_defaults(handler=_cmd_entangle)

    p = sub.add_parser("genrate",
                       help="entropy evolution rate of the first two FASTA records")
    p.add_argument("--fasta", required=True)
    _add_scoring_flags(p)
    common(p, "2")
    p.set_defaults(handler=_cmd_genrate)

    p = sub.add_parser("matrix", help="pairwise evolution-rate distance matrix")
    p.add_argument("--fasta", required=True)
    p.add_argument("--csv", help="also write the matrix to this CSV file")
    _add_scoring_flags(p)
    common(p, "2")
    p.set_defaults(handler=_cmd_matrix)

    p = sub.add_parser("tree", help="phylogenetic tree from the distance matrix")
    p.add_argument("--fasta", required=True)
    p.add_argument("--method", choices=("upgma", "nj"), default="upgma")
    p.add_argument("--newick", help="also write the tree to this Newick file")
    p.add_argument("--drop-missing", action="store_true",
                   help="drop sequences with undefined pairwise rates")
    _add_scoring_flags(p)
    common(p, "2")
    p.set_defaults(handler=_cmd_tree)

    p = sub.add_parser("code-index",
                       help="structure index of a corpus under a code")
    p.add_argument("--code", required=True, help="code spec JSON file")
    p.add_argument("--fasta", required=True)
    _add_scoring_flags(p)
    common(p, "2")
    p.set_defaults(handler=_cmd_code_index)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        payload = args.handler(args)
    except ParseError as exc:
        print(
            json.dumps({"error": type(exc).__name__, "detail": str(exc)}, sort_keys=True),
            file=sys.stderr,
        )
        return 2
    except (MutentError, ValueError, ZeroDivisionError) as exc:
        print(
            json.dumps({"error": type(exc).__name__, "detail": str(exc)}, sort_keys=True),
            file=sys.stderr,
        )
        return 3
    _emit(payload, args.pretty)
    return 0


if __name__ == "__main__":
    sys.exit(main())
