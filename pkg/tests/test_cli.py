"""Command-line interface: happy paths, exit codes, and determinism."""

import json
import math

import numpy as np
import pytest

from mutent.cli import main
from mutent.serialize import matrix_to_json

S_73_NATS = 0.6108643020548935


def run(argv, capsys):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


@pytest.fixture
def workdir(tmp_path):
    files = {}

    def put(name, payload):
        path = tmp_path / name
        text = payload if isinstance(payload, str) else json.dumps(payload)
        path.write_text(text, encoding="utf-8")
        files[name] = str(path)
        return files[name]

    put("mixed.json", matrix_to_json(np.eye(2) / 2))
    put("skewed.json", matrix_to_json(np.diag([0.7, 0.3])))
    put("identity.json", {"kind": "identity", "dim": 2})
    put("depol.json", {"kind": "depolarizing", "dim": 2, "p": 0.5})
    put("rep2.json", {"kind": "cyclic", "n": 2, "k": 1, "generator": [1, 1]})
    put(
        "seqs.fa",
        ">s1\nACGTACGTACGG\n>s2\nACGTTCGAACGT\n>s3\nGCGTACTTACCT\n",
    )
    put("pair.fa", ">a\nACGTACGT\n>b\nAAGTACGA\n")
    put("twins.fa", ">a\nACGTACGT\n>b\nACGTACGT\n")
    put("mono.fa", ">a\nACGTACGT\n>mono\nAAAAAAAA\n")
    put("single.fa", ">only\nACGT\n")
    put("protein.fa", ">p1\nMWKLVHE\n>p2\nMWRLVDE\n")
    files["dir"] = str(tmp_path)
    return files


class TestEntropy:
    def test_maximally_mixed_qubit_in_bits(self, workdir, capsys):
        code, out, err = run(
            ["entropy", "--state", workdir["mixed.json"], "--base", "2"], capsys
        )
        assert code == 0 and err == ""
        assert json.loads(out) == {"base": "2", "value": 1.0}

    def test_default_base_is_natural(self, workdir, capsys):
        code, out, _ = run(["entropy", "--state", workdir["skewed.json"]], capsys)
        assert code == 0
        payload = json.loads(out)
        assert payload["base"] == "e"
        assert payload["value"] == pytest.approx(S_73_NATS, abs=1e-12)

    def test_pretty_output_is_indented(self, workdir, capsys):
        code, out, _ = run(
            ["entropy", "--state", workdir["mixed.json"], "--base", "2", "--pretty"],
            capsys,
        )
        assert code == 0
        assert "\n" in out.strip()
        assert json.loads(out)["value"] == 1.0


class TestMutual:
    def test_identity_channel_returns_the_entropy(self, workdir, capsys):
        code, out, _ = run(
            [
                "mutual",
                "--state", workdir["skewed.json"],
                "--channel", workdir["identity.json"],
            ],
            capsys,
        )
        assert code == 0
        payload = json.loads(out)
        assert payload["value"] == pytest.approx(S_73_NATS, abs=1e-12)
        assert payload["status"] == "exact"
        assert payload["samples"] == 1

    def test_depolarizing_channel_shrinks_the_value(self, workdir, capsys):
        code, out, _ = run(
            [
                "mutual",
                "--state", workdir["skewed.json"],
                "--channel", workdir["depol.json"],
            ],
            capsys,
        )
        assert code == 0
        payload = json.loads(out)
        assert 0.0 < payload["value"] < S_73_NATS

    def test_pseudo_search_reaches_the_entropy_on_identity(self, workdir, capsys):
        code, out, _ = run(
            [
                "mutual",
                "--state", workdir["skewed.json"],
                "--channel", workdir["identity.json"],
                "--pseudo",
                "--samples", "8",
            ],
            capsys,
        )
        assert code == 0
        payload = json.loads(out)
        assert payload["value"] == pytest.approx(S_73_NATS, abs=1e-9)


class TestCapacity:
    def test_identity_qubit_capacity_in_bits(self, workdir, capsys):
        code, out, _ = run(
            [
                "capacity",
                "--channel", workdir["identity.json"],
                "--base", "2",
                "--starts", "6",
                "--steps", "25",
                "--samples", "4",
            ],
            capsys,
        )
        assert code == 0
        payload = json.loads(out)
        assert payload["value"] == pytest.approx(1.0, abs=1e-3)
        assert payload["status"] == "lower_bound"
        assert payload["evaluations"] > 0
        argmax = payload["argmax"]
        assert argmax["dim"] == 2
        trace = argmax["re"][0][0] + argmax["re"][1][1]
        assert trace == pytest.approx(1.0, abs=1e-9)


class TestEntangle:
    def test_identity_channel_class_d(self, workdir, capsys):
        code, out, _ = run(
            [
                "entangle",
                "--state", workdir["skewed.json"],
                "--channel", workdir["identity.json"],
                "--cls", "d",
            ],
            capsys,
        )
        assert code == 0
        payload = json.loads(out)
        assert payload["class"] == "d"
        assert payload["value"] == pytest.approx(S_73_NATS, abs=1e-9)
        assert payload["status"] == "exact"

    def test_identity_channel_class_q_doubles(self, workdir, capsys):
        code, out, _ = run(
            [
                "entangle",
                "--state", workdir["skewed.json"],
                "--channel", workdir["identity.json"],
                "--cls", "q",
            ],
            capsys,
        )
        assert code == 0
        payload = json.loads(out)
        assert payload["value"] == pytest.approx(2 * S_73_NATS, abs=1e-6)


class TestSequenceCommands:
    def test_genrate_reports_both_rates(self, workdir, capsys):
        code, out, _ = run(["genrate", "--fasta", workdir["pair.fa"]], capsys)
        assert code == 0
        payload = json.loads(out)
        assert payload["a"] == "a" and payload["b"] == "b"
        assert payload["base"] == "2"
        assert set(payload) == {"a", "b", "base", "s_a", "s_b", "i_ab", "r", "rho", "rho_alt"}
        assert 0.0 <= payload["rho"] <= 1.0
        assert payload["i_ab"] <= min(payload["s_a"], payload["s_b"]) + 1e-9

    def test_genrate_on_identical_sequences(self, workdir, capsys):
        code, out, _ = run(["genrate", "--fasta", workdir["twins.fa"]], capsys)
        assert code == 0
        payload = json.loads(out)
        assert payload["rho"] == pytest.approx(0.0, abs=1e-12)
        assert payload["r"] == pytest.approx(1.0, abs=1e-12)

    def test_matrix_payload_shape(self, workdir, capsys):
        code, out, _ = run(["matrix", "--fasta", workdir["seqs.fa"]], capsys)
        assert code == 0
        payload = json.loads(out)
        assert payload["labels"] == ["s1", "s2", "s3"]
        assert payload["missing"] == []
        d = payload["distances"]
        for i in range(3):
            assert d[i][i] == 0.0
            for j in range(3):
                assert d[i][j] == d[j][i]

    def test_matrix_records_degenerate_pairs_as_null(self, workdir, capsys):
        code, out, _ = run(["matrix", "--fasta", workdir["mono.fa"]], capsys)
        assert code == 0
        payload = json.loads(out)
        # missing pairs are reported by row/column index
        assert payload["missing"] == [[0, 1]]
        assert payload["distances"][0][1] is None

    def test_matrix_csv_side_output(self, workdir, capsys, tmp_path):
        csv_path = tmp_path / "out.csv"
        code, out, _ = run(
            ["matrix", "--fasta", workdir["seqs.fa"], "--csv", str(csv_path)], capsys
        )
        assert code == 0
        lines = csv_path.read_text(encoding="utf-8").strip().splitlines()
        assert lines[0] == "label,s1,s2,s3"
        assert len(lines) == 4

    def test_tree_newick_output(self, workdir, capsys, tmp_path):
        newick_path = tmp_path / "tree.nwk"
        code, out, _ = run(
            [
                "tree",
                "--fasta", workdir["seqs.fa"],
                "--method", "nj",
                "--newick", str(newick_path),
            ],
            capsys,
        )
        assert code == 0
        payload = json.loads(out)
        assert payload["method"] == "nj"
        assert payload["newick"].endswith(";")
        assert sorted(payload["leaves"]) == ["s1", "s2", "s3"]
        assert newick_path.read_text(encoding="utf-8") == payload["newick"] + "\n"

    def test_tree_with_degenerate_pair_fails_cleanly(self, workdir, capsys):
        code, out, err = run(["tree", "--fasta", workdir["mono.fa"]], capsys)
        assert code == 3
        assert out == ""
        assert json.loads(err)["error"] == "MissingDistance"

    def test_code_index(self, workdir, capsys):
        code, out, _ = run(
            [
                "code-index",
                "--code", workdir["rep2.json"],
                "--fasta", workdir["seqs.fa"],
            ],
            capsys,
        )
        assert code == 0
        payload = json.loads(out)
        assert payload["code"] == "cyclic(n=2,k=1)"
        assert payload["pair_count"] == 3
        assert payload["d_c"] >= 0.0
        assert len(payload["terms"]) == 3

    def test_amino_fasta_is_autodetected(self, workdir, capsys):
        code, out, _ = run(["genrate", "--fasta", workdir["protein.fa"]], capsys)
        assert code == 0
        assert json.loads(out)["a"] == "p1"


class TestExitCodes:
    def test_missing_state_file_is_a_parse_error(self, workdir, capsys):
        code, out, err = run(
            ["entropy", "--state", workdir["dir"] + "/ghost.json"], capsys
        )
        assert code == 2
        assert out == ""
        payload = json.loads(err)
        assert set(payload) == {"detail", "error"}
        assert payload["error"] == "ParseError"

    def test_invalid_json_channel_is_a_parse_error(self, workdir, tmp_path, capsys):
        bad = tmp_path / "bad.json"
        bad.write_text("{oops", encoding="utf-8")
        code, _, err = run(
            [
                "mutual",
                "--state", workdir["mixed.json"],
                "--channel", str(bad),
            ],
            capsys,
        )
        assert code == 2
        assert json.loads(err)["error"] == "ParseError"

    def test_single_record_fasta_is_a_parse_error(self, workdir, capsys):
        code, _, err = run(["genrate", "--fasta", workdir["single.fa"]], capsys)
        assert code == 2
        assert "need 2" in json.loads(err)["detail"]

    def test_invalid_state_is_a_computation_error(self, workdir, tmp_path, capsys):
        heavy = tmp_path / "heavy.json"
        heavy.write_text(json.dumps(matrix_to_json(np.eye(2))), encoding="utf-8")
        code, _, err = run(["entropy", "--state", str(heavy)], capsys)
        assert code == 3
        assert json.loads(err)["error"] == "NotUnitTrace"

    def test_wrong_alphabet_is_a_parse_error(self, workdir, capsys):
        code, _, err = run(
            ["genrate", "--fasta", workdir["protein.fa"], "--alphabet", "base"],
            capsys,
        )
        assert code == 2
        assert "alphabet" in json.loads(err)["detail"]

    def test_no_arguments_shows_usage(self, capsys):
        with pytest.raises(SystemExit) as excinfo:
            main([])
        assert excinfo.value.code == 2


class TestDeterminism:
    CASES = {
        "entropy": ["entropy", "--state", "{mixed.json}"],
        "mutual": [
            "mutual", "--state", "{mixed.json}", "--channel", "{depol.json}",
            "--mode", "sampled", "--samples", "8",
        ],
        "capacity": [
            "capacity", "--channel", "{depol.json}", "--starts", "4",
            "--steps", "15", "--samples", "4",
        ],
        "entangle": [
            "entangle", "--state", "{skewed.json}", "--channel", "{depol.json}",
            "--samples", "8",
        ],
        "genrate": ["genrate", "--fasta", "{seqs.fa}"],
        "matrix": ["matrix", "--fasta", "{seqs.fa}"],
        "tree": ["tree", "--fasta", "{seqs.fa}"],
        "code-index": [
            "code-index", "--code", "{rep2.json}", "--fasta", "{seqs.fa}",
        ],
    }

    @pytest.mark.parametrize("name", sorted(CASES))
    def test_same_seed_same_bytes(self, name, workdir, capsys):
        argv = [
            workdir[arg[1:-1]] if arg.startswith("{") else arg
            for arg in self.CASES[name]
        ]
        first_code, first_out, _ = run(argv, capsys)
        second_code, second_out, _ = run(argv, capsys)
        assert first_code == 0 and second_code == 0
        assert first_out == second_out
