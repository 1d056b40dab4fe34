import json
import math

import pytest

from photonpath.cli import main

K3_TEXT = "3\n1 2\n2 3\n1 3\n"
P3_TEXT = "3\n1 2\n2 3\n"
S4_TEXT = "4\n1 2\n1 3\n1 4\n"


@pytest.fixture
def graphs(tmp_path):
    paths = {}
    for name, text in (("k3", K3_TEXT), ("p3", P3_TEXT), ("s4", S4_TEXT)):
        p = tmp_path / f"{name}.txt"
        p.write_text(text, encoding="utf-8")
        paths[name] = str(p)
    return paths


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv, "--format", "machine")
    assert code == 0, err
    doc = json.loads(out)
    assert doc["format_version"] == 1
    return doc


class TestAnalyze:
    def test_k3_values(self, capsys, graphs):
        doc = run_json(capsys, "analyze", "--graph", graphs["k3"])
        res = doc["result"]
        assert res["hamiltonian_time"] == pytest.approx(math.log(30), abs=1e-12)
        assert res["min_gap_exact"] == pytest.approx(0.4054651081, abs=1e-9)
        assert res["walk_count"] == 12
        assert res["primes"] == [2, 3, 5]

    def test_human_mentions_key_numbers(self, capsys, graphs):
        code, out, _ = run(capsys, "analyze", "--graph", graphs["k3"])
        assert code == 0
        assert "3.4012" in out and "0.405465" in out and "walks of length n-1: 12" in out


class TestOracle:
    def test_k3_count(self, capsys, graphs):
        doc = run_json(capsys, "oracle", "--graph", graphs["k3"])
        assert doc["result"]["hamiltonian_path_count"] == 6
        assert [1, 2, 3] in doc["result"]["paths"]

    def test_star_empty_is_success(self, capsys, graphs):
        code, out, _ = run(capsys, "oracle", "--graph", graphs["s4"])
        assert code == 0
        assert "hamiltonian paths: 0" in out


class TestDetect:
    def test_exact_verdicts(self, capsys, graphs):
        doc = run_json(capsys, "detect", "--graph", graphs["k3"])
        assert doc["result"]["detected"] is True
        assert doc["result"]["total"] == pytest.approx(0.5, abs=1e-12)

        doc = run_json(capsys, "detect", "--graph", graphs["s4"])
        assert doc["result"]["detected"] is False

    def test_absence_still_exits_zero(self, capsys, graphs):
        code, out, _ = run(capsys, "detect", "--graph", graphs["s4"])
        assert code == 0
        assert "no detection" in out

    def test_sampled_requires_seed(self, capsys, graphs):
        code, _, err = run(capsys, "detect", "--graph", graphs["k3"], "--shots", "10")
        assert code == 2
        assert "--seed" in err

    def test_sampled_runs(self, capsys, graphs):
        doc = run_json(
            capsys,
            "detect",
            "--graph",
            graphs["k3"],
            "--shots",
            "200",
            "--seed",
            "4",
        )
        assert doc["result"]["mode"] == "sampled"
        assert doc["config"]["shots"] == 200

    def test_recurrent_flag(self, capsys, graphs):
        doc = run_json(
            capsys, "detect", "--graph", graphs["k3"], "--topology", "recurrent"
        )
        assert doc["result"]["detected"] is True


class TestConstruct:
    def test_p3(self, capsys, graphs):
        code, out, _ = run(
            capsys, "construct", "--graph", graphs["p3"], "--end-vertex", "3"
        )
        assert code == 0
        assert out.splitlines()[0] == "path: 1 2 3"

    def test_refusal_exit_code(self, capsys, graphs):
        code, _, err = run(
            capsys, "construct", "--graph", graphs["s4"], "--end-vertex", "2"
        )
        assert code == 5
        assert "refused" in err

    def test_seed_switches_policy(self, capsys, graphs):
        doc = run_json(
            capsys,
            "construct",
            "--graph",
            graphs["k3"],
            "--end-vertex",
            "3",
            "--seed",
            "8",
        )
        assert doc["config"]["policy"] == "sampled"
        assert doc["result"]["path"][-1] == 3


class TestCompileAndPropagate:
    def test_compile_roundtrip(self, capsys, graphs):
        from photonpath.graphs import parse_graph
        from photonpath.network import network_from_dict, validate_network

        doc = run_json(capsys, "compile", "--graph", graphs["p3"])
        net = network_from_dict(doc["result"])
        assert validate_network(net, parse_graph(P3_TEXT)) == []

    def test_compile_recurrent_constraint(self, capsys, graphs):
        code, _, err = run(
            capsys,
            "compile",
            "--graph",
            graphs["k3"],
            "--topology",
            "recurrent",
            "--feedback-delay",
            "0.5",
        )
        assert code == 5
        assert "feedback delay" in err

    def test_propagate_classical_counts(self, capsys, graphs):
        doc = run_json(
            capsys, "propagate", "--graph", graphs["k3"], "--mode", "classical"
        )
        assert doc["result"]["balance"]["total_mass"] == 12

    def test_propagate_coherent_diagnostic(self, capsys, graphs):
        doc = run_json(
            capsys, "propagate", "--graph", graphs["k3"], "--mode", "coherent"
        )
        assert doc["result"]["balance"]["combined"] == pytest.approx(1.5, abs=1e-12)


class TestSample:
    def test_requires_flags(self, capsys, graphs):
        code = main(["sample", "--graph", graphs["k3"], "--shots", "10"])
        capsys.readouterr()
        assert code == 2

    def test_runs_and_reports(self, capsys, graphs):
        doc = run_json(
            capsys,
            "sample",
            "--graph",
            graphs["k3"],
            "--shots",
            "300",
            "--seed",
            "21",
        )
        assert doc["result"]["shots"] == 300
        assert 0 <= doc["result"]["hamiltonian_frequency"] <= 1


class TestPlumbing:
    def test_byte_identical_machine_output(self, capsys, graphs):
        args = (
            "sample",
            "--graph",
            graphs["k3"],
            "--shots",
            "150",
            "--seed",
            "2",
            "--format",
            "machine",
        )
        code1, out1, _ = run(capsys, *args)
        code2, out2, _ = run(capsys, *args)
        assert code1 == code2 == 0
        assert out1 == out2

    def test_missing_file_exit_code(self, capsys, tmp_path):
        code, _, err = run(capsys, "analyze", "--graph", str(tmp_path / "nope.txt"))
        assert code == 3
        assert "cannot read" in err

    def test_malformed_graph_exit_code(self, capsys, tmp_path):
        bad = tmp_path / "bad.txt"
        bad.write_text("3\n2 2\n", encoding="utf-8")
        code, _, err = run(capsys, "analyze", "--graph", str(bad))
        assert code == 3
        assert "self-loop" in err

    def test_cap_exit_code(self, capsys, tmp_path):
        big = tmp_path / "big.txt"
        lines = ["13"] + [f"{i} {i + 1}" for i in range(1, 13)]
        big.write_text("\n".join(lines) + "\n", encoding="utf-8")
        code, _, err = run(capsys, "detect", "--graph", str(big))
        assert code == 4
        assert "cap" in err

    def test_out_writes_file(self, capsys, graphs, tmp_path):
        target = tmp_path / "report.json"
        code, out, _ = run(
            capsys,
            "analyze",
            "--graph",
            graphs["k3"],
            "--format",
            "machine",
            "--out",
            str(target),
        )
        assert code == 0
        assert out == ""
        doc = json.loads(target.read_text(encoding="utf-8"))
        assert doc["command"] == "analyze"

    def test_unknown_command_is_usage_error(self, capsys):
        code = main(["frobnicate"])
        capsys.readouterr()
        assert code == 2

    def test_help_exits_zero(self, capsys):
        assert main(["--help"]) == 0
        capsys.readouterr()
