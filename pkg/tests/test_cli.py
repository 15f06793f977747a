import json
import subprocess
import sys
from pathlib import Path

import jsonschema
import pytest

from gradealg.cli import EXIT_INPUT, EXIT_OK, EXIT_PRECONDITION, EXIT_VERIFY, main
from gradealg.suites import SUITES

SCHEMA = json.loads((Path(__file__).resolve().parents[1] / "docs" / "report_schema.json").read_text())


def run_json(capsys, *argv):
    code = main(["--format", "json", *argv])
    doc = json.loads(capsys.readouterr().out)
    jsonschema.validate(doc, SCHEMA)
    return code, doc


def test_graph_analyze_g2(capsys, graph_path):
    code, doc = run_json(capsys, "graph-analyze", graph_path("g2"))
    r = doc["result"]
    assert code == EXIT_OK
    assert r["sinks"] == ["z0"] and r["acyclic"] and r["primitive"] is None
    assert r["max_path_length_to"]["z0"] == 2


def test_graph_analyze_loop(capsys, graph_path):
    code, doc = run_json(capsys, "graph-analyze", graph_path("loop"))
    assert code == EXIT_OK and doc["result"]["primitive"] == 1


@pytest.mark.parametrize("name", ["bad", "does_not_exist"])
def test_bad_input_exits_2(capsys, graph_path, name):
    code, doc = run_json(capsys, "graph-analyze", graph_path(name))
    assert code == EXIT_INPUT and doc["exit_code"] == EXIT_INPUT


def test_decide_hge(capsys, graph_path):
    code, doc = run_json(capsys, "decide-hge", graph_path("loop"), graph_path("two_cycle"))
    assert code == EXIT_OK and doc["result"]["status"] == "not_equivalent"
    assert doc["result"]["criterion"] == "zero_component_blocks"
    code, doc = run_json(capsys, "decide-hge", graph_path("g2"), graph_path("h"))
    assert doc["result"]["status"] == "equivalent"
    code, doc = run_json(capsys, "decide-hge", graph_path("cyclic3_a"), graph_path("cyclic3_b"))
    assert doc["result"]["status"] == "undetermined"


def test_stabilize_exit_codes(capsys, graph_path):
    code, doc = run_json(capsys, "stabilize", graph_path("loop"), "--vertex", "v", "--samples", "20")
    assert code == EXIT_OK and doc["result"]["passed"]
    code, doc = run_json(capsys, "stabilize", graph_path("two_cycle"), "--vertex", "v")
    assert code == EXIT_PRECONDITION
    code, doc = run_json(capsys, "stabilize", graph_path("e3"), "--vertex", "1", "--samples", "0", "--corrupt")
    assert code == EXIT_VERIFY and not doc["result"]["passed"]
    failed = [c for c in doc["result"]["report"] if c["status"] == "fail"]
    assert failed and all(c["counterexample"] for c in failed)


def test_stabilize_unknown_vertex(capsys, graph_path):
    code, _ = run_json(capsys, "stabilize", graph_path("loop"), "--vertex", "nope")
    assert code == EXIT_INPUT


@pytest.mark.parametrize("flag", [["--window", "0"], ["--depth", "0"], ["--samples", "-1"], ["--field", "fp:4"]])
def test_invalid_bounds(capsys, graph_path, flag):
    code, _ = run_json(capsys, "stabilize", graph_path("loop"), "--vertex", "v", *flag)
    assert code == EXIT_INPUT


def test_usage_error_exits_2(capsys):
    assert main(["verify-suite", "--suite", "nope"]) == EXIT_INPUT
    assert main([]) == EXIT_INPUT
    capsys.readouterr()


def test_identical_config_gives_identical_bytes(capsys, graph_path):
    argv = ["--format", "json", "stabilize", graph_path("e3"), "--vertex", "1", "--samples", "10", "--seed", "3"]
    main(argv)
    first = capsys.readouterr().out
    main(argv)
    assert capsys.readouterr().out == first


@pytest.mark.parametrize("suite", sorted(SUITES))
def test_each_suite_selectable(capsys, suite):
    code, doc = run_json(capsys, "verify-suite", "--suite", suite)
    assert code == EXIT_OK
    assert [s["suite"] for s in doc["result"]["suites"]] == [suite]


def test_field_env_override(capsys, graph_path, monkeypatch):
    monkeypatch.setenv("GRADEALG_FIELD", "fp:7")
    code, doc = run_json(capsys, "stabilize", graph_path("loop"), "--vertex", "v", "--samples", "5")
    assert code == EXIT_OK and doc["config"]["field"] == "fp:7"


def test_module_entry_point(graph_path):
    out = subprocess.run(
        [sys.executable, "-m", "gradealg", "graph-analyze", graph_path("loop")], capture_output=True, text=True
    )
    assert out.returncode == 0 and "primitive: 1" in out.stdout


def test_text_output_for_stabilize(capsys, graph_path):
    assert main(["stabilize", graph_path("loop"), "--vertex", "v", "--samples", "5"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "all identities pass" in out


def test_decide_hge_over_small_prime_field(capsys, graph_path):
    code, doc = run_json(capsys, "--field", "fp:2", "decide-hge", graph_path("cyclic3_a"), graph_path("cyclic3_b"))
    assert code == EXIT_OK and doc["result"]["status"] == "undetermined"
