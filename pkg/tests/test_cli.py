import json
import subprocess
import sys

import pytest

from qutritzx import cli, checks
from qutritzx.diagram import Diagram
from qutritzx.rules import RewriteRule, get_rule
from qutritzx.phases import PhasePair


def run(*args, env=None):
    return subprocess.run(
        [sys.executable, "-m", "qutritzx", *map(str, args)],
        capture_output=True,
        text=True,
        env=env,
    )


@pytest.fixture
def triangle(tmp_path):
    p = tmp_path / "triangle.txt"
    p.write_text("3\n0 1 1\n0 2 1\n1 2 1\n")
    return p


def test_eval_hadamard(tmp_path):
    f = tmp_path / "h.json"
    f.write_text(Diagram.hadamard().to_json())
    out = run("eval", f)
    assert out.returncode == 0
    assert out.stdout.splitlines() == [
        "1/1+0/1w 1/1+0/1w 1/1+0/1w",
        "1/1+0/1w 0/1+1/1w -1/1-1/1w",
        "1/1+0/1w -1/1-1/1w 0/1+1/1w",
    ]


def test_eval_empty_diagram(tmp_path):
    f = tmp_path / "e.json"
    f.write_text(Diagram.empty().to_json())
    out = run("eval", f)
    assert out.returncode == 0 and out.stdout == "1/1+0/1w\n"


def test_eval_malformed_file(tmp_path):
    f = tmp_path / "bad.json"
    f.write_text('{"nodes": [\n')
    out = run("eval", f)
    assert out.returncode == cli.EXIT_USAGE
    assert "line" in out.stderr


def test_eval_respects_cap(tmp_path):
    f = tmp_path / "big.json"
    f.write_text(Diagram.z(3, 3).to_json())
    out = run("eval", f, "--cap", "4")
    assert out.returncode != 0 and "cap" in out.stderr


def test_lc_prints_complemented_matrix(triangle):
    out = run("lc", triangle, 0, 1)
    assert out.returncode == 0
    assert out.stdout.splitlines() == ["0 1 1", "1 0 2", "1 2 0"]


def test_lc_edgeless_graph(tmp_path):
    f = tmp_path / "empty.txt"
    f.write_text("3\n")
    out = run("lc", f, 2, 2)
    assert out.stdout.splitlines() == ["0 0 0"] * 3


def test_lc_verify_random_four_vertex_graph(tmp_path):
    f = tmp_path / "g4.txt"
    f.write_text("4\n0 1 2\n0 2 1\n1 3 1\n2 3 2\n0 3 1\n")
    out = run("lc", f, 0, 2, "--verify", "--json")
    assert out.returncode == 0
    records = [json.loads(line) for line in out.stdout.splitlines()]
    assert records[-1]["status"] == "pass"


def test_export_dot(triangle, tmp_path):
    out = run("export-dot", triangle)
    assert out.returncode == 0 and out.stdout.startswith("digraph")
    f = tmp_path / "h.json"
    f.write_text(Diagram.hadamard().to_json())
    assert run("export-dot", f).stdout.startswith("digraph")


def test_check_rules_small_bound_json():
    out = run("check-rules", "--arity-bound", "2", "--json")
    assert out.returncode == 0
    records = [json.loads(line) for line in out.stdout.splitlines()]
    names = [r["check"] for r in records[:-1]]
    assert names == sorted(names)
    assert "rule:S1" in names and "rule:P1" in names
    assert records[-1] == {"summary": "check-rules", "status": "pass",
                           "passed": len(names), "total": len(names)}


def test_check_lemmas_table():
    out = run("check-lemmas", "--arity-bound", "3")
    assert out.returncode == 0
    assert "proof:hopf" in out.stdout and "lemma:dualizers" in out.stdout
    assert out.stdout.rstrip().endswith("overall PASS")


def test_verify_lc_small_config_is_deterministic():
    a = run("verify-lc", "--exhaustive-n", "2", "--trials", "5", "--json")
    b = run("verify-lc", "--exhaustive-n", "2", "--trials", "5", "--json")
    assert a.returncode == 0
    assert a.stdout == b.stdout


def test_config_file_from_environment(tmp_path):
    import os

    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"exhaustive_n": 9, "qutrit_cap": 8}))
    out = run("verify-lc", env={**os.environ, checks.CONFIG_ENV: str(cfg)})
    assert out.returncode == cli.EXIT_USAGE
    assert "exhaustive_n" in out.stderr


def test_corrupted_catalog_fails(monkeypatch, capsys):
    good = get_rule("S2")

    def bad_build():
        lhs, rhs = good.build()
        return lhs, Diagram.z(1, 1, PhasePair.thirds(1, 0))

    monkeypatch.setattr(checks, "rule_catalog", lambda: [RewriteRule("S2-corrupt", bad_build)])
    code = cli.main(["check-rules"])
    out = capsys.readouterr().out
    assert code == cli.EXIT_FAIL
    assert "FAIL" in out and "lhs_matrix" in out
