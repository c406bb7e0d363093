import json

import pytest

from qutritzx.diagram import Diagram
from qutritzx.phases import ZERO
from qutritzx.rules import get_rule
from qutritzx.rules.derivations import check_proof, get_proof, proofs
from qutritzx.rules.scripts import ScriptError, Step, load_script, run_script, script_to_dict


@pytest.mark.parametrize("proof", proofs(), ids=lambda p: p.lemma)
def test_proof_reaches_the_other_side(proof):
    ok, trace = check_proof(proof)
    assert ok
    assert trace.replay().iso_equal(trace.end)


def test_p2_uses_the_expected_rules():
    _, trace = check_proof(get_proof("P2"))
    assert set(trace.rules_used()) == {"H1", "H2", "P1", "H2'"}


def test_hopf_proof_uses_catalog_rules_only():
    _, trace = check_proof(get_proof("hopf"))
    base = {"S1", "S1r", "P1", "B2"}
    derived = {"different-colour-loop", "copy-variant.cs", "copy-variant.ud"}
    assert set(trace.rules_used()) <= base | derived


def test_euler_proof_rests_on_the_triangle_hypothesis():
    proof = get_proof("euler-h")
    assert proof.uses_hypothesis == "lc-triangle"
    _, trace = check_proof(proof)
    assert "lc-triangle" in trace.rules_used()
    assert get_rule("lc-triangle").origin == "hypothesis"


def test_empty_script_is_trivial():
    d = Diagram.hadamard()
    trace = run_script(d, [])
    assert trace.end is d and trace.steps == []


def test_failing_step_reports_index_and_diagram():
    d = Diagram.hadamard()
    with pytest.raises(ScriptError) as err:
        run_script(d, [Step("S2", "->")])
    assert err.value.index == 0
    assert err.value.diagram is d


def test_script_file_round_trip():
    proof = get_proof("P2")
    start, target = proof.endpoints()
    text = json.dumps(script_to_dict(start, proof.steps, target))
    s2, steps, t2 = load_script(text)
    assert s2 == start and t2 == target
    assert run_script(s2, steps).end.iso_equal(target)


def test_unfuse_then_fuse_returns_to_start():
    d = Diagram.z(1, 1)
    steps = [
        Step("S1", "<-", {"p": ZERO, "q": ZERO, "n1": 1, "m1": 0, "k": 1, "n2": 0, "m2": 1},
             names={"a": "x", "b": "y"}),
        Step("S1", "->", {"n1": 1, "m1": 0, "k": 1, "n2": 0, "m2": 1}, at={"a": "x", "b": "y"}),
    ]
    assert run_script(d, steps).end.iso_equal(d)
