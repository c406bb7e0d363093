import pytest
from conftest import random_host

from qutritzx.diagram import Diagram, Kind, Node
from qutritzx.phases import ZERO, PhasePair
from qutritzx.rules import (
    RewriteRule,
    StaleMatch,
    apply,
    apply_rule,
    certify_rule,
    find_matches,
    get_rule,
    rule_catalog,
)
from qutritzx.rules.catalog import base_rules
from qutritzx.semantics import interpret, proportional_eq

BASE = ["S1", "S1r", "S2", "S3", "B1", "B2", "K1", "K2", "H1", "H2", "H2'", "P1"]


def test_base_rules_are_the_twelve_named_rules():
    assert [r.name for r in base_rules()] == BASE
    names = {r.name for r in rule_catalog()}
    assert {"P2", "hopf", "dualizers", "copy-variant.cs", "euler-h"} <= names


@pytest.mark.parametrize("name", BASE)
def test_base_rule_is_sound(name):
    report = certify_rule(get_rule(name), arity_bound=3, random_trials=5)
    assert report.ok, report.failure


@pytest.mark.parametrize("rule", [r for r in rule_catalog() if r.origin != "base"], ids=lambda r: r.name)
def test_derived_rule_is_sound(rule):
    assert certify_rule(rule, arity_bound=3, random_trials=5).ok


def test_fusion_adds_phases():
    lhs, rhs = get_rule("S1").instantiate({"p": PhasePair.thirds(1, 0), "q": PhasePair.thirds(1, 2)})
    assert rhs.nodes["a"].phase == PhasePair.thirds(2, 2)


def _corrupt(rule: RewriteRule) -> RewriteRule:
    """Shift the phase of every rhs spider by 2pi/3 on its first component."""

    def build(**params):
        lhs, rhs = rule.build(**params)
        bump = PhasePair.thirds(1, 0)
        nodes = {v: Node(n.kind, n.phase + bump) for v, n in rhs.nodes.items() if n.kind.is_spider}
        return lhs, rhs.with_nodes(nodes)

    return RewriteRule(rule.name + "-corrupt", build, rule.phase_params, rule.shapes, rule.arbitrary_angles)


def test_corrupted_rule_is_rejected_with_matrices():
    report = certify_rule(_corrupt(get_rule("S1")), arity_bound=2)
    assert not report.ok
    assert {"lhs_matrix", "rhs_matrix", "lhs", "rhs", "params"} <= set(report.failure)


def test_match_on_lhs_itself():
    rule = get_rule("B2")
    lhs, _ = rule.instantiate()
    assert find_matches(lhs, rule)


def test_two_disjoint_copies_give_two_matches():
    lhs, _ = get_rule("P1").instantiate()
    matches = find_matches(lhs.tensor(lhs), get_rule("P1"))
    assert len(matches) >= 2
    assert matches == sorted(matches, key=lambda m: m.sort_key())


def test_no_green_nodes_no_match():
    host = Diagram.x(1, 1).compose(Diagram.hadamard())
    assert find_matches(host, get_rule("S2")) == []


def test_s2_removes_phase_free_spider():
    host = Diagram.hadamard().compose(Diagram.z()).compose(Diagram.hadamard(dagger=True))
    out, m = apply_rule(host, get_rule("S2"))
    assert len(out.nodes) == 2
    assert proportional_eq(interpret(out), interpret(host))


def test_s2_does_not_touch_phased_spider():
    host = Diagram.z(1, 1, PhasePair.thirds(1, 0))
    assert find_matches(host, get_rule("S2")) == []


def test_hopf_disconnects_triple_wiring():
    host = Diagram.hadamard().compose(get_rule("hopf").instantiate()[0]).compose(Diagram.hadamard())
    out, _ = apply_rule(host, get_rule("hopf"))
    assert proportional_eq(interpret(out), interpret(host))
    # the input side ends in a bra, the output side starts at a ket
    kinds = sorted(n.kind.value for n in out.nodes.values())
    assert kinds == ["H", "H", "X", "Z"]


def test_double_wire_is_not_a_hopf_site():
    double = Diagram(
        {"g": Node.z(), "r": Node.x()},
        [("in:0", "g"), ("g", "r"), ("g", "r"), ("r", "out:0")],
        1,
        1,
    )
    assert find_matches(double, get_rule("hopf")) == []


def test_forward_then_backward_round_trip():
    host = Diagram.z(1, 2).compose(Diagram.x(2, 1))
    rule = get_rule("P1")
    m = find_matches(host, rule)[0]
    mid = apply(host, m)
    back = find_matches(mid, rule, direction="<-")
    assert back
    assert apply(mid, back[0]).iso_equal(host)


def test_stale_match_is_refused():
    host = Diagram.z(1, 1).compose(Diagram.z(1, 1))
    m = find_matches(host, get_rule("S2"))[0]
    changed = host.with_nodes({m.nodes["s"]: Node.z(PhasePair.thirds(1, 1))})
    with pytest.raises(StaleMatch):
        apply(changed, m)


def test_phase_parameters_are_read_from_the_host():
    p = PhasePair.thirds(2, 1)
    host = Diagram.z(1, 1, p).compose(Diagram.z(1, 1, p))
    matches = find_matches(host, get_rule("S1"), arity_bound=2)
    out = apply(host, matches[0])
    assert [n.phase for n in out.nodes.values()] == [p + p]


def test_apply_preserves_semantics_on_random_hosts(rng):
    rules = rule_catalog()
    applied = 0
    for _ in range(200):
        host = random_host(rng)
        for _ in range(10):
            rule = rng.choice(rules)
            direction = rng.choice(["->", "<-"])
            matches = find_matches(host, rule, direction=direction, arity_bound=3)
            if matches:
                out = apply(host, rng.choice(matches))
                assert proportional_eq(interpret(out), interpret(host)), (rule.name, direction)
                applied += 1
                break
    assert applied > 100
