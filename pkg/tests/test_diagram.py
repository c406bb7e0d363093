import numpy as np
import pytest
from conftest import HADAMARD, random_host

from qutritzx.diagram import Diagram, DiagramError, Kind, Node
from qutritzx.phases import PhasePair
from qutritzx.semantics import SemMatrix, equal_exact, interpret, proportional_eq


def test_port_degree_is_checked():
    with pytest.raises(DiagramError):
        Diagram({"g": Node.z()}, [("in:0", "g"), ("in:0", "g")], 1, 0)
    with pytest.raises(DiagramError):
        Diagram({"g": Node.z()}, [("g", "out:0")], 0, 2)


def test_hadamard_nodes_are_binary():
    with pytest.raises(DiagramError):
        Diagram({"h": Node(Kind.H)}, [("in:0", "h")], 1, 0)


def test_bad_node_ids_and_phases():
    with pytest.raises(DiagramError):
        Diagram({"in:3": Node.z()}, [], 0, 0)
    with pytest.raises(DiagramError):
        Node(Kind.H, PhasePair.thirds(1, 0))


def test_compose_renames_clashing_ids():
    d = Diagram.z().compose(Diagram.z())
    assert len(d.nodes) == 2
    assert d.signature == (1, 1)


def test_tensor_and_compose_signatures():
    d = Diagram.z(1, 2).tensor(Diagram.hadamard())
    assert d.signature == (2, 3)
    with pytest.raises(DiagramError):
        d.compose(Diagram.identity(2))


def test_identity_and_permutation():
    assert equal_exact(interpret(Diagram.identity(2)), SemMatrix.identity(2))
    swap = interpret(Diagram.permutation([1, 0])).complex_array()
    e = np.eye(3)
    expect = sum(np.outer(np.kron(e[a], e[b]), np.kron(e[b], e[a])) for a in range(3) for b in range(3))
    assert np.allclose(swap, expect)


def test_cup_and_cap_bend_wires():
    # (cap (x) id) . (id (x) cup) is the identity
    snake = Diagram.identity(1).tensor(Diagram.cup()).compose(Diagram.cap().tensor(Diagram.identity(1)))
    assert proportional_eq(interpret(snake), SemMatrix.identity(1))


def test_adjoint_reverses_and_conjugates(rng):
    d = Diagram.hadamard().compose(Diagram.z(1, 2, PhasePair.thirds(1, 2)))
    a = d.adjoint()
    assert a.signature == (2, 1)
    assert equal_exact(interpret(a), interpret(d).dagger())
    assert d.adjoint().adjoint().iso_equal(d)


def test_colour_swap_conjugates_by_hadamard(rng):
    H = interpret(Diagram.hadamard()).complex_array()
    for _ in range(25):
        d = random_host(rng)
        m = interpret(d).complex_array()
        left = _kron_power(HADAMARD, d.n_outputs)
        right = _kron_power(HADAMARD.conj(), d.n_inputs)
        target = left @ m @ right
        got = interpret(d.color_swap()).complex_array()
        k = np.unravel_index(np.argmax(np.abs(target)), target.shape)
        assert np.allclose(got / got[k], target / target[k])
        assert d.color_swap().inverse_color_swap().iso_equal(d)
    assert np.allclose(H, HADAMARD)


def _kron_power(m, n):
    out = np.eye(1)
    for _ in range(n):
        out = np.kron(out, m)
    return out


def test_iso_equal_ignores_names_only():
    a = Diagram.z(1, 2).relabel({"s": "p"})
    b = Diagram.z(1, 2).relabel({"s": "q"})
    assert a.iso_equal(b)
    assert not a.iso_equal(Diagram.x(1, 2))
    assert not a.iso_equal(Diagram.z(1, 2, PhasePair.thirds(1, 0)))


def test_iso_equal_respects_port_order():
    d = Diagram({"h": Node(Kind.H)}, [("in:0", "h"), ("h", "out:1"), ("in:1", "out:0")], 2, 2)
    e = Diagram({"h": Node(Kind.H)}, [("in:0", "h"), ("h", "out:0"), ("in:1", "out:1")], 2, 2)
    assert not d.iso_equal(e)


def test_json_round_trip(rng):
    for _ in range(20):
        d = random_host(rng)
        back = Diagram.from_json(d.to_json())
        assert back == d


def test_parse_errors_carry_location():
    with pytest.raises(DiagramError, match="line 2"):
        Diagram.from_json('{\n  "nodes": ,\n}')
    with pytest.raises(DiagramError, match="kind"):
        Diagram.from_json('{"nodes": {"a": {"kind": "Y"}}, "wires": [], "inputs": 0, "outputs": 0}')
    with pytest.raises(DiagramError, match="lacks"):
        Diagram.from_json('{"nodes": {}}')


def test_dot_export_mentions_every_node():
    d = Diagram.hadamard().compose(Diagram.x(1, 2))
    dot = d.to_dot()
    assert dot.startswith("digraph")
    for v in d.nodes:
        assert f'"{v}"' in dot
