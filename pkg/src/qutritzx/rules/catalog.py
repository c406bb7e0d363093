"""The rule catalog: the twelve base equations and the derived lemmas.

Each builder returns ``(lhs, rhs)`` with pattern node ids chosen to be
readable in derivation scripts.  Wires run top to bottom; ``in:k`` /
``out:k`` are the pattern boundary.
"""

from __future__ import annotations

from typing import Iterator

from ..diagram import Diagram, Kind, Node, in_port, out_port
from ..phases import ZERO, PhasePair
from ..graphstate import Multigraph, graph_state_diagram, local_complement, phase_layer
from .rule import RewriteRule

__all__ = ["base_rules", "derived_rules", "helper_rules", "rule_catalog", "get_rule", "PAULI_SHIFTS"]

Z, X, H, HD = Kind.Z, Kind.X, Kind.H, Kind.HDAG

# red phase pairs acting as the cyclic shifts |j> -> |j-1> and |j> -> |j+1>
PAULI_SHIFTS = (PhasePair.thirds(1, 2), PhasePair.thirds(2, 1))


def _d(nodes: dict, wires: list, n_in: int, n_out: int) -> Diagram:
    return Diagram(nodes, wires, n_in, n_out)


def _chain(kinds: list[tuple[str, Node]]) -> Diagram:
    """A single wire through the given (id, node) list, top to bottom."""
    nodes = dict(kinds)
    ids = [in_port(0)] + [k for k, _ in kinds] + [out_port(0)]
    return _d(nodes, list(zip(ids, ids[1:])), 1, 1)


# -- base equations -----------------------------------------------------------


def _fusion(kind: Kind):
    def build(p, q, n1=1, m1=0, n2=0, m2=1, k=1):
        nodes = {"a": Node(kind, p), "b": Node(kind, q)}
        wires = [(in_port(i), "a") for i in range(n1)]
        wires += [(in_port(n1 + i), "b") for i in range(n2)]
        wires += [("a", "b")] * k
        wires += [("a", out_port(i)) for i in range(m1)]
        wires += [("b", out_port(m1 + i)) for i in range(m2)]
        lhs = _d(nodes, wires, n1 + n2, m1 + m2)
        rhs = Diagram.spider(kind, n1 + n2, m1 + m2, p + q).relabel({"s": "a"})
        return lhs, rhs

    return build


def _fusion_shapes(bound: int) -> Iterator[dict]:
    for k in range(1, bound + 1):
        for n1 in range(bound - k + 1):
            for m1 in range(bound - k - n1 + 1):
                for n2 in range(bound - k + 1):
                    for m2 in range(bound - k - n2 + 1):
                        yield {"n1": n1, "m1": m1, "n2": n2, "m2": m2, "k": k}


def _s2():
    return Diagram.z(1, 1), Diagram.identity(1)


def _s3():
    lhs = _d({"c": Node.z()}, [("c", out_port(0)), ("c", out_port(1))], 0, 2)
    swapped = Diagram.cup(Z).relabel({"s": "c"}).compose(Diagram.permutation([1, 0]))
    return lhs, swapped


def _b1():
    lhs = _d(
        {"r": Node.x(), "g": Node.z()},
        [("r", "g"), ("g", out_port(0)), ("g", out_port(1))],
        0,
        2,
    )
    rhs = _d({"r1": Node.x(), "r2": Node.x()}, [("r1", out_port(0)), ("r2", out_port(1))], 0, 2)
    return lhs, rhs


def _b2():
    lhs = _d(
        {"r": Node.x(), "g": Node.z()},
        [(in_port(0), "r"), (in_port(1), "r"), ("r", "g"), ("g", out_port(0)), ("g", out_port(1))],
        2,
        2,
    )
    rhs = _d(
        {"g1": Node.z(), "g2": Node.z(), "r1": Node.x(), "r2": Node.x()},
        [
            (in_port(0), "g1"),
            (in_port(1), "g2"),
            ("g1", "r1"),
            ("g1", "r2"),
            ("g2", "r1"),
            ("g2", "r2"),
            ("r1", out_port(0)),
            ("r2", out_port(1)),
        ],
        2,
        2,
    )
    return lhs, rhs


def _k1(shift=PAULI_SHIFTS[0], m=2):
    """A red shift above a phase-free green spider is copied onto every output."""
    lhs = _d(
        {"x": Node.x(shift), "g": Node.z()},
        [(in_port(0), "x"), ("x", "g")] + [("g", out_port(i)) for i in range(m)],
        1,
        m,
    )
    nodes = {"g": Node.z()}
    wires = [(in_port(0), "g")]
    for i in range(m):
        nodes[f"x{i}"] = Node.x(shift)
        wires += [("g", f"x{i}"), (f"x{i}", out_port(i))]
    return lhs, _d(nodes, wires, 1, m)


def _k1_shapes(bound: int) -> Iterator[dict]:
    for shift in PAULI_SHIFTS:
        for m in range(bound):
            yield {"shift": shift, "m": m}


def _shifted_phase(p: PhasePair, shift: PhasePair) -> PhasePair:
    """Green phase q with Z(p) . S = S . Z(q) for the red shift S."""
    if shift == PAULI_SHIFTS[0]:
        return PhasePair(-p.beta, p.alpha - p.beta)
    if shift == PAULI_SHIFTS[1]:
        return PhasePair(p.beta - p.alpha, -p.alpha)
    raise ValueError(f"{shift} is not a red shift")


def _k2(p, shift=PAULI_SHIFTS[0]):
    lhs = _chain([("x", Node.x(shift)), ("g", Node.z(p))])
    rhs = _chain([("g", Node.z(_shifted_phase(p, shift))), ("x", Node.x(shift))])
    return lhs, rhs


def _k2_shapes(bound: int) -> Iterator[dict]:
    for shift in PAULI_SHIFTS:
        yield {"shift": shift}


def _h1():
    return _chain([("h", Node(H)), ("k", Node(HD))]), Diagram.identity(1)


def _colour_change(in_box: Kind, out_box: Kind, swap: bool):
    def build(p, n=1, m=1):
        nodes = {"g": Node.z(p)}
        wires = []
        for i in range(n):
            nodes[f"i{i}"] = Node(in_box)
            wires += [(in_port(i), f"i{i}"), (f"i{i}", "g")]
        for j in range(m):
            nodes[f"o{j}"] = Node(out_box)
            wires += [("g", f"o{j}"), (f"o{j}", out_port(j))]
        lhs = _d(nodes, wires, n, m)
        rhs = Diagram.x(n, m, p.swap_components() if swap else p).relabel({"s": "g"})
        return lhs, rhs

    return build


def _spider_shapes(bound: int) -> Iterator[dict]:
    for n in range(bound + 1):
        for m in range(bound + 1 - n):
            yield {"n": n, "m": m}


def _copy_cocopy(top: Kind, bottom: Kind) -> Diagram:
    return _d(
        {"t": Node(top), "b": Node(bottom)},
        [(in_port(0), "t"), ("t", "b"), ("t", "b"), ("b", out_port(0))],
        1,
        1,
    )


def _hh():
    return _chain([("h1", Node(H)), ("h2", Node(H))])


def _p1():
    return _copy_cocopy(Z, X), _hh()


def base_rules() -> list[RewriteRule]:
    """The twelve base equations of the calculus."""
    return [
        RewriteRule(
            "S1",
            _fusion(Z),
            ("p", "q"),
            _fusion_shapes,
            True,
            note="green spiders joined by one or more wires fuse; phases add",
        ),
        RewriteRule(
            "S1r",
            _fusion(X),
            ("p", "q"),
            _fusion_shapes,
            True,
            note="red spiders joined by one or more wires fuse; phases add",
        ),
        RewriteRule("S2", _s2, note="a phase-free green (1,1) spider is a plain wire"),
        RewriteRule("S3", _s3, note="the green cup is symmetric"),
        RewriteRule("B1", _b1, note="green copy of the red ket"),
        RewriteRule("B2", _b2, note="bialgebra"),
        RewriteRule("K1", _k1, shapes=_k1_shapes, note="red shifts copy through green spiders"),
        RewriteRule(
            "K2",
            _k2,
            ("p",),
            _k2_shapes,
            True,
            note="a green phase commutes past a red shift, permuting its levels",
        ),
        RewriteRule("H1", _h1, note="H followed by H-dagger is the identity"),
        RewriteRule(
            "H2",
            _colour_change(HD, H, swap=False),
            ("p",),
            _spider_shapes,
            True,
            note="H-dagger on inputs and H on outputs turn green (a,b) into red (a,b)",
        ),
        RewriteRule(
            "H2'",
            _colour_change(H, HD, swap=True),
            ("p",),
            _spider_shapes,
            True,
            note="H on inputs and H-dagger on outputs turn green (a,b) into red (b,a)",
        ),
        RewriteRule("P1", _p1, note="green copy then red co-copy is H squared"),
    ]


# -- derived equations ------------------------------------------------------------


def _p2():
    return _copy_cocopy(X, Z), _hh()


def _snake(cup: Kind, cap: Kind) -> Diagram:
    """A wire bent by a cap (left) and a cup (right)."""
    return _d(
        {"c": Node(cup), "k": Node(cap)},
        [(in_port(0), "k"), ("c", "k"), ("c", out_port(0))],
        1,
        1,
    )


def _same_colour_loop():
    return _snake(Z, Z), Diagram.identity(1)


def _dualizers():
    return _snake(Z, X), _snake(X, Z)


def _h_slide(dagger=False):
    box = Node(HD if dagger else H)
    lhs = _d({"c": Node.z(), "h": box}, [("c", "h"), ("h", out_port(0)), ("c", out_port(1))], 0, 2)
    rhs = _d({"c": Node.z(), "h": box}, [("c", out_port(0)), ("c", "h"), ("h", out_port(1))], 0, 2)
    return lhs, rhs


def _h_slide_shapes(bound: int) -> Iterator[dict]:
    yield {"dagger": False}
    yield {"dagger": True}


def _different_colour_loop():
    return _snake(Z, X), _hh()


def _rotation(p):
    lhs = _d(
        {"c": Node.x(), "g": Node.z(p)},
        [("c", "g"), ("g", out_port(0)), ("c", out_port(1))],
        0,
        2,
    )
    rhs = _d(
        {"c": Node.x(), "g": Node.z(p.swap_components())},
        [("c", out_port(0)), ("c", "g"), ("g", out_port(1))],
        0,
        2,
    )
    return lhs, rhs


def _copy_variant(p, n=1, m=2):
    """A red ket on one input of any green spider disconnects it."""
    nodes = {"r": Node.x(), "g": Node.z(p)}
    wires = [("r", "g")]
    wires += [(in_port(i), "g") for i in range(n - 1)]
    wires += [("g", out_port(j)) for j in range(m)]
    lhs = _d(nodes, wires, n - 1, m)
    rn, rw = {}, []
    for i in range(n - 1):
        rn[f"e{i}"] = Node.x()
        rw.append((in_port(i), f"e{i}"))
    for j in range(m):
        rn[f"k{j}"] = Node.x()
        rw.append((f"k{j}", out_port(j)))
    return lhs, _d(rn, rw, n - 1, m)


def _copy_shapes(bound: int) -> Iterator[dict]:
    for n in range(1, bound + 1):
        for m in range(bound + 1 - n):
            yield {"n": n, "m": m}


def _hopf():
    lhs = _d(
        {"g": Node.z(), "r": Node.x()},
        [(in_port(0), "g")] + [("g", "r")] * 3 + [("r", out_port(0))],
        1,
        1,
    )
    rhs = _d({"e": Node.z(), "k": Node.x()}, [(in_port(0), "e"), ("k", out_port(0))], 1, 1)
    return lhs, rhs


def _copy_flip():
    return _copy_cocopy(Z, X), _copy_cocopy(X, Z)


def _copy_commutes():
    lhs = Diagram.z(1, 2).relabel({"s": "g"})
    rhs = lhs.compose(Diagram.permutation([1, 0]))
    return lhs, rhs


def _cnot_reversal():
    """Green-to-red CNOT equals red-to-green CNOT through a dualizer."""
    lhs = _d(
        {"g": Node.z(), "r": Node.x()},
        [(in_port(0), "g"), ("g", out_port(0)), ("g", "r"), (in_port(1), "r"), ("r", out_port(1))],
        2,
        2,
    )
    rhs = _d(
        {"g": Node.z(), "r": Node.x(), "h1": Node(H), "h2": Node(H)},
        [
            (in_port(1), "r"),
            ("r", out_port(1)),
            ("r", "h1"),
            ("h1", "h2"),
            ("h2", "g"),
            (in_port(0), "g"),
            ("g", out_port(0)),
        ],
        2,
        2,
    )
    return lhs, rhs


def _bialgebra_flip():
    lhs, rhs = _b2()
    return lhs.adjoint(), rhs.adjoint()


def _cz_gadget(box: Kind, reverse: bool = False) -> Diagram:
    """Two green dots on wires 0 and 1 joined through ``box``."""
    top, bot = ("b", "a") if reverse else ("a", "b")
    nodes = {"a": Node.z(), "b": Node.z(), "e": Node(box)}
    wires = [
        (in_port(0), "a"),
        ("a", out_port(0)),
        (in_port(1), "b"),
        ("b", out_port(1)),
        (top, "e"),
        ("e", bot),
    ]
    return _d(nodes, wires, 2, 2)


def _cz(dagger=False):
    box = HD if dagger else H
    return _cz_gadget(box), _cz_gadget(box, reverse=True)


def _cz_twice(dagger=False):
    box = HD if dagger else H
    other = H if dagger else HD
    return _cz_gadget(box).compose(_cz_gadget(box)), _cz_gadget(other)


def _hdag_h():
    return _chain([("k", Node(HD)), ("h", Node(H))]), Diagram.identity(1)


EULER = PhasePair.thirds(2, 2)
EULER_DAG = PhasePair.thirds(1, 1)


def _rotations(colours: str, phase: PhasePair) -> Diagram:
    return _chain([(f"{c.lower()}{i}", Node(Kind(c), phase)) for i, c in enumerate(colours)])


def _euler_h():
    return Diagram.hadamard().relabel({"h": "h0"}), _rotations("ZXZ", EULER)


def _euler_h_alt():
    return Diagram.hadamard().relabel({"h": "h0"}), _rotations("XZX", EULER)


def _euler_hdag():
    return Diagram.hadamard(dagger=True).relabel({"h": "h0"}), _rotations("ZXZ", EULER_DAG)


def _euler_hdag_alt():
    return Diagram.hadamard(dagger=True).relabel({"h": "h0"}), _rotations("XZX", EULER_DAG)


def _rotation_change():
    lhs = _chain([("z", Node.z(EULER))])
    rhs = _chain([("x0", Node.x(EULER_DAG)), ("h", Node(H)), ("x1", Node.x(EULER_DAG))])
    return lhs, rhs


def _h_loop(p, dagger=False, n=1, m=1):
    """A green spider wired to itself through H gains the phase (1,1); through H-dagger (2,2)."""
    nodes = {"g": Node.z(p), "h": Node(HD if dagger else H)}
    wires = [(in_port(i), "g") for i in range(n)] + [("g", out_port(j)) for j in range(m)]
    lhs = _d(nodes, wires + [("g", "h"), ("h", "g")], n, m)
    shift = EULER_DAG if not dagger else EULER
    return lhs, Diagram.z(n, m, p + shift).relabel({"s": "g"})


def _h_loop_shapes(bound: int) -> Iterator[dict]:
    for dagger in (False, True):
        for shape in _spider_shapes(bound - 2):
            yield {"dagger": dagger, **shape}


def _red_effect_absorb(p, q=EULER, n=1, m=1):
    """A red effect with phase (2,2) or (1,1) on an extra output of a green spider is a phase."""
    gained = {EULER: EULER_DAG, EULER_DAG: EULER}[q]
    nodes = {"g": Node.z(p), "r": Node.x(q)}
    wires = [(in_port(i), "g") for i in range(n)] + [("g", out_port(j)) for j in range(m)]
    lhs = _d(nodes, wires + [("g", "r")], n, m)
    return lhs, Diagram.z(n, m, p + gained).relabel({"s": "g"})


def _red_effect_shapes(bound: int) -> Iterator[dict]:
    for q in (EULER, EULER_DAG):
        for shape in _spider_shapes(bound - 1):
            yield {"q": q, **shape}


# the triangle v-u-w with weights uv = uw = 1, vw = 2, listed in the order (v, u, w)
_TRIANGLE = Multigraph.from_edges(3, [(0, 1, 1), (1, 2, 1), (0, 2, 2)])


def _lc_triangle():
    """Local complementation at u of the triangle removes the v-w edge.

    The local layer is X(2,2) on u and Z(1,1) on v and w.
    """
    layer = [(("Z", EULER_DAG),), (("X", EULER),), (("Z", EULER_DAG),)]
    lhs = graph_state_diagram(_TRIANGLE).compose(phase_layer(layer).relabel({"s": "l0", "s'": "l1", "s''": "l2"}))
    rhs = graph_state_diagram(local_complement(_TRIANGLE, 1, 1))
    return lhs, rhs


def helper_rules() -> list[RewriteRule]:
    """Phase-absorption lemmas and the local complementation hypothesis used in scripts."""
    return [
        RewriteRule("h-loop", _h_loop, ("p",), _h_loop_shapes, True, "helper",
                    "an H self-loop on a green spider is the phase (1,1)"),
        RewriteRule("red-effect-absorb", _red_effect_absorb, ("p",), _red_effect_shapes, True, "helper",
                    "a red (2,2) or (1,1) effect on a green spider is a green phase"),
        RewriteRule("lc-triangle", _lc_triangle, origin="hypothesis",
                    note="local complementation of the H/H/H-dagger triangle"),
    ]


def derived_rules() -> list[RewriteRule]:
    """Equations proved from the base rules, plus their asserted variants."""
    d = "derived"
    copy = RewriteRule("copy-variant", _copy_variant, ("p",), _copy_shapes, True, d,
                       "a red ket on an input of a green spider disconnects it")
    rotation = RewriteRule("rotation-slide", _rotation, ("p",), arbitrary_angles=True, origin=d,
                           note="green (a,b) slides across a red cup becoming (b,a)")
    hslide = RewriteRule("h-slide", _h_slide, shapes=_h_slide_shapes, origin=d,
                         note="H and H-dagger slide along a green cup")
    rules = [
        RewriteRule("P2", _p2, origin=d, note="red copy then green co-copy is H squared"),
        RewriteRule("same-colour-loop", _same_colour_loop, origin=d, note="a same-colour snake is a wire"),
        RewriteRule("dualizers", _dualizers, origin=d, note="the two mixed-colour dualizers coincide"),
        hslide,
        RewriteRule("different-colour-loop", _different_colour_loop, origin=d,
                    note="a mixed-colour snake is H squared"),
        rotation,
        copy,
        RewriteRule("hopf", _hopf, origin=d, note="three parallel wires between green and red disconnect"),
        RewriteRule("copy-flip", _copy_flip, origin=d,
                    note="green copy into red co-copy equals its upside-down form"),
        RewriteRule("copy-commutes", _copy_commutes, origin=d, note="the green copy is commutative"),
        RewriteRule("cnot-reversal", _cnot_reversal, origin=d,
                    note="no horizontal CNOT: reversing the connecting wire inserts a dualizer"),
        RewriteRule("bialgebra-flip", _bialgebra_flip, origin=d, note="upside-down bialgebra"),
        RewriteRule("cz", _cz, shapes=_h_slide_shapes, origin=d,
                    note="the controlled-Z gadget is symmetric in its two wires"),
        RewriteRule("cz-twice", _cz_twice, shapes=_h_slide_shapes, origin=d,
                    note="two weight-w gadgets make one weight-2w gadget"),
        RewriteRule("hdag-h", _hdag_h, origin=d, note="H-dagger followed by H is the identity"),
        RewriteRule("euler-h", _euler_h, origin=d, note="H = Z(2,2) X(2,2) Z(2,2)"),
        RewriteRule("euler-h-alt", _euler_h_alt, origin=d, note="H = X(2,2) Z(2,2) X(2,2)"),
        RewriteRule("euler-hdag", _euler_hdag, origin=d, note="H-dagger = Z(1,1) X(1,1) Z(1,1)"),
        RewriteRule("euler-hdag-alt", _euler_hdag_alt, origin=d, note="H-dagger = X(1,1) Z(1,1) X(1,1)"),
        RewriteRule("rotation-change", _rotation_change, origin=d,
                    note="Z(2,2) = X(1,1) H X(1,1)"),
    ]
    # variants asserted alongside the lemmas
    rules += [
        hslide.color_swapped(),
        hslide.upside_down(),
        rotation.color_swapped(),
        rotation.upside_down(),
        copy.color_swapped(),
        copy.upside_down(),
    ]
    rules += [r.color_swapped() for r in rules if r.name in ("hopf", "same-colour-loop", "bialgebra-flip")]
    return rules


def rule_catalog() -> list[RewriteRule]:
    return base_rules() + derived_rules() + helper_rules()


_INDEX: dict[str, RewriteRule] | None = None


def get_rule(name: str) -> RewriteRule:
    global _INDEX
    if _INDEX is None:
        _INDEX = {r.name: r for r in rule_catalog()}
    try:
        return _INDEX[name]
    except KeyError:
        raise KeyError(f"unknown rule {name!r}") from None
