"""Open-graph representation of qutrit ZX diagrams.

A diagram is a set of nodes (green spiders ``Z``, red spiders ``X``, and the
Hadamard boxes ``H`` / ``Hdag``) joined by directed wires.  Wires run from an
output leg to an input leg, i.e. top to bottom; ``"in:k"`` and ``"out:k"``
name the boundary ports.  Cups and caps are ``(0, 2)`` and ``(2, 0)`` spiders.

Direction matters only for red spiders: transposing a red spider exchanges its
two phase components, so the IR keeps track of which legs are inputs.
"""

from __future__ import annotations

import json
import re
from collections import Counter
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Mapping

import networkx as nx
from networkx.algorithms.isomorphism import MultiDiGraphMatcher

from .phases import ZERO, PhasePair

__all__ = [
    "Kind",
    "Node",
    "Diagram",
    "DiagramError",
    "is_boundary",
    "boundary_index",
    "in_port",
    "out_port",
]

_PORT_RE = re.compile(r"^(in|out):(\d+)$")


class DiagramError(ValueError):
    pass


class Kind(str, Enum):
    Z = "Z"
    X = "X"
    H = "H"
    HDAG = "Hdag"

    @property
    def is_spider(self) -> bool:
        return self in (Kind.Z, Kind.X)


@dataclass(frozen=True)
class Node:
    kind: Kind
    phase: PhasePair | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "kind", Kind(self.kind))
        if self.kind.is_spider:
            if self.phase is None:
                object.__setattr__(self, "phase", ZERO)
        elif self.phase is not None:
            raise DiagramError(f"{self.kind.value} nodes carry no phase")

    @classmethod
    def z(cls, phase: PhasePair = ZERO) -> Node:
        return cls(Kind.Z, phase)

    @classmethod
    def x(cls, phase: PhasePair = ZERO) -> Node:
        return cls(Kind.X, phase)

    def label(self) -> str:
        if self.kind.is_spider:
            return f"{self.kind.value}{self.phase}" if not self.phase.is_zero() else self.kind.value
        return self.kind.value


def in_port(k: int) -> str:
    return f"in:{k}"


def out_port(k: int) -> str:
    return f"out:{k}"


def is_boundary(end: str) -> bool:
    return _PORT_RE.match(end) is not None


def boundary_index(end: str) -> tuple[str, int]:
    m = _PORT_RE.match(end)
    if m is None:
        raise DiagramError(f"{end!r} is not a boundary port")
    return m.group(1), int(m.group(2))


class Diagram:
    """Immutable open graph with ``n_inputs`` input and ``n_outputs`` output ports."""

    __slots__ = ("_nodes", "_wires", "n_inputs", "n_outputs", "_ins", "_outs")

    def __init__(
        self,
        nodes: Mapping[str, Node],
        wires: Iterable[tuple[str, str]],
        n_inputs: int = 0,
        n_outputs: int = 0,
    ) -> None:
        self._nodes = dict(nodes)
        self._wires = tuple((str(s), str(d)) for s, d in wires)
        self.n_inputs = int(n_inputs)
        self.n_outputs = int(n_outputs)
        self._ins: dict[str, list[int]] = {v: [] for v in self._nodes}
        self._outs: dict[str, list[int]] = {v: [] for v in self._nodes}
        self._validate()

    def _validate(self) -> None:
        for v, node in self._nodes.items():
            if is_boundary(v) or not v:
                raise DiagramError(f"illegal node id {v!r}")
            if not isinstance(node, Node):
                raise DiagramError(f"node {v!r} is not a Node")
        seen_in: Counter = Counter()
        seen_out: Counter = Counter()
        for i, (s, d) in enumerate(self._wires):
            if is_boundary(s):
                side, k = boundary_index(s)
                if side != "in" or k >= self.n_inputs:
                    raise DiagramError(f"wire {i} starts at {s!r}, not an input port")
                seen_in[k] += 1
            elif s in self._nodes:
                self._outs[s].append(i)
            else:
                raise DiagramError(f"wire {i} starts at unknown node {s!r}")
            if is_boundary(d):
                side, k = boundary_index(d)
                if side != "out" or k >= self.n_outputs:
                    raise DiagramError(f"wire {i} ends at {d!r}, not an output port")
                seen_out[k] += 1
            elif d in self._nodes:
                self._ins[d].append(i)
            else:
                raise DiagramError(f"wire {i} ends at unknown node {d!r}")
        for k in range(self.n_inputs):
            if seen_in[k] != 1:
                raise DiagramError(f"input port {k} has degree {seen_in[k]}, expected 1")
        for k in range(self.n_outputs):
            if seen_out[k] != 1:
                raise DiagramError(f"output port {k} has degree {seen_out[k]}, expected 1")
        for v, node in self._nodes.items():
            if not node.kind.is_spider and (len(self._ins[v]) != 1 or len(self._outs[v]) != 1):
                raise DiagramError(f"{node.kind.value} node {v!r} must have one input and one output")

    # -- accessors -----------------------------------------------------

    @property
    def nodes(self) -> Mapping[str, Node]:
        return self._nodes

    @property
    def wires(self) -> tuple[tuple[str, str], ...]:
        return self._wires

    @property
    def signature(self) -> tuple[int, int]:
        return (self.n_inputs, self.n_outputs)

    def in_wires(self, v: str) -> list[int]:
        return self._ins[v]

    def out_wires(self, v: str) -> list[int]:
        return self._outs[v]

    def degree(self, v: str) -> int:
        return len(self._ins[v]) + len(self._outs[v])

    def input_wire(self, k: int) -> int:
        port = in_port(k)
        return next(i for i, (s, _) in enumerate(self._wires) if s == port)

    def output_wire(self, k: int) -> int:
        port = out_port(k)
        return next(i for i, (_, d) in enumerate(self._wires) if d == port)

    def neighbours(self, v: str) -> list[str]:
        out = [self._wires[i][1] for i in self._outs[v]]
        out += [self._wires[i][0] for i in self._ins[v]]
        return out

    def phases(self) -> list[PhasePair]:
        return [n.phase for n in self._nodes.values() if n.kind.is_spider]

    def is_stabilizer(self) -> bool:
        return all(p.is_stabilizer() for p in self.phases())

    def fresh_id(self, stem: str = "n") -> str:
        k = 0
        while f"{stem}{k}" in self._nodes:
            k += 1
        return f"{stem}{k}"

    def __repr__(self) -> str:
        return (
            f"Diagram({len(self._nodes)} nodes, {len(self._wires)} wires, "
            f"signature={self.signature})"
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Diagram):
            return NotImplemented
        return (
            self._nodes == other._nodes
            and Counter(self._wires) == Counter(other._wires)
            and self.signature == other.signature
        )

    def __hash__(self) -> int:
        return hash((frozenset(self._nodes.items()), frozenset(Counter(self._wires).items()), self.signature))

    # -- constructors --------------------------------------------------

    @classmethod
    def empty(cls) -> Diagram:
        return cls({}, [], 0, 0)

    @classmethod
    def identity(cls, n: int = 1) -> Diagram:
        return cls({}, [(in_port(k), out_port(k)) for k in range(n)], n, n)

    @classmethod
    def permutation(cls, perm: list[int]) -> Diagram:
        """Wire input ``k`` to output ``perm[k]``."""
        if sorted(perm) != list(range(len(perm))):
            raise DiagramError(f"{perm} is not a permutation")
        return cls({}, [(in_port(k), out_port(p)) for k, p in enumerate(perm)], len(perm), len(perm))

    @classmethod
    def spider(cls, kind: Kind | str, n_in: int, n_out: int, phase: PhasePair = ZERO) -> Diagram:
        kind = Kind(kind)
        wires = [(in_port(k), "s") for k in range(n_in)] + [("s", out_port(k)) for k in range(n_out)]
        return cls({"s": Node(kind, phase)}, wires, n_in, n_out)

    @classmethod
    def z(cls, n_in: int = 1, n_out: int = 1, phase: PhasePair = ZERO) -> Diagram:
        return cls.spider(Kind.Z, n_in, n_out, phase)

    @classmethod
    def x(cls, n_in: int = 1, n_out: int = 1, phase: PhasePair = ZERO) -> Diagram:
        return cls.spider(Kind.X, n_in, n_out, phase)

    @classmethod
    def hadamard(cls, dagger: bool = False) -> Diagram:
        kind = Kind.HDAG if dagger else Kind.H
        return cls({"h": Node(kind)}, [(in_port(0), "h"), ("h", out_port(0))], 1, 1)

    @classmethod
    def cup(cls, kind: Kind | str = Kind.Z) -> Diagram:
        return cls.spider(kind, 0, 2)

    @classmethod
    def cap(cls, kind: Kind | str = Kind.Z) -> Diagram:
        return cls.spider(kind, 2, 0)

    # -- structural algebra --------------------------------------------

    def relabel(self, mapping: Mapping[str, str]) -> Diagram:
        def r(e: str) -> str:
            return e if is_boundary(e) else mapping.get(e, e)

        nodes = {r(v): n for v, n in self._nodes.items()}
        if len(nodes) != len(self._nodes):
            raise DiagramError("relabelling is not injective")
        return Diagram(nodes, [(r(s), r(d)) for s, d in self._wires], self.n_inputs, self.n_outputs)

    def _disjoint_from(self, other: Diagram) -> Diagram:
        """Rename this diagram's nodes so none clashes with ``other``."""
        taken = set(other._nodes)
        mapping = {}
        for v in self._nodes:
            w = v
            while w in taken:
                w = w + "'"
            taken.add(w)
            mapping[v] = w
        return self.relabel(mapping)

    def compose(self, other: Diagram) -> Diagram:
        """``other`` after ``self``: outputs of ``self`` feed inputs of ``other``."""
        if self.n_outputs != other.n_inputs:
            raise DiagramError(
                f"arity mismatch: {self.n_outputs} outputs vs {other.n_inputs} inputs"
            )
        g = other._disjoint_from(self)
        upper = {}
        wires = []
        for s, d in self._wires:
            if is_boundary(d):
                upper[boundary_index(d)[1]] = s
            else:
                wires.append((s, d))
        for s, d in g._wires:
            if is_boundary(s):
                wires.append((upper[boundary_index(s)[1]], d))
            else:
                wires.append((s, d))
        return Diagram({**self._nodes, **g._nodes}, wires, self.n_inputs, g.n_outputs)

    def then(self, *others: Diagram) -> Diagram:
        d = self
        for o in others:
            d = d.compose(o)
        return d

    def tensor(self, other: Diagram) -> Diagram:
        g = other._disjoint_from(self)

        def shift(e: str) -> str:
            if not is_boundary(e):
                return e
            side, k = boundary_index(e)
            return f"{side}:{k + (self.n_inputs if side == 'in' else self.n_outputs)}"

        wires = list(self._wires) + [(shift(s), shift(d)) for s, d in g._wires]
        return Diagram(
            {**self._nodes, **g._nodes},
            wires,
            self.n_inputs + g.n_inputs,
            self.n_outputs + g.n_outputs,
        )

    __matmul__ = tensor

    def adjoint(self) -> Diagram:
        """Upside-down mirror image: wires reversed, phases negated, H and H-dagger exchanged."""

        def flip(e: str) -> str:
            if not is_boundary(e):
                return e
            side, k = boundary_index(e)
            return out_port(k) if side == "in" else in_port(k)

        nodes = {}
        for v, n in self._nodes.items():
            if n.kind.is_spider:
                nodes[v] = Node(n.kind, n.phase.negate())
            else:
                nodes[v] = Node(Kind.HDAG if n.kind is Kind.H else Kind.H)
        wires = [(flip(d), flip(s)) for s, d in self._wires]
        return Diagram(nodes, wires, self.n_outputs, self.n_inputs)

    def color_swap(self) -> Diagram:
        """Exchange spider colours so that the interpretation is conjugated by H.

        Green (a, b) becomes red (a, b) and red (a, b) becomes green (b, a); the
        Hadamard boxes are unchanged.  The result denotes H^m . [[d]] . H^dag^n.
        """
        nodes = {}
        for v, n in self._nodes.items():
            if n.kind is Kind.Z:
                nodes[v] = Node(Kind.X, n.phase)
            elif n.kind is Kind.X:
                nodes[v] = Node(Kind.Z, n.phase.swap_components())
            else:
                nodes[v] = n
        return Diagram(nodes, self._wires, self.n_inputs, self.n_outputs)

    def inverse_color_swap(self) -> Diagram:
        nodes = {}
        for v, n in self._nodes.items():
            if n.kind is Kind.X:
                nodes[v] = Node(Kind.Z, n.phase)
            elif n.kind is Kind.Z:
                nodes[v] = Node(Kind.X, n.phase.swap_components())
            else:
                nodes[v] = n
        return Diagram(nodes, self._wires, self.n_inputs, self.n_outputs)

    def with_nodes(self, updates: Mapping[str, Node]) -> Diagram:
        return Diagram({**self._nodes, **updates}, self._wires, self.n_inputs, self.n_outputs)

    # -- comparison ----------------------------------------------------

    def to_networkx(self) -> nx.MultiDiGraph:
        g = nx.MultiDiGraph()
        for v, n in self._nodes.items():
            g.add_node(v, label=(n.kind.value, n.phase))
        for k in range(self.n_inputs):
            g.add_node(in_port(k), label=("in", k))
        for k in range(self.n_outputs):
            g.add_node(out_port(k), label=("out", k))
        for s, d in self._wires:
            g.add_edge(s, d)
        return g

    def iso_equal(self, other: Diagram) -> bool:
        """Boundary-preserving isomorphism with identical node kinds and phases."""
        if self.signature != other.signature:
            return False
        if len(self._nodes) != len(other._nodes) or len(self._wires) != len(other._wires):
            return False
        if Counter(n for n in self._nodes.values()) != Counter(n for n in other._nodes.values()):
            return False
        gm = MultiDiGraphMatcher(
            self.to_networkx(),
            other.to_networkx(),
            node_match=lambda a, b: a["label"] == b["label"],
        )
        return gm.is_isomorphic()

    # -- serialisation -------------------------------------------------

    def to_dict(self) -> dict:
        nodes = {}
        for v, n in self._nodes.items():
            entry: dict = {"kind": n.kind.value}
            if n.kind.is_spider:
                entry["phase"] = n.phase.to_json()
            nodes[v] = entry
        return {
            "nodes": nodes,
            "wires": [[s, d] for s, d in self._wires],
            "inputs": self.n_inputs,
            "outputs": self.n_outputs,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    @classmethod
    def from_dict(cls, data: Mapping) -> Diagram:
        if not isinstance(data, Mapping):
            raise DiagramError("diagram document must be an object")
        missing = {"nodes", "wires", "inputs", "outputs"} - set(data)
        if missing:
            raise DiagramError(f"diagram document lacks fields {sorted(missing)}")
        nodes = {}
        for v, entry in data["nodes"].items():
            try:
                kind = Kind(entry["kind"])
            except (KeyError, ValueError, TypeError):
                raise DiagramError(f"node {v!r}: bad or missing kind") from None
            if kind.is_spider:
                try:
                    phase = PhasePair.from_json(entry.get("phase", ["0/1", "0/1"]))
                except ValueError as e:
                    raise DiagramError(f"node {v!r}: {e}") from None
                nodes[v] = Node(kind, phase)
            else:
                nodes[v] = Node(kind)
        wires = []
        for i, w in enumerate(data["wires"]):
            if not isinstance(w, (list, tuple)) or len(w) != 2:
                raise DiagramError(f"wire {i}: expected a pair, got {w!r}")
            wires.append((str(w[0]), str(w[1])))
        return cls(nodes, wires, int(data["inputs"]), int(data["outputs"]))

    @classmethod
    def from_json(cls, text: str) -> Diagram:
        try:
            data = json.loads(text)
        except json.JSONDecodeError as e:
            raise DiagramError(f"parse error at line {e.lineno} column {e.colno}: {e.msg}") from None
        return cls.from_dict(data)

    def to_dot(self) -> str:
        colours = {Kind.Z: "palegreen", Kind.X: "salmon", Kind.H: "khaki", Kind.HDAG: "khaki"}
        lines = ["digraph zx {", "  rankdir=TB;"]
        for k in range(self.n_inputs):
            lines.append(f'  "in:{k}" [shape=point];')
        for k in range(self.n_outputs):
            lines.append(f'  "out:{k}" [shape=point];')
        for v, n in self._nodes.items():
            shape = "circle" if n.kind.is_spider else "box"
            lines.append(
                f'  "{v}" [label="{n.label()}", shape={shape}, style=filled, fillcolor={colours[n.kind]}];'
            )
        for s, d in self._wires:
            lines.append(f'  "{s}" -> "{d}" [arrowhead=none];')
        lines.append("}")
        return "\n".join(lines) + "\n"
