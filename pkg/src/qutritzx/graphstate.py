"""Qutrit multigraphs, their graph states, and local complementation."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from .diagram import Diagram, Kind, Node, in_port, out_port
from .phases import ZERO, PhasePair, stabilizer_pairs
from .semantics import SemMatrix, interpret, proportional_eq

__all__ = [
    "Multigraph",
    "all_multigraphs",
    "random_multigraph",
    "czn_diagram",
    "graph_state_diagram",
    "state_of_graph",
    "local_complement",
    "euler_h_diagram",
    "euler_hdag_diagrams",
    "euler_h_alternatives",
    "phase_layer",
    "LCResult",
    "LCSearchError",
    "lc_unitary",
    "STATE_CAP",
]

STATE_CAP = 8
_W = np.exp(2j * np.pi / 3)


@dataclass(frozen=True)
class Multigraph:
    """Symmetric adjacency matrix over Z_3 with zero diagonal."""

    gamma: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        g = tuple(tuple(int(x) for x in row) for row in self.gamma)
        n = len(g)
        for i, row in enumerate(g):
            if len(row) != n:
                raise ValueError("adjacency matrix must be square")
            if row[i] != 0:
                raise ValueError(f"self loop at vertex {i}")
            for j, x in enumerate(row):
                if x not in (0, 1, 2):
                    raise ValueError(f"edge weight {x} at ({i},{j}) is not in {{0,1,2}}")
                if g[j][i] != x:
                    raise ValueError(f"adjacency matrix is not symmetric at ({i},{j})")
        object.__setattr__(self, "gamma", g)

    @property
    def n(self) -> int:
        return len(self.gamma)

    @classmethod
    def empty(cls, n: int) -> Multigraph:
        return cls(tuple((0,) * n for _ in range(n)))

    @classmethod
    def from_edges(cls, n: int, edges: Sequence[tuple[int, int, int]]) -> Multigraph:
        g = [[0] * n for _ in range(n)]
        for v, w, weight in edges:
            if v == w:
                raise ValueError(f"self loop at vertex {v}")
            if not (0 <= v < n and 0 <= w < n):
                raise ValueError(f"edge ({v},{w}) out of range for {n} vertices")
            g[v][w] = g[w][v] = weight % 3
        return cls(tuple(tuple(r) for r in g))

    def edges(self) -> list[tuple[int, int, int]]:
        return [
            (v, w, self.gamma[v][w])
            for v in range(self.n)
            for w in range(v + 1, self.n)
            if self.gamma[v][w]
        ]

    def neighbours(self, u: int) -> list[int]:
        return [w for w in range(self.n) if self.gamma[u][w]]

    def local_complement(self, u: int, lam: int = 1) -> Multigraph:
        return local_complement(self, u, lam)

    @classmethod
    def parse(cls, text: str) -> Multigraph:
        """Read ``n`` on the first line, then one ``v w weight`` line per edge."""
        lines = [ln.split("#")[0].strip() for ln in text.splitlines()]
        lines = [ln for ln in lines if ln]
        if not lines:
            raise ValueError("empty graph file")
        try:
            n = int(lines[0])
        except ValueError:
            raise ValueError(f"line 1: expected vertex count, got {lines[0]!r}") from None
        edges = []
        for lineno, ln in enumerate(lines[1:], start=2):
            parts = ln.split()
            if len(parts) != 3:
                raise ValueError(f"line {lineno}: expected 'v w weight', got {ln!r}")
            try:
                v, w, weight = (int(x) for x in parts)
            except ValueError:
                raise ValueError(f"line {lineno}: non-integer field in {ln!r}") from None
            if weight not in (0, 1, 2):
                raise ValueError(f"line {lineno}: weight must be 0, 1 or 2")
            edges.append((v, w, weight))
        return cls.from_edges(n, edges)

    def to_text(self) -> str:
        return "".join([f"{self.n}\n"] + [f"{v} {w} {x}\n" for v, w, x in self.edges()])

    def matrix_text(self) -> str:
        return "\n".join(" ".join(str(x) for x in row) for row in self.gamma) + "\n"


def all_multigraphs(n: int) -> Iterator[Multigraph]:
    pairs = list(itertools.combinations(range(n), 2))
    for weights in itertools.product(range(3), repeat=len(pairs)):
        yield Multigraph.from_edges(n, [(v, w, x) for (v, w), x in zip(pairs, weights)])


def random_multigraph(n: int, rng: random.Random) -> Multigraph:
    pairs = itertools.combinations(range(n), 2)
    return Multigraph.from_edges(n, [(v, w, rng.randrange(3)) for v, w in pairs])


def local_complement(g: Multigraph, u: int, lam: int = 1) -> Multigraph:
    """Gamma'(v, w) = Gamma(v, w) + lam * Gamma(v, u) * Gamma(u, w)  (mod 3), v != w."""
    if lam not in (1, 2):
        raise ValueError(f"lambda must be 1 or 2, got {lam}")
    if not 0 <= u < g.n:
        raise ValueError(f"vertex {u} out of range")
    G = g.gamma
    new = [
        [0 if v == w else (G[v][w] + lam * G[v][u] * G[u][w]) % 3 for w in range(g.n)]
        for v in range(g.n)
    ]
    return Multigraph(tuple(tuple(r) for r in new))


def _edge_box(weight: int) -> Kind:
    return {1: Kind.H, 2: Kind.HDAG}[weight]


def czn_diagram(weight: int = 1) -> Diagram:
    """Controlled-Z gadget: green dots on both wires joined by H (weight 1) or H-dagger (weight 2)."""
    if weight not in (1, 2):
        raise ValueError("gadget weight must be 1 or 2")
    nodes = {"a": Node.z(), "b": Node.z(), "e": Node(_edge_box(weight))}
    wires = [
        (in_port(0), "a"),
        ("a", out_port(0)),
        (in_port(1), "b"),
        ("b", out_port(1)),
        ("a", "e"),
        ("e", "b"),
    ]
    return Diagram(nodes, wires, 2, 2)


def graph_state_diagram(g: Multigraph) -> Diagram:
    """One green output dot per vertex; weight-1 edges through H, weight-2 through H-dagger.

    Edge boxes run from the lower-numbered vertex ``g<v>`` to the higher one and
    are named ``e<v><w>`` (``e<v>_<w>`` when n > 10).
    """
    sep = "_" if g.n > 10 else ""
    nodes = {f"g{v}": Node.z() for v in range(g.n)}
    wires = [(f"g{v}", out_port(v)) for v in range(g.n)]
    for v, w, x in g.edges():
        e = f"e{v}{sep}{w}"
        nodes[e] = Node(_edge_box(x))
        wires += [(f"g{v}", e), (e, f"g{w}")]
    return Diagram(nodes, wires, 0, g.n)


def state_of_graph(g: Multigraph, cap: int = STATE_CAP) -> SemMatrix:
    """|G> = prod C_lm^Gamma_lm |+>^n with C = sum_jk w^{jk} |jk><jk|, unnormalised."""
    if g.n > cap:
        raise ValueError(f"{g.n} qutrits exceeds the cap of {cap}")
    idx = np.indices((3,) * g.n).reshape(g.n, -1) if g.n else np.zeros((0, 1), dtype=int)
    exponent = np.zeros(idx.shape[1], dtype=int)  # |+>^n has all amplitudes w^0
    for v, w, x in g.edges():
        exponent = exponent + x * idx[v] * idx[w]  # C_vw^x multiplies by w^{x j_v j_w}
    e = exponent % 3
    a = np.array([1, 0, -1])[e].astype(object)
    b = np.array([0, 1, -1])[e].astype(object)
    return SemMatrix(0, g.n, a=a, b=b)


# -- Euler decompositions ------------------------------------------------------------

EULER = PhasePair.thirds(2, 2)
EULER_DAG = PhasePair.thirds(1, 1)


def _rotation_chain(colours: str, phase: PhasePair) -> Diagram:
    d = Diagram.identity(1)
    for c in colours:
        d = d.compose(Diagram.spider(c, 1, 1, phase))
    return d


def euler_h_diagram() -> Diagram:
    """Z(4pi/3, 4pi/3) then X(4pi/3, 4pi/3) then Z(4pi/3, 4pi/3)."""
    return _rotation_chain("ZXZ", EULER)


def euler_h_alternatives() -> list[Diagram]:
    return [_rotation_chain("XZX", EULER)]


def euler_hdag_diagrams() -> list[Diagram]:
    return [_rotation_chain("ZXZ", EULER_DAG), _rotation_chain("XZX", EULER_DAG)]


# -- local complementation unitary ---------------------------------------------------


class LCSearchError(RuntimeError):
    pass


@dataclass(frozen=True)
class LCResult:
    """Per-wire gates: ``gates[k]`` is a list of (colour, phase), applied in order."""

    graph: Multigraph
    vertex: int
    lam: int
    gates: tuple[tuple[tuple[str, PhasePair], ...], ...]

    def diagram(self) -> Diagram:
        return phase_layer(self.gates)

    def describe(self) -> str:
        parts = []
        for k, seq in enumerate(self.gates):
            body = " then ".join(f"{c}{p}" for c, p in seq) or "I"
            parts.append(f"wire {k}: {body}")
        return "\n".join(parts)


def phase_layer(gates: Sequence[Sequence[tuple[str, PhasePair]]]) -> Diagram:
    d = Diagram.empty()
    for seq in gates:
        wire = Diagram.identity(1)
        for colour, phase in seq:
            wire = wire.compose(Diagram.spider(colour, 1, 1, phase))
        d = d.tensor(wire)
    return d


def _single_gate(colour: str, p: PhasePair) -> np.ndarray:
    if colour == "Z":
        return np.diag([1, p.alpha.phasor(), p.beta.phasor()])
    kets = [np.array([_W ** (k * a) for a in range(3)]) for k in range(3)]
    ph = [1, p.alpha.phasor(), p.beta.phasor()]
    return sum(ph[k] * np.outer(kets[k], kets[k].conj()) for k in range(3))


def _apply_on_wire(state: np.ndarray, op: np.ndarray, k: int, n: int) -> np.ndarray:
    t = state.reshape((3,) * n)
    t = np.moveaxis(np.tensordot(op, t, axes=([1], [k])), 0, k)
    return t.reshape(-1)


def _close(x: np.ndarray, y: np.ndarray, tol: float = 1e-9) -> bool:
    k = int(np.argmax(np.abs(y)))
    if abs(y[k]) < tol or abs(x[k]) < tol:
        return False
    return bool(np.max(np.abs(x / x[k] - y / y[k])) < 1e-7)


def _site_options(kind: str) -> list[tuple[tuple[str, PhasePair], ...]]:
    pairs = stabilizer_pairs()
    if kind == "id":
        return [()]
    if kind in ("Z", "X"):
        return [((kind, p),) if not p.is_zero() else () for p in pairs]
    # a green rotation followed by a red one
    return [
        tuple(g for g in (("Z", p), ("X", q)) if not g[1].is_zero())
        for p in pairs
        for q in pairs
    ]


def lc_unitary(g: Multigraph, u: int, lam: int = 1, *, verify: bool = True) -> LCResult:
    """Find local gates U with U |G> ~ |G *lam u> by exhaustive search.

    First pass: a red phase pair on ``u``, green pairs on its neighbours, nothing
    elsewhere.  Second pass: green pairs on every other wire.  Third pass: a
    green-then-red pair on every wire.  The winner is checked exactly.
    """
    target_graph = local_complement(g, u, lam)
    src = state_of_graph(g).complex_array().reshape(-1)
    tgt = state_of_graph(target_graph).complex_array().reshape(-1)
    n = g.n
    nbrs = set(g.neighbours(u))
    plans = [
        ["X" if k == u else ("Z" if k in nbrs else "id") for k in range(n)],
        ["X" if k == u else "Z" for k in range(n)],
        ["ZX"] * n,
    ]
    cache: dict = {}

    def op(seq):
        if seq not in cache:
            m = np.eye(3, dtype=complex)
            for colour, p in seq:
                m = _single_gate(colour, p) @ m
            cache[seq] = m
        return cache[seq]

    for plan in plans:
        options = [_site_options(kind) for kind in plan]
        for choice in itertools.product(*options):
            s = src
            for k, seq in enumerate(choice):
                if seq:
                    s = _apply_on_wire(s, op(seq), k, n)
            if _close(s, tgt):
                result = LCResult(g, u, lam, tuple(choice))
                if verify and not _verify(result, target_graph):
                    continue
                return result
    raise LCSearchError(f"no local phase layer found for {g.gamma} at vertex {u}, lambda={lam}")


def _verify(result: LCResult, target_graph: Multigraph) -> bool:
    layer = interpret(result.diagram())
    return proportional_eq(layer @ state_of_graph(result.graph), state_of_graph(target_graph))


# -- graph-state equations ----------------------------------------------------------


def lc_equation(g: Multigraph, u: int, lam: int = 1) -> tuple[Diagram, Diagram]:
    """Diagram pair (U . |G>, |G *lam u>) certified by :func:`lc_unitary`."""
    result = lc_unitary(g, u, lam)
    lhs = graph_state_diagram(g).compose(result.diagram())
    return lhs, graph_state_diagram(local_complement(g, u, lam))
