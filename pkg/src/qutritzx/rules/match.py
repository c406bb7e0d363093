"""Embedding rule patterns into host diagrams and rewriting at a match."""

from __future__ import annotations

import itertools
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from typing import Any, Iterator, Mapping

from ..diagram import Diagram, DiagramError, Node, boundary_index, is_boundary
from ..phases import ZERO
from .rule import DEFAULT_ARITY_BOUND, RewriteRule

__all__ = ["Match", "StaleMatch", "find_matches", "match_pattern", "apply", "apply_rule"]


class StaleMatch(ValueError):
    """The host no longer contains the matched subdiagram."""


@dataclass(frozen=True)
class Match:
    rule: str
    direction: str
    params: tuple[tuple[str, Any], ...]
    pattern: Diagram = field(repr=False)
    replacement: Diagram = field(repr=False)
    node_map: tuple[tuple[str, str], ...]
    wire_map: tuple[int, ...]
    # host endpoints of the pattern boundary, used by site selectors
    ports: tuple[tuple[str, str], ...] = ()

    @property
    def nodes(self) -> dict[str, str]:
        return dict(self.node_map)

    def sort_key(self):
        return (tuple(h for _, h in self.node_map), self.wire_map)

    def describe(self) -> str:
        ps = ", ".join(f"{k}={v}" for k, v in self.params)
        at = ", ".join(f"{p}->{h}" for p, h in self.node_map)
        return f"{self.rule} {self.direction} [{ps}] at {{{at}}}"


def _pattern_order(p: Diagram) -> list[str]:
    """Pattern nodes in BFS order so that each node after the first is adjacent to an earlier one."""
    order: list[str] = []
    remaining = list(p.nodes)
    while remaining:
        start = remaining[0]
        queue = [start]
        seen = {start}
        while queue:
            v = queue.pop(0)
            order.append(v)
            for w in p.neighbours(v):
                if not is_boundary(w) and w not in seen:
                    seen.add(w)
                    queue.append(w)
        remaining = [v for v in remaining if v not in seen]
    return order


def _edge_counts(d: Diagram) -> Counter:
    return Counter((s, t) for s, t in d.wires if not is_boundary(s) and not is_boundary(t))


def match_pattern(
    host: Diagram,
    pattern: Diagram,
    *,
    at: Mapping[str, str] | None = None,
    ports: Mapping[str, str] | None = None,
) -> Iterator[tuple[dict[str, str], tuple[int, ...], dict[str, str]]]:
    """Yield (node map, wire map, port endpoints) for every convex embedding of ``pattern``.

    Every host wire touching an image node must be the image of a pattern wire,
    and pattern boundary wires must leave the image.  ``at`` pins pattern nodes
    to host nodes; ``ports`` pins a pattern boundary port to the host endpoint
    on the far side of its wire (a node id or a host port).
    """
    at = dict(at or {})
    ports = dict(ports or {})
    order = _pattern_order(pattern)
    p_edges = _edge_counts(pattern)
    h_edges = _edge_counts(host)
    p_nodes = pattern.nodes
    h_nodes = host.nodes

    def candidates(u: str) -> list[str]:
        if u in at:
            c = [at[u]] if at[u] in h_nodes else []
        else:
            c = list(h_nodes)
        pu = p_nodes[u]
        return [
            v
            for v in c
            if h_nodes[v] == pu
            and len(host.in_wires(v)) == len(pattern.in_wires(u))
            and len(host.out_wires(v)) == len(pattern.out_wires(u))
        ]

    def consistent(u: str, v: str, nm: dict[str, str]) -> bool:
        if p_edges[(u, u)] != h_edges[(v, v)]:
            return False
        for u2, v2 in nm.items():
            if p_edges[(u, u2)] != h_edges[(v, v2)] or p_edges[(u2, u)] != h_edges[(v2, v)]:
                return False
        return True

    def node_maps(i: int, nm: dict[str, str]) -> Iterator[dict[str, str]]:
        if i == len(order):
            yield dict(nm)
            return
        u = order[i]
        used = set(nm.values())
        for v in candidates(u):
            if v in used or not consistent(u, v, nm):
                continue
            nm[u] = v
            yield from node_maps(i + 1, nm)
            del nm[u]

    for nm in node_maps(0, {}):
        image = set(nm.values())
        wm: dict[int, int] = {}
        # internal wires: parallel copies are interchangeable, map them in order
        pools: dict[tuple[str, str], list[int]] = defaultdict(list)
        for hi, (s, t) in enumerate(host.wires):
            if s in image and t in image:
                pools[(s, t)].append(hi)
        inv = {v: u for u, v in nm.items()}
        ok = True
        for pi, (s, t) in enumerate(pattern.wires):
            if not is_boundary(s) and not is_boundary(t):
                pool = pools[(nm[s], nm[t])]
                if not pool:
                    ok = False
                    break
                wm[pi] = pool.pop(0)
        if not ok or any(pools.values()):
            continue
        # boundary legs: choose which host wire plays which pattern port
        groups = []
        for u in nm:
            v = nm[u]
            p_in = [pi for pi in pattern.in_wires(u) if is_boundary(pattern.wires[pi][0])]
            h_in = [hi for hi in host.in_wires(v) if host.wires[hi][0] not in image]
            p_out = [pi for pi in pattern.out_wires(u) if is_boundary(pattern.wires[pi][1])]
            h_out = [hi for hi in host.out_wires(v) if host.wires[hi][1] not in image]
            if len(p_in) != len(h_in) or len(p_out) != len(h_out):
                ok = False
                break
            groups.append((p_in, h_in))
            groups.append((p_out, h_out))
        if not ok:
            continue
        bare = [pi for pi, (s, t) in enumerate(pattern.wires) if is_boundary(s) and is_boundary(t)]
        free = [hi for hi, (s, t) in enumerate(host.wires) if s not in image and t not in image]

        def assignments(gi: int, acc: dict[int, int]) -> Iterator[dict[int, int]]:
            if gi == len(groups):
                if not bare:
                    yield dict(acc)
                    return
                for choice in itertools.permutations(free, len(bare)):
                    out = dict(acc)
                    out.update(zip(bare, choice))
                    yield out
                return
            p_list, h_list = groups[gi]
            for perm in itertools.permutations(h_list):
                for pi, hi in zip(p_list, perm):
                    acc[pi] = hi
                yield from assignments(gi + 1, acc)
                for pi in p_list:
                    acc.pop(pi, None)

        for bmap in assignments(0, {}):
            full = {**wm, **bmap}
            endpoints = {}
            for pi, (s, t) in enumerate(pattern.wires):
                hs, ht = host.wires[full[pi]]
                if is_boundary(s):
                    endpoints[s] = hs
                if is_boundary(t):
                    endpoints[t] = ht
            if any(endpoints.get(k) != want for k, want in ports.items()):
                continue
            yield dict(nm), tuple(full[pi] for pi in range(len(pattern.wires))), endpoints


def _phase_candidates(host: Diagram) -> list:
    seen = [ZERO]
    for p in host.phases():
        if p not in seen:
            seen.append(p)
    return seen


def find_matches(
    host: Diagram,
    rule: RewriteRule,
    *,
    params: Mapping[str, Any] | None = None,
    direction: str = "->",
    arity_bound: int = DEFAULT_ARITY_BOUND,
    at: Mapping[str, str] | None = None,
    ports: Mapping[str, str] | None = None,
) -> list[Match]:
    """All matches of ``rule`` in ``host``, sorted by the matched host node ids.

    Parameters not fixed by ``params`` are enumerated: shape parameters up to
    ``arity_bound``, phase parameters over the phases occurring in ``host``.
    """
    params = dict(params or {})
    shape_list = []
    for shape in rule.shapes(arity_bound):
        if all(shape.get(k, params[k]) == params[k] for k in params if k in shape):
            shape_list.append({**shape, **{k: v for k, v in params.items() if k in shape}})
    if not shape_list:
        shape_list = [{}]
    free_phases = [p for p in rule.phase_params if p not in params]
    phase_opts = _phase_candidates(host)

    found: dict = {}
    for shape in shape_list:
        for combo in itertools.product(phase_opts, repeat=len(free_phases)):
            inst = {**params, **shape, **dict(zip(free_phases, combo))}
            try:
                pattern, replacement = rule.sides(inst, direction)
            except (DiagramError, ValueError):
                continue
            for nm, wm, ends in match_pattern(host, pattern, at=at, ports=ports):
                key = (tuple(sorted(nm.items())), wm, replacement)
                if key in found:
                    continue
                found[key] = Match(
                    rule=rule.name,
                    direction=direction,
                    params=tuple(sorted((k, v) for k, v in inst.items())),
                    pattern=pattern,
                    replacement=replacement,
                    node_map=tuple((u, nm[u]) for u in pattern.nodes),
                    wire_map=wm,
                    ports=tuple(sorted(ends.items())),
                )
    return sorted(found.values(), key=Match.sort_key)


def _check_fresh(host: Diagram, m: Match) -> None:
    nm = m.nodes
    for u, v in nm.items():
        if host.nodes.get(v) != m.pattern.nodes[u]:
            raise StaleMatch(f"host node {v!r} no longer matches pattern node {u!r}")
    if len(m.wire_map) != len(m.pattern.wires):
        raise StaleMatch("wire map does not cover the pattern")
    for pi, hi in enumerate(m.wire_map):
        if hi >= len(host.wires):
            raise StaleMatch(f"host wire {hi} no longer exists")
        s, t = m.pattern.wires[pi]
        hs, ht = host.wires[hi]
        if not is_boundary(s) and nm[s] != hs:
            raise StaleMatch(f"host wire {hi} does not start at {nm[s]!r}")
        if not is_boundary(t) and nm[t] != ht:
            raise StaleMatch(f"host wire {hi} does not end at {nm[t]!r}")
    image = set(nm.values())
    claimed = set(m.wire_map)
    for hi, (s, t) in enumerate(host.wires):
        if hi not in claimed and (s in image or t in image):
            raise StaleMatch(f"host wire {hi} touches the match but is not part of it")


def apply(host: Diagram, m: Match, names: Mapping[str, str] | None = None) -> Diagram:
    """Replace the matched subdiagram by the instantiated other side of the rule.

    ``names`` chooses host ids for the inserted nodes (keyed by replacement node id);
    other inserted nodes get fresh ``v<k>`` ids.
    """
    _check_fresh(host, m)
    names = dict(names or {})
    image = set(v for _, v in m.node_map)
    claimed = {hi: pi for pi, hi in enumerate(m.wire_map)}
    nodes = {v: n for v, n in host.nodes.items() if v not in image}

    new_ids: dict[str, str] = {}
    taken = set(host.nodes)
    for u in m.replacement.nodes:
        want = names.get(u)
        if want is not None:
            if want in nodes or want in new_ids.values() or is_boundary(want):
                raise DiagramError(f"requested id {want!r} is already in use")
            new_ids[u] = want
    k = 0
    for u in m.replacement.nodes:
        if u in new_ids:
            continue
        while f"v{k}" in taken or f"v{k}" in new_ids.values():
            k += 1
        new_ids[u] = f"v{k}"
        k += 1
    for u, n in m.replacement.nodes.items():
        nodes[new_ids[u]] = n

    def junction(port: str) -> tuple[str, str]:
        return ("J", port)

    wires: list[list] = []
    for hi, (s, t) in enumerate(host.wires):
        pi = claimed.get(hi)
        if pi is None:
            wires.append([s, t])
            continue
        ps, pt = m.pattern.wires[pi]
        if is_boundary(ps):
            wires.append([s, junction(ps)])
        if is_boundary(pt):
            wires.append([junction(pt), t])
    for s, t in m.replacement.wires:
        src = junction(s) if is_boundary(s) else new_ids[s]
        dst = junction(t) if is_boundary(t) else new_ids[t]
        wires.append([src, dst])

    # splice out junctions: each has exactly one incoming and one outgoing wire
    while True:
        j = next((e for w in wires for e in w if isinstance(e, tuple)), None)
        if j is None:
            break
        a = next(i for i, w in enumerate(wires) if w[1] == j)
        b = next(i for i, w in enumerate(wires) if w[0] == j)
        if a == b:
            # a closed loop of bare wire: a scalar, dropped
            del wires[a]
            continue
        wires[a] = [wires[a][0], wires[b][1]]
        del wires[b]
    return Diagram(nodes, [tuple(w) for w in wires], host.n_inputs, host.n_outputs)


def apply_rule(
    host: Diagram,
    rule: RewriteRule,
    *,
    direction: str = "->",
    params: Mapping[str, Any] | None = None,
    at: Mapping[str, str] | None = None,
    ports: Mapping[str, str] | None = None,
    names: Mapping[str, str] | None = None,
    pick: int = 0,
    arity_bound: int = DEFAULT_ARITY_BOUND,
) -> tuple[Diagram, Match]:
    matches = find_matches(
        host, rule, params=params, direction=direction, arity_bound=arity_bound, at=at, ports=ports
    )
    if pick >= len(matches):
        raise LookupError(f"{rule.name} {direction}: {len(matches)} matches, wanted index {pick}")
    m = matches[pick]
    return apply(host, m, names), m
