"""Replayable rewrite derivations."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Callable, Mapping, Sequence

from ..diagram import Diagram
from ..phases import PhasePair
from ..semantics import DEFAULT_CAP, DiagramTooLarge, interpret, proportional_eq
from .catalog import get_rule
from .match import Match, apply, find_matches
from .rule import RewriteRule

__all__ = ["Step", "DerivationTrace", "ScriptError", "run_script", "load_script", "script_to_dict"]


class ScriptError(RuntimeError):
    def __init__(self, index: int, step: "Step", diagram: Diagram, reason: str) -> None:
        super().__init__(f"step {index} ({step.rule} {step.direction}): {reason}")
        self.index = index
        self.step = step
        self.diagram = diagram


@dataclass(frozen=True)
class Step:
    """One rewrite: rule, direction, and a declarative site selector.

    ``at`` pins pattern nodes to host node ids, ``ports`` pins pattern boundary
    ports to the host endpoint beyond them, ``names`` gives ids to the nodes the
    step inserts.  Among the remaining matches the first in sorted order is used.
    """

    rule: str
    direction: str = "->"
    params: Mapping[str, Any] = field(default_factory=dict)
    at: Mapping[str, str] = field(default_factory=dict)
    ports: Mapping[str, str] = field(default_factory=dict)
    names: Mapping[str, str] = field(default_factory=dict)
    arity_bound: int = 6


@dataclass
class DerivationTrace:
    start: Diagram
    # each applied match with the names given to the nodes it inserted
    steps: list[tuple[Match, dict[str, str]]]
    intermediates: list[Diagram]

    @property
    def end(self) -> Diagram:
        return self.intermediates[-1] if self.intermediates else self.start

    def rules_used(self) -> list[str]:
        return [m.rule for m, _ in self.steps]

    def replay(self) -> Diagram:
        d = self.start
        for m, names in self.steps:
            d = apply(d, m, names)
        return d


def run_script(
    start: Diagram,
    script: Sequence[Step],
    *,
    rules: Callable[[str], RewriteRule] = get_rule,
    check_semantics: bool = True,
    cap: int = DEFAULT_CAP,
) -> DerivationTrace:
    """Apply each step in turn; every intermediate is checked against ``[[start]]``."""
    ref = None
    if check_semantics:
        ref = interpret(start, cap=cap)
    d = start
    trace = DerivationTrace(start, [], [])
    for i, step in enumerate(script):
        rule = rules(step.rule)
        matches = find_matches(
            d,
            rule,
            params=step.params,
            direction=step.direction,
            arity_bound=step.arity_bound,
            at=step.at,
            ports=step.ports,
        )
        if not matches:
            raise ScriptError(i, step, d, "no match at the selected site")
        m = matches[0]
        d = apply(d, m, step.names)
        if ref is not None:
            try:
                here = interpret(d, cap=cap)
            except DiagramTooLarge:
                here = None
            if here is not None and not proportional_eq(here, ref):
                raise ScriptError(i, step, d, "rewrite changed the interpretation")
        trace.steps.append((m, dict(step.names)))
        trace.intermediates.append(d)
    return trace


# -- text form ------------------------------------------------------------------


def _encode_param(v):
    if isinstance(v, PhasePair):
        return {"phase": v.to_json()}
    return v


def _decode_param(v):
    if isinstance(v, dict) and "phase" in v:
        return PhasePair.from_json(v["phase"])
    return v


def script_to_dict(start: Diagram, steps: Sequence[Step], target: Diagram | None = None) -> dict:
    out = {
        "start": start.to_dict(),
        "steps": [
            {
                "rule": s.rule,
                "dir": s.direction,
                "params": {k: _encode_param(v) for k, v in s.params.items()},
                "at": dict(s.at),
                "ports": dict(s.ports),
                "names": dict(s.names),
            }
            for s in steps
        ],
    }
    if target is not None:
        out["target"] = target.to_dict()
    return out


def load_script(text: str) -> tuple[Diagram, list[Step], Diagram | None]:
    data = json.loads(text)
    start = Diagram.from_dict(data["start"])
    steps = [
        Step(
            rule=s["rule"],
            direction=s.get("dir", "->"),
            params={k: _decode_param(v) for k, v in s.get("params", {}).items()},
            at=s.get("at", {}),
            ports=s.get("ports", {}),
            names=s.get("names", {}),
        )
        for s in data["steps"]
    ]
    target = Diagram.from_dict(data["target"]) if "target" in data else None
    return start, steps, target
