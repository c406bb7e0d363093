"""Rewrite rules as parametrised pairs of diagrams, and their soundness check."""

from __future__ import annotations

import itertools
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Iterable, Iterator, Mapping

from ..diagram import Diagram
from ..phases import Angle, PhasePair, stabilizer_pairs
from ..semantics import DEFAULT_CAP, DEFAULT_TOL, SemMatrix, interpret, proportional_eq

__all__ = ["RewriteRule", "CertifyReport", "certify_rule", "DEFAULT_ARITY_BOUND"]

DEFAULT_ARITY_BOUND = 4

Params = Mapping[str, Any]


def _no_shapes(bound: int) -> Iterator[dict]:
    yield {}


@dataclass(frozen=True)
class RewriteRule:
    """A bidirectional equation ``lhs = rhs`` up to a nonzero scalar.

    ``build`` maps a full parameter assignment to the concrete pair.  Phase
    parameters range over phase pairs; every other parameter (arities, discrete
    choices) is enumerated by ``shapes(bound)``.
    """

    name: str
    build: Callable[..., tuple[Diagram, Diagram]]
    phase_params: tuple[str, ...] = ()
    shapes: Callable[[int], Iterable[dict]] = _no_shapes
    arbitrary_angles: bool = False
    origin: str = "base"
    note: str = ""
    defaults: Mapping[str, Any] = field(default_factory=dict)

    def instantiate(self, params: Params | None = None) -> tuple[Diagram, Diagram]:
        full = dict(self.defaults)
        full.update(params or {})
        for p in self.phase_params:
            full.setdefault(p, PhasePair())
        return self.build(**full)

    def sides(self, params: Params | None = None, direction: str = "->") -> tuple[Diagram, Diagram]:
        lhs, rhs = self.instantiate(params)
        if direction == "->":
            return lhs, rhs
        if direction == "<-":
            return rhs, lhs
        raise ValueError(f"direction must be '->' or '<-', got {direction!r}")

    def instantiations(self, bound: int = DEFAULT_ARITY_BOUND) -> Iterator[dict]:
        pairs = stabilizer_pairs()
        for shape in self.shapes(bound):
            for combo in itertools.product(pairs, repeat=len(self.phase_params)):
                yield {**shape, **dict(zip(self.phase_params, combo))}

    def random_instantiations(self, n: int, bound: int, rng: random.Random) -> list[dict]:
        shapes = list(self.shapes(bound))
        out = []
        for _ in range(n):
            inst = dict(rng.choice(shapes))
            for p in self.phase_params:
                inst[p] = PhasePair(_random_angle(rng), _random_angle(rng))
            out.append(inst)
        return out

    def derive(self, name: str, transform: Callable[[Diagram], Diagram], note: str) -> RewriteRule:
        """A new rule obtained by applying a sound diagram transformation to both sides."""
        base = self

        def build(**params):
            lhs, rhs = base.instantiate(params)
            return transform(lhs), transform(rhs)

        return RewriteRule(
            name=name,
            build=build,
            phase_params=self.phase_params,
            shapes=self.shapes,
            arbitrary_angles=self.arbitrary_angles,
            origin=self.origin if self.origin != "base" else "variant",
            note=note,
            defaults=self.defaults,
        )

    def color_swapped(self) -> RewriteRule:
        return self.derive(f"{self.name}.cs", Diagram.color_swap, f"colour-swapped {self.name}")

    def upside_down(self) -> RewriteRule:
        return self.derive(f"{self.name}.ud", Diagram.adjoint, f"upside-down {self.name}")


def _random_angle(rng: random.Random) -> Angle:
    # a prime denominator keeps the angle off the 2*pi/3 lattice unless the numerator is 0
    return Angle(Fraction(rng.randrange(1, 997), 997))


@dataclass
class CertifyReport:
    rule: str
    ok: bool
    checked: int
    float_checked: int
    seconds: float
    failure: dict | None = None

    def summary(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        return f"{self.rule:<24} {status}  {self.checked} exact, {self.float_checked} float, {self.seconds:.2f}s"


def _failure(params: Params, lhs: Diagram, rhs: Diagram, ml: SemMatrix, mr: SemMatrix) -> dict:
    return {
        "params": {k: str(v) for k, v in params.items()},
        "lhs": lhs.to_dict(),
        "rhs": rhs.to_dict(),
        "lhs_matrix": ml.dump(),
        "rhs_matrix": mr.dump(),
    }


def certify_rule(
    rule: RewriteRule,
    *,
    arity_bound: int = DEFAULT_ARITY_BOUND,
    random_trials: int = 20,
    tol: float = DEFAULT_TOL,
    cap: int = DEFAULT_CAP,
    seed: int = 0,
) -> CertifyReport:
    """Check ``[[lhs]] ~ [[rhs]]`` for every stabilizer instantiation.

    Rules that hold for arbitrary angles are also checked on ``random_trials``
    random instantiations in floating point.  The first failure is reported with
    both matrices.
    """
    t0 = time.perf_counter()
    n = 0
    for params in rule.instantiations(arity_bound):
        lhs, rhs = rule.instantiate(params)
        if lhs.signature != rhs.signature:
            raise ValueError(f"{rule.name}: sides have different signatures for {params}")
        ml, mr = interpret(lhs, cap=cap), interpret(rhs, cap=cap)
        n += 1
        if not proportional_eq(ml, mr, tol):
            return CertifyReport(rule.name, False, n, 0, time.perf_counter() - t0, _failure(params, lhs, rhs, ml, mr))
    nf = 0
    if rule.arbitrary_angles and rule.phase_params and random_trials:
        rng = random.Random(f"{seed}:{rule.name}")
        for params in rule.random_instantiations(random_trials, arity_bound, rng):
            lhs, rhs = rule.instantiate(params)
            ml, mr = interpret(lhs, cap=cap), interpret(rhs, cap=cap)
            nf += 1
            if not proportional_eq(ml, mr, tol):
                return CertifyReport(
                    rule.name, False, n, nf, time.perf_counter() - t0, _failure(params, lhs, rhs, ml, mr)
                )
    return CertifyReport(rule.name, True, n, nf, time.perf_counter() - t0)
