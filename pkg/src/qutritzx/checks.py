"""Verification suites behind the command line: rule soundness, lemmas, local complementation."""

from __future__ import annotations

import json
import os
import random
import time
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Callable, Iterable, Iterator

from .diagram import Diagram
from .graphstate import (
    LCSearchError,
    Multigraph,
    all_multigraphs,
    czn_diagram,
    euler_h_alternatives,
    euler_h_diagram,
    euler_hdag_diagrams,
    graph_state_diagram,
    lc_unitary,
    local_complement,
    random_multigraph,
    state_of_graph,
)
from .rules import RewriteRule, certify_rule, rule_catalog
from .rules.derivations import check_proof, proofs
from .rules.scripts import ScriptError
from .semantics import Eisenstein, SemMatrix, equal_exact, interpret, proportional_eq

__all__ = [
    "CONFIG_ENV",
    "RunConfig",
    "CheckResult",
    "Report",
    "rule_checks",
    "lemma_checks",
    "lc_checks",
]

CONFIG_ENV = "QUTRITZX_CONFIG"


@dataclass(frozen=True)
class RunConfig:
    arity_bound: int = 4
    qutrit_cap: int = 8
    float_tolerance: float = 1e-9
    exhaustive_n: int = 3
    random_trials: int = 100
    rng_seed: int = 1729

    def __post_init__(self) -> None:
        for f in fields(self):
            if f.name != "rng_seed" and not getattr(self, f.name) > 0:
                raise ValueError(f"{f.name} must be positive")
        if self.exhaustive_n > self.qutrit_cap:
            raise ValueError("exhaustive_n must not exceed qutrit_cap")

    @classmethod
    def load(cls, path: str | os.PathLike | None = None, **overrides) -> RunConfig:
        """Defaults, then the JSON file at ``path`` (or $QUTRITZX_CONFIG), then ``overrides``."""
        values: dict = {}
        path = path or os.environ.get(CONFIG_ENV)
        if path:
            data = json.loads(Path(path).read_text())
            known = {f.name for f in fields(cls)}
            unknown = set(data) - known
            if unknown:
                raise ValueError(f"unknown config keys: {', '.join(sorted(unknown))}")
            values.update(data)
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**values)


@dataclass
class CheckResult:
    name: str
    anchor: str
    ok: bool
    seconds: float = 0.0
    detail: str = ""
    counterexample: dict | None = None

    def record(self, timings: bool = False) -> dict:
        out = {"check": self.name, "anchor": self.anchor, "status": "pass" if self.ok else "fail"}
        if self.detail:
            out["detail"] = self.detail
        if self.counterexample is not None:
            out["counterexample"] = self.counterexample
        if timings:
            out["seconds"] = round(self.seconds, 3)
        return out


@dataclass
class Report:
    command: str
    results: list[CheckResult] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.results)

    def sorted(self) -> list[CheckResult]:
        return sorted(self.results, key=lambda r: r.name)

    def records(self, timings: bool = False) -> Iterator[dict]:
        for r in self.sorted():
            yield r.record(timings)
        yield {"summary": self.command, "status": "pass" if self.ok else "fail",
               "passed": sum(r.ok for r in self.results), "total": len(self.results)}

    def table(self) -> str:
        rows = self.sorted()
        width = max([len(r.name) for r in rows] + [5])
        lines = [f"{'check':<{width}}  status  seconds  detail"]
        for r in rows:
            lines.append(f"{r.name:<{width}}  {'PASS' if r.ok else 'FAIL':<6}  {r.seconds:7.2f}  {r.detail}")
            if r.counterexample is not None:
                lines.append(json.dumps(r.counterexample, indent=2))
        passed = sum(r.ok for r in rows)
        lines.append(f"{self.command}: {passed}/{len(rows)} passed, overall {'PASS' if self.ok else 'FAIL'}")
        return "\n".join(lines)


def _timed(name: str, anchor: str, fn: Callable[[], tuple[bool, str] | tuple[bool, str, dict]]) -> CheckResult:
    t0 = time.perf_counter()
    try:
        out = fn()
    except (LCSearchError, ScriptError, ValueError) as exc:
        out = (False, f"{type(exc).__name__}: {exc}")
    ok, detail, *rest = out
    return CheckResult(name, anchor, ok, time.perf_counter() - t0, detail, rest[0] if rest else None)


def _matrix_failure(**named: Diagram | SemMatrix) -> dict:
    out = {}
    for k, v in named.items():
        out[k] = v.to_dict() if isinstance(v, Diagram) else v.dump()
    return out


# -- rule soundness -------------------------------------------------------------------


def rule_checks(cfg: RunConfig, rules: Iterable[RewriteRule] | None = None) -> Report:
    report = Report("check-rules")
    for rule in rules if rules is not None else rule_catalog():
        rep = certify_rule(
            rule,
            arity_bound=cfg.arity_bound,
            random_trials=20,
            tol=cfg.float_tolerance,
            cap=cfg.qutrit_cap,
            seed=cfg.rng_seed,
        )
        detail = f"{rule.origin}; {rep.checked} exact, {rep.float_checked} float"
        report.results.append(CheckResult(f"rule:{rule.name}", rule.name, rep.ok, rep.seconds, detail, rep.failure))
    return report


# -- lemmas ---------------------------------------------------------------------------


def _prop(name: str, anchor: str, lhs: Diagram, rhs: Diagram, cfg: RunConfig, exact: bool = False) -> CheckResult:
    def run():
        ml, mr = interpret(lhs, cap=cfg.qutrit_cap), interpret(rhs, cap=cfg.qutrit_cap)
        same = equal_exact(ml, mr) if exact else proportional_eq(ml, mr, cfg.float_tolerance)
        return same, "equal" if exact else "proportional", _matrix_failure(lhs=ml, rhs=mr) if not same else None

    res = _timed(name, anchor, run)
    if res.counterexample is None and not res.ok and not res.detail:
        res.detail = "mismatch"
    return res


def gadget_checks(cfg: RunConfig) -> list[CheckResult]:
    c1, c2 = czn_diagram(1), czn_diagram(2)
    diag = _cz_matrix()
    H, Hd = Diagram.hadamard(), Diagram.hadamard(dagger=True)
    return [
        _timed("gadget:cz-matrix", "controlled-Z gadget",
               lambda: (equal_exact(interpret(c1), diag), "diag(w^jk) exactly")),
        _prop("gadget:cz-cubed", "controlled-Z gadget", c1.then(c1, c1), Diagram.identity(2), cfg, exact=True),
        _prop("gadget:cz-twice", "gadget weights add", c1.then(c1), c2, cfg),
        _prop("gadget:cz2-twice", "gadget weights add", c2.then(c2), c1, cfg),
        _prop("gadget:h-hdag", "H and H-dagger are inverse", H.then(Hd), Diagram.identity(1), cfg),
        _prop("gadget:hdag-h", "H and H-dagger are inverse", Hd.then(H), Diagram.identity(1), cfg),
        _prop("gadget:h-fourth", "H has order four", H.then(H, H, H), Diagram.identity(1), cfg),
    ]


def _cz_matrix() -> SemMatrix:
    """sum_jk w^{jk} |jk><jk| written out entry by entry."""
    rows = [[0] * 9 for _ in range(9)]
    for j in range(3):
        for k in range(3):
            rows[3 * j + k][3 * j + k] = Eisenstein.omega_power(j * k)
    return SemMatrix.from_eisenstein(rows, 2, 2)


def euler_checks(cfg: RunConfig) -> list[CheckResult]:
    H, Hd = Diagram.hadamard(), Diagram.hadamard(dagger=True)
    out = [_prop("euler:h-zxz", "Euler decomposition of H", euler_h_diagram(), H, cfg)]
    out += [_prop("euler:h-xzx", "non-unique decomposition", d, H, cfg) for d in euler_h_alternatives()]
    names = ["euler:hdag-zxz", "euler:hdag-xzx"]
    out += [_prop(n, "decomposition of H-dagger", d, Hd, cfg) for n, d in zip(names, euler_hdag_diagrams())]
    out.append(_prop("euler:adjoint", "decomposition of H-dagger", euler_h_diagram().adjoint(), Hd, cfg))
    return out


def proof_checks() -> list[CheckResult]:
    out = []
    for p in proofs():
        def run(p=p):
            ok, trace = check_proof(p)
            used = ", ".join(dict.fromkeys(trace.rules_used()))
            return ok, f"{len(trace.steps)} steps using {used}"

        anchor = p.lemma if p.uses_hypothesis is None else f"{p.lemma} assuming {p.uses_hypothesis}"
        out.append(_timed(f"proof:{p.lemma}", anchor, run))
    return out


def lemma_checks(cfg: RunConfig) -> Report:
    report = Report("check-lemmas")
    derived = [r for r in rule_catalog() if r.origin != "base"]
    for r in rule_checks(cfg, derived).results:
        r.name = "lemma:" + r.name.split(":", 1)[1]
        report.results.append(r)
    report.results += proof_checks()
    report.results += gadget_checks(cfg)
    report.results += euler_checks(cfg)
    return report


# -- local complementation ------------------------------------------------------------


def _sample_graphs(cfg: RunConfig, n: int, count: int, salt: str) -> list[Multigraph]:
    rng = random.Random(f"{cfg.rng_seed}:{salt}:{n}")
    return [random_multigraph(n, rng) for _ in range(count)]


def _graph_state_sweep(cfg: RunConfig) -> CheckResult:
    def run():
        graphs = [g for n in range(1, cfg.exhaustive_n + 1) for g in all_multigraphs(n)]
        for n in (4, 5):
            if n <= cfg.qutrit_cap:
                graphs += _sample_graphs(cfg, n, cfg.random_trials, "graph-state")
        for g in graphs:
            d = graph_state_diagram(g)
            if not proportional_eq(interpret(d, cap=cfg.qutrit_cap), state_of_graph(g, cfg.qutrit_cap)):
                return False, f"graph {g.gamma}", {"graph": g.matrix_text(), "diagram": d.to_dict()}
        return True, f"{len(graphs)} graphs"

    return _timed("lc:graph-state-diagram", "graph state as a diagram", run)


def _lc_cases(cfg: RunConfig) -> list[tuple[Multigraph, int, int]]:
    cases = [
        (g, u, lam)
        for n in range(1, cfg.exhaustive_n + 1)
        for g in all_multigraphs(n)
        for u in range(n)
        for lam in (1, 2)
    ]
    rng = random.Random(f"{cfg.rng_seed}:lc-random")
    for g in _sample_graphs(cfg, 4, 50, "lc"):
        cases.append((g, rng.randrange(4), rng.choice((1, 2))))
    return cases


def _lc_property(cfg: RunConfig) -> CheckResult:
    def run():
        cases = _lc_cases(cfg)
        for g, u, lam in cases:
            try:
                lc_unitary(g, u, lam)
            except LCSearchError as exc:
                return False, str(exc), {"graph": g.matrix_text(), "vertex": u, "lambda": lam}
        return True, f"{len(cases)} (graph, vertex, lambda) cases, each checked exactly"

    return _timed("lc:local-unitary", "local complementation property", run)


def _formula_algebra(cfg: RunConfig) -> list[CheckResult]:
    def triple():
        graphs = [g for n in range(1, 5) for g in all_multigraphs(n)]
        rng = random.Random(f"{cfg.rng_seed}:triple")
        graphs += [random_multigraph(rng.randint(1, 4), rng) for _ in range(500)]
        for g in graphs:
            for u in range(g.n):
                h = g
                for _ in range(3):
                    h = local_complement(h, u, 1)
                if h != g:
                    return False, f"graph {g.gamma} at {u}"
        return True, f"{len(graphs)} graphs"

    def inverse():
        count = 0
        for n in range(1, 5):
            for g in all_multigraphs(n):
                for u in range(n):
                    count += 1
                    if local_complement(local_complement(g, u, 2), u, 1) != g:
                        return False, f"graph {g.gamma} at {u}"
        return True, f"{count} (graph, vertex) pairs"

    return [
        _timed("lc:formula-triple", "local complementation formula", triple),
        _timed("lc:formula-inverse", "local complementation formula", inverse),
    ]


def _edge_weights(cfg: RunConfig) -> CheckResult:
    """Stacking a weight-a gadget on a graph state adds a to that edge weight mod 3."""

    def run():
        count = 0
        for n in range(2, cfg.exhaustive_n + 1):
            for g in all_multigraphs(n):
                for v in range(n):
                    for w in range(v + 1, n):
                        for a in (1, 2):
                            gadget = Diagram.identity(v).tensor(_spread(czn_diagram(a), w - v)).tensor(
                                Diagram.identity(n - w - 1)
                            )
                            lhs = graph_state_diagram(g).compose(gadget)
                            edges = [e for e in g.edges() if (e[0], e[1]) != (v, w)]
                            target = Multigraph.from_edges(n, edges + [(v, w, g.gamma[v][w] + a)])
                            count += 1
                            if not proportional_eq(interpret(lhs, cap=cfg.qutrit_cap), state_of_graph(target)):
                                return False, f"graph {g.gamma}, edge ({v},{w}) plus {a}"
        return True, f"{count} gadget insertions"

    return _timed("lc:edge-weight-arithmetic", "edge weights are taken mod 3", run)


def _spread(gadget: Diagram, gap: int) -> Diagram:
    """A two-wire gadget acting on wires 0 and ``gap``, identity in between."""
    if gap == 1:
        return gadget
    # move wire `gap` next to wire 0, apply, move it back
    forward = [0] + [k + 1 for k in range(1, gap)] + [1]
    move = Diagram.permutation([forward.index(k) for k in range(gap + 1)])
    back = Diagram.permutation(forward)
    return move.compose(gadget.tensor(Diagram.identity(gap - 1))).compose(back)


def _triangle_lemmas(cfg: RunConfig) -> list[CheckResult]:
    def triangles():
        count = 0
        for lam in (1, 2):
            for a in (1, 2):
                for b in (1, 2):
                    # choose the opposite edge so that complementing at vertex 0 removes it
                    opposite = (-lam * a * b) % 3
                    g = Multigraph.from_edges(3, [(0, 1, a), (0, 2, b), (1, 2, opposite)])
                    h = local_complement(g, 0, lam)
                    count += 1
                    if h.gamma[1][2] != 0:
                        return False, f"edge survives for {g.gamma}"
                    lc_unitary(g, 0, lam)
        return True, f"{count} triangles"

    def stars():
        for n in (2, 3, 4):
            for lam in (1, 2):
                leaf = (-lam) % 3
                edges = [(0, v, 1) for v in range(1, n)]
                edges += [(v, w, leaf) for v in range(1, n) for w in range(v + 1, n)]
                g = Multigraph.from_edges(n, edges)
                star = Multigraph.from_edges(n, [(0, v, 1) for v in range(1, n)])
                if local_complement(g, 0, lam) != star:
                    return False, f"K_{n} does not become a star"
                lc_unitary(g, 0, lam)
                lc_unitary(star, 0, lam)
        return True, "K_2, K_3, K_4 with both lambdas"

    return [
        _timed("lc:triangle-removes-opposite-edge", "triangle lemma", triangles),
        _timed("lc:complete-graph-to-star", "star and complete graph", stars),
    ]


def _triangle_regression() -> CheckResult:
    """The triangle with all weights 1: complementing at vertex 0 raises the opposite edge to 2."""

    def run():
        g = Multigraph.from_edges(3, [(0, 1, 1), (0, 2, 1), (1, 2, 1)])
        h = local_complement(g, 0, 1)
        expected = Multigraph.from_edges(3, [(0, 1, 1), (0, 2, 1), (1, 2, 2)])
        return h == expected, h.matrix_text().replace("\n", "; ").strip("; ")

    return _timed("lc:triangle-example", "local complementation example", run)


def lc_checks(cfg: RunConfig) -> Report:
    report = Report("verify-lc")
    report.results.append(_graph_state_sweep(cfg))
    report.results.append(_lc_property(cfg))
    report.results += _formula_algebra(cfg)
    report.results.append(_edge_weights(cfg))
    report.results += _triangle_lemmas(cfg)
    report.results.append(_triangle_regression())
    report.results += euler_checks(cfg)
    report.results += [r for r in proof_checks() if r.name == "proof:euler-h"]
    return report
