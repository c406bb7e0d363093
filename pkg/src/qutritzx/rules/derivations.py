"""Rewrite-level proofs of derived lemmas from the base rules.

Each proof starts at one side of a lemma and ends, up to renaming, at the other.
Steps pin their sites explicitly; nothing here searches for a proof.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from ..diagram import Diagram
from ..phases import ZERO, PhasePair
from .catalog import EULER, EULER_DAG, get_rule
from .scripts import DerivationTrace, Step, run_script

__all__ = ["Proof", "proofs", "get_proof", "check_proof"]


@dataclass(frozen=True)
class Proof:
    lemma: str
    steps: tuple[Step, ...]
    # the lemma is proved from lhs to rhs unless this is "<-"
    direction: str = "->"
    uses_hypothesis: str | None = None

    def endpoints(self) -> tuple[Diagram, Diagram]:
        return get_rule(self.lemma).sides(direction=self.direction)


def _fuse(kind: str, p=ZERO, q=ZERO, direction="->", **kw) -> dict:
    shape = {k: kw.pop(k) for k in ("n1", "m1", "n2", "m2", "k") if k in kw}
    return dict(rule="S1" if kind == "Z" else "S1r", direction=direction, params={"p": p, "q": q, **shape}, **kw)


_P2 = (
    Step("H2'", "<-", {"p": ZERO, "n": 1, "m": 2}, at={"g": "t"},
         names={"g": "t", "i0": "ht", "o0": "k1", "o1": "k2"}),
    Step("H1", "<-", ports={"in:0": "b", "out:0": "out:0"}, names={"h": "hb", "k": "kb"}),
    Step("H2", "->", {"p": ZERO, "n": 2, "m": 1}, at={"g": "b", "o0": "hb"}, names={"g": "b"}),
    Step("P1", "->", at={"t": "t", "b": "b"}, names={"h1": "p1", "h2": "p2"}),
    Step("H1", "->", at={"h": "p2", "k": "kb"}),
)

_SAME_COLOUR_LOOP = (
    Step("S3", "->", at={"c": "c"}, names={"c": "c"}),
    Step(**_fuse("Z", n1=0, m1=1, k=1, n2=1, m2=0, at={"a": "c", "b": "k"}, names={"a": "s"})),
    Step("S2", "->", at={"s": "s"}),
)

_COPY_FLIP = (
    Step("P1", "->", at={"t": "t", "b": "b"}, names={"h1": "h1", "h2": "h2"}),
    Step("P2", "<-", at={"h1": "h1", "h2": "h2"}, names={"t": "t", "b": "b"}),
)

_HOPF = (
    Step(**_fuse("Z", direction="<-", n1=1, m1=1, k=1, n2=0, m2=2, at={"a": "g"}, names={"a": "ga", "b": "gb"})),
    Step(**_fuse("X", direction="<-", n1=2, m1=0, k=1, n2=1, m2=1, at={"a": "r"},
                 ports={"in:0": "gb", "in:1": "gb", "in:2": "ga", "out:0": "out:0"},
                 names={"a": "rc", "b": "rd"})),
    Step("P1", "->", at={"t": "gb", "b": "rc"}, names={"h1": "p1", "h2": "p2"}),
    Step("different-colour-loop", "<-", at={"h1": "p1", "h2": "p2"}, names={"c": "cup", "k": "cap"}),
    Step(**_fuse("Z", direction="<-", n1=0, m1=0, k=1, n2=0, m2=2, at={"a": "cup"}, names={"a": "ke", "b": "ge"})),
    Step(**_fuse("X", direction="<-", n1=2, m1=0, k=1, n2=0, m2=0, at={"a": "cap"}, names={"a": "rf", "b": "br"})),
    Step("B2", "<-", at={"g1": "ga", "g2": "ge", "r1": "rd", "r2": "rf"}, names={"r": "rx", "g": "gy"}),
    Step("copy-variant.cs", "->", {"p": ZERO, "n": 2, "m": 1}, at={"r": "ke", "g": "rx"},
         names={"e0": "e", "k0": "kg"}),
    Step(**_fuse("Z", n1=0, m1=0, k=1, n2=0, m2=2, at={"a": "kg", "b": "gy"}, names={"a": "gy"})),
    Step("copy-variant.ud", "->", {"p": ZERO, "n": 2, "m": 0}, at={"g": "gy", "r": "br"}),
)

# H = Z(2,2) X(2,2) Z(2,2) from the local complementation of a triangle
_EULER_FROM_LC = (
    Step("S2", "<-", ports={"in:0": "h0", "out:0": "out:0"}, names={"s": "z"}),
    Step(**_fuse("Z", EULER_DAG, EULER, direction="<-", n1=1, m1=0, k=1, n2=0, m2=1, at={"a": "z"},
                 names={"a": "za", "b": "zb"})),
    Step("red-effect-absorb", "<-", {"p": ZERO, "q": EULER, "n": 1, "m": 1}, at={"g": "za"},
         names={"g": "gu", "r": "re"}),
    Step("H2'", "<-", {"p": EULER, "n": 1, "m": 0}, at={"g": "re"}, names={"g": "gw", "i0": "hw"}),
    Step(**_fuse("Z", ZERO, EULER, direction="<-", n1=1, m1=0, k=1, n2=0, m2=0, at={"a": "gw"},
                 names={"a": "gw", "b": "bw"})),
    Step("same-colour-loop", "<-", ports={"in:0": "in:0", "out:0": "h0"}, names={"c": "gv", "k": "cap"}),
    Step("lc-triangle", "<-", at={"g0": "gv", "g1": "gu", "g2": "gw", "e01": "h0", "e12": "hw"},
         names={"g0": "gv", "g1": "gu", "g2": "gw", "e01": "h0", "e12": "hw", "e02": "hd",
                "l0": "zv", "l1": "xu", "l2": "zw"}),
    Step(**_fuse("Z", EULER_DAG, EULER, n1=1, m1=0, k=1, n2=0, m2=0, at={"a": "zw", "b": "bw"}, names={"a": "bw"})),
    Step(**_fuse("Z", n1=2, m1=0, k=1, n2=0, m2=0, at={"a": "gw", "b": "bw"}, names={"a": "gw"})),
    # the upside-down slide carries the H-dagger box across the cap
    Step("h-slide.ud", "->", {"dagger": False}, at={"c": "gw", "h": "hd"}, names={"c": "gw", "h": "hd"}),
    Step("H1", "->", at={"h": "hw", "k": "hd"}),
    Step(**_fuse("Z", n1=1, m1=1, k=1, n2=1, m2=0, at={"a": "gu", "b": "gw"}, names={"a": "gu"})),
    Step(**_fuse("Z", n1=0, m1=2, k=1, n2=1, m2=1, at={"a": "gv", "b": "gu"}, names={"a": "g"})),
    Step(**_fuse("Z", ZERO, EULER_DAG, n1=1, m1=2, k=1, n2=0, m2=1, at={"a": "g", "b": "zv"}, names={"a": "g"})),
    Step(**_fuse("Z", EULER_DAG, ZERO, n1=1, m1=2, k=1, n2=1, m2=0, at={"a": "g", "b": "cap"}, names={"a": "g"})),
    Step("h-loop", "->", {"p": EULER_DAG, "dagger": False, "n": 1, "m": 1}, at={"g": "g"}, names={"g": "g"}),
)


_PROOFS = (
    Proof("P2", _P2),
    Proof("same-colour-loop", _SAME_COLOUR_LOOP),
    Proof("copy-flip", _COPY_FLIP),
    Proof("hopf", _HOPF),
    Proof("euler-h", _EULER_FROM_LC, uses_hypothesis="lc-triangle"),
)


def proofs() -> tuple[Proof, ...]:
    return _PROOFS


def get_proof(lemma: str) -> Proof:
    for p in _PROOFS:
        if p.lemma == lemma:
            return p
    raise KeyError(f"no rewrite proof for {lemma!r}")


def check_proof(proof: Proof, *, check_semantics: bool = True) -> tuple[bool, DerivationTrace]:
    """Run the proof and compare its end point with the other side of the lemma."""
    start, target = proof.endpoints()
    trace = run_script(start, proof.steps, check_semantics=check_semantics)
    return trace.end.iso_equal(target), trace
