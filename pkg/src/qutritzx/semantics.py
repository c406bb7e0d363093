"""Matrix interpretation of diagrams over the Eisenstein integers.

Exact values are elements ``a + b*w`` of Q(w), ``w = exp(2*pi*i/3)``; matrices
keep the two coefficient arrays separately.  Kets are unnormalised
(``|+> = |0> + |1> + |2>``), so all claims are equalities up to a nonzero
scalar.  Diagrams with phases outside the 2*pi/3 lattice are evaluated in
complex floating point.
"""

from __future__ import annotations

import cmath
import re
import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .diagram import Diagram, Kind, boundary_index, is_boundary

__all__ = [
    "Eisenstein",
    "OMEGA",
    "SemMatrix",
    "DiagramTooLarge",
    "interpret",
    "proportional_eq",
    "equal_exact",
    "DEFAULT_CAP",
    "DEFAULT_TOL",
]

DEFAULT_CAP = 8
DEFAULT_TOL = 1e-9
_W = cmath.exp(2j * cmath.pi / 3)


class DiagramTooLarge(ValueError):
    pass


@dataclass(frozen=True)
class Eisenstein:
    """The number a + b*w with rational a, b."""

    a: Fraction = Fraction(0)
    b: Fraction = Fraction(0)

    def __post_init__(self) -> None:
        object.__setattr__(self, "a", Fraction(self.a))
        object.__setattr__(self, "b", Fraction(self.b))

    @classmethod
    def omega_power(cls, k: int) -> Eisenstein:
        return cls(*_POW[k % 3])

    @classmethod
    def coerce(cls, x) -> Eisenstein:
        if isinstance(x, Eisenstein):
            return x
        return cls(Fraction(x), Fraction(0))

    def __add__(self, o) -> Eisenstein:
        o = Eisenstein.coerce(o)
        return Eisenstein(self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __neg__(self) -> Eisenstein:
        return Eisenstein(-self.a, -self.b)

    def __sub__(self, o) -> Eisenstein:
        return self + (-Eisenstein.coerce(o))

    def __rsub__(self, o) -> Eisenstein:
        return Eisenstein.coerce(o) - self

    def __mul__(self, o) -> Eisenstein:
        o = Eisenstein.coerce(o)
        # w^2 = -1 - w
        bd = self.b * o.b
        return Eisenstein(self.a * o.a - bd, self.a * o.b + self.b * o.a - bd)

    __rmul__ = __mul__

    def conjugate(self) -> Eisenstein:
        return Eisenstein(self.a - self.b, -self.b)

    def norm(self) -> Fraction:
        return self.a * self.a - self.a * self.b + self.b * self.b

    def __truediv__(self, o) -> Eisenstein:
        o = Eisenstein.coerce(o)
        n = o.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero in Q(w)")
        p = self * o.conjugate()
        return Eisenstein(p.a / n, p.b / n)

    def __bool__(self) -> bool:
        return bool(self.a) or bool(self.b)

    def __complex__(self) -> complex:
        return complex(float(self.a)) + float(self.b) * _W

    def __str__(self) -> str:
        """Compact form such as ``1``, ``w``, ``-1-w`` or ``1/2+3w``."""
        if not self.b:
            return str(self.a)
        coeff = {1: "", -1: "-"}.get(self.b, str(self.b))
        if not self.a:
            return f"{coeff}w"
        return f"{self.a}{'' if self.b < 0 else '+'}{coeff}w"

    def canonical(self) -> str:
        """Fixed-width text ``a/b+c/dw`` as used in matrix dumps."""
        sign = "-" if self.b < 0 else "+"
        return f"{self.a.numerator}/{self.a.denominator}{sign}{abs(self.b.numerator)}/{self.b.denominator}w"

    @classmethod
    def parse(cls, text: str) -> Eisenstein:
        """Read either the compact or the canonical text form."""
        m = _SCALAR.fullmatch(text.strip())
        if not m or not text.strip():
            raise ValueError(f"malformed exact scalar {text!r}")
        a, b = m.group(1), m.group(2)
        if b is None:
            return cls(Fraction(a))
        b = {"": 1, "+": 1, "-": -1}.get(b, b)
        return cls(Fraction(a or 0), Fraction(b))


_SCALAR = re.compile(r"([+-]?\d+(?:/\d+)?(?=[+-]|$))?(?:([+-]?(?:\d+(?:/\d+)?)?)w)?")


_POW = {0: (1, 0), 1: (0, 1), 2: (-1, -1)}
OMEGA = Eisenstein(0, 1)
_POW_A = np.array([1, 0, -1])
_POW_B = np.array([0, 1, -1])


def _mul_pairs(x, y):
    a, b = x
    c, d = y
    bd = b * d
    return a * c - bd, a * d + b * c - bd


class SemMatrix:
    """A 3^m x 3^n matrix: exact (pair of coefficient arrays) or complex float."""

    __slots__ = ("a", "b", "c", "n_inputs", "n_outputs")

    def __init__(self, n_inputs: int, n_outputs: int, *, a=None, b=None, c=None) -> None:
        self.n_inputs = n_inputs
        self.n_outputs = n_outputs
        shape = (3**n_outputs, 3**n_inputs)
        if c is not None:
            self.c = np.asarray(c, dtype=complex).reshape(shape)
            self.a = self.b = None
        else:
            self.a = np.asarray(a, dtype=object).reshape(shape)
            self.b = np.asarray(b, dtype=object).reshape(shape)
            self.c = None

    @property
    def exact(self) -> bool:
        return self.c is None

    @property
    def shape(self) -> tuple[int, int]:
        return (3**self.n_outputs, 3**self.n_inputs)

    @classmethod
    def from_eisenstein(cls, rows: Sequence[Sequence], n_inputs: int, n_outputs: int) -> SemMatrix:
        entries = [[Eisenstein.coerce(x) for x in row] for row in rows]
        a = np.array([[e.a for e in row] for row in entries], dtype=object)
        b = np.array([[e.b for e in row] for row in entries], dtype=object)
        return cls(n_inputs, n_outputs, a=a, b=b)

    @classmethod
    def from_omega_powers(cls, powers, n_inputs: int, n_outputs: int, scale: int = 1) -> SemMatrix:
        """Matrix whose entries are ``scale * w^k`` for integer k (``None`` meaning 0)."""
        p = np.asarray(powers, dtype=object)
        a = np.zeros(p.shape, dtype=object)
        b = np.zeros(p.shape, dtype=object)
        for idx, k in np.ndenumerate(p):
            if k is None:
                continue
            x, y = _POW[int(k) % 3]
            a[idx] = x * scale
            b[idx] = y * scale
        return cls(n_inputs, n_outputs, a=a, b=b)

    @classmethod
    def identity(cls, n: int = 1) -> SemMatrix:
        e = np.eye(3**n, dtype=int).astype(object)
        return cls(n, n, a=e, b=np.zeros_like(e))

    def complex_array(self) -> np.ndarray:
        if self.c is not None:
            return self.c
        return self.a.astype(float) + self.b.astype(float) * _W

    def to_complex(self) -> SemMatrix:
        return SemMatrix(self.n_inputs, self.n_outputs, c=self.complex_array())

    def entry(self, i: int, j: int):
        if self.exact:
            return Eisenstein(self.a[i, j], self.b[i, j])
        return complex(self.c[i, j])

    def __matmul__(self, other: SemMatrix) -> SemMatrix:
        """Matrix product ``self @ other`` (``other`` applied first)."""
        if self.n_inputs != other.n_outputs:
            raise ValueError("dimension mismatch")
        if self.exact and other.exact:
            # object matrix products go through np.dot
            a = np.dot(self.a, other.a) - np.dot(self.b, other.b)
            b = np.dot(self.a, other.b) + np.dot(self.b, other.a) - np.dot(self.b, other.b)
            return SemMatrix(other.n_inputs, self.n_outputs, a=a, b=b)
        return SemMatrix(other.n_inputs, self.n_outputs, c=self.complex_array() @ other.complex_array())

    def kron(self, other: SemMatrix) -> SemMatrix:
        n_in = self.n_inputs + other.n_inputs
        n_out = self.n_outputs + other.n_outputs
        if self.exact and other.exact:
            ac = np.kron(self.a, other.a)
            bd = np.kron(self.b, other.b)
            b = np.kron(self.a, other.b) + np.kron(self.b, other.a) - bd
            return SemMatrix(n_in, n_out, a=ac - bd, b=b)
        return SemMatrix(n_in, n_out, c=np.kron(self.complex_array(), other.complex_array()))

    def dagger(self) -> SemMatrix:
        if self.exact:
            # conj(a + b w) = (a - b) - b w
            return SemMatrix(self.n_outputs, self.n_inputs, a=(self.a - self.b).T, b=(-self.b).T)
        return SemMatrix(self.n_outputs, self.n_inputs, c=self.c.conj().T)

    def scale(self, s) -> SemMatrix:
        if self.exact and not isinstance(s, complex):
            s = Eisenstein.coerce(s)
            a, b = _mul_pairs((self.a, self.b), (s.a, s.b))
            return SemMatrix(self.n_inputs, self.n_outputs, a=a, b=b)
        return SemMatrix(self.n_inputs, self.n_outputs, c=self.complex_array() * complex(s))

    def power(self, k: int) -> SemMatrix:
        out = SemMatrix.identity(self.n_inputs)
        for _ in range(k):
            out = self @ out
        return out

    def is_zero(self, tol: float = DEFAULT_TOL) -> bool:
        if self.exact:
            return not (np.any(self.a != 0) or np.any(self.b != 0))
        return bool(np.max(np.abs(self.c), initial=0.0) <= tol)

    def dump(self) -> str:
        """Row-major text form: one row per line, entries ``a/b+c/dw`` or ``x+yi``."""
        lines = []
        rows, cols = self.shape
        for i in range(rows):
            if self.exact:
                cells = [Eisenstein(self.a[i, j], self.b[i, j]).canonical() for j in range(cols)]
            else:
                cells = [_fmt_complex(self.c[i, j]) for j in range(cols)]
            lines.append(" ".join(cells))
        return "\n".join(lines) + "\n"

    def __repr__(self) -> str:
        kind = "exact" if self.exact else "float"
        return f"SemMatrix({kind}, {self.shape[0]}x{self.shape[1]})"


def _fmt_complex(z: complex) -> str:
    return f"{z.real:.12g}{'+' if z.imag >= 0 else '-'}{abs(z.imag):.12g}i"


# -- node tensors --------------------------------------------------------------


def _spider_thirds(node) -> list[int] | None:
    if not node.phase.is_stabilizer():
        return None
    return [0, node.phase.alpha.thirds(), node.phase.beta.thirds()]


def _node_tensor(node, n_in: int, n_out: int, exact: bool):
    """Tensor with axes (inputs..., outputs...)."""
    r = n_in + n_out
    shape = (3,) * r
    if node.kind is Kind.Z:
        if exact:
            p = _spider_thirds(node)
            a = np.zeros(shape, dtype=object)
            b = np.zeros(shape, dtype=object)
            for j in range(3):
                x, y = _POW[p[j]]
                a[(j,) * r] += x
                b[(j,) * r] += y
            return a, b
        ph = [cmath.exp(1j * t.radians()) for t in node.phase.components()]
        t = np.zeros(shape, dtype=complex)
        for j in range(3):
            t[(j,) * r] += ph[j]
        return t
    if node.kind is Kind.X:
        idx = np.indices(shape).reshape(r, -1) if r else np.zeros((0, 1), dtype=int)
        s = (idx[n_in:].sum(axis=0) - idx[:n_in].sum(axis=0)) % 3
        if exact:
            p = _spider_thirds(node)
            a = np.zeros(s.shape, dtype=np.int64)
            b = np.zeros(s.shape, dtype=np.int64)
            for k in range(3):
                e = (p[k] + k * s) % 3
                a += _POW_A[e]
                b += _POW_B[e]
            return a.reshape(shape).astype(object), b.reshape(shape).astype(object)
        ph = [cmath.exp(1j * t.radians()) for t in node.phase.components()]
        t = sum(ph[k] * _W ** ((k * s) % 3) for k in range(3))
        return np.asarray(t, dtype=complex).reshape(shape)
    sign = 1 if node.kind is Kind.H else -1
    powers = [[(sign * i * j) % 3 for j in range(3)] for i in range(3)]
    if exact:
        a = np.array([[_POW[k][0] for k in row] for row in powers], dtype=object)
        b = np.array([[_POW[k][1] for k in row] for row in powers], dtype=object)
        return a, b
    return np.array([[_W**k for k in row] for row in powers], dtype=complex)


# -- contraction ---------------------------------------------------------------


class _T:
    """A labelled tensor; ``data`` is (a, b) when exact, else a complex array."""

    __slots__ = ("data", "labels")

    def __init__(self, data, labels):
        self.data = data
        self.labels = list(labels)

    @property
    def rank(self) -> int:
        return len(self.labels)


def _trace_repeats(t: _T, exact: bool) -> _T:
    while True:
        seen = {}
        pair = None
        for i, lab in enumerate(t.labels):
            if lab in seen:
                pair = (seen[lab], i)
                break
            seen[lab] = i
        if pair is None:
            return t
        i, j = pair

        def tr(x):
            return np.diagonal(x, axis1=i, axis2=j).sum(axis=-1)

        data = (tr(t.data[0]), tr(t.data[1])) if exact else tr(t.data)
        labels = [lab for k, lab in enumerate(t.labels) if k not in (i, j)]
        t = _T(data, labels)


def _contract(x: _T, y: _T, exact: bool) -> _T:
    shared = [lab for lab in x.labels if lab in y.labels]
    ax = ([x.labels.index(s) for s in shared], [y.labels.index(s) for s in shared])
    labels = [lab for lab in x.labels if lab not in shared] + [lab for lab in y.labels if lab not in shared]
    if exact:
        (a, b), (c, d) = x.data, y.data
        ac = np.tensordot(a, c, axes=ax)
        bd = np.tensordot(b, d, axes=ax)
        ad = np.tensordot(a, d, axes=ax)
        bc = np.tensordot(b, c, axes=ax)
        data = (ac - bd, ad + bc - bd)
    else:
        data = np.tensordot(x.data, y.data, axes=ax)
    return _T(data, labels)


def _result_rank(x: _T, y: _T) -> int:
    shared = len(set(x.labels) & set(y.labels))
    return x.rank + y.rank - 2 * shared


def interpret(
    d: Diagram,
    *,
    cap: int = DEFAULT_CAP,
    exact: bool | None = None,
    order: str | int = "greedy",
) -> SemMatrix:
    """Evaluate the standard interpretation of ``d``.

    ``order`` selects the elimination order: ``"greedy"`` (smallest
    intermediate first), ``"sequential"`` (node insertion order) or an integer
    seed for a random order.  All orders give the same matrix.
    """
    if exact is None:
        exact = d.is_stabilizer()
    elif exact and not d.is_stabilizer():
        raise ValueError("exact evaluation needs every phase to be a multiple of 2*pi/3")

    if d.n_inputs + d.n_outputs > cap:
        raise DiagramTooLarge(f"{d.n_inputs + d.n_outputs} boundary wires exceed cap {cap}")
    tensors: list[_T] = []
    for v, node in d.nodes.items():
        ins = d.in_wires(v)
        outs = d.out_wires(v)
        data = _node_tensor(node, len(ins), len(outs), exact)
        tensors.append(_trace_repeats(_T(data, [("w", i) for i in ins + outs]), exact))

    in_labels: dict[int, tuple] = {}
    out_labels: dict[int, tuple] = {}
    for i, (s, t) in enumerate(d.wires):
        if is_boundary(s) and is_boundary(t):
            eye = np.eye(3, dtype=int)
            data = (eye.astype(object), np.zeros((3, 3), dtype=object)) if exact else eye.astype(complex)
            tensors.append(_T(data, [("bi", i), ("bo", i)]))
            in_labels[boundary_index(s)[1]] = ("bi", i)
            out_labels[boundary_index(t)[1]] = ("bo", i)
        elif is_boundary(s):
            in_labels[boundary_index(s)[1]] = ("w", i)
        elif is_boundary(t):
            out_labels[boundary_index(t)[1]] = ("w", i)

    rng = None
    if isinstance(order, int) and not isinstance(order, bool):
        rng = random.Random(order)

    while len(tensors) > 1:
        best = None
        if order == "sequential":
            best = (0, 1)
        elif rng is not None:
            pairs = list(itertools.combinations(range(len(tensors)), 2))
            linked = [(i, j) for i, j in pairs if set(tensors[i].labels) & set(tensors[j].labels)]
            best = rng.choice(linked or pairs)
        else:
            for i, j in itertools.combinations(range(len(tensors)), 2):
                x, y = tensors[i], tensors[j]
                connected = bool(set(x.labels) & set(y.labels))
                key = (not connected, _result_rank(x, y), i, j)
                if best is None or key < best[0]:
                    best = (key, (i, j))
            best = best[1]
        i, j = best
        if _result_rank(tensors[i], tensors[j]) > cap:
            raise DiagramTooLarge(
                f"intermediate tensor of width {_result_rank(tensors[i], tensors[j])} exceeds cap {cap}"
            )
        merged = _contract(tensors[i], tensors[j], exact)
        tensors = [t for k, t in enumerate(tensors) if k not in (i, j)] + [merged]

    if tensors:
        final = tensors[0]
    else:
        one = (np.array(1, dtype=object), np.array(0, dtype=object)) if exact else np.array(1, dtype=complex)
        final = _T(one, [])

    target = [out_labels[k] for k in range(d.n_outputs)] + [in_labels[k] for k in range(d.n_inputs)]
    perm = [final.labels.index(lab) for lab in target]
    if exact:
        a, b = (np.transpose(x, perm) if perm else x for x in final.data)
        return SemMatrix(d.n_inputs, d.n_outputs, a=a, b=b)
    c = np.transpose(final.data, perm) if perm else final.data
    return SemMatrix(d.n_inputs, d.n_outputs, c=c)


# -- equality --------------------------------------------------------------------


def equal_exact(x: SemMatrix, y: SemMatrix, tol: float = DEFAULT_TOL) -> bool:
    if x.shape != y.shape:
        raise ValueError(f"shape mismatch {x.shape} vs {y.shape}")
    if x.exact and y.exact:
        return bool(np.all(x.a == y.a) and np.all(x.b == y.b))
    return bool(np.max(np.abs(x.complex_array() - y.complex_array()), initial=0.0) <= tol)


def proportional_eq(x: SemMatrix, y: SemMatrix, tol: float = DEFAULT_TOL) -> bool:
    """True iff ``x = c * y`` for some nonzero scalar ``c``."""
    if x.shape != y.shape:
        raise ValueError(f"shape mismatch {x.shape} vs {y.shape}")
    if x.exact and y.exact:
        nz = np.flatnonzero((x.a != 0) | (x.b != 0))
        if nz.size == 0:
            return y.is_zero()
        p = np.unravel_index(nz[0], x.shape)
        xp = (x.a[p], x.b[p])
        yp = (y.a[p], y.b[p])
        if not (yp[0] or yp[1]):
            return False
        la, lb = _mul_pairs((x.a, x.b), yp)
        ra, rb = _mul_pairs((y.a, y.b), xp)
        return bool(np.all(la == ra) and np.all(lb == rb))
    xc, yc = x.complex_array(), y.complex_array()
    sx = np.max(np.abs(xc), initial=0.0)
    sy = np.max(np.abs(yc), initial=0.0)
    if sx <= tol or sy <= tol:
        return sx <= tol and sy <= tol
    xn, yn = xc / sx, yc / sy
    k = np.unravel_index(np.argmax(np.abs(yn)), yn.shape)
    c = xn[k] / yn[k]
    return bool(np.max(np.abs(xn - c * yn)) <= tol)
