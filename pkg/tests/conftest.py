import cmath
import sys
import itertools

import numpy as np
import pytest

W = cmath.exp(2j * cmath.pi / 3)


def green_matrix(n_in, n_out, thetas):
    """Sum_j e^{i theta_j} |j..j><j..j| built entry by entry."""
    m = np.zeros((3**n_out, 3**n_in), dtype=complex)
    for j in range(3):
        row = sum(j * 3**k for k in range(n_out))
        col = sum(j * 3**k for k in range(n_in))
        m[row, col] += cmath.exp(1j * thetas[j])
    return m


def red_matrix(n_in, n_out, thetas):
    """Sum_k e^{i theta_k} |k~..><k~..| with |k~> = sum_j w^{jk} |j>."""
    m = np.zeros((3**n_out, 3**n_in), dtype=complex)
    for outs in itertools.product(range(3), repeat=n_out):
        for ins in itertools.product(range(3), repeat=n_in):
            r = int(np.ravel_multi_index(outs, (3,) * n_out)) if n_out else 0
            c = int(np.ravel_multi_index(ins, (3,) * n_in)) if n_in else 0
            m[r, c] = sum(cmath.exp(1j * thetas[k]) * W ** (k * (sum(outs) - sum(ins))) for k in range(3))
    return m


HADAMARD = np.array([[W ** (a * b) for b in range(3)] for a in range(3)])


def assert_proportional(x, y, tol=1e-9):
    x, y = np.asarray(x, dtype=complex), np.asarray(y, dtype=complex)
    assert x.shape == y.shape
    k = np.unravel_index(np.argmax(np.abs(y)), y.shape)
    assert abs(y[k]) > tol and abs(x[k]) > tol
    assert np.allclose(x / x[k], y / y[k], atol=1e-9)


@pytest.fixture
def rng():
    import random

    return random.Random(12345)


def random_gate(rng, width):
    """A random generator with ``width`` inputs, as a diagram."""
    from qutritzx.diagram import Diagram
    from qutritzx.phases import stabilizer_pairs

    phase = rng.choice(stabilizer_pairs())
    colour = rng.choice("ZX")
    if width == 1:
        pick = rng.randrange(5)
        if pick == 0:
            return Diagram.hadamard(dagger=rng.random() < 0.5)
        if pick == 1:
            return Diagram.spider(colour, 1, 2, phase)
        return Diagram.spider(colour, 1, 1, phase)
    pick = rng.randrange(3)
    if pick == 0:
        return Diagram.permutation([1, 0])
    if pick == 1:
        return Diagram.spider(colour, 2, 1, phase)
    return Diagram.spider(colour, 2, 2, phase)


def random_host(rng, max_wires=3, max_nodes=10):
    """A random stabilizer diagram on at most ``max_wires`` boundary wires."""
    from qutritzx.diagram import Diagram

    n = rng.randint(1, max_wires)
    d = Diagram.identity(n)
    width = n
    while len(d.nodes) < max_nodes:
        k = rng.randrange(width)
        span = 2 if k + 1 < width and rng.random() < 0.4 else 1
        gate = random_gate(rng, span)
        new_width = width - span + gate.n_outputs
        if new_width > max_wires or len(d.nodes) + len(gate.nodes) > max_nodes:
            break
        layer = Diagram.identity(k).tensor(gate).tensor(Diagram.identity(width - k - span))
        d = d.compose(layer)
        width = new_width
    return d


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "LINES", [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
