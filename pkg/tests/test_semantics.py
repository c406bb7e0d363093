from fractions import Fraction

import numpy as np
import pytest
from conftest import HADAMARD, W, assert_proportional, green_matrix, red_matrix
from hypothesis import given, settings, strategies as st

from qutritzx.diagram import Diagram, Kind
from qutritzx.phases import PhasePair, stabilizer_pairs
from qutritzx.semantics import (
    DiagramTooLarge,
    Eisenstein,
    SemMatrix,
    equal_exact,
    interpret,
    proportional_eq,
)

rationals = st.fractions(min_value=-4, max_value=4, max_denominator=7)
eis = st.builds(Eisenstein, rationals, rationals)


@given(eis, eis)
def test_eisenstein_arithmetic_matches_complex(x, y):
    assert complex(x * y) == pytest.approx(complex(x) * complex(y))
    assert complex(x + y) == pytest.approx(complex(x) + complex(y))
    assert complex(x.conjugate()) == pytest.approx(complex(x).conjugate())
    if y:
        assert complex(x / y) == pytest.approx(complex(x) / complex(y))


@given(eis)
def test_eisenstein_text_round_trip(x):
    assert Eisenstein.parse(str(x)) == x
    assert Eisenstein.parse(x.canonical()) == x


def test_omega_is_a_primitive_cube_root():
    w = Eisenstein.omega_power(1)
    assert w * w * w == Eisenstein(1)
    assert Eisenstein(1) + w + w * w == Eisenstein(0)


def test_hadamard_entries():
    m = interpret(Diagram.hadamard())
    assert m.exact
    assert np.allclose(m.complex_array(), HADAMARD)
    md = interpret(Diagram.hadamard(dagger=True))
    assert np.allclose(md.complex_array(), HADAMARD.conj())


@pytest.mark.parametrize("n_in,n_out", [(0, 1), (1, 1), (1, 2), (2, 1), (2, 2), (0, 3), (3, 0)])
@pytest.mark.parametrize("phase", stabilizer_pairs())
def test_spiders_match_their_definitions(n_in, n_out, phase):
    thetas = [0, phase.alpha.radians(), phase.beta.radians()]
    g = interpret(Diagram.z(n_in, n_out, phase))
    r = interpret(Diagram.x(n_in, n_out, phase))
    assert np.allclose(g.complex_array(), green_matrix(n_in, n_out, thetas))
    assert np.allclose(r.complex_array(), red_matrix(n_in, n_out, thetas))


def test_float_path_for_generic_angles():
    p = PhasePair.of(Fraction(1, 7), Fraction(3, 11))
    m = interpret(Diagram.x(1, 2, p))
    assert not m.exact
    assert np.allclose(m.complex_array(), red_matrix(1, 2, [0, p.alpha.radians(), p.beta.radians()]))


def test_red_ket_is_three_times_zero():
    m = interpret(Diagram.x(0, 1))
    assert equal_exact(m, SemMatrix.from_eisenstein([[3], [0], [0]], 0, 1))


def test_red_shift():
    # X(2pi/3, 4pi/3) is three times |j> -> |j-1>
    m = interpret(Diagram.x(1, 1, PhasePair.thirds(1, 2))).complex_array()
    shift = np.roll(np.eye(3), -1, axis=0)
    assert np.allclose(m, 3 * shift)


def test_red_merge_adds_mod_three():
    m = interpret(Diagram.x(2, 1)).complex_array()
    for a in range(3):
        for b in range(3):
            col = m[:, a + 3 * b]
            assert np.argmax(np.abs(col)) == (a + b) % 3
            assert np.count_nonzero(np.round(col, 9)) == 1


def test_empty_diagram_is_the_scalar_one():
    m = interpret(Diagram.empty())
    assert m.shape == (1, 1)
    assert str(m.entry(0, 0)) == "1"


def test_composition_is_matrix_product():
    d = Diagram.hadamard().compose(Diagram.z(1, 1, PhasePair.thirds(1, 0)))
    expect = np.diag([1, W, 1]) @ HADAMARD
    assert np.allclose(interpret(d).complex_array(), expect)


def test_tensor_is_kronecker():
    d = Diagram.hadamard().tensor(Diagram.z(1, 1, PhasePair.thirds(0, 1)))
    # wire 0 is the most significant digit
    expect = np.kron(HADAMARD, np.diag([1, 1, W]))
    assert np.allclose(interpret(d).complex_array(), expect)


def test_contraction_orders_agree(rng):
    from conftest import random_host

    for _ in range(20):
        d = random_host(rng, max_nodes=6)
        ref = interpret(d)
        for order in ("sequential", 3, 17):
            assert equal_exact(interpret(d, order=order, cap=12), ref)


def test_cap_is_enforced():
    with pytest.raises(DiagramTooLarge):
        interpret(Diagram.z(3, 3), cap=4)
    with pytest.raises(DiagramTooLarge):
        interpret(Diagram.z(1, 3).then(Diagram.z().tensor(Diagram.z()).tensor(Diagram.z()), Diagram.x(3, 1)), cap=2,
                  order="sequential")


def test_self_loop_is_a_trace():
    # a green spider with a plain self-loop: sum_j over the loop index gives the spider again
    d = Diagram({"g": Diagram.z().nodes["s"]}, [("in:0", "g"), ("g", "g"), ("g", "out:0")], 1, 1)
    assert proportional_eq(interpret(d), interpret(Diagram.identity(1)))


def test_proportional_eq():
    m = interpret(Diagram.hadamard())
    assert proportional_eq(m, m.scale(Eisenstein(2, 1)))
    assert not proportional_eq(m, interpret(Diagram.hadamard(dagger=True)))
    assert not proportional_eq(m, m.scale(0))


def test_dagger_matches_adjoint_diagram(rng):
    from conftest import random_host

    for _ in range(10):
        d = random_host(rng)
        assert equal_exact(interpret(d.adjoint()), interpret(d).dagger())


@settings(max_examples=25, deadline=None)
@given(st.sampled_from(stabilizer_pairs()), st.sampled_from(stabilizer_pairs()))
def test_same_colour_phases_add(p, q):
    for kind in (Kind.Z, Kind.X):
        two = Diagram.spider(kind, 1, 1, p).compose(Diagram.spider(kind, 1, 1, q))
        assert proportional_eq(interpret(two), interpret(Diagram.spider(kind, 1, 1, p + q)))


def test_h_order_four():
    h = interpret(Diagram.hadamard())
    assert proportional_eq(h.power(4), SemMatrix.identity(1))
    assert not proportional_eq(h.power(2), SemMatrix.identity(1))


def test_dump_format():
    text = interpret(Diagram.hadamard()).dump()
    assert text.splitlines() == [
        "1/1+0/1w 1/1+0/1w 1/1+0/1w",
        "1/1+0/1w 0/1+1/1w -1/1-1/1w",
        "1/1+0/1w -1/1-1/1w 0/1+1/1w",
    ]
    assert str(Eisenstein(-1, -1)) == "-1-w"
