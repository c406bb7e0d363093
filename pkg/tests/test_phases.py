from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from qutritzx.phases import ZERO, Angle, PhasePair, stabilizer_pairs

fractions = st.fractions(min_value=-5, max_value=5, max_denominator=50)


def test_angle_reduces_mod_one_turn():
    assert Angle(Fraction(4, 3)) == Angle(Fraction(1, 3))
    assert Angle(Fraction(-1, 3)).value == Fraction(2, 3)


def test_parse_shorthand_and_fraction():
    assert Angle.parse("2") == Angle(Fraction(2, 3))
    assert Angle.parse("1/6").value == Fraction(1, 6)
    with pytest.raises(ValueError):
        Angle.parse("pi")


def test_stabilizer_pairs_are_the_nine_lattice_points():
    pairs = stabilizer_pairs()
    assert len(pairs) == 9 == len(set(pairs))
    assert all(p.is_stabilizer() for p in pairs)
    assert not PhasePair.of(Fraction(1, 6), 0).is_stabilizer()


@given(fractions, fractions, fractions, fractions)
def test_pairs_form_a_group(a, b, c, d):
    p, q = PhasePair.of(a, b), PhasePair.of(c, d)
    assert p + q == q + p
    assert p + (-p) == ZERO
    assert (p + q) - q == p


@given(fractions, fractions)
def test_json_round_trip(a, b):
    p = PhasePair.of(a, b)
    assert PhasePair.from_json(p.to_json()) == p


def test_swap_components():
    assert PhasePair.thirds(1, 2).swap_components() == PhasePair.thirds(2, 1)
