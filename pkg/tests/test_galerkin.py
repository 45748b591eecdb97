"""Dual-action quadratic form: mode blocks, Morse counts, stabilization."""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from symstab import (
    assemble_dual_form,
    constant_form_bounds,
    constant_form_index,
    diamond_all,
    mode_frequencies,
    morse_index_nullity,
    stabilized_index,
)
from symstab.errors import GalerkinError, ResonantFormError

PI = np.pi


def test_mode_frequencies():
    f = mode_frequencies(2 * PI, 4)
    assert np.allclose(f, [1, 2, 3, 4])
    with pytest.raises(GalerkinError):
        mode_frequencies(-1.0, 4)
    with pytest.raises(GalerkinError):
        mode_frequencies(1.0, 0)


def test_constant_form_index_values():
    # 2n jumps each time s passes a multiple of pi rho^2
    assert constant_form_index(1.0, 1.0, 1) == 0
    assert constant_form_index(4.0, 1.0, 1) == 2
    assert constant_form_index(7.0, 1.0, 1) == 4
    assert constant_form_index(4.0, 1.0, 2) == 4


def test_constant_form_resonance():
    with pytest.raises(ResonantFormError):
        constant_form_index(PI, 1.0, 1)
    with pytest.raises(ResonantFormError):
        constant_form_index(2 * PI, 1.0, 1)


def test_constant_form_bounds_order():
    lo, hi = constant_form_bounds(5.0, 0.9, 1.2, 1)
    assert lo <= hi
    assert lo == constant_form_index(5.0, 1.2, 1)
    assert hi == constant_form_index(5.0, 0.9, 1)
    with pytest.raises(GalerkinError):
        constant_form_bounds(5.0, 1.2, 0.9, 1)


def test_callable_matches_constant():
    G = np.diag([0.5, 0.5])
    s, n, K = 4.0, 1, 24
    a = morse_index_nullity(assemble_dual_form(G, s, n, K))
    b = morse_index_nullity(assemble_dual_form(lambda t: G, s, n, K))
    assert a == b


def test_stabilized_matches_constant_formula():
    # a ball of radius rho has the closed-form count
    for rho, s in [(1.0, 4.0), (1.1, 7.5), (0.9, 2.0)]:
        G = np.eye(2) * (rho * rho / 2.0)
        gi, gn, K = stabilized_index(G, s, 1)
        assert gi == constant_form_index(s, rho, 1)
        assert gn == 0    # generic s: no resonant mode, no kernel


def test_stabilized_doubling_consistent():
    G = diamond_all([np.eye(2) * 0.5, np.eye(2) * 0.605])
    a = stabilized_index(G, PI, 2)
    b = stabilized_index(G, PI, 2, K0=32)
    assert a[:2] == b[:2]


def test_ellipsoid_orbit_morse_count():
    # first orbit of the 1 : 1.1 ellipsoid at its own action
    G = diamond_all([np.eye(2) * 0.5, np.eye(2) * 0.605])
    gi, gn, _ = stabilized_index(G, PI, 2)
    assert (gi, gn) == (0, 2)


@settings(max_examples=20, deadline=None)
@given(s=st.floats(0.5, 15.0), rho=st.floats(0.7, 1.4))
def test_constant_form_monotone_in_s(s, rho):
    try:
        a = constant_form_index(s, rho, 1)
        b = constant_form_index(s + 0.8, rho, 1)
    except ResonantFormError:
        return
    assert a <= b
