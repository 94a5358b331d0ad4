import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sl3kuznetsov.errors import DivisibilityError, UnsupportedWeyl
from sl3kuznetsov.kloosterman import (
    CharIndex,
    Modulus,
    s_big,
    s_big_naive,
    s_tilde,
    s_tilde_naive,
    s_weyl,
)
from sl3kuznetsov.spectral import WEYL_W4


def test_trivial_moduli_give_unity():
    assert abs(s_tilde(1, 1, 1, 1, 1) - 1.0) < 1e-14
    assert abs(s_big(1, 1, 1, 1, 1, 1) - 1.0) < 1e-14


def test_frozen_integer_value():
    # both routes evaluate to the integer -2 here
    assert abs(s_tilde(1, 1, 1, 2, 4) - (-2.0)) < 1e-12
    assert abs(s_tilde_naive(1, 1, 1, 2, 4) - (-2.0)) < 1e-12


def test_s_tilde_matches_naive_enumeration():
    cases = [(2, 1, 3, 3, 6), (1, 2, 1, 4, 8), (3, 2, 2, 5, 5),
             (1, 1, 2, 6, 12), (-2, 3, -1, 4, 12)]
    for m1, n1, n2, d1, d2 in cases:
        fast = s_tilde(m1, n1, n2, d1, d2)
        slow = s_tilde_naive(m1, n1, n2, d1, d2)
        assert abs(fast - slow) < 1e-9


def test_s_big_matches_naive_enumeration():
    cases = [(1, 1, 1, 1, 2, 3), (1, 2, 2, 1, 3, 4), (2, 1, 1, 3, 4, 6),
             (1, -1, 2, 1, 5, 3)]
    for args in cases:
        assert abs(s_big(*args) - s_big_naive(*args)) < 1e-9


def test_s_tilde_divisibility_guard():
    with pytest.raises(DivisibilityError):
        s_tilde(1, 1, 1, 3, 4)
    with pytest.raises(DivisibilityError):
        s_tilde_naive(1, 1, 1, 3, 4)


def test_modulus_validation():
    with pytest.raises(ValueError):
        s_tilde(1, 1, 1, 0, 2)
    with pytest.raises(ValueError):
        s_big(1, 1, 1, 1, -2, 3)
    with pytest.raises(ValueError):
        Modulus(0, 1)
    with pytest.raises(ValueError):
        CharIndex(1.5, 2)


def test_weyl_gates_select_square_locked_moduli():
    m, n = (1, 2), (2, 1)
    # w4 fires only when n2 c1 = m1 c2^2 with c2 | c1
    live_w4 = [(c1, c2) for c1 in range(1, 13) for c2 in range(1, 13)
               if abs(s_weyl("w4", m, n, (c1, c2))) > 1e-12]
    assert live_w4 == [(1, 1), (4, 2), (9, 3)]
    # w5 mirrors it: n1 c2 = m2 c1^2 with c1 | c2
    live_w5 = [(c1, c2) for c1 in range(1, 13) for c2 in range(1, 13)
               if abs(s_weyl("w5", m, n, (c1, c2))) > 1e-12]
    assert live_w5 == [(1, 1), (2, 4), (3, 9)]


def test_weyl_long_element_shuffles_into_four_index_sum():
    got = s_weyl("wl", (1, 2), (2, 1), (2, 3))
    want = s_big(1, 2, 1, 2, 2, 3)
    assert abs(got - want) < 1e-12


def test_weyl_input_forms():
    a = s_weyl(WEYL_W4, (1, 1), (1, 1), (1, 1))
    b = s_weyl("w4", CharIndex(1, 1), CharIndex(1, 1), Modulus(1, 1))
    assert abs(a - b) < 1e-14
    # historical alias of the long element
    c = s_weyl("w6", (1, 2), (2, 1), (2, 3))
    d = s_weyl("wl", (1, 2), (2, 1), (2, 3))
    assert abs(c - d) < 1e-14


def test_unsupported_weyl_elements_raise():
    for label in ("I", "w2", "w3"):
        with pytest.raises(UnsupportedWeyl):
            s_weyl(label, (1, 1), (1, 1), (1, 1))


def test_negating_characters_conjugates_the_sum():
    v = s_tilde(2, 1, 3, 3, 6)
    w = s_tilde(-2, -1, -3, 3, 6)
    assert abs(w - np.conj(v)) < 1e-12


@settings(max_examples=25, deadline=None)
@given(
    st.integers(-3, 3), st.integers(-3, 3), st.integers(-3, 3),
    st.integers(1, 6), st.integers(1, 4),
)
def test_s_tilde_equals_naive_on_random_tuples(m1, n1, n2, d1, q):
    d2 = d1 * q
    fast = s_tilde(m1, n1, n2, d1, d2)
    slow = s_tilde_naive(m1, n1, n2, d1, d2)
    assert abs(fast - slow) < 1e-9
