import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sl3kuznetsov.errors import SingularError
from sl3kuznetsov.geometry import (
    DiagY,
    UpperX,
    iwasawa,
    power_fn,
    power_fn_normalized,
    psi_char,
    uyv_decompose,
    weyl_act_y,
    xy_star_closed,
)
from sl3kuznetsov.spectral import WEYL_GROUP, WEYL_WL, as_mu, weyl_act_mu

MU = (0.9j, 0.35j, -1.25j)


def test_upper_x_matrix_layout():
    m = UpperX(1.0, 2.0, 3.0).matrix()
    # x1 at (2,3), x2 at (1,2), x3 at (1,3) in one-based indexing
    assert m[1, 2] == 1.0 and m[0, 1] == 2.0 and m[0, 2] == 3.0
    assert np.allclose(np.diag(m), 1.0)


def test_diag_y_matrix_layout():
    m = DiagY(2.0, 3.0).matrix()
    assert np.allclose(m, np.diag([6.0, 2.0, 1.0]))
    with pytest.raises(ValueError):
        DiagY(0.0, 1.0)


def test_iwasawa_reconstructs_and_factors_are_shaped():
    rng = np.random.default_rng(5)
    for _ in range(50):
        g = rng.normal(size=(3, 3))
        r, x, y, k = iwasawa(g)
        assert r > 0 and y.y1 > 0 and y.y2 > 0
        assert np.allclose(k @ k.T, np.eye(3), atol=1e-12)
        rebuilt = r * x.matrix() @ y.matrix() @ k
        assert np.allclose(rebuilt, g, atol=1e-10 * np.abs(g).max())


def test_iwasawa_rejects_singular():
    g = np.ones((3, 3))
    with pytest.raises(SingularError):
        iwasawa(g)


def test_uyv_reconstructs_with_unipotent_factors():
    rng = np.random.default_rng(6)
    n = 0
    while n < 50:
        g = rng.normal(size=(3, 3))
        try:
            r, u, y, v = uyv_decompose(g)
        except SingularError:
            continue
        n += 1
        assert np.allclose(np.tril(u, -1), 0.0) and np.allclose(np.diag(u), 1.0)
        assert np.allclose(np.triu(v, 1), 0.0) and np.allclose(np.diag(v), 1.0)
        rebuilt = r * u @ y.matrix() @ v
        assert np.allclose(rebuilt, g, atol=1e-9 * np.abs(g).max())


def test_uyv_rejects_vanishing_minor():
    g = np.array([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [1.0, 1.0, 0.0]])
    with pytest.raises(SingularError):
        uyv_decompose(g)  # c = 0


def test_twisted_coordinates_match_iwasawa_of_flip():
    rng = np.random.default_rng(3)
    worst = 0.0
    for _ in range(300):
        x = UpperX(*rng.uniform(-4, 4, size=3))
        xs1, xs2, ys1, ys2 = xy_star_closed(x)
        _, xd, yd, _ = iwasawa(WEYL_WL.matrix @ x.matrix())
        worst = max(worst, abs(xd.x1 - xs1), abs(xd.x2 - xs2),
                    abs(yd.y1 - ys1), abs(yd.y2 - ys2))
    assert worst < 1e-10


@settings(max_examples=60, deadline=None)
@given(st.floats(-50, 50), st.floats(-50, 50), st.floats(-50, 50))
def test_twisted_denominators_never_degenerate(x1, x2, x3):
    xs1, xs2, ys1, ys2 = xy_star_closed(UpperX(x1, x2, x3))
    assert np.isfinite([xs1, xs2, ys1, ys2]).all()
    assert ys1 > 0 and ys2 > 0


def test_power_fn_normalized_closed_form():
    mu = as_mu(MU)
    y = DiagY(0.7, 1.9)
    expect = abs(y.y1) ** (1.0 - mu.mu3) * abs(y.y2) ** (1.0 + mu.mu1)
    assert abs(power_fn_normalized(mu, y) - expect) < 1e-14 * abs(expect)


def test_power_fn_weyl_compatibility():
    # p_(mu^w)(y) = p_mu(y^w) for every Weyl element
    y = DiagY(0.6, 2.3)
    for w in WEYL_GROUP:
        lhs = power_fn(weyl_act_mu(MU, w), y)
        rhs = power_fn(MU, weyl_act_y(y, w))
        assert abs(lhs - rhs) < 1e-13 * abs(rhs)


def test_weyl_act_y_long_element_inverts_and_squares_to_identity():
    y = DiagY(0.6, 2.3)
    flipped = weyl_act_y(y, WEYL_WL)
    assert abs(flipped.y1 - 1.0 / y.y2) < 1e-15
    assert abs(flipped.y2 - 1.0 / y.y1) < 1e-15
    back = weyl_act_y(flipped, WEYL_WL)
    assert abs(back.y1 - y.y1) < 1e-15 and abs(back.y2 - y.y2) < 1e-15


def test_psi_char_is_additive_unit_modulus():
    x = UpperX(0.3, -0.7, 0.2)
    for m in [(1, 0), (0, 1), (2, -3)]:
        assert abs(abs(psi_char(m, x)) - 1.0) < 1e-15
    lhs = psi_char((1, 2), x) * psi_char((2, -3), x)
    rhs = psi_char((3, -1), x)
    assert abs(lhs - rhs) < 1e-14
    assert psi_char((0, 0), x) == 1.0
    # the (1,3) coordinate does not enter the character
    assert abs(psi_char((1, 1), UpperX(0.3, -0.7, 9.9))
               - psi_char((1, 1), UpperX(0.3, -0.7, 0.0))) < 1e-15
