import math

import numpy as np
import pytest

from sl3kuznetsov.errors import PoleError, StencilError
from sl3kuznetsov.odecheck import (
    StencilConfig,
    recurrence_check,
    residual_w4,
    residual_wl,
    stencil_weights,
)
from sl3kuznetsov.odecheck import _jwl_termwise_partial
from sl3kuznetsov.series import j_w4, j_wl

MU_A = (0.9j, 0.35j, -1.25j)
MU_B = (1.3j, -0.45j, -0.85j)


def test_stencil_weights_are_exact_on_polynomials():
    for deriv in (1, 2, 3):
        for order in (2, 4, 6):
            offs, w = stencil_weights(deriv, order)
            assert offs.size == w.size
            # the rule recovers p^(deriv)(0) exactly for p(x) = x^k up
            # to the stencil's polynomial degree
            for k in range(offs.size):
                got = float(w @ offs ** k)
                want = float(math.factorial(k)) if k == deriv else 0.0
                assert abs(got - want) < 1e-8 * max(1.0, abs(want))


def test_stencil_weights_validation():
    with pytest.raises(ValueError):
        stencil_weights(-1, 4)
    with pytest.raises(ValueError):
        stencil_weights(2, 3)


def test_stencil_config_validation():
    with pytest.raises(ValueError):
        StencilConfig(order=5)
    with pytest.raises(ValueError):
        StencilConfig(h_rel=0.5)
    with pytest.raises(ValueError):
        StencilConfig(richardson_levels=0)


def test_long_element_kernel_satisfies_both_equations():
    def f(y1, y2):
        return j_wl((y1, y2), MU_A).value

    r1, r2 = residual_wl(f, (0.08, 0.09), MU_A)
    assert r1 < 1e-7
    assert r2 < 1e-7


def test_wrong_spectral_parameter_leaves_large_residual():
    # the check has teeth: the same evaluator against mismatched
    # eigenvalues must NOT look like a solution
    def f(y1, y2):
        return j_wl((y1, y2), MU_A).value

    r1, r2 = residual_wl(f, (0.08, 0.09), MU_B)
    assert max(r1, r2) > 1e-3


def test_one_variable_kernel_satisfies_its_equation():
    def f(t):
        return j_w4(t, MU_A).value

    assert residual_w4(f, 0.07, 1.0, MU_A) < 1e-7
    # deformed second argument rides through the product term
    def g(t):
        return j_w4(t, MU_A, y2=1.3).value

    assert residual_w4(g, 0.07, 1.3, MU_A) < 1e-7
    # and with the wrong y2 the equation fails
    assert residual_w4(g, 0.07, 1.0, MU_A) > 1e-3


def test_stencil_refuses_zero_centered_evaluation():
    with pytest.raises(StencilError):
        residual_w4(lambda t: j_w4(t, MU_A).value, 0.0, 1.0, MU_A)


def test_termwise_partial_agrees_with_finite_differences():
    y = (0.05, 0.06)
    h = 1e-4
    offs, w = stencil_weights(1, 6)
    for k1, k2 in [(1, 0), (0, 1)]:
        term = _jwl_termwise_partial(y, MU_A, k1, k2)
        if k1:
            fd = sum(wi * j_wl((y[0] + o * h, y[1]), MU_A).value
                     for o, wi in zip(offs, w)) / h
        else:
            fd = sum(wi * j_wl((y[0], y[1] + o * h), MU_A).value
                     for o, wi in zip(offs, w)) / h
        assert abs(term - fd) < 1e-7 * abs(term)


def test_recurrence_residuals_machine_small():
    for mu in (MU_A, MU_B):
        assert recurrence_check(mu, 40) < 1e-12


def test_recurrence_check_guards():
    assert recurrence_check(MU_A, 0) == 0.0
    with pytest.raises(ValueError):
        recurrence_check(MU_A, -1)
    with pytest.raises(PoleError):
        recurrence_check((-0.5, 0.0, 0.5), 10)  # mu1-mu3 = -1
