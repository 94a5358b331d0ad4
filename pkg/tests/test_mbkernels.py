import numpy as np
import pytest

from sl3kuznetsov.errors import DomainError, SignMismatch
from sl3kuznetsov.mbkernels import (
    k_w4_mb,
    k_w4_voronoi,
    k_wl_mb,
    whittaker_small_y_sum,
    whittaker_wstar,
    whittaker_wstar_grid,
    whittaker_y1_asymp,
)
from sl3kuznetsov.series import k_w4_sym, k_wl_signed

MU_A = (0.9j, 0.35j, -1.25j)

# frozen mpmath double-quadrature references (dps 22+)
WSTAR_REF = ((1.0, 1.0), MU_A, 1.5473109164278987e-08)
KWL_PP_REF = ((0.15, 0.2), MU_A,
              3.4911185781753883e-04 + 7.389932511065414e-07j)


def test_wstar_matches_frozen_reference():
    y, mu, ref = WSTAR_REF
    res = whittaker_wstar(y, mu)
    assert res.representation == "mellin_barnes"
    assert res.n_quad > 0
    assert abs(res.value - ref) < 1e-10 * abs(ref)
    assert abs(res.value.imag) < 1e-10 * abs(ref)  # real for conjugate-stable mu


def test_wstar_requires_positive_arguments():
    with pytest.raises(DomainError):
        whittaker_wstar((0.0, 1.0), MU_A)
    with pytest.raises(DomainError):
        whittaker_wstar((1.0, -1.0), MU_A)


def test_wstar_grid_matches_pointwise():
    y1s, y2s = [0.8, 1.1], [0.9, 1.3]
    grid = whittaker_wstar_grid(y1s, y2s, MU_A)
    assert grid.shape == (2, 2)
    for i, y1 in enumerate(y1s):
        for j, y2 in enumerate(y2s):
            pt = whittaker_wstar((y1, y2), MU_A)
            assert abs(grid[i, j] - pt.value) < 1e-10 * abs(pt.value)


def test_kwl_mb_positive_quadrant_uses_whittaker_identity():
    y, mu, ref = KWL_PP_REF
    res = k_wl_mb(y, mu)
    assert res.representation == "whittaker_identity"
    assert abs(res.value - ref) < 1e-9 * abs(ref)


def test_kwl_mb_other_quadrants_match_series_route():
    cases = [((-0.05, -0.06), "--"), ((0.05, -0.06), "+-"),
             ((-0.05, 0.06), "-+")]
    for y, pair in cases:
        mb = k_wl_mb(y, MU_A)
        sr = k_wl_signed(y, MU_A, pair)
        assert mb.representation == "mellin_barnes"
        assert abs(mb.value - sr.value) < 1e-10 * abs(sr.value)


def test_kwl_mb_variant_guardrails():
    with pytest.raises(SignMismatch):
        k_wl_mb((0.1, 0.1), MU_A, variant="mm")
    with pytest.raises(DomainError):
        k_wl_mb((0.1, 0.1), MU_A, variant="zz")
    with pytest.raises(DomainError):
        k_wl_mb((0.0, 0.1), MU_A)


def test_kw4_mb_matches_series_route_both_signs():
    for y1 in (0.05, -0.3):
        mb = k_w4_mb(y1, MU_A)
        sym = k_w4_sym(y1, MU_A)
        assert mb.representation == "mellin_barnes"
        assert abs(mb.value - sym.value) < 1e-10 * abs(sym.value)


def test_kw4_voronoi_agrees_with_direct_form():
    for y1 in (0.05, -0.3):
        a = k_w4_mb(y1, MU_A)
        b = k_w4_voronoi(y1, MU_A)
        assert abs(a.value - b.value) < 1e-10 * abs(a.value)


def test_kw4_vertical_tails_cross_check():
    # window-averaged vertical tails are the low-accuracy fallback
    sym = k_w4_sym(0.05, MU_A)
    vert = k_w4_mb(0.05, MU_A, tails="vertical")
    assert abs(vert.value - sym.value) < 1e-4 * abs(sym.value)
    with pytest.raises(DomainError):
        k_w4_mb(0.05, MU_A, tails="diagonal")


def test_small_y_six_term_sum_approximates_wstar():
    y = (2e-3, 1.5e-3)
    approx = whittaker_small_y_sum(y, MU_A)
    full = whittaker_wstar(y, MU_A)
    assert abs(approx - full.value) < 1e-3 * abs(full.value)


def test_y1_asymptotics_converge_quadratically():
    res = []
    for y1 in (1e-2, 1e-3):
        a, err = whittaker_y1_asymp((y1, 0.8), MU_A)
        w = whittaker_wstar((y1, 0.8), MU_A)
        res.append(abs(a - w.value) / abs(w.value))
        assert err >= 0.0
    assert res[0] < 5e-3
    assert res[1] < 5e-5
    with pytest.raises(DomainError):
        whittaker_y1_asymp((0.0, 1.0), MU_A)


def test_error_estimates_cover_route_disagreement():
    # the reported uncertainty of each route bounds the observed gap
    mb = k_w4_mb(-0.3, MU_A)
    sym = k_w4_sym(-0.3, MU_A)
    gap = abs(mb.value - sym.value)
    assert gap <= 10.0 * (mb.err_estimate + sym.err_estimate)
