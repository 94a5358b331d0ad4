import numpy as np
import pytest

from sl3kuznetsov import config
from sl3kuznetsov.errors import GeometryError
from sl3kuznetsov.gammafns import log_gamma
from sl3kuznetsov.quadrature import (
    Contour,
    build_contour_box,
    build_racetrack,
    build_vertical_line,
    contour_nodes,
    leg_length_for,
    quad_contour,
)

MU = (0.9j, 0.35j, -1.25j)


def test_contour_validation():
    with pytest.raises(GeometryError):
        Contour((1.0 + 0j,), 1.0, (8,))
    with pytest.raises(GeometryError):
        Contour((0j, 1j, 2j), 2.0, (8, 8, 8))  # 3 densities, 2 segments
    c = Contour((0j, 1j, 2j), 2.0, (8,))
    assert c.seg_nodes_per_unit == (8, 8)


def test_straight_segment_integrates_polynomial_exactly():
    c = Contour((0j, 1.0 + 1.0j), 1.0, (12,))

    def f(s):
        return s * s

    val, err = quad_contour(f, c)
    exact = (1.0 + 1.0j) ** 3 / 3.0
    assert abs(val - exact) < 1e-14
    assert err < 1e-14


def test_closed_box_picks_up_residue():
    sq = (1 - 1j, 1 + 1j, -1 + 1j, -1 - 1j, 1 - 1j)
    c = Contour(tuple(complex(v) for v in sq), 1.0, (40,))
    val, err = quad_contour(lambda s: 1.0 / s, c)
    assert abs(val - 2j * np.pi) < 1e-12
    assert err < 1e-10


def test_quad_contour_err_nodes_zero_skips_estimate():
    c = build_vertical_line(1.0, 5.0, 16)
    val, err = quad_contour(lambda s: np.exp(-(s - 1.0) ** 2), c, err_nodes=0)
    assert np.isnan(err)
    assert np.isfinite(val.real)


def test_vertical_line_gamma_inversion():
    # (1/2pi i) int Gamma(s) x^(-s) ds over Re(s)=2 equals exp(-x)
    line = build_vertical_line(2.0, 40.0, 24)
    x = 1.5
    val, err = quad_contour(lambda s: np.exp(log_gamma(s) - s * np.log(x)), line)
    got = val / (2j * np.pi)
    assert abs(got - np.exp(-x)) < 1e-12
    assert err / (2.0 * np.pi) < 1e-10


def test_vertical_line_requires_positive_height():
    with pytest.raises(GeometryError):
        build_vertical_line(1.0, 0.0)


def test_box_entire_integrand_matches_closed_form():
    # int exp(s^2) ds on any upward path with these tails equals i sqrt(pi)
    box = build_contour_box(MU)
    val, err = quad_contour(lambda s: np.exp(s * s), box)
    assert abs(val - 1j * np.sqrt(np.pi)) < 1e-12
    assert err < 1e-10


def test_box_racetrack_and_line_agree_on_gamma_integrand():
    # path independence: all three contours separate the same pole families
    m1, m2, m3 = MU
    lny = np.log(2.0)

    def f(s):
        return np.exp(
            log_gamma(s - m1) + log_gamma(s - m2) + log_gamma(s - m3)
            - s * lny
        )

    # the bulge passes within eta of the pole towers and needs extra nodes;
    # the comparison line sits a safe 0.6 right of the nearest pole family
    box = build_contour_box(MU, bulge_nodes_per_unit=160)
    track = build_racetrack(MU, leg_length=40.0, bulge_nodes_per_unit=160)
    line = build_vertical_line(0.6, 40.0, 24)
    v_box, _ = quad_contour(f, box)
    v_track, _ = quad_contour(f, track)
    v_line, _ = quad_contour(f, line)
    scale = abs(v_line)
    assert abs(v_box - v_line) < 1e-11 * scale
    assert abs(v_track - v_line) < 1e-11 * scale


def test_box_rejects_mu_with_large_real_part():
    with pytest.raises(GeometryError):
        build_contour_box((0.5, -0.5, 0.0))
    with pytest.raises(GeometryError):
        build_racetrack((0.5, -0.5, 0.0))


def test_box_certificate_reports_separation():
    box = build_contour_box(MU)
    cert = box.certificate
    assert cert["ok"] is True
    assert cert["left_pole_clearance"] > 0.0
    assert cert["tail_pole_clearance"] > 0.0
    assert cert["eta"] == config.CONTOUR_ETA


def test_box_bulge_override_rules():
    minimal = 1.25 + config.CONTOUR_ETA  # max |Im mu| + eta
    with pytest.raises(GeometryError):
        build_contour_box(MU, bulge_height=0.5 * minimal)
    wide = build_contour_box(MU, bulge_height=minimal + 2.0)
    assert wide.certificate["bulge_height"] == pytest.approx(minimal + 2.0)
    with pytest.raises(GeometryError):
        build_contour_box(MU, truncation_height=0.5)  # inside the bulge


def test_racetrack_vertex_shape_and_certificate():
    track = build_racetrack(MU, leg_length=30.0)
    assert len(track.vertices) == 8
    assert track.certificate["leg_length"] == 30.0
    # legs reach to Re = -2 eta - leg_length
    assert min(v.real for v in track.vertices) == pytest.approx(
        -2.0 * config.CONTOUR_ETA - 30.0)


def test_refined_adds_density_everywhere():
    box = build_contour_box(MU)
    finer = box.refined(8)
    assert all(b - a == 8 for a, b in
               zip(box.seg_nodes_per_unit, finer.seg_nodes_per_unit))
    assert finer.n_nodes() > box.n_nodes()


def test_leg_length_model():
    with pytest.raises(GeometryError):
        leg_length_for(0.0, 1.0)
    short = leg_length_for(3.0, 0.0)
    long = leg_length_for(3.0, 6.0)
    assert short >= 8.0
    assert long >= short
    assert leg_length_for(1.0, 50.0, max_length=60.0) == 60.0
