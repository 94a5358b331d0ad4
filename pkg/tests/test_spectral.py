import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sl3kuznetsov.errors import DegenerateMu, PoleError
from sl3kuznetsov.spectral import (
    WEYL_GROUP,
    WEYL_I,
    WEYL_WL,
    as_mu,
    c1_asymp,
    compose,
    cos_mu,
    eigenvalues,
    lambda_norm,
    sin_mu,
    spec_measure,
    spec_over_sin_mu,
    weyl_act_mu,
    weyl_by_label,
)

MU = (0.9j, 0.35j, -1.25j)


def test_as_mu_closes_the_triple():
    m = as_mu((0.3j, 0.1j))
    assert m.mu3 == -0.4j
    m2 = as_mu((0.3j, 0.1j, -0.4j))
    assert m2.as_tuple() == m.as_tuple()


def test_as_mu_rejects_nonzero_sum():
    with pytest.raises(ValueError):
        as_mu((0.3j, 0.1j, 0.1j))


def test_differences_order():
    m = as_mu(MU)
    d12, d13, d23 = m.differences()
    assert d12 == MU[0] - MU[1]
    assert d13 == MU[0] - MU[2]
    assert d23 == MU[1] - MU[2]


def test_weyl_group_has_six_distinct_permutations():
    perms = set()
    probe = (1.0, 2.0, -3.0)
    for w in WEYL_GROUP:
        perms.add(weyl_act_mu(probe, w).as_tuple())
    assert len(perms) == 6


def test_weyl_identity_and_composition():
    m = as_mu(MU)
    assert weyl_act_mu(m, WEYL_I).as_tuple() == m.as_tuple()
    for w in WEYL_GROUP:
        for v in WEYL_GROUP:
            lhs = weyl_act_mu(weyl_act_mu(m, v), w)
            rhs = weyl_act_mu(m, compose(v, w))
            assert max(abs(a - b) for a, b in
                       zip(lhs.as_tuple(), rhs.as_tuple())) < 1e-14


def test_long_element_is_an_involution():
    assert compose(WEYL_WL, WEYL_WL).label == "I"


def test_weyl_by_label_round_trips():
    for w in WEYL_GROUP:
        assert weyl_by_label(w.label) is w


def test_spec_measure_nonnegative_on_the_line():
    rng = np.random.default_rng(7)
    for _ in range(50):
        t1, t2 = rng.uniform(-3, 3, size=2)
        v = spec_measure((1j * t1, 1j * t2, -1j * (t1 + t2)))
        assert abs(v.imag) < 1e-12 * max(1.0, abs(v))
        assert v.real >= -1e-12


def test_spec_measure_weyl_invariant():
    base = spec_measure(MU)
    for w in WEYL_GROUP:
        assert abs(spec_measure(weyl_act_mu(MU, w)) - base) < 1e-12 * abs(base)


def test_spec_measure_rejects_tangent_pole():
    # mu1 - mu2 = 1 sits on a tangent pole
    with pytest.raises(PoleError):
        spec_measure((0.5, -0.5, 0.0))


def test_fused_form_matches_quotient_at_safe_points():
    rng = np.random.default_rng(11)
    n = 0
    while n < 20:
        t1, t2 = rng.uniform(-2.5, 2.5, size=2)
        mu = (1j * t1, 1j * t2, -1j * (t1 + t2))
        m = as_mu(mu)
        if m.min_gap() < 0.1:
            continue
        n += 1
        direct = spec_measure(mu) / sin_mu(mu)
        fused = spec_over_sin_mu(mu)
        assert abs(direct - fused) < 1e-10 * max(1.0, abs(fused))


def test_fused_form_finite_at_coinciding_components():
    # spec and sin_mu vanish separately here; the quotient stays finite
    v = spec_over_sin_mu((0.5j, 0.5j, -1.0j))
    assert np.isfinite(v.real) and np.isfinite(v.imag)


def test_sin_cos_product_identity():
    # sin(2x) = 2 sin x cos x applied factorwise
    m = as_mu(MU)
    two = tuple(2.0 * c for c in m.as_tuple())
    lhs = sin_mu(two)
    assert abs(lhs - 8.0 * sin_mu(m) * cos_mu(m)) < 1e-12 * abs(lhs)


def test_lambda_norm_reflection():
    m = as_mu(MU)
    prod = lambda_norm(m) * lambda_norm(m.negated()) * cos_mu(m)
    assert abs(prod - 1.0) < 1e-12


def test_c1_asymp_rejects_degenerate_mu():
    with pytest.raises(DegenerateMu):
        c1_asymp((0.5j, 0.5j, -1.0j))


def test_c1_asymp_matches_gamma_product():
    from sl3kuznetsov.gammafns import gamma_fn

    m = as_mu(MU)
    d12, d13, d23 = m.differences()
    ref = np.pi ** (m.mu1 - m.mu3)
    for d in (d12, d13, d23):
        ref *= gamma_fn(-0.5 * d)
    got = c1_asymp(m)
    assert abs(got - ref) < 1e-13 * abs(ref)


def test_eigenvalues_weyl_invariant_and_real_on_line():
    lam1, lam2 = eigenvalues(MU)
    assert abs(lam1.imag) < 1e-14
    for w in WEYL_GROUP:
        w1, w2 = eigenvalues(weyl_act_mu(MU, w))
        assert abs(w1 - lam1) < 1e-13
        assert abs(w2 - lam2) < 1e-13


def test_negated_and_conjugated():
    m = as_mu(MU)
    assert m.negated().mu1 == -m.mu1
    assert m.conjugated().mu1 == np.conj(m.mu1)


@settings(max_examples=40, deadline=None)
@given(st.floats(-3, 3), st.floats(-3, 3))
def test_weyl_action_preserves_zero_sum(t1, t2):
    mu = (1j * t1, 1j * t2, -1j * (t1 + t2))
    for w in WEYL_GROUP:
        s = sum(weyl_act_mu(mu, w).as_tuple())
        assert abs(s) < 1e-12


def test_require_distinct_flags_near_coincidence():
    with pytest.raises(DegenerateMu):
        as_mu((0.5j, 0.5j + 1e-9j, -1.0j - 1e-9j)).require_distinct()
    as_mu(MU).require_distinct()  # well separated: no raise
