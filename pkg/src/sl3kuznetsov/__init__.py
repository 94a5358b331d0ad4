"""Numerics for the SL(3) Kuznetsov formula.

Weight kernels by two independent routes (power series and Mellin-Barnes
contour integrals), the completed GL(3) Whittaker function, SL(3,Z)
Kloosterman sums, differential/recurrence verification, and the
geometric-side transforms and moduli sums that tie them together.
"""

from .errors import (
    Sl3KuznetsovError,
    PoleError,
    DegenerateMu,
    ConvergenceError,
    NonConvergence,
    ConstraintError,
    DomainError,
    SingularError,
    GeometryError,
    SignMismatch,
    StencilError,
    DivisibilityError,
    UnsupportedWeyl,
    DegenerateGrid,
    CancellationWarning,
)
from .spectral import (
    RHO,
    SpectralParams,
    as_mu,
    WeylElement,
    WEYL_I,
    WEYL_W2,
    WEYL_W3,
    WEYL_W4,
    WEYL_W5,
    WEYL_WL,
    WEYL_GROUP,
    weyl_by_label,
    compose,
    weyl_act_mu,
    spec_measure,
    sin_mu,
    cos_mu,
    spec_over_sin_mu,
    lambda_norm,
    c1_asymp,
    eigenvalues,
)
from .geometry import (
    UpperX,
    DiagY,
    iwasawa,
    uyv_decompose,
    xy_star_closed,
    power_fn,
    power_fn_normalized,
    weyl_act_y,
    psi_char,
)
from .gammafns import (
    GammaConfig,
    log_gamma,
    gamma_fn,
    rgamma,
    log_rgamma,
    kbessel_mb,
    barnes_first_check,
    barnes_second_check,
    mellin_beta_check,
    mellin_cos_check,
)
from .quadrature import (
    Contour,
    contour_nodes,
    quad_contour,
    build_vertical_line,
    build_contour_box,
    build_racetrack,
    leg_length_for,
)
from .series import (
    SIGN_PAIRS,
    SeriesPolicy,
    KernelResult,
    j_w4,
    j_wl,
    k_wl_sym,
    k_wl_signed,
    k_w4_sym,
)
from .mbkernels import (
    MBIntegrand,
    whittaker_wstar,
    whittaker_wstar_grid,
    whittaker_small_y_sum,
    whittaker_y1_asymp,
    stade_check,
    k_wl_mb,
    k_wl_mb_grid,
    k_w4_mb,
    k_w4_voronoi,
)
from .odecheck import (
    StencilConfig,
    stencil_weights,
    residual_wl,
    residual_w4,
    recurrence_check,
)
from .kloosterman import (
    Modulus,
    CharIndex,
    s_tilde,
    s_tilde_naive,
    s_big,
    s_big_naive,
    s_weyl,
)
from .transforms import (
    TestFunction,
    MuGrid,
    h_trivial,
    h_wl,
    h_w4,
    h_w5,
    GeometricTerm,
    GeometricSum,
    geometric_sum_wl,
    geometric_sum_w4,
    geometric_sum_w5,
)

__version__ = "0.1.0"

__all__ = [
    "Sl3KuznetsovError", "PoleError", "DegenerateMu", "ConvergenceError",
    "NonConvergence", "ConstraintError", "DomainError", "SingularError",
    "GeometryError", "SignMismatch", "StencilError", "DivisibilityError",
    "UnsupportedWeyl", "DegenerateGrid", "CancellationWarning",
    "RHO", "SpectralParams", "as_mu", "WeylElement",
    "WEYL_I", "WEYL_W2", "WEYL_W3", "WEYL_W4", "WEYL_W5", "WEYL_WL",
    "WEYL_GROUP", "weyl_by_label", "compose", "weyl_act_mu",
    "spec_measure", "sin_mu", "cos_mu", "spec_over_sin_mu",
    "lambda_norm", "c1_asymp", "eigenvalues",
    "UpperX", "DiagY", "iwasawa", "uyv_decompose", "xy_star_closed",
    "power_fn", "power_fn_normalized", "weyl_act_y", "psi_char",
    "GammaConfig", "log_gamma", "gamma_fn", "rgamma", "log_rgamma",
    "kbessel_mb", "barnes_first_check", "barnes_second_check",
    "mellin_beta_check", "mellin_cos_check",
    "Contour", "contour_nodes", "quad_contour", "build_vertical_line",
    "build_contour_box", "build_racetrack", "leg_length_for",
    "SIGN_PAIRS", "SeriesPolicy", "KernelResult",
    "j_w4", "j_wl", "k_wl_sym", "k_wl_signed", "k_w4_sym",
    "MBIntegrand", "whittaker_wstar", "whittaker_wstar_grid",
    "whittaker_small_y_sum", "whittaker_y1_asymp", "stade_check",
    "k_wl_mb", "k_wl_mb_grid", "k_w4_mb", "k_w4_voronoi",
    "StencilConfig", "stencil_weights", "residual_wl", "residual_w4",
    "recurrence_check",
    "Modulus", "CharIndex", "s_tilde", "s_tilde_naive",
    "s_big", "s_big_naive", "s_weyl",
    "TestFunction", "MuGrid", "h_trivial", "h_wl", "h_w4", "h_w5",
    "GeometricTerm", "GeometricSum",
    "geometric_sum_wl", "geometric_sum_w4", "geometric_sum_w5",
]
