"""Numeric policy defaults used across the library.

Values are module-level constants rather than a mutable global config
object: every operation that needs a tolerance takes it as a keyword with
one of these as default, so behaviour is overridable per call and there is
no shared mutable state to guard.
"""

import os

# Spectral-parameter handling
DEGENERACY_TOL = 1e-8  # below this, |mu_i - mu_j| counts as coincident
POLE_TOL = 1e-10       # proximity to a gamma/tangent pole that we reject

# Power-series policy defaults (see series.SeriesPolicy)
SERIES_REL_TOL = 1e-15
SERIES_MAX_TERMS = 200_000
SERIES_TAIL_GUARD = 4

# The double series for the long-element kernel is trusted for
# |4 pi^2 y_i| <= this bound; beyond it intermediate terms grow enough that
# cancellation eats doubles and the Mellin-Barnes route is authoritative.
SERIES_DOMAIN_BOUND = 30.0
# The one-variable kernel series decays like 1/(n!)^3, so its intermediate
# terms peak at exp(3 |z|^(1/3)) and doubles survive to a larger bound.
W4_SERIES_DOMAIN_BOUND = 200.0

# Mellin-Barnes contour defaults
CONTOUR_ETA = 0.05            # Re(s) on the bulge segment, per the 1/20 default
NODES_PER_UNIT = 24           # Gauss-Legendre points per unit of contour length
MB_NODES_PER_UNIT = 32        # denser default for the kernel contour integrals
MAX_QUAD_EVALS = 200_000      # cap per 1-D integral

# Transform-layer (mu-line quadrature) defaults.  The raw, unsymmetrized
# series stay usable well past the symmetrized-kernel bounds above: their
# own cancellation is only the alternation inside a single series, about
# exp(2 (sqrt|z1| + sqrt|z2|)) in the worst sign case, so doubles retain
# 6+ digits out to these transform bounds (measured against 60-digit
# arithmetic).  The symmetrized combinations additionally cancel across
# Weyl terms and keep the tighter bounds above.
MU_NODES_PER_UNIT = 8             # Gauss-Legendre points per unit of Im(mu)
PP_MU_NODES_PER_UNIT = 5          # coarser default grid for the smooth
                                  # positive-quadrant (Whittaker) integrand
TRANSFORM_SERIES_BOUND = 120.0    # |4 pi^2 y_i| reach of the raw 2-var series
TRANSFORM_W4_SERIES_BOUND = 260.0  # |8 pi^3 y1| reach of the raw 1-var series
PP_KERNEL_NODES_PER_UNIT = 16     # contour density for per-node Whittaker calls
GRID_DEGENERACY_TOL = 1e-6        # min node distance to the mu_i = mu_j lines
F_DECAY_CUT = 1e-18               # drop grid nodes where f is below this x max


def thread_budget() -> int:
    """Default worker bound for grid/term parallelism (KUZNETSOV_THREADS)."""
    raw = os.environ.get("KUZNETSOV_THREADS", "")
    try:
        n = int(raw)
    except ValueError:
        n = 0
    if n <= 0:
        n = os.cpu_count() or 1
    return max(1, n)
