"""Weight transforms and geometric-side sums for the Kuznetsov formula.

The transforms H(f; y) integrate a Weyl-symmetric test function f against
one of the weight kernels along the central line Re(mu) = 0.  Each
transform has two integrand forms: the plain-kernel form (one raw series
kernel times the fused spectral density over the sine product) and the
symmetrized-kernel form (sign-symmetrized kernel times the spectral
density).  For Weyl-symmetric f the two agree exactly, because the line,
the density and f are all Weyl-invariant and a change of variables folds
the kernel symmetrization into the integral; computing both is a strong
cross-check, and the default route is picked per argument size for
conditioning.

Geometric-side sums pair Kloosterman sums with these transforms over
moduli pairs (c1, c2) up to a cutoff, keeping per-term records.  Term
accumulation is sequential in a fixed order and all grid reductions use
numpy's pairwise sum, so reruns with identical inputs are bit-identical.

Measure convention: integrals over Re(mu) = 0 are two-dimensional contour
integrals with measure d(mu_1) d(mu_2).  Each line element contributes a
factor i, so in the real parameterization mu = (i t1, i t2, -i(t1+t2))
the measure is -dt1 dt2.  The same factor appears for the alternative
(mu_1, mu_3) parameterization, and the two grids integrate any common
integrand to the same value.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import config
from .errors import (
    ConvergenceError,
    DegenerateGrid,
    DomainError,
    NonConvergence,
)
from .gammafns import log_gamma
from .kloosterman import s_weyl
from .mbkernels import k_w4_mb, k_wl_mb
from .series import EIGHT_PI3, FOUR_PI2
from .spectral import WEYL_GROUP, WEYL_W3_SUBGROUP, as_mu, weyl_act_mu

__all__ = [
    "TestFunction",
    "MuGrid",
    "h_trivial",
    "h_wl",
    "h_w4",
    "h_w5",
    "GeometricTerm",
    "GeometricSum",
    "geometric_sum_wl",
    "geometric_sum_w4",
    "geometric_sum_w5",
]

# (i dt1)(i dt2) from the two contour line elements
_MEASURE = -1.0

_C_TRIVIAL = 1.0 / (192.0 * np.pi ** 5)
_C_WL_J = -1.0 / (512.0 * np.pi ** 3)
_C_WL_K = 1.0 / (96.0 * np.pi ** 6)
_C_W4_J = 1.0 / (16384.0 * np.pi ** 6)
_C_W4_K = 1.0 / (96.0 * np.pi ** 6)

_CHUNK = 16384


def _index_perm(w) -> tuple[int, int, int]:
    """Index map p with (mu^w)_i = mu_{p[i]}, read off a probe triple."""
    probe = (1.0, 0.0, -1.0)
    image = weyl_act_mu(probe, w).as_tuple()
    return tuple(probe.index(float(np.real(v))) for v in image)


_PERMS = {w.label: _index_perm(w) for w in WEYL_GROUP}
_W3_LABELS = tuple(w.label for w in WEYL_W3_SUBGROUP)
_W_LABELS = tuple(w.label for w in WEYL_GROUP)


# ----------------------------------------------------------------------
# test functions


@dataclass(frozen=True)
class TestFunction:
    """Weyl-symmetrized Gaussian test function on the line Re(mu) = 0.

    f(mu) = sum over the six Weyl images mu^w and over the centers c of
    exp(sum_i (mu^w_i - c_i)^2 / width^2).  On the line both mu and the
    centers are purely imaginary, every exponent is real and negative,
    and f is real, positive, Weyl-symmetric, and decays like a Gaussian
    in each Im(mu_i).  As an expression in complex mu it is entire.

    centers must lie on Re(mu) = 0; width is a positive real.
    """

    centers: tuple
    width: float = 1.0

    def __post_init__(self):
        if not self.centers:
            raise DomainError("need at least one center")
        coerced = tuple(as_mu(c) for c in self.centers)
        for c in coerced:
            if c.max_abs_re() > 1e-12:
                raise DomainError(
                    f"center {c.as_tuple()} is off the line Re(mu) = 0"
                )
        object.__setattr__(self, "centers", coerced)
        w = float(self.width)
        if not (w > 0.0) or not np.isfinite(w):
            raise DomainError("width must be a positive real")
        object.__setattr__(self, "width", w)

    @property
    def max_center_im(self) -> float:
        return max(c.max_abs_im() for c in self.centers)

    def negated(self) -> "TestFunction":
        """The companion function mu -> f(-mu)."""
        return TestFunction(tuple(c.negated() for c in self.centers), self.width)

    def evaluate(self, t1: np.ndarray, t2: np.ndarray) -> np.ndarray:
        """Values on the line, mu = (i t1, i t2, -i(t1+t2)); real output."""
        t1 = np.asarray(t1, dtype=float)
        t2 = np.asarray(t2, dtype=float)
        t = (t1, t2, -t1 - t2)
        inv_w2 = 1.0 / self.width ** 2
        out = np.zeros(np.broadcast(t1, t2).shape, dtype=float)
        for label in _W_LABELS:
            p = _PERMS[label]
            tp = (t[p[0]], t[p[1]], t[p[2]])
            for c in self.centers:
                a = np.imag(np.asarray(c.as_tuple()))
                q = (tp[0] - a[0]) ** 2 + (tp[1] - a[1]) ** 2 \
                    + (tp[2] - a[2]) ** 2
                out += np.exp(-q * inv_w2)
        return out

    def __call__(self, mu) -> complex:
        """Value at a single (possibly off-line) spectral point."""
        m = as_mu(mu)
        inv_w2 = 1.0 / self.width ** 2
        total = 0.0 + 0.0j
        for w in WEYL_GROUP:
            mw = weyl_act_mu(m, w).as_tuple()
            for c in self.centers:
                ct = c.as_tuple()
                q = sum((mw[i] - ct[i]) ** 2 for i in range(3))
                total += np.exp(q * inv_w2)
        return complex(total)


# ----------------------------------------------------------------------
# quadrature grid on the central line


@dataclass(frozen=True, eq=False)
class MuGrid:
    """Tensor Gauss-Legendre grid for the 2-D line Re(mu) = 0.

    The two axes carry nodes for a pair of independent coordinates on the
    line: (Im mu1, Im mu2) by default, or (Im mu1, Im mu3).  The second
    axis is shifted by a fraction of the node spacing so no node lands on
    any of the three coincidence lines mu_i = mu_j, where the symmetrized
    kernels have removable 0/0 form.
    """

    ta: np.ndarray
    wa: np.ndarray
    tb: np.ndarray
    wb: np.ndarray
    radius: float
    nodes_per_unit: int
    parametrization: str = "mu1_mu2"

    @staticmethod
    def _axis(radius: float, npu: int, shift: float):
        n_panels = max(2, int(np.ceil(2.0 * radius)))
        edges = np.linspace(-radius, radius, n_panels + 1) + shift
        x, w = np.polynomial.legendre.leggauss(npu)
        half = 0.5 * (edges[1] - edges[0])
        mids = 0.5 * (edges[:-1] + edges[1:])
        nodes = (mids[:, None] + half * x[None, :]).ravel()
        weights = np.broadcast_to(half * w[None, :],
                                  (n_panels, npu)).ravel().copy()
        return nodes, weights

    @classmethod
    def build(
        cls,
        radius: float,
        nodes_per_unit: int | None = None,
        offset: float | None = None,
        parametrization: str = "mu1_mu2",
    ) -> "MuGrid":
        if parametrization not in ("mu1_mu2", "mu1_mu3"):
            raise DomainError(
                f"unknown parametrization {parametrization!r}"
            )
        radius = float(radius)
        if not (radius > 0.0) or not np.isfinite(radius):
            raise DomainError("radius must be a positive real")
        npu = int(nodes_per_unit or config.MU_NODES_PER_UNIT)
        if npu < 2:
            raise DomainError("nodes_per_unit must be at least 2")
        if offset is None:
            offset = 0.37 / npu
        ta, wa = cls._axis(radius, npu, 0.0)
        tb, wb = cls._axis(radius, npu, float(offset))
        grid = cls(ta, wa, tb, wb, radius, npu, parametrization)
        gap = grid.min_line_distance()
        if gap < config.GRID_DEGENERACY_TOL:
            raise DegenerateGrid(
                f"grid node within {gap:.3g} of a coincidence line "
                f"mu_i = mu_j; change the offset"
            )
        return grid

    @classmethod
    def for_test_function(
        cls,
        f: TestFunction,
        nodes_per_unit: int | None = None,
        parametrization: str = "mu1_mu2",
    ) -> "MuGrid":
        # truncation where the Gaussian is far below double rounding
        radius = 12.0 * f.width + f.max_center_im
        return cls.build(radius, nodes_per_unit=nodes_per_unit,
                         parametrization=parametrization)

    def min_line_distance(self) -> float:
        """Distance from the node set to the mu_i = mu_j lines.

        In both parametrizations the three lines are, in the axis
        coordinates (a, b): a = b, 2a + b = 0, a + 2b = 0.
        """
        a = self.ta[:, None]
        b = self.tb[None, :]
        d = np.minimum(np.abs(a - b), np.abs(2.0 * a + b))
        d = np.minimum(d, np.abs(a + 2.0 * b))
        return float(d.min())

    @property
    def node_count(self) -> int:
        return self.ta.size * self.tb.size

    def imag_parts(self):
        """Flattened (t1, t2, weight) with mu = (i t1, i t2, -i(t1+t2)).

        Weights are the positive tensor quadrature weights; the contour
        measure factor (i)^2 is applied by the transforms, not here.
        """
        a = np.repeat(self.ta, self.tb.size)
        b = np.tile(self.tb, self.ta.size)
        w = np.repeat(self.wa, self.tb.size) * np.tile(self.wb, self.ta.size)
        if self.parametrization == "mu1_mu2":
            t1, t2 = a, b
        else:  # axes carry (Im mu1, Im mu3)
            t1, t2 = a, -(a + b)
        return t1, t2, w


# ----------------------------------------------------------------------
# vectorized kernel series over a set of mu points


def _jwl_block(z1, z2, mu1, mu2, mu3, rel_tol, tail_guard, max_diagonals):
    alpha = mu1 - mu3
    beta = mu2 - mu3
    gamma = mu1 - mu2
    a00 = np.exp(-(log_gamma(1.0 + alpha) + log_gamma(1.0 + beta)
                   + log_gamma(1.0 + gamma)))
    tot = a00.astype(complex).copy()
    absmax = np.abs(a00)
    prev = a00[:, None].copy()
    pow1 = np.array([1.0 + 0.0j])
    small_run = 0
    dabs = np.zeros_like(absmax)
    for big_n in range(1, max_diagonals + 1):
        cur = np.empty((tot.size, big_n + 1), dtype=complex)
        cur[:, 0] = prev[:, 0] * (big_n + alpha) / (
            big_n * (big_n + gamma) * (big_n + alpha)
        )
        n1s = np.arange(1, big_n + 1)
        cur[:, 1:] = prev * (big_n + alpha[:, None]) / (
            n1s * (n1s + alpha[:, None]) * (n1s + beta[:, None])
        )
        pow1 = np.append(pow1, pow1[-1] * z1)
        pows2 = z2 ** (big_n - np.arange(big_n + 1))
        terms = cur * (pow1 * pows2)[None, :]
        tot += terms.sum(axis=1)
        dabs = np.abs(terms).sum(axis=1)
        absmax = np.maximum(absmax, dabs)
        if np.all(dabs <= rel_tol * np.maximum(np.abs(tot), 1e-300)):
            small_run += 1
            if small_run >= tail_guard:
                break
        else:
            small_run = 0
        prev = cur
    else:
        raise NonConvergence(
            f"long-element series stalled after {max_diagonals} diagonals "
            f"at |z| = ({abs(z1):.3g}, {abs(z2):.3g})"
        )
    pref = np.exp((1.0 - mu3) * np.log(abs(z1)) + (1.0 + mu1) * np.log(abs(z2)))
    err = np.abs(pref) * (dabs + 1e-16 * absmax * (big_n + 1))
    return pref * tot, err


def _jwl_grid(y, mu1, mu2, mu3):
    """Raw two-variable kernel series at fixed y on arrays of mu.

    Same running-product diagonal scheme as the scalar evaluator, but
    advanced for a whole block of mu points at once; the stopping rule
    requires every point's diagonal to be negligible.  Returns values and
    per-point error estimates.
    """
    y1, y2 = float(y[0]), float(y[1])
    z1, z2 = FOUR_PI2 * y1, FOUR_PI2 * y2
    vals = np.empty(mu1.size, dtype=complex)
    errs = np.empty(mu1.size, dtype=float)
    for lo in range(0, mu1.size, _CHUNK):
        sl = slice(lo, lo + _CHUNK)
        vals[sl], errs[sl] = _jwl_block(
            z1, z2, mu1[sl], mu2[sl], mu3[sl],
            config.SERIES_REL_TOL, config.SERIES_TAIL_GUARD, 400,
        )
    return vals, errs


def _jw4_grid(y1, mu1, mu2, mu3):
    """Raw one-variable kernel series at fixed y1 on arrays of mu."""
    z = EIGHT_PI3 * 1j * float(y1)
    a13 = mu1 - mu3
    a23 = mu2 - mu3
    term = np.exp(-(log_gamma(1.0 + a13) + log_gamma(1.0 + a23)))
    tot = term.copy()
    absmax = np.abs(term)
    small_run = 0
    for n in range(1, 4000):
        term = term * (z / (n * (n + a13) * (n + a23)))
        tot += term
        tabs = np.abs(term)
        absmax = np.maximum(absmax, tabs)
        if np.all(tabs <= config.SERIES_REL_TOL
                  * np.maximum(np.abs(tot), 1e-300)):
            small_run += 1
            if small_run >= config.SERIES_TAIL_GUARD:
                break
        else:
            small_run = 0
    else:
        raise NonConvergence(
            f"one-variable series stalled at |z| = {abs(z):.3g}"
        )
    pref = np.exp((1.0 - mu3) * np.log(abs(z)))
    return pref * tot, np.abs(pref) * (tabs + 1e-16 * absmax * (n + 1))


# ----------------------------------------------------------------------
# spectral density factors on arrays


def _half_pi_sines(mu1, mu2, mu3):
    d12, d13, d23 = mu1 - mu2, mu1 - mu3, mu2 - mu3
    half = 0.5 * np.pi
    return np.sin(half * d12), np.sin(half * d13), np.sin(half * d23)


def _fused_density(mu1, mu2, mu3):
    """spec/sin-product as one entire expression (no tangent poles)."""
    d12, d13, d23 = mu1 - mu2, mu1 - mu3, mu2 - mu3
    half = 0.5 * np.pi
    return -(d12 * d13 * d23) / (
        np.cos(half * d12) * np.cos(half * d13) * np.cos(half * d23)
    )


def _permuted(mu, label):
    p = _PERMS[label]
    return mu[p[0]], mu[p[1]], mu[p[2]]


# ----------------------------------------------------------------------
# transforms


def _resolve_grid(f, grid: MuGrid | None) -> MuGrid:
    return grid if grid is not None else MuGrid.for_test_function(f)


def _series_density(zmax: float) -> int:
    """Node density for auto-built grids under a series-route integrand.

    The series kernels oscillate faster in mu as their argument grows, so
    the density that reaches the series noise floor climbs with log |z|.
    Measured against reference grids: the base density holds to |z| ~ 30,
    and about two extra nodes per unit per octave of |z| beyond that keep
    quadrature error at or below the kernel's own conditioning floor.
    """
    base = config.MU_NODES_PER_UNIT
    if zmax <= 30.0:
        return base
    return min(16, base + 2 * int(np.ceil(np.log2(zmax / 30.0))))


def _masked_line(f, grid: MuGrid):
    """Grid nodes where f is above the decay cut, with f and weights.

    Nodes with f below F_DECAY_CUT x max(f) contribute less than the
    rounding noise of the kept nodes and are skipped; the mask depends
    only on (f, grid), so reruns see the identical node set.
    """
    t1, t2, w = grid.imag_parts()
    fvals = f.evaluate(t1, t2)
    fmax = float(fvals.max())
    if fmax <= 0.0:
        keep = np.zeros(fvals.size, dtype=bool)
    else:
        keep = fvals > config.F_DECAY_CUT * fmax
    return t1[keep], t2[keep], w[keep], fvals[keep]


def h_trivial(f: TestFunction, grid: MuGrid | None = None) -> complex:
    """Identity-element weight: (1/192 pi^5) times the f x density line
    integral, the diagonal term of the geometric side."""
    grid = _resolve_grid(f, grid)
    t1, t2, w, fvals = _masked_line(f, grid)
    if t1.size == 0:
        return 0.0 + 0.0j
    mu1, mu2 = 1j * t1, 1j * t2
    mu3 = -1j * (t1 + t2)
    s12, s13, s23 = _half_pi_sines(mu1, mu2, mu3)
    spec = _fused_density(mu1, mu2, mu3) * (s12 * s13 * s23)
    return complex(_C_TRIVIAL * _MEASURE * np.sum(w * fvals * spec))


def _require_nonzero(y: float, name: str) -> float:
    y = float(y)
    if y == 0.0 or not np.isfinite(y):
        raise DomainError(f"{name} must be nonzero and finite")
    return y


_WL_ROUTES = ("auto", "series-j", "series-k", "whittaker")


def h_wl(
    f: TestFunction,
    y: tuple[float, float],
    grid: MuGrid | None = None,
    route: str = "auto",
) -> complex:
    """Long-element weight transform H(f; (y1, y2)), y1 y2 != 0.

    Routes:

    - "series-j": plain-kernel integrand, raw two-variable series times
      the fused density; valid while |4 pi^2 y_i| stays within the
      transform series bound.
    - "series-k": symmetrized-kernel integrand (six Weyl images over
      their sine products, times the spectral density); same reach, more
      internal cancellation; kept as the cross-check route.
    - "whittaker": both y positive only; symmetrized kernel through the
      completed-Whittaker identity point by point.  Works at any size
      because that kernel decays; costs one small contour integral per
      grid node, so it is run on the f-masked node set.
    - "auto": "whittaker" for positive pairs beyond the point where the
      plain-kernel integrand's cancellation (about exp(4 pi (sqrt(y1) +
      sqrt(y2)))) overtakes doubles, "series-j" inside the series bound,
      otherwise ConvergenceError: for mixed-sign arguments beyond the
      series bound no double-precision route is available here.

    Auto-built grids scale their density with the series argument.  The
    series routes deliver roughly 1e-6 relative accuracy to |4 pi^2 y| ~
    40; toward the bound the kernel's own cancellation grows and the
    floor degrades to a few 1e-4 when both arguments are large and
    negative, a few 1e-6 when one is large and positive.
    """
    y1 = _require_nonzero(y[0], "y1")
    y2 = _require_nonzero(y[1], "y2")
    if route not in _WL_ROUTES:
        raise DomainError(f"unknown route {route!r}")
    zmax = FOUR_PI2 * max(abs(y1), abs(y2))
    positive = y1 > 0.0 and y2 > 0.0
    if route == "auto":
        if positive and 4.0 * np.pi * (np.sqrt(y1) + np.sqrt(y2)) > 14.0:
            route = "whittaker"
        elif zmax <= config.TRANSFORM_SERIES_BOUND:
            route = "series-j"
        elif positive:
            route = "whittaker"
        else:
            raise ConvergenceError(
                f"|4 pi^2 y| = {zmax:.3g} exceeds the series reach "
                f"{config.TRANSFORM_SERIES_BOUND:g} and y is not a "
                "positive pair; no double-precision route"
            )
    if route == "whittaker" and not positive:
        raise DomainError("whittaker route needs y1 > 0 and y2 > 0")

    if grid is None:
        if route == "whittaker":
            # the Whittaker-route integrand is smooth and non-oscillatory,
            # so a coarse grid holds quadrature error well below the
            # kernel cost
            grid = MuGrid.for_test_function(
                f, nodes_per_unit=config.PP_MU_NODES_PER_UNIT
            )
        else:
            grid = MuGrid.for_test_function(
                f, nodes_per_unit=_series_density(zmax)
            )
    grid = _resolve_grid(f, grid)
    t1, t2, w, fvals = _masked_line(f, grid)
    if t1.size == 0:
        return 0.0 + 0.0j
    mu = (1j * t1, 1j * t2, -1j * (t1 + t2))

    if route == "series-j":
        vals, _ = _jwl_grid((y1, y2), *mu)
        integ = fvals * vals * _fused_density(*mu)
        c = _C_WL_J * _MEASURE / abs(y1 * y2)
        return complex(c * np.sum(w * integ))

    s12, s13, s23 = _half_pi_sines(*mu)
    spec = _fused_density(*mu) * (s12 * s13 * s23)

    if route == "series-k":
        ksym = np.zeros(t1.size, dtype=complex)
        for label in _W_LABELS:
            muw = _permuted(mu, label)
            vals, _ = _jwl_grid((y1, y2), *muw)
            sw = _half_pi_sines(*muw)
            ksym += vals / (sw[0] * sw[1] * sw[2])
        ksym *= -(np.pi ** 3) / 32.0
        c = _C_WL_K * _MEASURE / abs(y1 * y2)
        return complex(c * np.sum(w * fvals * ksym * spec))

    # whittaker route: pointwise symmetrized kernel, positive quadrant
    kvals = np.empty(t1.size, dtype=complex)
    for i in range(t1.size):
        mu_i = (mu[0][i], mu[1][i], mu[2][i])
        kvals[i] = k_wl_mb(
            (y1, y2), mu_i, variant="pp",
            nodes_per_unit=config.PP_KERNEL_NODES_PER_UNIT, err_refine=0,
        ).value
    c = _C_WL_K * _MEASURE / abs(y1 * y2)
    return complex(c * np.sum(w * fvals * kvals * spec))


_W4_ROUTES = ("auto", "series-j", "series-k", "mb")


def h_w4(
    f: TestFunction,
    y1: float,
    grid: MuGrid | None = None,
    route: str = "auto",
) -> complex:
    """Order-3-element weight transform H(f; (y1, -1)), y1 != 0.

    Routes "series-j" and "series-k" mirror h_wl (plain kernel with the
    extra half-angle sine factor, versus the three-term symmetrized
    kernel); "mb" evaluates the symmetrized kernel pointwise by its
    contour integral and works at any |y1| at a per-node cost; "auto"
    takes the series inside the one-variable bound, "mb" beyond it.
    """
    y1 = _require_nonzero(y1, "y1")
    if route not in _W4_ROUTES:
        raise DomainError(f"unknown route {route!r}")
    if route == "auto":
        route = ("series-j" if EIGHT_PI3 * abs(y1)
                 <= config.TRANSFORM_W4_SERIES_BOUND else "mb")

    if grid is None and route in ("series-j", "series-k"):
        grid = MuGrid.for_test_function(
            f, nodes_per_unit=_series_density(EIGHT_PI3 * abs(y1))
        )
    grid = _resolve_grid(f, grid)
    t1, t2, w, fvals = _masked_line(f, grid)
    if t1.size == 0:
        return 0.0 + 0.0j
    mu = (1j * t1, 1j * t2, -1j * (t1 + t2))

    if route == "series-j":
        vals, _ = _jw4_grid(y1, *mu)
        s12 = np.sin(0.5 * np.pi * (mu[0] - mu[1]))
        integ = fvals * vals * s12 * _fused_density(*mu)
        c = _C_W4_J * _MEASURE / abs(y1)
        return complex(c * np.sum(w * integ))

    s12, s13, s23 = _half_pi_sines(*mu)
    spec = _fused_density(*mu) * (s12 * s13 * s23)

    if route == "series-k":
        ksym = np.zeros(t1.size, dtype=complex)
        for label in _W3_LABELS:
            muw = _permuted(mu, label)
            vals, _ = _jw4_grid(y1, *muw)
            sw = _half_pi_sines(*muw)
            ksym += vals / (sw[1] * sw[2])
        ksym /= 512.0
        c = _C_W4_K * _MEASURE / abs(y1)
        return complex(c * np.sum(w * fvals * ksym * spec))

    kvals = np.empty(t1.size, dtype=complex)
    for i in range(t1.size):
        mu_i = (mu[0][i], mu[1][i], mu[2][i])
        kvals[i] = k_w4_mb(y1, mu_i).value
    c = _C_W4_K * _MEASURE / abs(y1)
    return complex(c * np.sum(w * fvals * kvals * spec))


def h_w5(
    f: TestFunction,
    y2: float,
    grid: MuGrid | None = None,
    route: str = "auto",
) -> complex:
    """Mirror-element weight transform H(f; (-1, y2)), y2 != 0.

    Computed through the involution H_w5(f; (-1, y2)) =
    H_w4(f~; (-y2, -1)) with f~(mu) = f(-mu); the grid (if provided) is
    reused, since negating the centers changes neither the width nor the
    center radius.
    """
    y2 = _require_nonzero(y2, "y2")
    return h_w4(f.negated(), -y2, grid=grid, route=route)


# ----------------------------------------------------------------------
# geometric-side sums


@dataclass(frozen=True)
class GeometricTerm:
    """One (c1, c2, sign) term of a geometric-side sum.

    weight is None when the Kloosterman factor vanished and the transform
    was never evaluated; contribution is kloosterman * weight / (c1 c2),
    or zero in that case.
    """

    weyl: str
    c1: int
    c2: int
    eps: tuple[int, ...]
    kloosterman: complex
    y: tuple[float, float]
    weight: complex | None
    contribution: complex


@dataclass(frozen=True)
class GeometricSum:
    """Partial geometric-side sum with its per-term records."""

    value: complex
    terms: tuple[GeometricTerm, ...]

    def __complex__(self) -> complex:
        return self.value


def _char_pair(v, name: str) -> tuple[int, int]:
    try:
        a, b = int(v[0]), int(v[1])
    except (TypeError, IndexError) as exc:
        raise DomainError(f"{name} must be an integer pair") from exc
    if a <= 0 or b <= 0:
        raise DomainError(f"{name} must be a positive integer pair")
    return a, b


def _check_cmax(c_max: int) -> int:
    c_max = int(c_max)
    if not (1 <= c_max <= 30):
        raise DomainError("c_max must lie in 1..30")
    return c_max


def _term_weight(evaluator, cache, ykey, c1, c2):
    if ykey in cache:
        return cache[ykey]
    try:
        val = evaluator()
    except ConvergenceError as exc:
        raise ConvergenceError(
            f"weight at modulus (c1, c2) = ({c1}, {c2}) failed: {exc}"
        ) from exc
    cache[ykey] = val
    return val


_EPS_PAIRS = ((1, 1), (1, -1), (-1, 1), (-1, -1))
_EPS_SINGLE = (1, -1)


def geometric_sum_wl(
    f: TestFunction,
    m,
    n,
    c_max: int,
    grid: MuGrid | None = None,
    route: str = "auto",
) -> GeometricSum:
    """Long-element geometric sum over moduli c1, c2 <= c_max.

    Each term pairs the long-element Kloosterman sum at sign-twisted
    characters with the transform at y = (-e2 m1 n2 c1 / c2^2,
    -e1 m2 n1 c2 / c1^2), divided by c1 c2.  Terms accumulate in a fixed
    (c1, c2, sign) order and every weight evaluation is recorded.
    """
    m1, m2 = _char_pair(m, "m")
    n1, n2 = _char_pair(n, "n")
    c_max = _check_cmax(c_max)
    cache: dict = {}
    total = 0.0 + 0.0j
    records = []
    for c1 in range(1, c_max + 1):
        for c2 in range(1, c_max + 1):
            for e1, e2 in _EPS_PAIRS:
                s = complex(s_weyl("wl", (m1, m2), (e1 * n1, e2 * n2),
                                   (c1, c2)))
                yterm = (-e2 * m1 * n2 * c1 / c2 ** 2,
                         -e1 * m2 * n1 * c2 / c1 ** 2)
                if s == 0:
                    weight = None
                    contribution = 0.0 + 0.0j
                else:
                    weight = _term_weight(
                        lambda: h_wl(f, yterm, grid=grid, route=route),
                        cache, yterm, c1, c2,
                    )
                    contribution = s * weight / (c1 * c2)
                total += contribution
                records.append(GeometricTerm(
                    "wl", c1, c2, (e1, e2), s, yterm, weight, contribution,
                ))
    return GeometricSum(complex(total), tuple(records))


def geometric_sum_w4(
    f: TestFunction,
    m,
    n,
    c_max: int,
    grid: MuGrid | None = None,
    route: str = "auto",
) -> GeometricSum:
    """Order-3-element geometric sum over the gated moduli.

    Moduli satisfy m2 c1 = n1 c2^2 with both entries <= c_max; each
    contributes the two sign terms with weight H(f; (e m1 m2^2 n2 /
    (c2^3 n1), -1)).  The Kloosterman wrapper applies its own vanishing
    gate, so sign terms it kills are recorded with a zero factor.
    """
    m1, m2 = _char_pair(m, "m")
    n1, n2 = _char_pair(n, "n")
    c_max = _check_cmax(c_max)
    cache: dict = {}
    total = 0.0 + 0.0j
    records = []
    for c2 in range(1, c_max + 1):
        num = n1 * c2 * c2
        if num % m2:
            continue
        c1 = num // m2
        if c1 > c_max:
            continue
        for e in _EPS_SINGLE:
            s = complex(s_weyl("w4", (m1, m2), (n1, e * n2), (c1, c2)))
            yv = e * m1 * m2 ** 2 * n2 / (c2 ** 3 * n1)
            if s == 0:
                weight = None
                contribution = 0.0 + 0.0j
            else:
                weight = _term_weight(
                    lambda: h_w4(f, yv, grid=grid, route=route),
                    cache, yv, c1, c2,
                )
                contribution = s * weight / (c1 * c2)
            total += contribution
            records.append(GeometricTerm(
                "w4", c1, c2, (e,), s, (yv, -1.0), weight, contribution,
            ))
    return GeometricSum(complex(total), tuple(records))


def geometric_sum_w5(
    f: TestFunction,
    m,
    n,
    c_max: int,
    grid: MuGrid | None = None,
    route: str = "auto",
) -> GeometricSum:
    """Mirror-element geometric sum over the gated moduli.

    Moduli satisfy m1 c2 = n2 c1^2; weights are H(f; (-1, e m1^2 m2 n1 /
    (c1^3 n2))) through the w5 transform.
    """
    m1, m2 = _char_pair(m, "m")
    n1, n2 = _char_pair(n, "n")
    c_max = _check_cmax(c_max)
    cache: dict = {}
    total = 0.0 + 0.0j
    records = []
    for c1 in range(1, c_max + 1):
        num = n2 * c1 * c1
        if num % m1:
            continue
        c2 = num // m1
        if c2 > c_max:
            continue
        for e in _EPS_SINGLE:
            s = complex(s_weyl("w5", (m1, m2), (e * n1, n2), (c1, c2)))
            yv = e * m1 ** 2 * m2 * n1 / (c1 ** 3 * n2)
            if s == 0:
                weight = None
                contribution = 0.0 + 0.0j
            else:
                weight = _term_weight(
                    lambda: h_w5(f, yv, grid=grid, route=route),
                    cache, yv, c1, c2,
                )
                contribution = s * weight / (c1 * c2)
            total += contribution
            records.append(GeometricTerm(
                "w5", c1, c2, (e,), s, (-1.0, yv), weight, contribution,
            ))
    return GeometricSum(complex(total), tuple(records))
