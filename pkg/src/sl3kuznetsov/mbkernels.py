"""Weight kernels as Mellin-Barnes contour integrals.

This is the second, independent route to the kernels of `series`: each
kernel is written as a (double) contour integral of a gamma-factor ratio
against a power of the argument, evaluated by Gauss-Legendre panels on
the deformed paths from `quadrature`.  Where the series route sums
residues, this route integrates the inverse Mellin transform directly,
so agreement between the two is a strong end-to-end check.

The double integrals factor into a per-variable gamma vector and a
coupling factor depending only on s1 + s2.  The coupling matrix over a
node-grid pair is independent of the spectral parameter, so it is cached
per contour geometry (geometries are rounded up to a coarse grid to make
the cache hit across nearby spectral parameters), and each evaluation is
two matrix-vector products.  Everything is assembled in log space: on
the horizontal legs the individual gamma factors overflow or underflow
doubles by hundreds of orders while their combination stays tiny.

Sign conventions: contours run upward (and counterclockwise around the
left bends), weights carry the direction factor, and every result
divides by (2 pi i) per integration variable.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import config
from .errors import ConvergenceError, DomainError, GeometryError, SignMismatch
from .gammafns import kbessel_mb, log_gamma, log_rgamma
from .geometry import DiagY, power_fn_normalized
from .quadrature import (
    Contour, build_contour_box, build_racetrack, build_vertical_line,
    leg_length_for,
)
from .series import EIGHT_PI3, FOUR_PI2, KernelResult
from .spectral import (
    MuLike, SpectralParams, WEYL_GROUP, WEYL_W3_SUBGROUP, as_mu, c1_asymp,
    cos_mu, weyl_act_mu,
)

__all__ = [
    "MBIntegrand",
    "whittaker_wstar", "whittaker_wstar_grid",
    "whittaker_small_y_sum", "whittaker_y1_asymp",
    "stade_check",
    "k_wl_mb", "k_wl_mb_grid", "k_w4_mb", "k_w4_voronoi",
]

TWO_PI_I = 2.0j * np.pi
_EPS = 1e-16


def _round_up(x: float, step: float) -> float:
    return float(np.ceil(x / step) * step)


# ----------------------------------------------------------------------
# integrand decay bookkeeping


@dataclass(frozen=True)
class MBIntegrand:
    """Stirling decay data for a one-variable Mellin-Barnes integrand.

    Models integrands of the shape

        prod_a Gamma(c(s+a)) prod_b Gamma(c(b-s))
        / [prod_p Gamma(c(s+p)) prod_q Gamma(c(q-s))]
        * |Y|^(1-s) * sum_k exp(i r_k s)

    with a common argument scale c.  On a vertical line each gamma
    contributes exp(-c pi |t| / 2) of decay (growth, for the reciprocal
    ones) and each phase term grows like exp(|r| |t|) on its bad side,
    so the net exponential rate decides whether straight vertical tails
    converge absolutely.  When the rate is not negative the tails only
    decay polynomially and the left-bend (racetrack or averaged-box)
    geometry is required; the kernel evaluators below consult
    needs_left_bend() and refuse plain vertical tails in that case.
    """

    num_plus: tuple = ()
    num_minus: tuple = ()
    den_plus: tuple = ()
    den_minus: tuple = ()
    arg_scale: float = 1.0
    power_log_scale: float = 0.0
    phase_rates: tuple = ()

    def exponential_rate(self) -> float:
        """Coefficient of |Im s| in the log-magnitude on vertical tails."""
        falling = (len(self.num_plus) + len(self.num_minus)
                   - len(self.den_plus) - len(self.den_minus))
        rate = -0.5 * np.pi * self.arg_scale * falling
        if self.phase_rates:
            rate += max(abs(float(np.real(r))) + abs(float(np.imag(r)))
                        for r in self.phase_rates)
        return float(rate)

    def polynomial_exponent(self, sigma: float) -> float:
        """Exponent of |Im s| in the polynomial part at Re(s) = sigma."""
        c = self.arg_scale
        tot = 0.0
        for a in self.num_plus:
            tot += c * (sigma + float(np.real(a))) - 0.5
        for b in self.num_minus:
            tot += c * (float(np.real(b)) - sigma) - 0.5
        for p in self.den_plus:
            tot -= c * (sigma + float(np.real(p))) - 0.5
        for q in self.den_minus:
            tot -= c * (float(np.real(q)) - sigma) - 0.5
        return float(tot)

    def needs_left_bend(self) -> bool:
        return self.exponential_rate() >= -1e-12


# ----------------------------------------------------------------------
# completed Whittaker function


_WSTAR_PREF = 0.25 / np.pi ** 2


def _wstar_line_height(m: SpectralParams) -> float:
    # net decay exp(-pi |t| / 2) per axis; 22 units leave the truncated
    # tail below 1e-14 of the peak
    return _round_up(22.0 + m.max_abs_im(), 2.0)


@lru_cache(maxsize=64)
def _wstar_tensors(line_re: float, height: float, dens: int):
    """Nodes, weights and the 1/Gamma((s1+s2)/2) coupling for one line."""
    c = build_vertical_line(line_re, height, dens)
    s, w = c.nodes()
    coup = np.exp(log_rgamma(0.5 * (s[:, None] + s[None, :])))
    acoup = np.abs(coup)
    for arr in (s, w, coup, acoup):
        arr.setflags(write=False)
    return s, w, coup, acoup


def _wstar_axis(m: SpectralParams, s: np.ndarray, sign: float) -> np.ndarray:
    lg = np.zeros_like(s)
    for mj in m.as_tuple():
        lg = lg + log_gamma(0.5 * (s + sign * mj))
    return np.exp(lg)


def _resolve_wstar_line(m: SpectralParams, y_min: float,
                        line_re: float | None) -> float:
    if line_re is None:
        # pulling the line toward Re(s)=1 shrinks the |pi y|^(1-s)
        # amplitude at small y, which is what limits the conditioning
        line_re = 2.0 if y_min >= 0.05 else 1.3
    if line_re <= m.max_abs_re() + 0.2:
        raise GeometryError(
            f"line Re(s) = {line_re:.3g} too close to the gamma poles at "
            f"Re(s) = Re(mu_j)"
        )
    return float(line_re)


def whittaker_wstar(
    y: tuple[float, float],
    mu: MuLike,
    line_re: float | None = None,
    nodes_per_unit: int | None = None,
    err_refine: int = 8,
) -> KernelResult:
    """Completed Whittaker function by its double Mellin inversion.

    (1/4 pi^2) times the double contour integral of

        prod_j Gamma((s1-mu_j)/2) Gamma((s2+mu_j)/2) / Gamma((s1+s2)/2)
            * (pi y1)^(1-s1) (pi y2)^(1-s2)

    over two vertical lines right of all poles, ds/(2 pi i) each.  The
    integrand keeps a net exp(-pi|t|/2) decay per axis, so no contour
    bending is needed.  Requires y1, y2 > 0.
    """
    y1, y2 = float(y[0]), float(y[1])
    if y1 <= 0.0 or y2 <= 0.0:
        raise DomainError("whittaker_wstar needs y1, y2 > 0")
    m = as_mu(mu)
    line = _resolve_wstar_line(m, min(y1, y2), line_re)
    dens = nodes_per_unit or config.MB_NODES_PER_UNIT
    height = _wstar_line_height(m)

    def one(d: int) -> tuple[complex, float, int]:
        s, w, coup, acoup = _wstar_tensors(line, height, d)
        u = np.exp((1.0 - s) * np.log(np.pi * y1)) * (w * _wstar_axis(m, s, -1.0))
        v = np.exp((1.0 - s) * np.log(np.pi * y2)) * (w * _wstar_axis(m, s, +1.0))
        norm = _WSTAR_PREF / TWO_PI_I ** 2
        val = norm * (u @ coup @ v)
        mass = abs(norm) * float(np.abs(u) @ acoup @ np.abs(v))
        return val, mass, s.size

    fine, mass, n = one(dens)
    if err_refine > 0:
        coarse, _, _ = one(max(8, dens - err_refine))
        err = abs(fine - coarse) + _EPS * mass
    else:
        err = _EPS * mass
    return KernelResult(fine, err, "mellin_barnes", n_quad=n * n)


def whittaker_wstar_grid(
    y1s,
    y2s,
    mu: MuLike,
    line_re: float | None = None,
    nodes_per_unit: int | None = None,
) -> np.ndarray:
    """whittaker_wstar on a product grid, as one pair of matrix products.

    Returns the (len(y1s), len(y2s)) array of values; accuracy matches
    whittaker_wstar at the same settings (no per-point error estimate).
    """
    y1s = np.asarray(y1s, dtype=float)
    y2s = np.asarray(y2s, dtype=float)
    if np.any(y1s <= 0.0) or np.any(y2s <= 0.0):
        raise DomainError("whittaker_wstar_grid needs positive arguments")
    m = as_mu(mu)
    line = _resolve_wstar_line(m, float(min(y1s.min(), y2s.min())), line_re)
    dens = nodes_per_unit or config.MB_NODES_PER_UNIT
    height = _wstar_line_height(m)
    s, w, coup, _ = _wstar_tensors(line, height, dens)
    wa = w * _wstar_axis(m, s, -1.0)
    wb = w * _wstar_axis(m, s, +1.0)
    u_mat = np.exp(np.outer(np.log(np.pi * y1s), 1.0 - s)) * wa
    v_mat = np.exp(np.outer(np.log(np.pi * y2s), 1.0 - s)) * wb
    norm = _WSTAR_PREF / TWO_PI_I ** 2
    return norm * (u_mat @ coup @ v_mat.T)


def whittaker_small_y_sum(y: tuple[float, float], mu: MuLike) -> complex:
    """Leading small-y behaviour: six power functions with gamma weights.

    sum over the Weyl group of c1_asymp(mu^w) p_(rho+mu^w)(y); the error
    of dropping the remainder is o(1) relative as y1, y2 -> 0 for
    pairwise distinct, Weyl-generic mu.
    """
    m = as_mu(mu)
    dy = DiagY(float(y[0]), float(y[1]))
    tot = 0.0 + 0.0j
    for w in WEYL_GROUP:
        mw = weyl_act_mu(m, w)
        tot += c1_asymp(mw) * power_fn_normalized(mw, dy)
    return complex(tot)


def whittaker_y1_asymp(
    y: tuple[float, float],
    mu: MuLike,
    nodes_per_unit: int = config.NODES_PER_UNIT,
) -> tuple[complex, float]:
    """Small-y1 asymptotics: three K-Bessel terms in y2.

    (2/pi^2) sum over the order-3 subgroup of

        |pi y1|^(1-mu3^w) |pi y2|^(1-mu3^w/2)
        Gamma((mu3^w-mu1^w)/2) Gamma((mu3^w-mu2^w)/2)
        K_((mu1^w-mu2^w)/2)(2 pi |y2|)

    Returns (value, error estimate from the Bessel quadratures).
    """
    m = as_mu(mu)
    y1, y2 = float(y[0]), float(y[1])
    if y1 == 0.0 or y2 == 0.0:
        raise DomainError("whittaker_y1_asymp needs nonzero arguments")
    tot = 0.0 + 0.0j
    errtot = 0.0
    for w in WEYL_W3_SUBGROUP:
        m1, m2, m3 = weyl_act_mu(m, w).as_tuple()
        kb, kerr = kbessel_mb(0.5 * (m1 - m2), np.pi * abs(y2),
                              nodes_per_unit=nodes_per_unit)
        coef = np.exp((1.0 - m3) * np.log(np.pi * abs(y1))
                      + (1.0 - 0.5 * m3) * np.log(np.pi * abs(y2))
                      + log_gamma(0.5 * (m3 - m1))
                      + log_gamma(0.5 * (m3 - m2)))
        tot += coef * kb
        errtot += abs(coef) * kerr
    # residue factor 2 from collapsing the first integral at its leading
    # pole, factor 4 from the K-Bessel closed form of the second
    pref = 2.0 / np.pi ** 2
    return complex(pref * tot), float(pref * errtot + _EPS * abs(tot))


def stade_check(
    mu: MuLike,
    s: float = 1.0,
    u_lo: float = -20.0,
    u_hi: float = 3.0,
    nodes_per_unit: int = 16,
    line_re: float = 1.15,
    wstar_nodes_per_unit: int | None = None,
) -> tuple[complex, complex, float]:
    """Archimedean pairing of two Whittaker functions against a power weight.

    Integrates wstar(t, mu) wstar(t, -mu) (t1^2 t2)^s over dt/(t1 t2)^3
    by log-substitution Gauss-Legendre panels, and compares with the
    closed gamma-product evaluation

        prod_{j,k} Gamma((s + mu_j - mu_k)/2) / (4 pi^(3s) Gamma(3s/2)).

    Returns (quadrature value, closed form, |difference|).  At s = 1 the
    closed form collapses to pi / (2 cos_mu(mu)).

    The u range is wide because the small-t tail only dies like
    exp(2 u1 + u2) against gamma-prefactor constants that can reach 1e6;
    the default clips it below 1e-6 relative.
    """
    m = as_mu(mu)
    seg = Contour((complex(u_lo), complex(u_hi)), 0.0, (nodes_per_unit,))
    un, uw = seg.nodes()
    u = un.real
    w = uw.real
    t = np.exp(u)
    g1 = whittaker_wstar_grid(t, t, m, line_re=line_re,
                              nodes_per_unit=wstar_nodes_per_unit)
    g2 = whittaker_wstar_grid(t, t, m.negated(), line_re=line_re,
                              nodes_per_unit=wstar_nodes_per_unit)
    # (t1^2 t2)^s dt1 dt2/(t1 t2)^3 = exp((2s-2)u1 + (s-2)u2) du1 du2
    w1 = w * np.exp((2.0 * s - 2.0) * u)
    w2 = w * np.exp((s - 2.0) * u)
    lhs = complex(w1 @ (g1 * g2) @ w2)

    mt = m.as_tuple()
    lg = -log_gamma(1.5 * s) - 3.0 * s * np.log(np.pi) - np.log(4.0)
    for mj in mt:
        for mk in mt:
            lg = lg + log_gamma(0.5 * (s + mj - mk))
    rhs = complex(np.exp(lg))
    return lhs, rhs, abs(lhs - rhs)


# ----------------------------------------------------------------------
# long-element kernel, negative and mixed sign quadrants

# Per variant: indices j of the Gamma(s1 - mu_j) factors, of the
# reciprocal Gamma(1 + mu_j - s1) factors, the same two lists for s2
# (factors Gamma(s2 + mu_j) and reciprocal Gamma(1 - mu_j - s2)), the
# coupling kind in s1 + s2, and the index pair of the sine prefactor.
_T2_AXIS = {
    "--": ((0, 2), (1,), (0, 2), (1,), "recip", (0, 2)),
    "-+": ((2,), (0, 1), (0, 1), (2,), "comp", (0, 1)),
    "+-": ((1, 2), (0,), (0,), (1, 2), "comp", (1, 2)),
}

#: (rotation height above the bulge, leg length) tiers; each covers
#: |4 pi^2 y| up to exp(2 (height - 2)), with the leg sized for the
#: worst power factor of its tier.  The whole tier shares one contour
#: geometry, so the cached coupling matrices are reused across a y-grid.
_T2_TIERS = ((8.0, 56.0), (28.0, 112.0))


def _t2_tier(big_l: float) -> tuple[float, float]:
    extra = 2.0 + float(np.exp(max(big_l, 0.0) / 2.0))
    for tier in _T2_TIERS:
        if extra <= tier[0]:
            return tier
    raise ConvergenceError(
        f"|4 pi^2 y| = {np.exp(big_l):.3g} exceeds the contour engine cap "
        f"(power growth outruns the cached leg heights); the series or "
        f"asymptotic route applies there"
    )


def _mb_racetrack(m: SpectralParams, big_l: float, eta: float, dens: int,
                  falling: float, scale_shift: float = 0.0) -> Contour:
    """Racetrack sized for a power factor exp(big_l) per unit leg length
    against `falling` net falling gamma powers (after reflection)."""
    bulge = _round_up(m.max_abs_im() + eta + 1e-9, 0.25)
    if falling >= 3.0:
        t_height = _round_up(
            bulge + 2.0 + np.exp(max(big_l, 0.0) / 3.0), 1.0)
        leg = max(float(np.ceil(t_height) + 24.0),
                  leg_length_for(falling, max(big_l, 0.0) + scale_shift)
                  + 8.0)
    else:
        height, leg = _t2_tier(big_l)
        t_height = bulge + height
    bulge_dens = 8 * dens if bulge <= 2.5 else (
        4 * dens if bulge <= 6.0 else 2 * dens)
    return build_racetrack(
        m, eta,
        leg_height=t_height,
        leg_length=leg,
        nodes_per_unit=dens,
        leg_nodes_per_unit=max(4, dens // 4),
        bulge_height=bulge,
        bulge_nodes_per_unit=bulge_dens,
        tail_nodes_per_unit=max(8, dens // 2),
    )


@lru_cache(maxsize=10)
def _t2_coupling(c1: Contour, c2: Contour, kind: str) -> np.ndarray:
    """Log of the s1+s2 coupling factor on a node-grid pair.

    Kept in log form: on leg-by-leg node pairs the factor reaches
    exp(870) while the full integrand stays far below underflow, so only
    the assembled exponent may be exponentiated.
    """
    s1 = c1.nodes()[0]
    s2 = c2.nodes()[0]
    ssum = s1[:, None] + s2[None, :]
    if kind == "recip":
        lc = log_rgamma(ssum)
    else:
        # Gamma(1 - s1 - s2); Re >= 1 - 2 eta on the bulges and grows
        # leftward, so the argument never nears a pole
        lc = -log_rgamma(1.0 - ssum)
    lc.setflags(write=False)
    return lc


def _t2_eval(m: SpectralParams, variant: str, y1: float, y2: float,
             eta: float, dens: int) -> tuple[complex, float, int]:
    sp1, sd1, sp2, sd2, kind, sin_pair = _T2_AXIS[variant]
    mt = m.as_tuple()
    l1 = float(np.log(FOUR_PI2 * abs(y1)))
    l2 = float(np.log(FOUR_PI2 * abs(y2)))
    c1 = _mb_racetrack(m, l1, eta, dens, falling=2.0)
    c2 = _mb_racetrack(m, l2, eta, dens, falling=2.0)
    s1, w1 = c1.nodes()
    s2, w2 = c2.nodes()

    lg1 = (1.0 - s1) * l1
    for j in sp1:
        lg1 = lg1 + log_gamma(s1 - mt[j])
    for j in sd1:
        lg1 = lg1 - log_gamma(1.0 + mt[j] - s1)
    lg2 = (1.0 - s2) * l2
    for j in sp2:
        lg2 = lg2 + log_gamma(s2 + mt[j])
    for j in sd2:
        lg2 = lg2 - log_gamma(1.0 - mt[j] - s2)

    lc = _t2_coupling(c1, c2, kind)
    mmat = np.exp(lg1[:, None] + lc + lg2[None, :])
    tot = complex(w1 @ mmat @ w2)
    mass = float(np.abs(w1) @ np.abs(mmat) @ np.abs(w2))
    d = mt[sin_pair[0]] - mt[sin_pair[1]]
    pref = -np.sin(np.pi * d) / np.pi / TWO_PI_I ** 2
    return pref * tot, abs(pref) * mass, s1.size * s2.size


def _t2_eval_grid(m: SpectralParams, variant: str, y1s: np.ndarray,
                  y2s: np.ndarray, eta: float, dens: int
                  ) -> tuple[np.ndarray, np.ndarray]:
    """All |y| combinations of one sign quadrant in two matrix products.

    The y-power factors separate per axis, so the gamma part of the
    integrand matrix is assembled once and hit with a power matrix from
    each side.  Safe only while (1 + leg length) * |log(4 pi^2 y)| stays
    inside double range, which holds for the first contour tier; callers
    fall back to pointwise evaluation beyond it.
    """
    sp1, sd1, sp2, sd2, kind, sin_pair = _T2_AXIS[variant]
    mt = m.as_tuple()
    l1s = np.log(FOUR_PI2 * np.abs(y1s))
    l2s = np.log(FOUR_PI2 * np.abs(y2s))
    lmax = float(max(np.max(l1s), np.max(l2s)))
    c1 = _mb_racetrack(m, lmax, eta, dens, falling=2.0)
    s1, w1 = c1.nodes()
    s2, w2 = s1, w1  # same tier geometry on both axes

    lg1 = np.zeros_like(s1)
    for j in sp1:
        lg1 = lg1 + log_gamma(s1 - mt[j])
    for j in sd1:
        lg1 = lg1 - log_gamma(1.0 + mt[j] - s1)
    lg2 = np.zeros_like(s2)
    for j in sp2:
        lg2 = lg2 + log_gamma(s2 + mt[j])
    for j in sd2:
        lg2 = lg2 - log_gamma(1.0 - mt[j] - s2)

    lc = _t2_coupling(c1, c1, kind)
    mmat = np.exp(lg1[:, None] + lc + lg2[None, :])
    amat = np.abs(mmat)
    u_mat = np.exp(np.outer(l1s, 1.0 - s1)) * w1
    v_mat = np.exp(np.outer(l2s, 1.0 - s2)) * w2
    d = mt[sin_pair[0]] - mt[sin_pair[1]]
    pref = -np.sin(np.pi * d) / np.pi / TWO_PI_I ** 2
    vals = pref * (u_mat @ mmat @ v_mat.T)
    masses = abs(pref) * (np.abs(u_mat) @ amat @ np.abs(v_mat).T)
    return vals, masses


def k_wl_mb_grid(
    y1s,
    y2s,
    mu: MuLike,
    variant: str,
    eta: float = config.CONTOUR_ETA,
    nodes_per_unit: int | None = None,
    err_refine: int = 8,
) -> tuple[np.ndarray, np.ndarray]:
    """k_wl_mb over the product grid |y1s| x |y2s| of one sign quadrant.

    y1s, y2s are magnitudes (positive); the quadrant signs come from the
    variant, which must be one of "mm", "mp", "pm" (for "pp" evaluate
    whittaker_wstar_grid and scale).  Returns (values, error estimates)
    as (len(y1s), len(y2s)) arrays.  Much faster than a loop when the
    grid shares a contour tier.
    """
    if variant not in _T2_KEY:
        raise DomainError(
            f"variant {variant!r} not gridable (need one of mm/mp/pm)")
    y1s = np.abs(np.asarray(y1s, dtype=float))
    y2s = np.abs(np.asarray(y2s, dtype=float))
    if np.any(y1s == 0.0) or np.any(y2s == 0.0):
        raise DomainError("k_wl_mb_grid needs nonzero y")
    m = as_mu(mu)
    key = _T2_KEY[variant]
    lmax = float(np.log(FOUR_PI2 * max(y1s.max(), y2s.max())))
    if lmax > 4.0:
        sgn1, sgn2 = _SIGNS_BY_VARIANT[variant]
        vals = np.empty((y1s.size, y2s.size), dtype=complex)
        errs = np.empty_like(vals, dtype=float)
        for i, a in enumerate(y1s):
            for k, b in enumerate(y2s):
                r = k_wl_mb((sgn1 * a, sgn2 * b), m, variant=variant,
                            eta=eta, nodes_per_unit=nodes_per_unit,
                            err_refine=err_refine)
                vals[i, k] = r.value
                errs[i, k] = r.err_estimate
        return vals, errs
    dens = nodes_per_unit or config.MB_NODES_PER_UNIT
    fine, mass = _t2_eval_grid(m, key, y1s, y2s, eta, dens)
    if err_refine > 0:
        coarse, _ = _t2_eval_grid(m, key, y1s, y2s, eta,
                                  max(8, dens - err_refine))
        errs = np.abs(fine - coarse) + _EPS * mass
    else:
        errs = _EPS * mass
    return fine, errs


_VARIANT_BY_SIGN = {(1, 1): "pp", (-1, -1): "mm", (-1, 1): "mp", (1, -1): "pm"}
_SIGNS_BY_VARIANT = {v: k for k, v in _VARIANT_BY_SIGN.items()}
_T2_KEY = {"mm": "--", "mp": "-+", "pm": "+-"}


def k_wl_mb(
    y: tuple[float, float],
    mu: MuLike,
    variant: str = "auto",
    eta: float = config.CONTOUR_ETA,
    nodes_per_unit: int | None = None,
    err_refine: int = 8,
) -> KernelResult:
    """Long-element kernel for one sign quadrant, contour-integral route.

    variant "pp" (both y positive) evaluates the kernel through the
    completed-Whittaker identity

        pi^4 cos_mu(mu) sqrt(y1 y2) wstar((2 sqrt(y1), 2 sqrt(y2)), 2 mu)

    and is tagged "whittaker_identity".  The other quadrants ("mm",
    "mp", "pm") are double Mellin-Barnes integrals over racetrack
    contours with the sine prefactor -sin(pi (mu_j - mu_k))/pi; they
    match the two-term antisymmetrized series kernels.  "auto" picks the
    variant from the signs of y; an explicit variant that contradicts
    them raises SignMismatch.
    """
    y1, y2 = float(y[0]), float(y[1])
    if y1 == 0.0 or y2 == 0.0:
        raise DomainError("k_wl_mb needs nonzero y1, y2")
    m = as_mu(mu)
    actual = (1 if y1 > 0 else -1, 1 if y2 > 0 else -1)
    if variant == "auto":
        variant = _VARIANT_BY_SIGN[actual]
    elif variant not in _SIGNS_BY_VARIANT:
        raise DomainError(f"unknown variant {variant!r}")
    elif _SIGNS_BY_VARIANT[variant] != actual:
        raise SignMismatch(
            f"variant {variant!r} does not match sign(y) = {actual}"
        )

    if variant == "pp":
        doubled = SpectralParams(2.0 * m.mu1, 2.0 * m.mu2)
        inner = whittaker_wstar(
            (2.0 * np.sqrt(y1), 2.0 * np.sqrt(y2)), doubled,
            nodes_per_unit=nodes_per_unit, err_refine=err_refine,
        )
        pref = np.pi ** 4 * cos_mu(m) * np.sqrt(y1 * y2)
        return KernelResult(
            pref * inner.value,
            abs(pref) * inner.err_estimate + _EPS * abs(pref * inner.value),
            "whittaker_identity",
            n_quad=inner.n_quad,
        )

    dens = nodes_per_unit or config.MB_NODES_PER_UNIT
    key = _T2_KEY[variant]
    fine, mass, n = _t2_eval(m, key, y1, y2, eta, dens)
    if err_refine > 0:
        coarse, _, _ = _t2_eval(m, key, y1, y2, eta,
                                max(8, dens - err_refine))
        err = abs(fine - coarse) + _EPS * mass
    else:
        err = _EPS * mass
    return KernelResult(fine, err, "mellin_barnes", n_quad=n)


# ----------------------------------------------------------------------
# one-variable kernel


def _w4_integrand_factory(m: SpectralParams, big_l: float, eps: float):
    mt = m.as_tuple()
    phase_sum = sum(np.exp(1j * np.pi * eps * mj) for mj in mt)

    def f(svec: np.ndarray) -> np.ndarray:
        lg = (1.0 - svec) * big_l
        for mj in mt:
            lg = lg + log_gamma(svec - mj)
        # the phases are fused into the exponent: on the legs they reach
        # exp(3 pi T / 2) while the gamma product underflows, and only
        # the combination is representable
        return (np.exp(lg - 1.5j * np.pi * eps * svec)
                + np.exp(lg + 0.5j * np.pi * eps * svec) * phase_sum)

    return f


def _quad_with_mass(f, contour: Contour) -> tuple[complex, float, int]:
    s, w = contour.nodes()
    vals = f(s)
    return complex(w @ vals), float(np.abs(w) @ np.abs(vals)), s.size


def k_w4_mb(
    y1: float,
    mu: MuLike,
    tails: str = "racetrack",
    eta: float = config.CONTOUR_ETA,
    nodes_per_unit: int | None = None,
    err_refine: int = 8,
) -> KernelResult:
    """One-variable kernel as a single Mellin-Barnes integral.

    (1/512 pi^2) times the integral of

        |8 pi^3 y1|^(1-s) Gamma(s-mu1) Gamma(s-mu2) Gamma(s-mu3)
        * (exp(-3 pi i eps s/2) + exp(pi i eps s/2) sum_j exp(pi i eps mu_j))

    ds/(2 pi i), eps = sign(y1).  The three gammas and the worst phase
    cancel exactly in exponential rate, so vertical tails decay only
    polynomially; by default the tails are bent into racetrack legs
    (tails="racetrack"), where reflection turns the gamma product into
    superexponential decay.  tails="vertical" instead keeps the bulged
    vertical path and removes the tail oscillation by window-averaged
    partial sums; it is kept as a cross-check and is less accurate.
    """
    y1 = float(y1)
    if y1 == 0.0:
        raise DomainError("k_w4_mb needs nonzero y1")
    m = as_mu(mu)
    eps = 1.0 if y1 > 0 else -1.0
    big_l = float(np.log(EIGHT_PI3 * abs(y1)))
    shape = MBIntegrand(
        num_plus=tuple(-mj for mj in m.as_tuple()),
        power_log_scale=big_l,
        phase_rates=(-1.5 * np.pi * eps, 0.5 * np.pi * eps),
    )
    dens = nodes_per_unit or config.MB_NODES_PER_UNIT
    f = _w4_integrand_factory(m, big_l, eps)
    norm = 1.0 / (512.0 * np.pi ** 2) / TWO_PI_I

    if tails == "vertical":
        if not shape.needs_left_bend():
            # never taken for this integrand; kept for clarity
            pass
        val, spread, mass, n = _w4_cesaro(m, f, big_l, eta, dens)
        return KernelResult(norm * val, abs(norm) * (spread + _EPS * mass),
                            "mellin_barnes", n_quad=n)
    if tails != "racetrack":
        raise DomainError(f"unknown tails mode {tails!r}")

    assert shape.needs_left_bend()
    fine, mass, n = _quad_with_mass(
        f, _mb_racetrack(m, big_l, eta, dens, falling=3.0))
    if err_refine > 0:
        coarse, _, _ = _quad_with_mass(
            f, _mb_racetrack(m, big_l, eta, max(8, dens - err_refine),
                             falling=3.0))
        err = abs(fine - coarse) + _EPS * mass
    else:
        err = _EPS * mass
    return KernelResult(norm * fine, abs(norm) * err, "mellin_barnes",
                        n_quad=n)


def _w4_cesaro(m: SpectralParams, f, big_l: float, eta: float, dens: int,
               window: float = 2.0, n_windows: int = 16, n_avg: int = 8):
    """Bulged vertical path, tails truncated at increasing heights, with
    the trailing partial sums averaged to damp the residual oscillation."""
    bulge = _round_up(m.max_abs_im() + eta + 1e-9, 0.25)
    bulge_dens = 8 * dens if bulge <= 2.5 else 4 * dens
    # base height clears the stationary-phase point of the power factor
    t0 = _round_up(bulge + 40.0 + np.exp(max(big_l, 0.0) / 3.0), 1.0)
    base = build_contour_box(m, eta, truncation_height=t0,
                             nodes_per_unit=dens,
                             bulge_nodes_per_unit=bulge_dens)
    total, mass, n = _quad_with_mass(f, base)
    partials = [total]
    e2 = -2.0 * eta
    for k in range(n_windows):
        lo = t0 + k * window
        hi = lo + window
        up = Contour((complex(e2, lo), complex(e2, hi)), hi, (dens,))
        dn = Contour((complex(e2, -hi), complex(e2, -lo)), hi, (dens,))
        for piece in (up, dn):
            v, mm, nn = _quad_with_mass(f, piece)
            total += v
            mass += mm
            n += nn
        partials.append(total)
    tail = np.array(partials[-n_avg:])
    avg = complex(tail.mean())
    spread = float(np.max(np.abs(tail - avg)))
    return avg, spread, mass, n


def k_w4_voronoi(
    y1: float,
    mu: MuLike,
    eta: float = config.CONTOUR_ETA,
    nodes_per_unit: int | None = None,
    err_refine: int = 8,
) -> KernelResult:
    """One-variable kernel in half-argument gamma-ratio form.

    (1/128 sqrt(pi)) times the integral of |pi^3 y1|^(1-s) against

        prod_j Gamma((s-mu_j)/2)/Gamma((1-s+mu_j)/2)
        + i eps prod_j Gamma((1+s-mu_j)/2)/Gamma((2-s+mu_j)/2)

    ds/(2 pi i).  The gamma ratios have exactly zero net exponential
    rate, so the racetrack geometry is required, as for k_w4_mb; the two
    agree to quadrature accuracy and serve as mutual checks of the
    reflection/duplication bookkeeping.
    """
    y1 = float(y1)
    if y1 == 0.0:
        raise DomainError("k_w4_voronoi needs nonzero y1")
    m = as_mu(mu)
    mt = m.as_tuple()
    eps = 1.0 if y1 > 0 else -1.0
    big_l = float(np.log(np.pi ** 3 * abs(y1)))
    shape = MBIntegrand(
        num_plus=tuple(-mj for mj in mt),
        den_minus=tuple(1.0 + mj for mj in mt),
        arg_scale=0.5,
        power_log_scale=big_l,
    )
    assert shape.needs_left_bend()

    def f(svec: np.ndarray) -> np.ndarray:
        base = (1.0 - svec) * big_l
        lg1 = base.copy()
        lg2 = base.copy()
        for mj in mt:
            lg1 = lg1 + log_gamma(0.5 * (svec - mj)) \
                - log_gamma(0.5 * (1.0 - svec + mj))
            lg2 = lg2 + log_gamma(0.5 * (1.0 + svec - mj)) \
                - log_gamma(0.5 * (2.0 - svec + mj))
        return np.exp(lg1) + 1j * eps * np.exp(lg2)

    dens = nodes_per_unit or config.MB_NODES_PER_UNIT
    norm = 1.0 / (128.0 * np.sqrt(np.pi)) / TWO_PI_I
    # half-argument gammas decay at half speed: compensate by treating
    # ln 8 of the power scale as part of the gamma bookkeeping
    fine, mass, n = _quad_with_mass(
        f, _mb_racetrack(m, big_l, eta, dens, falling=3.0,
                         scale_shift=3.0 * np.log(2.0)))
    if err_refine > 0:
        coarse, _, _ = _quad_with_mass(
            f, _mb_racetrack(m, big_l, eta, max(8, dens - err_refine),
                             falling=3.0, scale_shift=3.0 * np.log(2.0)))
        err = abs(fine - coarse) + _EPS * mass
    else:
        err = _EPS * mass
    return KernelResult(norm * fine, abs(norm) * err, "mellin_barnes",
                        n_quad=n)
