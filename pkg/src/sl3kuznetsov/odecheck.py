"""Finite-difference verification of the kernel differential equations.

The long-element kernel satisfies a pair of partial differential
equations in (y1, y2) whose operators are low-degree polynomials in y
times mixed partials up to third order; the one-variable kernel satisfies
a single third-order ordinary differential equation in y1.  This module
applies those operators to arbitrary evaluators with central-difference
stencils (weights by Fornberg's algorithm, optional Richardson
extrapolation) and reports residuals normalized by the local function
scale.

It also checks the exact rational recurrences that the long-element
series coefficients a(n1, n2) satisfy: the two coupled relations the
differential equations impose, and the two decoupled single-step
relations obtained by eliminating between them.  The coefficients are
generated by the same running products the series evaluator uses, so a
transcription slip in either place shows up here at machine precision.

Derivatives are deliberately taken through the public evaluators rather
than termwise-differentiated series, so prefactor and argument-scaling
mistakes are caught; a termwise witness for the long-element series is
kept privately as a cross-check for the tests.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import config
from .errors import PoleError, StencilError
from .series import _coefficient_triangle
from .spectral import MuLike, as_mu, eigenvalues

__all__ = [
    "StencilConfig", "stencil_weights",
    "residual_wl", "residual_w4", "recurrence_check",
]

_FOUR_PI2_NEG = (2j * np.pi) ** 2    # (2 pi i)^2 = -4 pi^2
_TINY = 1e-300


@dataclass(frozen=True)
class StencilConfig:
    """Step and accuracy choices for the finite-difference stencils.

    order is the formal accuracy order of the central stencils, h_rel the
    step relative to |y_i|, richardson_levels the number of step sizes
    (h, 2h, 4h, ...) combined by Richardson extrapolation; 1 disables it.
    """

    order: int = 6
    h_rel: float = 1e-3
    richardson_levels: int = 2

    def __post_init__(self):
        if self.order not in (4, 6, 8):
            raise ValueError("order must be 4, 6 or 8")
        if not 1e-5 <= self.h_rel <= 1e-2:
            raise ValueError("h_rel must lie in [1e-5, 1e-2]")
        if not 1 <= int(self.richardson_levels) <= 6:
            raise ValueError("richardson_levels must lie in 1..6")


_DEFAULT_STENCIL = StencilConfig()


def _fornberg(x0: float, x: np.ndarray, m: int) -> np.ndarray:
    """Weights of derivatives 0..m at x0 on the nodes x (Fornberg 1988)."""
    n = len(x)
    c = np.zeros((m + 1, n))
    c[0, 0] = 1.0
    c1 = 1.0
    c4 = x[0] - x0
    for i in range(1, n):
        mn = min(i, m)
        c2 = 1.0
        c5 = c4
        c4 = x[i] - x0
        for j in range(i):
            c3 = x[i] - x[j]
            c2 *= c3
            if j == i - 1:
                for k in range(mn, 0, -1):
                    c[k, i] = c1 * (k * c[k - 1, i - 1] - c5 * c[k, i - 1]) / c2
                c[0, i] = -c1 * c5 * c[0, i - 1] / c2
            for k in range(mn, 0, -1):
                c[k, j] = (c4 * c[k, j] - k * c[k - 1, j]) / c3
            c[0, j] = c4 * c[0, j] / c3
        c1 = c2
    return c


def stencil_weights(deriv: int, order: int) -> tuple[np.ndarray, np.ndarray]:
    """Central-difference weights for one derivative at unit spacing.

    Returns (offsets, weights) with integer offsets -w..w sized so the
    formal accuracy is at least `order`.  Divide the weights by h^deriv
    for spacing h.
    """
    if deriv < 0:
        raise ValueError("deriv must be nonnegative")
    if order < 2 or order % 2:
        raise ValueError("order must be a positive even integer")
    half = (deriv + order - 1) // 2
    offsets = np.arange(-half, half + 1, dtype=float)
    return offsets, _fornberg(0.0, offsets, deriv)[deriv]


def _axis_offsets(kmax: int, order: int) -> np.ndarray:
    if kmax == 0:
        return np.zeros(1)
    half = (kmax + order - 1) // 2
    return np.arange(-half, half + 1, dtype=float)


def _check_samples(y: float, h: float, offsets: np.ndarray):
    pts = y + h * offsets
    if y == 0.0 or np.any(pts == 0.0) or np.any(np.sign(pts) != np.sign(y)):
        raise StencilError(
            f"stencil around y={y} with step {h:.3g} touches or crosses 0"
        )


def _richardson(table: list[dict], order: int) -> dict:
    """Extrapolate per-derivative estimates; table[0] is the coarsest step."""
    levels = len(table)
    cur = table
    q = order
    for _ in range(levels - 1):
        fac = 2.0 ** q
        cur = [
            {k: (fac * fine[k] - coarse[k]) / (fac - 1.0) for k in fine}
            for coarse, fine in zip(cur, cur[1:])
        ]
        q += 2
    return cur[0]


def _partials_2d(
    func: Callable[[float, float], complex],
    y: tuple[float, float],
    kmax: tuple[int, int],
    cfg: StencilConfig,
) -> tuple[dict, float]:
    """All mixed partials (k1, k2), k_i <= kmax_i, plus the sample scale.

    One tensor-product sample grid per Richardson level; each derivative
    is a weighted row/column contraction of the same grid.
    """
    y1, y2 = float(y[0]), float(y[1])
    off1 = _axis_offsets(kmax[0], cfg.order)
    off2 = _axis_offsets(kmax[1], cfg.order)
    w1 = _fornberg(0.0, off1, kmax[0])
    w2 = _fornberg(0.0, off2, kmax[1])
    levels = int(cfg.richardson_levels)
    h1_base = cfg.h_rel * abs(y1)
    h2_base = cfg.h_rel * abs(y2)
    _check_samples(y1, h1_base * 2.0 ** (levels - 1), off1)
    _check_samples(y2, h2_base * 2.0 ** (levels - 1), off2)

    scale = 0.0
    table = []
    for lev in range(levels):                     # coarsest step first
        h1 = h1_base * 2.0 ** (levels - 1 - lev)
        h2 = h2_base * 2.0 ** (levels - 1 - lev)
        grid = np.empty((len(off1), len(off2)), dtype=complex)
        for i, a in enumerate(off1):
            for j, b in enumerate(off2):
                grid[i, j] = func(y1 + a * h1, y2 + b * h2)
        scale = max(scale, float(np.max(np.abs(grid))))
        est = {}
        for k1 in range(kmax[0] + 1):
            row = w1[k1] @ grid
            for k2 in range(kmax[1] + 1):
                est[(k1, k2)] = complex(row @ w2[k2]) / (h1 ** k1 * h2 ** k2)
        table.append(est)
    return _richardson(table, cfg.order), scale


def _partials_1d(
    func: Callable[[float], complex],
    y1: float,
    kmax: int,
    cfg: StencilConfig,
) -> tuple[dict, float]:
    y1 = float(y1)
    off = _axis_offsets(kmax, cfg.order)
    w = _fornberg(0.0, off, kmax)
    levels = int(cfg.richardson_levels)
    h_base = cfg.h_rel * abs(y1)
    _check_samples(y1, h_base * 2.0 ** (levels - 1), off)

    scale = 0.0
    table = []
    for lev in range(levels):
        h = h_base * 2.0 ** (levels - 1 - lev)
        vals = np.array([func(y1 + a * h) for a in off], dtype=complex)
        scale = max(scale, float(np.max(np.abs(vals))))
        table.append({
            k: complex(w[k] @ vals) / h ** k for k in range(kmax + 1)
        })
    return _richardson(table, cfg.order), scale


def _wl_operator_values(d: dict, y: tuple[float, float],
                        lam: tuple[complex, complex]) -> tuple[complex, complex]:
    """Apply the two long-element operators (plus eigenvalues) to partials d."""
    y1, y2 = y
    c = _FOUR_PI2_NEG
    op1 = (y1 ** 2 * d[(2, 0)] + y2 ** 2 * d[(0, 2)]
           - y1 * y2 * d[(1, 1)] + c * (y1 + y2) * d[(0, 0)])
    op2 = (-y1 ** 2 * y2 * d[(2, 1)] + y1 * y2 ** 2 * d[(1, 2)]
           + c * y1 * y2 * (d[(1, 0)] - d[(0, 1)])
           + y1 ** 2 * d[(2, 0)] - y2 ** 2 * d[(0, 2)]
           + c * (y1 - y2) * d[(0, 0)])
    return op1 + lam[0] * d[(0, 0)], op2 + lam[1] * d[(0, 0)]


def residual_wl(
    func: Callable[[float, float], complex],
    y: tuple[float, float],
    mu: MuLike,
    cfg: StencilConfig | None = None,
) -> tuple[float, float]:
    """Normalized residuals of the two long-element equations at y.

    Applies the second-order operator pair that annihilates the
    long-element kernel with spectral parameter mu to the evaluator
    func(y1, y2), returning |residual| / scale for each equation, where
    scale is the largest of |func(y)| and all stencil samples.  The
    default step is raised above StencilConfig's because the second
    operator contains third-order mixed partials, whose rounding noise
    grows like h^-3; order-6 truncation stays far below it.
    """
    cfg = cfg or StencilConfig(h_rel=4e-3)
    lam = eigenvalues(mu)
    d, scale = _partials_2d(func, y, (2, 2), cfg)
    r1, r2 = _wl_operator_values(d, (float(y[0]), float(y[1])), lam)
    scale = max(scale, _TINY)
    return abs(r1) / scale, abs(r2) / scale


def residual_w4(
    func: Callable[[float], complex],
    y1: float,
    y2_fixed: float,
    mu: MuLike,
    cfg: StencilConfig | None = None,
) -> float:
    """Normalized residual of the third-order one-variable equation.

    The operator is lam1 + lam2 + 8 pi^3 i y1 y2 - lam1 y1 d/dy1
    - y1^3 d^3/dy1^3, acting on func(y1) with y2 frozen at y2_fixed
    (y2 enters only through the product term).  The default step is
    raised above StencilConfig's because the third derivative amplifies
    rounding noise like h^-3; truncation error at order 6 stays far
    below it.
    """
    cfg = cfg or StencilConfig(h_rel=4e-3)
    lam1, lam2 = eigenvalues(mu)
    d, scale = _partials_1d(func, y1, 3, cfg)
    y1 = float(y1)
    op = ((lam1 + lam2 + 8.0 * np.pi ** 3 * 1j * y1 * float(y2_fixed)) * d[0]
          - lam1 * y1 * d[1] - y1 ** 3 * d[3])
    return abs(op) / max(scale, _TINY)


def recurrence_check(mu: MuLike, big_n: int) -> float:
    """Largest relative residual of the coefficient recurrences up to big_n.

    Checks the two coupled relations imposed by the differential
    equations and the two decoupled single-step relations on the
    implemented a(n1, n2) over the triangle n1 + n2 <= big_n, with
    a(n1, n2) = 0 for negative indices.  Each residual is normalized by
    the largest participating term.
    """
    m = as_mu(mu)
    if big_n < 0:
        raise ValueError("big_n must be nonnegative")
    m1, m2, m3 = m.as_tuple()
    alpha, beta, gamma = m1 - m3, m2 - m3, m1 - m2
    for d, name in ((alpha, "mu1-mu3"), (beta, "mu2-mu3"), (gamma, "mu1-mu2")):
        r = np.round(d.real)
        if -big_n <= r <= -1 and abs(d - r) < config.POLE_TOL:
            raise PoleError(
                f"{name} = {d} is a negative integer >= -{big_n}; "
                "recurrence denominators vanish on the triangle"
            )
    if big_n == 0:
        return 0.0

    a = _coefficient_triangle(m, big_n)
    tri = np.add.outer(np.arange(big_n + 1), np.arange(big_n + 1)) <= big_n
    a = np.where(tri, a, 0.0)
    am1 = np.zeros_like(a)                 # a(n1-1, n2)
    am1[1:, :] = a[:-1, :]
    am2 = np.zeros_like(a)                 # a(n1, n2-1)
    am2[:, 1:] = a[:, :-1]
    n1 = np.arange(big_n + 1, dtype=float)[:, None]
    n2 = np.arange(big_n + 1, dtype=float)[None, :]

    def rel(*terms):
        total = sum(terms)
        floor = np.maximum.reduce([np.abs(t) for t in terms])
        return np.abs(total) / np.maximum(floor, _TINY)

    c1 = (n1 * n1 - n1 * n2 + n2 * n2
          + m2 * (n1 - 2.0 * n2) - m3 * (n1 + n2))
    r1 = rel(c1 * a, -am1, -am2)
    c2 = ((n1 - m3) * n2 * n2 - n1 * n1 * (n2 + m1) - 2.0 * m2 * n1 * n2
          - m1 * (m2 - m3) * n1 + m3 * (m2 - m1) * n2)
    r2 = rel(c2 * a, -(n1 - m3) * am2, (n2 + m1) * am1)
    r3 = rel(n1 * (n1 + alpha) * (n1 + beta) * a, -(n1 + n2 + alpha) * am1)
    r4 = rel(n2 * (n2 + gamma) * (n2 + alpha) * a, -(n1 + n2 + alpha) * am2)

    worst = np.maximum.reduce([r1, r2, r3, r4])
    return float(np.max(worst[tri]))


def _jwl_termwise_partial(
    y: tuple[float, float],
    mu: MuLike,
    k1: int,
    k2: int,
    big_n: int = 48,
) -> complex:
    """Mixed partial of the long-element series by termwise differentiation.

    Second witness for the finite-difference route: each series term is
    c * |y1|^(1-mu3+n1) |y2|^(1+mu1+n2) up to fixed signs, so a partial
    just multiplies it by falling factorials of the exponents over y^k.
    Fixed truncation order, intended for the small-|y| test points only.
    """
    m = as_mu(mu)
    y1, y2 = float(y[0]), float(y[1])
    z1 = 4.0 * np.pi ** 2 * y1
    z2 = 4.0 * np.pi ** 2 * y2
    a = _coefficient_triangle(m, big_n)
    tri = np.add.outer(np.arange(big_n + 1), np.arange(big_n + 1)) <= big_n
    a = np.where(tri, a, 0.0)
    n1 = np.arange(big_n + 1)
    n2 = np.arange(big_n + 1)
    terms = (a * np.power(z1, n1)[:, None] * np.power(z2, n2)[None, :])
    e1 = (1.0 - m.mu3) + n1.astype(complex)
    e2 = (1.0 + m.mu1) + n2.astype(complex)
    f1 = np.ones_like(e1)
    for i in range(k1):
        f1 = f1 * (e1 - i)
    f2 = np.ones_like(e2)
    for i in range(k2):
        f2 = f2 * (e2 - i)
    total = complex(f1 @ terms @ f2)
    pref = np.exp((1.0 - m.mu3) * np.log(4.0 * np.pi ** 2 * abs(y1))
                  + (1.0 + m.mu1) * np.log(4.0 * np.pi ** 2 * abs(y2)))
    return complex(pref * total / (y1 ** k1 * y2 ** k2))
