"""Power-series evaluation of the two basic kernels and their symmetrizations.

The one-variable kernel attached to the order-3 Weyl element and the
two-variable long-element kernel are entire functions given by rapidly
converging power series: coefficients involve three reciprocal gamma
factors per index, so terms eventually decay like reciprocal factorial
cubes.  Coefficients are generated by the exact rational recurrences the
series satisfy (running products), never by per-term log-gamma calls;
this is both much faster and makes the recurrence verification test
meaningful at machine precision.

Series are summed in triangle order (by total degree) with Neumaier
compensated accumulation.  Each result carries an error estimate
combining the geometric tail bound with a rounding bound proportional to
the largest intermediate magnitude, which is also how cancellation in
the symmetrized combinations is surfaced.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from . import config
from .errors import CancellationWarning, DomainError, NonConvergence, PoleError
from .gammafns import log_gamma
from .spectral import (MuLike, SpectralParams, WEYL_GROUP, WEYL_W3_SUBGROUP,
                       as_mu, sin_mu, weyl_act_mu)

__all__ = [
    "SeriesPolicy", "KernelResult",
    "j_w4", "j_wl", "k_wl_sym", "k_wl_signed", "k_w4_sym",
    "SIGN_PAIRS",
]

EIGHT_PI3 = 8.0 * np.pi ** 3
FOUR_PI2 = 4.0 * np.pi ** 2

#: sign cases of the long-element kernel, keyed by (sgn y1, sgn y2)
SIGN_PAIRS = ("+-", "-+", "--")


@dataclass(frozen=True)
class SeriesPolicy:
    """Stopping rule for the kernel power series.

    rel_tol is the term-to-sum ratio below which a diagonal counts as
    negligible, tail_guard the number of consecutive negligible
    diagonals required before stopping.
    """

    rel_tol: float = config.SERIES_REL_TOL
    max_terms: int = config.SERIES_MAX_TERMS
    tail_guard: int = config.SERIES_TAIL_GUARD

    def __post_init__(self):
        if not 0.0 < self.rel_tol <= 1e-6:
            raise ValueError("rel_tol must lie in (0, 1e-6]")
        if self.max_terms > 10 ** 6:
            raise ValueError("max_terms must be <= 1e6")
        if self.tail_guard < 3:
            raise ValueError("tail_guard must be >= 3")


_DEFAULT_POLICY = SeriesPolicy()


@dataclass(frozen=True)
class KernelResult:
    """A kernel value with provenance.

    err_estimate combines the truncation tail with a rounding bound;
    n_terms counts series terms, n_quad quadrature nodes, whichever
    route produced the value.
    """

    value: complex
    err_estimate: float
    representation: str
    n_terms: int | None = None
    n_quad: int | None = None

    def __post_init__(self):
        if self.representation not in ("series", "mellin_barnes",
                                       "whittaker_identity"):
            raise ValueError(f"unknown representation {self.representation!r}")
        if not self.err_estimate >= 0.0:
            raise ValueError("err_estimate must be nonnegative")


class _NeumaierSum:
    """Compensated accumulator for complex terms."""

    __slots__ = ("s", "c")

    def __init__(self):
        self.s = 0.0 + 0.0j
        self.c = 0.0 + 0.0j

    def add(self, x: complex):
        t = self.s + x
        if abs(self.s.real) + abs(self.s.imag) >= abs(x.real) + abs(x.imag):
            self.c += (self.s - t) + x
        else:
            self.c += (x - t) + self.s
        self.s = t

    def total(self) -> complex:
        return self.s + self.c


def _reject_negative_integer(d: complex, what: str):
    n = np.round(d.real)
    if n <= -1 and abs(d - n) < config.POLE_TOL:
        raise PoleError(f"{what} = {d} is a negative integer; series "
                        "recurrence degenerates")


def j_w4(
    y1: float,
    mu: MuLike,
    policy: SeriesPolicy | None = None,
    y2: float = 1.0,
) -> KernelResult:
    """One-variable kernel series for the order-3 Weyl element.

    |8 pi^3 y1|^(1-mu3) * sum_n (8 pi^3 i y1 y2)^n
        / (n! Gamma(n+1+mu1-mu3) Gamma(n+1+mu2-mu3)).

    The optional y2 deforms the series into its two-variable extension
    (used by the differential-equation checks); y2=1 is the plain kernel.
    """
    policy = policy or _DEFAULT_POLICY
    m = as_mu(mu)
    if y1 == 0.0:
        raise DomainError("y1 must be nonzero")
    z = EIGHT_PI3 * 1j * y1 * y2
    if abs(z) > config.W4_SERIES_DOMAIN_BOUND:
        raise DomainError(
            f"|8 pi^3 y1 y2| = {abs(z):.3g} exceeds the series domain bound "
            f"{config.W4_SERIES_DOMAIN_BOUND:g}; use the Mellin-Barnes route"
        )
    a13 = m.mu1 - m.mu3
    a23 = m.mu2 - m.mu3
    _reject_negative_integer(a13, "mu1-mu3")
    _reject_negative_integer(a23, "mu2-mu3")

    term = complex(np.exp(-log_gamma(1.0 + a13) - log_gamma(1.0 + a23)))
    acc = _NeumaierSum()
    acc.add(term)
    absmax = abs(term)
    small_run = 0
    n = 0
    while n < policy.max_terms:
        n += 1
        term = term * z / (n * (n + a13) * (n + a23))
        acc.add(term)
        absmax = max(absmax, abs(term))
        if abs(term) <= policy.rel_tol * max(abs(acc.total()), 1e-300):
            small_run += 1
            if small_run >= policy.tail_guard:
                break
        else:
            small_run = 0
    else:
        raise NonConvergence(f"j_w4 did not converge in {policy.max_terms} terms")

    total = acc.total()
    # ratio of consecutive terms is already tiny at the stopping index
    tail = abs(term) * 2.0
    rounding = 1e-16 * (n + 1) * absmax
    pref = np.exp((1.0 - m.mu3) * np.log(EIGHT_PI3 * abs(y1)))
    value = complex(pref * total)
    err = float(abs(pref) * (tail + rounding))
    return KernelResult(value, err, "series", n_terms=n + 1)


def _jwl_setup(m: SpectralParams):
    """Difference parameters and a(0,0) for the long-element series."""
    alpha = m.mu1 - m.mu3
    beta = m.mu2 - m.mu3
    gamma = m.mu1 - m.mu2
    for d, name in ((alpha, "mu1-mu3"), (beta, "mu2-mu3"), (gamma, "mu1-mu2")):
        _reject_negative_integer(d, name)
    a00 = complex(np.exp(-log_gamma(1.0 + alpha) - log_gamma(1.0 + beta)
                         - log_gamma(1.0 + gamma)))
    return alpha, beta, gamma, a00


def _coefficient_triangle(mu: MuLike, big_n: int) -> np.ndarray:
    """Long-element series coefficients a(n1, n2) on n1 + n2 <= big_n.

    Returns an (N+1, N+1) complex array, NaN outside the triangle.  Built
    by the same running-product recurrences as j_wl, so the recurrence
    verification in odecheck exercises the shipped scheme rather than a
    reference formula.
    """
    m = as_mu(mu)
    alpha, beta, gamma, a00 = _jwl_setup(m)
    a = np.full((big_n + 1, big_n + 1), np.nan, dtype=complex)
    a[0, 0] = a00
    for n2 in range(1, big_n + 1):
        a[0, n2] = a[0, n2 - 1] * (n2 + alpha) / (
            n2 * (n2 + gamma) * (n2 + alpha)
        )
    for n1 in range(1, big_n + 1):
        for n2 in range(big_n + 1 - n1):
            a[n1, n2] = a[n1 - 1, n2] * (n1 + n2 + alpha) / (
                n1 * (n1 + alpha) * (n1 + beta)
            )
    return a


def j_wl(
    y: tuple[float, float],
    mu: MuLike,
    policy: SeriesPolicy | None = None,
) -> KernelResult:
    """Two-variable long-element kernel series.

    |4 pi^2 y1|^(1-mu3) |4 pi^2 y2|^(1+mu1)
        * sum a(n1,n2) (4 pi^2 y1)^n1 (4 pi^2 y2)^n2,
    a(n1,n2) = Gamma(n1+n2+mu1-mu3+1)
        / prod_i [Gamma(n1+mu_i-mu3+1) Gamma(n2+mu1-mu_i+1)].

    Signs of y1, y2 ride along in the series variables; the prefactor
    sees absolute values only.
    """
    policy = policy or _DEFAULT_POLICY
    m = as_mu(mu)
    y1, y2 = float(y[0]), float(y[1])
    if y1 == 0.0 or y2 == 0.0:
        raise DomainError("y1 and y2 must be nonzero")
    z1 = FOUR_PI2 * y1
    z2 = FOUR_PI2 * y2
    if max(abs(z1), abs(z2)) > config.SERIES_DOMAIN_BOUND:
        raise DomainError(
            f"|4 pi^2 y| = ({abs(z1):.3g}, {abs(z2):.3g}) exceeds the series "
            f"domain bound {config.SERIES_DOMAIN_BOUND:g}; use the "
            "Mellin-Barnes route"
        )
    alpha, beta, gamma, a00 = _jwl_setup(m)

    # previous diagonal of coefficients a(n1, N-1-n1), updated in place
    prev = np.array([a00], dtype=complex)
    acc = _NeumaierSum()
    acc.add(a00)
    absmax = abs(a00)
    n_terms = 1
    small_run = 0
    diag_abs_prev = abs(a00)
    pow1 = np.array([1.0 + 0.0j])  # z1^n1 cache, grown as diagonals widen
    big_n = 0
    while n_terms < policy.max_terms:
        big_n += 1
        cur = np.empty(big_n + 1, dtype=complex)
        # n1 = 0 column: step in n2 using the second reduced recurrence
        n2 = big_n
        cur[0] = prev[0] * (n2 + alpha) / (n2 * (n2 + gamma) * (n2 + alpha))
        # n1 >= 1: step in n1 from the previous diagonal
        n1s = np.arange(1, big_n + 1)
        n2s = big_n - n1s
        cur[1:] = prev * (n1s + n2s + alpha) / (
            n1s * (n1s + alpha) * (n1s + beta)
        )
        pow1 = np.append(pow1, pow1[-1] * z1)
        # terms a(n1,n2) z1^n1 z2^n2 along the diagonal
        terms = cur * pow1 * z2 ** (big_n - np.arange(big_n + 1))
        diag_sum = complex(terms.sum())
        acc.add(diag_sum)
        diag_abs = float(np.abs(terms).sum())
        absmax = max(absmax, diag_abs)
        n_terms += big_n + 1
        if diag_abs <= policy.rel_tol * max(abs(acc.total()), 1e-300):
            small_run += 1
            if small_run >= policy.tail_guard:
                break
        else:
            small_run = 0
        diag_abs_prev = diag_abs
        prev = cur
    else:
        raise NonConvergence(
            f"j_wl did not converge within {policy.max_terms} terms"
        )

    total = acc.total()
    ratio = diag_abs / max(diag_abs_prev, 1e-300)
    tail = diag_abs * (ratio / (1.0 - ratio) if ratio < 0.5 else 2.0)
    rounding = 1e-16 * absmax * (big_n + 1)
    pref = np.exp((1.0 - m.mu3) * np.log(FOUR_PI2 * abs(y1))
                  + (1.0 + m.mu1) * np.log(FOUR_PI2 * abs(y2)))
    value = complex(pref * total)
    err = float(abs(pref) * (tail + rounding))
    return KernelResult(value, err, "series", n_terms=n_terms)


def _combine(parts, weights, representation) -> KernelResult:
    """Weighted sum of KernelResults with cancellation accounting."""
    value = 0.0 + 0.0j
    err = 0.0
    peak = 0.0
    n_terms = 0
    for res, wt in zip(parts, weights):
        value += wt * res.value
        err += abs(wt) * res.err_estimate
        peak = max(peak, abs(wt * res.value))
        n_terms += res.n_terms or 0
    cond = peak / max(abs(value), 1e-300)
    if cond > 1e6:
        warnings.warn(
            f"symmetrized kernel loses ~{np.log10(cond):.1f} digits to "
            "cancellation", CancellationWarning, stacklevel=3,
        )
    err += 1e-16 * peak
    return KernelResult(complex(value), float(err), representation,
                        n_terms=n_terms)


def k_wl_sym(
    y: tuple[float, float],
    mu: MuLike,
    policy: SeriesPolicy | None = None,
) -> KernelResult:
    """Fully symmetrized long-element kernel.

    -(pi^3/32) sum over the Weyl group of J(y, mu^w) / sin_mu(mu^w).
    Requires pairwise-distinct mu components.
    """
    m = as_mu(mu)
    m.require_distinct()
    parts, weights = [], []
    for w in WEYL_GROUP:
        mw = weyl_act_mu(m, w)
        parts.append(j_wl(y, mw, policy))
        weights.append(-(np.pi ** 3 / 32.0) / sin_mu(mw))
    return _combine(parts, weights, "series")


_SIGN_SWAP = {
    "+-": (0, 2, 1),   # mu2 <-> mu3
    "-+": (1, 0, 2),   # mu1 <-> mu2
    "--": (2, 1, 0),   # mu1 <-> mu3
}


def k_wl_signed(
    y: tuple[float, float],
    mu: MuLike,
    sign_pair: str,
    policy: SeriesPolicy | None = None,
) -> KernelResult:
    """Two-term antisymmetrized long-element kernel for a mixed/negative
    sign configuration of (y1, y2).

    K^(s1 s2) = J(y, mu) - J(y, swapped mu), where the swap exchanges the
    pair of mu components attached to that sign case.
    """
    if sign_pair not in _SIGN_SWAP:
        raise ValueError(f"sign_pair must be one of {SIGN_PAIRS}, "
                         f"got {sign_pair!r}")
    m = as_mu(mu)
    m.require_distinct()
    t = m.as_tuple()
    perm = _SIGN_SWAP[sign_pair]
    swapped = SpectralParams(t[perm[0]], t[perm[1]], t[perm[2]])
    parts = [j_wl(y, m, policy), j_wl(y, swapped, policy)]
    return _combine(parts, [1.0, -1.0], "series")


def k_w4_sym(
    y1: float,
    mu: MuLike,
    policy: SeriesPolicy | None = None,
) -> KernelResult:
    """Symmetrized one-variable kernel over the order-3 subgroup.

    (1/512) sum over w in {I, w4, w5} of J_w4(y1, mu^w)
        / [sin(pi (mu1^w - mu3^w)/2) sin(pi (mu2^w - mu3^w)/2)].
    """
    m = as_mu(mu)
    m.require_distinct()
    parts, weights = [], []
    for w in WEYL_W3_SUBGROUP:
        mw = weyl_act_mu(m, w)
        s1 = np.sin(0.5 * np.pi * (mw.mu1 - mw.mu3))
        s2 = np.sin(0.5 * np.pi * (mw.mu2 - mw.mu3))
        parts.append(j_w4(y1, mw, policy))
        weights.append(1.0 / (512.0 * s1 * s2))
    return _combine(parts, weights, "series")
