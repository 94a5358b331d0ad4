"""Independent high-precision references used to freeze expected values.

Everything here is built on mpmath (arbitrary precision) or scipy's
adaptive quadrature and shares no code with the package: series come
from the closed-form gamma-quotient coefficients, contour integrals from
mpmath's own quadrature on truncated vertical lines, and the 2-D
spectral-line integral from scipy.integrate.dblquad.  The slow oracles
were run once and their outputs frozen as literals in the test files;
the cheap ones are called directly by the tests.
"""

from __future__ import annotations

import itertools

import mpmath as mp
import numpy as np
from scipy import integrate

FOUR_PI2 = 4 * np.pi ** 2
EIGHT_PI3 = 8 * np.pi ** 3


def _triple(mu):
    m = [mp.mpc(x) for x in mu]
    assert abs(sum(m)) < 1e-12
    return m


def sin_mu_ref(mu):
    m1, m2, m3 = _triple(mu)
    out = mp.mpc(1)
    for d in (m1 - m2, m1 - m3, m2 - m3):
        out *= mp.sin(mp.pi * d / 2)
    return out


def cos_mu_ref(mu):
    m1, m2, m3 = _triple(mu)
    out = mp.mpc(1)
    for d in (m1 - m2, m1 - m3, m2 - m3):
        out *= mp.cos(mp.pi * d / 2)
    return out


def spec_ref(mu):
    m1, m2, m3 = _triple(mu)
    out = mp.mpc(-1)
    for d in (m1 - m2, m1 - m3, m2 - m3):
        out *= d * mp.tan(mp.pi * d / 2)
    return out


def _auto_dps(z1, z2):
    return 30 + int(3.0 * (mp.sqrt(abs(z1)) + mp.sqrt(abs(z2))))


def jwl_ref(y, mu, dps=None):
    """Two-variable kernel series from its closed-form coefficients.

    |z1|^(1-mu3) |z2|^(1+mu1) sum a(n1,n2) z1^n1 z2^n2, z_i = 4 pi^2 y_i,
    a(n1,n2) = Gamma(n1+n2+al+1) / [n1! Gamma(n1+al+1) Gamma(n1+be+1)
               n2! Gamma(n2+ga+1) Gamma(n2+al+1)],
    al = mu1-mu3, be = mu2-mu3, ga = mu1-mu2.
    """
    z1 = FOUR_PI2 * float(y[0])
    z2 = FOUR_PI2 * float(y[1])
    if dps is None:
        dps = _auto_dps(z1, z2)
    with mp.workdps(dps):
        m1, m2, m3 = _triple(mu)
        al, be, ga = m1 - m3, m2 - m3, m1 - m2
        zz1, zz2 = mp.mpf(z1), mp.mpf(z2)
        nmax = 40 + int(4.0 * (mp.sqrt(abs(zz1)) + mp.sqrt(abs(zz2))))
        # axis factors 1/[n! Gamma(n+x+1) ...], built once per axis
        ax1 = [1 / (mp.factorial(n) * mp.gamma(n + al + 1)
                    * mp.gamma(n + be + 1)) for n in range(nmax)]
        ax2 = [1 / (mp.factorial(n) * mp.gamma(n + ga + 1)
                    * mp.gamma(n + al + 1)) for n in range(nmax)]
        total = mp.mpc(0)
        cut = mp.mpf(10) ** (-dps - 5)
        p1 = mp.mpc(1)
        for n1 in range(nmax):
            row = mp.mpc(0)
            p2 = mp.mpc(1)
            for n2 in range(nmax):
                term = mp.gamma(n1 + n2 + al + 1) * ax1[n1] * ax2[n2] \
                    * p1 * p2
                row += term
                p2 *= zz2
                if n2 > 4 and abs(term) < cut * max(1, abs(total + row)):
                    break
            total += row
            p1 *= zz1
            if n1 > 4 and abs(row) < cut * max(1, abs(total)):
                break
        pref = mp.exp((1 - m3) * mp.log(abs(zz1))
                      + (1 + m1) * mp.log(abs(zz2)))
        return pref * total


def jw4_ref(y1, mu, y2=1.0, dps=None):
    """One-variable kernel series, |8 pi^3 y1|^(1-mu3) times
    sum (8 pi^3 i y1 y2)^n / (n! Gamma(n+1+mu1-mu3) Gamma(n+1+mu2-mu3))."""
    z = EIGHT_PI3 * 1j * float(y1) * float(y2)
    if dps is None:
        dps = 30 + int(4.0 * mp.sqrt(abs(z)))
    with mp.workdps(dps):
        m1, m2, m3 = _triple(mu)
        a13, a23 = m1 - m3, m2 - m3
        zz = mp.mpc(z)
        total = mp.mpc(0)
        cut = mp.mpf(10) ** (-dps - 5)
        p = mp.mpc(1)
        n = 0
        while True:
            term = p / (mp.factorial(n) * mp.gamma(n + 1 + a13)
                        * mp.gamma(n + 1 + a23))
            total += term
            if n > 6 and abs(term) < cut * max(1, abs(total)):
                break
            p *= zz
            n += 1
            if n > 5000:
                raise RuntimeError("jw4_ref did not converge")
        pref = mp.exp((1 - m3) * mp.log(abs(EIGHT_PI3 * mp.mpf(y1))))
        return pref * total


_PERMS3 = list(itertools.permutations((0, 1, 2)))


def kwl_sym_ref(y, mu, dps=None):
    """-(pi^3/32) sum over all six permutations of J(y, mu^w)/sin_mu."""
    z1, z2 = FOUR_PI2 * float(y[0]), FOUR_PI2 * float(y[1])
    if dps is None:
        dps = _auto_dps(z1, z2) + 15
    with mp.workdps(dps):
        m = _triple(mu)
        tot = mp.mpc(0)
        for p in _PERMS3:
            mw = (m[p[0]], m[p[1]], m[p[2]])
            tot += jwl_ref(y, mw, dps=dps) / sin_mu_ref(mw)
        return -(mp.pi ** 3 / 32) * tot


_SIGN_SWAP = {"+-": (0, 2, 1), "-+": (1, 0, 2), "--": (2, 1, 0)}


def kwl_signed_ref(y, mu, sign_pair, dps=None):
    """Two-term antisymmetrized kernel J(mu) - J(swapped mu)."""
    z1, z2 = FOUR_PI2 * float(y[0]), FOUR_PI2 * float(y[1])
    if dps is None:
        dps = _auto_dps(z1, z2) + 10
    with mp.workdps(dps):
        m = _triple(mu)
        p = _SIGN_SWAP[sign_pair]
        mw = (m[p[0]], m[p[1]], m[p[2]])
        return jwl_ref(y, mu, dps=dps) - jwl_ref(y, mw, dps=dps)


def kw4_sym_ref(y1, mu, dps=None):
    """(1/512) sum over the cyclic subgroup of J_w4 / (sin sin)."""
    if dps is None:
        dps = 35 + int(4.0 * mp.sqrt(EIGHT_PI3 * abs(float(y1))))
    with mp.workdps(dps):
        m = _triple(mu)
        tot = mp.mpc(0)
        for p in ((0, 1, 2), (2, 0, 1), (1, 2, 0)):
            mw = (m[p[0]], m[p[1]], m[p[2]])
            s1 = mp.sin(mp.pi * (mw[0] - mw[2]) / 2)
            s2 = mp.sin(mp.pi * (mw[1] - mw[2]) / 2)
            tot += jw4_ref(y1, mw, dps=dps) / (s1 * s2)
        return tot / 512


def whittaker_ref(y, mu, dps=25, height=40.0, line=2.0):
    """Completed Whittaker function by nested mpmath quadrature.

    (1/4 pi^2) (2 pi i)^-2 double integral over vertical lines Re(s)=line
    of prod_j Gamma((s1-mu_j)/2) Gamma((s2+mu_j)/2) / Gamma((s1+s2)/2)
    times (pi y1)^(1-s1) (pi y2)^(1-s2).  The integrand keeps a net
    exp(-pi|t|/2) decay per axis, so truncating at +-height loses
    ~exp(-pi*height/2).  Slow; used to freeze a handful of references.
    """
    with mp.workdps(dps):
        m = _triple(mu)
        ly1 = mp.log(mp.pi * mp.mpf(y[0]))
        ly2 = mp.log(mp.pi * mp.mpf(y[1]))

        def inner(t1):
            s1 = line + 1j * t1
            g1 = mp.mpc(1)
            for mj in m:
                g1 *= mp.gamma((s1 - mj) / 2)
            a1 = g1 * mp.exp((1 - s1) * ly1)

            def f(t2):
                s2 = line + 1j * t2
                g2 = mp.mpc(1)
                for mj in m:
                    g2 *= mp.gamma((s2 + mj) / 2)
                return a1 * g2 / mp.gamma((s1 + s2) / 2) \
                    * mp.exp((1 - s2) * ly2)

            return mp.quad(f, [-height, 0, height])

        outer = mp.quad(inner, [-height, 0, height])
        # each ds = i dt, and the (2 pi i)^-2 of the inversion
        return outer * (1j / (2j * mp.pi)) ** 2 / (4 * mp.pi ** 2)


def kwl_pp_ref(y, mu, dps=25):
    """Positive-quadrant kernel through the completed-Whittaker identity."""
    with mp.workdps(dps):
        w = whittaker_ref(
            (2 * mp.sqrt(mp.mpf(y[0])), 2 * mp.sqrt(mp.mpf(y[1]))),
            tuple(2 * mp.mpc(c) for c in mu), dps=dps)
        return mp.pi ** 4 * cos_mu_ref(mu) \
            * mp.sqrt(mp.mpf(y[0]) * mp.mpf(y[1])) * w


def kbessel_ref(order, x, dps=30):
    with mp.workdps(dps):
        return mp.besselk(mp.mpc(order), mp.mpf(x))


# ----------------------------------------------------------------------
# spectral-line integral oracle (identity-element transform)


def _spec_line(t1, t2):
    """spec(i t1, i t2, -i(t1+t2)) as a real value on the unitary line."""
    out = 1.0
    for a in (t1 - t2, 2 * t1 + t2, t1 + 2 * t2):
        out *= a * np.tanh(0.5 * np.pi * a)
    return out


def _gauss_sym(t1, t2, centers, width):
    """Permutation-symmetrized Gaussian bump on the line."""
    t3 = -t1 - t2
    tot = 0.0
    for a1, a2, a3 in centers:
        for p in _PERMS3:
            t = (t1, t2, t3)
            tot += np.exp(-((t[p[0]] - a1) ** 2 + (t[p[1]] - a2) ** 2
                            + (t[p[2]] - a3) ** 2) / width ** 2)
    return tot


def htrivial_ref(centers, width, radius):
    """Identity-element transform by scipy adaptive 2-D quadrature.

    (1/192 pi^5) times the line integral with measure -dt1 dt2; centers
    are the imaginary parts (a1, a2, a3) of each bump center.
    """
    val, err = integrate.dblquad(
        lambda t2, t1: _gauss_sym(t1, t2, centers, width)
        * _spec_line(t1, t2),
        -radius, radius, -radius, radius,
        epsabs=1e-13, epsrel=1e-11)
    c = -1.0 / (192 * np.pi ** 5)
    return c * val, abs(c) * err


# ----------------------------------------------------------------------
# geometric-sum gate scans (brute force over moduli)


def w4_gate_pairs(m, n, cmax):
    """(c1, c2) with m2 c1 = n1 c2^2, both within cmax, ascending c2."""
    out = []
    for c2 in range(1, cmax + 1):
        num = n[0] * c2 * c2
        if num % m[1] == 0 and num // m[1] <= cmax:
            out.append((num // m[1], c2))
    return out


def w5_gate_pairs(m, n, cmax):
    """(c1, c2) with m1 c2 = n2 c1^2, both within cmax, ascending c1."""
    out = []
    for c1 in range(1, cmax + 1):
        num = n[1] * c1 * c1
        if num % m[0] == 0 and num // m[0] <= cmax:
            out.append((c1, num // m[0]))
    return out
