"""SL(3,Z) Kloosterman exponential sums and their Weyl-element gates.

Two finite exponential sums over constrained residue classes carry the
arithmetic content of the geometric side: a two-index sum over (C1, C2)
with unit conditions, and a four-index sum over (B1, C1, B2, C2) tied
together by a congruence modulo D1*D2.  The sums attached to the Weyl
elements w4, w5 and the long element are these, composed with argument
shuffles and divisibility gates.

Every summand is e(N / M) for an integer N determined by modular
inverses, so the production implementations work in exact integer
arithmetic: terms are tallied into residue classes mod M and the class
counts are contracted against a single table of M roots of unity.  The
result carries only O(M) rounding, is independent of enumeration order,
and is deterministic.  Naive oracles that enumerate the full Cartesian
residue grid, apply the gcd and congruence filters literally, and
accumulate floating-point phases term by term are shipped alongside;
they share nothing with the production path but the definitions.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from math import gcd

import numpy as np

from .errors import DivisibilityError, UnsupportedWeyl
from .spectral import WeylElement

__all__ = [
    "Modulus", "CharIndex",
    "s_tilde", "s_big", "s_weyl",
    "s_tilde_naive", "s_big_naive",
]

#: block size bound (pair products per chunk) for the four-index sum
_BLOCK = 1 << 22


@dataclass(frozen=True)
class Modulus:
    """Positive moduli (c1, c2) of a Bruhat cell."""

    c1: int
    c2: int

    def __post_init__(self):
        for v in (self.c1, self.c2):
            if not isinstance(v, (int, np.integer)) or v < 1:
                raise ValueError("moduli must be positive integers")


@dataclass(frozen=True)
class CharIndex:
    """Integer character index pair (m1, m2)."""

    m1: int
    m2: int

    def __post_init__(self):
        for v in (self.m1, self.m2):
            if not isinstance(v, (int, np.integer)):
                raise ValueError("character indices must be integers")


def _pair(x, cls):
    if isinstance(x, cls):
        return x
    a, b = x
    return cls(int(a), int(b))


def _roots_of_unity(modulus: int) -> np.ndarray:
    return np.exp(2j * np.pi * np.arange(modulus) / modulus)


def _check_moduli(d1: int, d2: int):
    for v in (d1, d2):
        if not isinstance(v, (int, np.integer)) or v < 1:
            raise ValueError("moduli must be positive integers")


def _inv_table(modulus: int) -> np.ndarray:
    """inv[c] = c^-1 mod modulus for units, -1 elsewhere; inv[0]=0 if modulus=1."""
    inv = np.full(modulus, -1, dtype=np.int64)
    if modulus == 1:
        inv[0] = 0
        return inv
    for c in range(modulus):
        if gcd(c, modulus) == 1:
            inv[c] = pow(c, -1, modulus)
    return inv


def _solve_unit_combo(b: int, c: int, d: int) -> tuple[int, int]:
    """One solution (y, z) of y*b + z*c = 1 mod d, given gcd(b, c, d) = 1."""
    g = gcd(b, c)
    if g == 0:        # b = c = 0 forces d = 1
        return 0, 0
    # u*b + v*c = g by extended Euclid, then scale by g^-1 mod d
    if b == 0:
        u, v = 0, 1
    elif c == 0:
        u, v = 1, 0
    else:
        r0, r1, u0, u1 = b, c, 1, 0
        while r1:
            q = r0 // r1
            r0, r1 = r1, r0 - q * r1
            u0, u1 = u1, u0 - q * u1
        u = u0
        v = (g - u * b) // c
    w = pow(g % d, -1, d) if d > 1 else 0
    return (u * w) % d, (v * w) % d


def s_tilde(m1: int, n1: int, n2: int, d1: int, d2: int) -> complex:
    """Two-index exponential sum; requires d1 | d2.

    Sum over C1 mod d1 with (C1, d1) = 1 and C2 mod d2 with
    (C2, d2/d1) = 1 of e(n1 C1inv C2 / d1 + n2 C2inv / (d2/d1)
    + m1 C1 / d1), inverses taken to the respective moduli.
    """
    _check_moduli(d1, d2)
    if d2 % d1:
        raise DivisibilityError(f"d1={d1} must divide d2={d2}")
    d1, d2 = int(d1), int(d2)
    q = d2 // d1
    inv1 = _inv_table(d1)
    invq = _inv_table(q)
    c1 = np.nonzero(inv1 >= 0)[0].astype(np.int64)
    if d1 == 1:
        c1 = np.array([0], dtype=np.int64)
    c2 = np.arange(d2, dtype=np.int64)
    c2 = c2[invq[c2 % q] >= 0]
    c1bar = inv1[c1] if d1 > 1 else np.zeros_like(c1)
    c2bar = invq[c2 % q]
    # common denominator d2 = d1*q: numerators mod d2
    res = ((n1 * c1bar)[:, None] * c2[None, :] + (m1 * c1)[:, None]) * q \
        + (n2 * c2bar * d1)[None, :]
    counts = np.bincount(res.ravel() % d2, minlength=d2)
    return complex(counts @ _roots_of_unity(d2))


def s_tilde_naive(m1: int, n1: int, n2: int, d1: int, d2: int) -> complex:
    """Literal double loop over the definition of s_tilde; oracle."""
    _check_moduli(d1, d2)
    if d2 % d1:
        raise DivisibilityError(f"d1={d1} must divide d2={d2}")
    d1, d2 = int(d1), int(d2)
    q = d2 // d1
    total = 0.0 + 0.0j
    for c1 in range(d1):
        if gcd(c1, d1) != 1 and d1 > 1:
            continue
        c1bar = pow(c1, -1, d1) if d1 > 1 else 0
        for c2 in range(d2):
            if q > 1 and gcd(c2, q) != 1:
                continue
            c2bar = pow(c2 % q, -1, q) if q > 1 else 0
            # reduce numerators mod denominators (exact) so the float
            # phase stays O(1); e() is 1-periodic
            phase = ((n1 * c1bar * c2 + m1 * c1) % d1) / d1 \
                + (n2 * c2bar % q) / q
            total += cmath.exp(2j * cmath.pi * phase)
    return total


def _admissible_pairs(d: int, d_other: int, m: int, n: int, other_first: int):
    """Enumerate (B, C) mod d with gcd(B, C, d) = 1 and per-pair data.

    Returns (B, C, fixed, zn) int64 arrays where fixed is the
    pair-local part of the phase numerator over the common denominator
    d * d_other and zn the coefficient multiplying the partner's B.
    """
    bs, cs, fixed, zn = [], [], [], []
    for b in range(d):
        for c in range(d):
            if gcd(gcd(b, c), d) != 1:
                continue
            y, z = _solve_unit_combo(b, c, d)
            bs.append(b)
            cs.append(c)
            fixed.append(d_other * (m * b + n * y * d_other))
            zn.append(d_other * n * z)
    return (np.array(bs, dtype=np.int64), np.array(cs, dtype=np.int64),
            np.array(fixed, dtype=np.int64), np.array(zn, dtype=np.int64))


def s_big(m1: int, m2: int, n1: int, n2: int, d1: int, d2: int) -> complex:
    """Four-index exponential sum over coupled residues mod d1 and d2.

    Sum over B1, C1 mod d1 and B2, C2 mod d2 subject to
    d1 C2 + B1 B2 + d2 C1 = 0 mod d1 d2 and gcd(B_i, C_i, d_i) = 1, of
    e((m1 B1 + n1 (Y1 d2 - Z1 B2)) / d1 + (m2 B2 + n2 (Y2 d1 - Z2 B1)) / d2),
    where Y_i B_i + Z_i C_i = 1 mod d_i.  The summand does not depend on
    which congruence solution (Y_i, Z_i) is picked, since alternatives
    shift the exponent by integers.
    """
    _check_moduli(d1, d2)
    d1, d2 = int(d1), int(d2)
    mod = d1 * d2
    b1, c1, f1, zn1 = _admissible_pairs(d1, d2, m1, n1, d2)
    b2, c2, f2, zn2 = _admissible_pairs(d2, d1, m2, n2, d1)
    counts = np.zeros(mod, dtype=np.int64)
    step = max(1, _BLOCK // max(1, len(b1)))
    for lo in range(0, len(b2), step):
        sl = slice(lo, lo + step)
        ok = (d1 * c2[sl][None, :] + b1[:, None] * b2[sl][None, :]
              + d2 * c1[:, None]) % mod == 0
        num = (f1[:, None] + f2[sl][None, :]
               - zn1[:, None] * b2[sl][None, :]
               - b1[:, None] * zn2[sl][None, :]) % mod
        counts += np.bincount(num[ok], minlength=mod)
    return complex(counts @ _roots_of_unity(mod))


def s_big_naive(m1: int, m2: int, n1: int, n2: int,
                d1: int, d2: int) -> complex:
    """Cartesian enumeration of s_big with literal filters; oracle.

    Grids all (B1, C1, B2, C2), keeps the tuples passing the gcd and
    congruence conditions, solves the inverse congruences per surviving
    tuple and accumulates floating-point phases directly.
    """
    _check_moduli(d1, d2)
    d1, d2 = int(d1), int(d2)
    b1g, c1g, b2g, c2g = [g.ravel() for g in np.meshgrid(
        np.arange(d1), np.arange(d1), np.arange(d2), np.arange(d2),
        indexing="ij")]
    keep = ((np.gcd(np.gcd(b1g, c1g), d1) == 1)
            & (np.gcd(np.gcd(b2g, c2g), d2) == 1)
            & ((d1 * c2g + b1g * b2g + d2 * c1g) % (d1 * d2) == 0))
    total = 0.0 + 0.0j
    for b1, c1, b2, c2 in zip(b1g[keep], c1g[keep], b2g[keep], c2g[keep]):
        b1, c1, b2, c2 = int(b1), int(c1), int(b2), int(c2)
        y1, z1 = _solve_unit_combo(b1, c1, d1)
        y2, z2 = _solve_unit_combo(b2, c2, d2)
        # reduce numerators mod denominators (exact) so the float phase
        # stays O(1); e() is 1-periodic
        phase = ((m1 * b1 + n1 * (y1 * d2 - z1 * b2)) % d1) / d1 \
            + ((m2 * b2 + n2 * (y2 * d1 - z2 * b1)) % d2) / d2
        total += cmath.exp(2j * cmath.pi * phase)
    return total


def _resolve_weyl(w) -> str:
    label = w.label if isinstance(w, WeylElement) else str(w)
    if label == "w6":     # older labeling of the long element's sum
        label = "wl"
    if label not in ("w4", "w5", "wl"):
        raise UnsupportedWeyl(
            f"no Kloosterman sum attached to {label!r}: only w4, w5 and "
            "the long element enter the non-degenerate formula"
        )
    return label


def s_weyl(w, m, n, c) -> complex:
    """Kloosterman sum attached to a Weyl element, with divisibility gates.

    For the long element this is the four-index sum with shuffled
    arguments; for w5 and w4 it collapses to the two-index sum but only
    on moduli/character tuples passing the compatibility gates, and is
    zero otherwise.  Accepts WeylElement or label among w4, w5, wl (w6
    is accepted as an alias of wl), plain pairs or the CharIndex and
    Modulus wrappers.
    """
    label = _resolve_weyl(w)
    mm = _pair(m, CharIndex)
    nn = _pair(n, CharIndex)
    cc = _pair(c, Modulus)
    if label == "wl":
        return s_big(nn.m2, nn.m1, mm.m1, mm.m2, cc.c1, cc.c2)
    if label == "w5":
        if nn.m1 * cc.c2 == mm.m2 * cc.c1 ** 2 and cc.c2 % cc.c1 == 0:
            return s_tilde(nn.m1, mm.m1, mm.m2, cc.c1, cc.c2)
        return 0.0 + 0.0j
    if nn.m2 * cc.c1 == mm.m1 * cc.c2 ** 2 and cc.c1 % cc.c2 == 0:
        return s_tilde(-nn.m2, mm.m2, mm.m1, cc.c2, cc.c1)
    return 0.0 + 0.0j
