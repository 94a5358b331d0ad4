"""Coordinates on the 3x3 group: decompositions, power functions, characters.

An upper-unipotent matrix is parametrized as

    x = [[1, x2, x3],
         [0,  1, x1],
         [0,  0,  1]]

(note x1 sits at position (2,3)), and a diagonal y-matrix as
diag(y1*y2, y1, 1).  Two decompositions are provided: the orthogonal
Iwasawa form g = r*x*y*k with k orthogonal, and the closed-form
unipotent-diagonal-unipotent factorization g = r*u*y*v valid away from
the degenerate subspace where a bottom-row minor vanishes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import rq as _rq

from .errors import SingularError
from .spectral import RHO, MuLike, WeylElement, as_mu

__all__ = [
    "UpperX", "DiagY", "iwasawa", "uyv_decompose", "xy_star_closed",
    "power_fn", "power_fn_normalized", "weyl_act_y", "psi_char",
]


@dataclass(frozen=True)
class UpperX:
    """Superdiagonal coordinates of an upper-unipotent matrix.

    x1 is the (2,3) entry, x2 the (1,2) entry, x3 the (1,3) entry.
    """

    x1: float
    x2: float
    x3: float = 0.0

    def matrix(self) -> np.ndarray:
        return np.array([
            [1.0, self.x2, self.x3],
            [0.0, 1.0, self.x1],
            [0.0, 0.0, 1.0],
        ])

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.x1, self.x2, self.x3)


@dataclass(frozen=True)
class DiagY:
    """The diagonal matrix diag(y1*y2, y1, 1)."""

    y1: float
    y2: float

    def __post_init__(self):
        if self.y1 * self.y2 == 0.0:
            raise ValueError("y1*y2 must be nonzero")

    def matrix(self) -> np.ndarray:
        return np.diag([self.y1 * self.y2, self.y1, 1.0])

    def as_tuple(self) -> tuple[float, float]:
        return (self.y1, self.y2)


def iwasawa(g) -> tuple[float, UpperX, DiagY, np.ndarray]:
    """Orthogonal decomposition g = r * x * y * k.

    r > 0 scalar, x upper-unipotent, y = diag(y1 y2, y1, 1) with
    y1, y2 > 0, and k orthogonal (k may have determinant -1 when g
    does).  Raises SingularError for non-invertible g.
    """
    g = np.asarray(g, dtype=float)
    if g.shape != (3, 3):
        raise ValueError(f"expected a 3x3 matrix, got shape {g.shape}")
    if abs(np.linalg.det(g)) < 1e-300:
        raise SingularError("matrix is not invertible")
    t, k = _rq(g)
    # flip signs so the triangular factor has positive diagonal
    sign = np.sign(np.diag(t))
    sign[sign == 0.0] = 1.0
    t = t * sign[np.newaxis, :]
    k = sign[:, np.newaxis] * k
    # t = r * x * y reads off as t = r * [[y1y2, x2 y1, x3], [0, y1, x1], [0, 0, 1]]
    r = t[2, 2]
    y = DiagY(t[1, 1] / t[2, 2], t[0, 0] / t[1, 1])
    x = UpperX(t[1, 2] / t[2, 2], t[0, 1] / t[1, 1], t[0, 2] / t[2, 2])
    return float(r), x, y, k


def uyv_decompose(g) -> tuple[float, np.ndarray, DiagY, np.ndarray]:
    """Closed-form factorization g = r * u * y * v.

    u is upper-unipotent, y diagonal as DiagY (entries may be negative),
    v lower-unipotent; r is a nonzero scalar.  Writing the bottom row of
    g as (a, b, c) and the middle row as (d, e, f), the factorization
    requires c != 0 and ce - bf != 0; otherwise SingularError.
    """
    g = np.asarray(g, dtype=float)
    if g.shape != (3, 3):
        raise ValueError(f"expected a 3x3 matrix, got shape {g.shape}")
    a, b, c = g[2]
    d, e, f = g[1]
    gg, h, i = g[0]
    m = c * e - b * f
    if c == 0.0 or m == 0.0:
        raise SingularError(
            "bottom-row minors vanish (c or ce-bf is zero); no "
            "unipotent-diagonal-unipotent form"
        )
    det = np.linalg.det(g)
    if abs(det) < 1e-300:
        raise SingularError("matrix is not invertible")
    u = np.array([
        [1.0, (c * h - b * i) / m, i / c],
        [0.0, 1.0, f / c],
        [0.0, 0.0, 1.0],
    ])
    v = np.array([
        [1.0, 0.0, 0.0],
        [(c * d - a * f) / m, 1.0, 0.0],
        [a / c, b / c, 1.0],
    ])
    r = c
    y = DiagY(m / (c * c), c * det / (m * m))
    return float(r), u, y, v


def xy_star_closed(x: UpperX) -> tuple[float, float, float, float]:
    """Twisted coordinates (x1*, x2*, y1*, y2*) of the long-element flip.

    These are the closed forms of the unipotent and diagonal parts of the
    Iwasawa decomposition of wl * x; the denominators are bounded below
    by 1, so no precondition is needed.
    """
    x1, x2, x3 = x.as_tuple()
    d1 = 1.0 + x2 * x2 + x3 * x3
    d2 = 1.0 + x1 * x1 + (x1 * x2 - x3) ** 2
    xs1 = -(x2 + x1 * x3) / d1
    xs2 = -(x1 + x2 * (x1 * x2 - x3)) / d2
    ys1 = np.sqrt(d2) / d1
    ys2 = np.sqrt(d1) / d2
    return (float(xs1), float(xs2), float(ys1), float(ys2))


def power_fn(mu: MuLike, y: DiagY) -> complex:
    """p_mu(y) = prod |a_i|^(mu_i) over the diagonal entries (y1 y2, y1, 1).

    Taking absolute values makes the function well-defined over the sign
    lifts of y.
    """
    m1, m2, _ = as_mu(mu).as_tuple()
    a1 = abs(y.y1 * y.y2)
    a2 = abs(y.y1)
    return complex(np.exp(m1 * np.log(a1) + m2 * np.log(a2)))


def power_fn_normalized(mu: MuLike, y: DiagY) -> complex:
    """p_(rho+mu)(y) = |y1|^(1-mu3) |y2|^(1+mu1)."""
    m = as_mu(mu)
    shifted = (m.mu1 + RHO[0], m.mu2 + RHO[1])
    return power_fn(shifted, y)


def weyl_act_y(y: DiagY, w: WeylElement) -> DiagY:
    """y^w: conjugate the diagonal matrix diag(y1 y2, y1, 1) by w and
    renormalize so the last entry is 1 again.

    Conjugation moves entry j to slot tau(j), the inverse of the
    permutation acting on mu; the two directions together give the
    compatibility p_(mu^w)(y) = p_mu(y^w).  Renormalization works up to
    sign and positive scalars, the equivalence under which the y-action
    is defined.
    """
    d = (y.y1 * y.y2, y.y1, 1.0)
    p = [0.0, 0.0, 0.0]
    for j in range(3):
        p[w.tau[j]] = d[j]
    return DiagY(p[1] / p[2], p[0] / p[1])


def psi_char(m: tuple[int, int], x: UpperX) -> complex:
    """The character psi_m(x) = e(m1 x1 + m2 x2) of the unipotent group."""
    return complex(np.exp(2j * np.pi * (m[0] * x.x1 + m[1] * x.x2)))
