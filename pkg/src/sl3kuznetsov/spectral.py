"""Spectral-parameter arithmetic.

The mu-space {(mu1, mu2, mu3) in C^3 : mu1+mu2+mu3 = 0}, the Weyl group of
signed permutation matrices acting on it, the spectral (Plancherel-type)
measure, the sin/cos trigonometric products, and the gamma-product
normalizers that appear in front of every kernel.

Only mu1 and mu2 are stored; mu3 is derived, so the sum constraint holds
exactly and cannot drift through arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence, Union

import numpy as np

from . import config
from .errors import DegenerateMu, PoleError

__all__ = [
    "SpectralParams",
    "WeylElement",
    "WEYL_I", "WEYL_W2", "WEYL_W3", "WEYL_W4", "WEYL_W5", "WEYL_WL",
    "WEYL_GROUP", "WEYL_W3_SUBGROUP",
    "weyl_act_mu", "spec_measure", "sin_mu", "cos_mu", "spec_over_sin_mu",
    "lambda_norm", "c1_asymp", "eigenvalues", "as_mu",
]

RHO = (1.0, 0.0, -1.0)


@dataclass(frozen=True)
class SpectralParams:
    """A spectral parameter mu = (mu1, mu2, mu3) with zero sum.

    mu3 is always derived as -(mu1+mu2).  A redundant third component may
    be passed for validation; it must agree with the derived value to
    1e-14 absolute.
    """

    mu1: complex
    mu2: complex

    def __init__(self, mu1: complex, mu2: complex, mu3: complex | None = None):
        object.__setattr__(self, "mu1", complex(mu1))
        object.__setattr__(self, "mu2", complex(mu2))
        if mu3 is not None and abs(complex(mu3) + self.mu1 + self.mu2) > 1e-14:
            raise ValueError(
                f"mu3={mu3} inconsistent with -(mu1+mu2)={-(self.mu1 + self.mu2)}"
            )

    @property
    def mu3(self) -> complex:
        return -(self.mu1 + self.mu2)

    def as_tuple(self) -> tuple[complex, complex, complex]:
        return (self.mu1, self.mu2, self.mu3)

    def differences(self) -> tuple[complex, complex, complex]:
        """(mu1-mu2, mu1-mu3, mu2-mu3)."""
        m1, m2, m3 = self.as_tuple()
        return (m1 - m2, m1 - m3, m2 - m3)

    def min_gap(self) -> float:
        return min(abs(d) for d in self.differences())

    def require_distinct(self, tol: float = config.DEGENERACY_TOL) -> None:
        gap = self.min_gap()
        if gap < tol:
            raise DegenerateMu(
                f"mu components coincide: min pairwise gap {gap:.3e} < {tol:.1e}"
            )

    def negated(self) -> "SpectralParams":
        return SpectralParams(-self.mu1, -self.mu2)

    def conjugated(self) -> "SpectralParams":
        return SpectralParams(np.conj(self.mu1), np.conj(self.mu2))

    def max_abs_im(self) -> float:
        return max(abs(m.imag) for m in self.as_tuple())

    def max_abs_re(self) -> float:
        return max(abs(m.real) for m in self.as_tuple())

    def __iter__(self):
        return iter(self.as_tuple())


MuLike = Union[SpectralParams, Sequence[complex]]


def as_mu(mu: MuLike) -> SpectralParams:
    """Coerce a SpectralParams or a 2/3-sequence into SpectralParams."""
    if isinstance(mu, SpectralParams):
        return mu
    vals = tuple(mu)
    if len(vals) == 2:
        return SpectralParams(vals[0], vals[1])
    if len(vals) == 3:
        return SpectralParams(vals[0], vals[1], vals[2])
    raise ValueError(f"cannot interpret {mu!r} as a spectral parameter")


class WeylElement:
    """One of the six signed permutation matrices, with its mu-permutation.

    The matrix acts on diagonal matrices by conjugation, permuting entries:
    if w e_j = +-e_{tau(j)} then conjugation sends diag entry j to slot
    tau(j), and the induced action on mu is (mu^w)_j = mu_{tau(j)}.
    """

    __slots__ = ("label", "_mat", "_tau")

    def __init__(self, label: str, rows: Iterable[Iterable[int]]):
        self.label = label
        mat = np.array([list(r) for r in rows], dtype=int)
        if mat.shape != (3, 3) or np.any(np.sum(mat != 0, axis=0) != 1):
            raise ValueError("not a signed permutation matrix")
        self._mat = mat
        self._mat.setflags(write=False)
        # tau(j) = row index of the nonzero entry in column j
        self._tau = tuple(int(np.nonzero(mat[:, j])[0][0]) for j in range(3))

    @property
    def matrix(self) -> np.ndarray:
        return self._mat

    @property
    def tau(self) -> tuple[int, int, int]:
        return self._tau

    def permute_mu(self, triple: Sequence[complex]) -> tuple[complex, ...]:
        return tuple(triple[self._tau[j]] for j in range(3))

    def __repr__(self):
        return f"WeylElement({self.label})"

    def __eq__(self, other):
        return isinstance(other, WeylElement) and self.label == other.label

    def __hash__(self):
        return hash(self.label)


WEYL_I = WeylElement("I", [[1, 0, 0], [0, 1, 0], [0, 0, 1]])
WEYL_W2 = WeylElement("w2", [[0, 1, 0], [-1, 0, 0], [0, 0, 1]])
WEYL_W3 = WeylElement("w3", [[1, 0, 0], [0, 0, -1], [0, 1, 0]])
WEYL_W4 = WeylElement("w4", [[0, 1, 0], [0, 0, 1], [1, 0, 0]])
WEYL_W5 = WeylElement("w5", [[0, 0, 1], [1, 0, 0], [0, 1, 0]])
WEYL_WL = WeylElement("wl", [[0, 0, 1], [0, -1, 0], [1, 0, 0]])

WEYL_GROUP = (WEYL_I, WEYL_W2, WEYL_W3, WEYL_W4, WEYL_W5, WEYL_WL)
#: the order-3 cyclic subgroup {I, w4, w5} used by the w4 kernel symmetrization
WEYL_W3_SUBGROUP = (WEYL_I, WEYL_W4, WEYL_W5)

_BY_LABEL = {w.label: w for w in WEYL_GROUP}


def weyl_by_label(label: str) -> WeylElement:
    try:
        return _BY_LABEL[label]
    except KeyError:
        raise KeyError(f"unknown Weyl element {label!r}; use one of {list(_BY_LABEL)}")


def compose(w1: WeylElement, w2: WeylElement) -> WeylElement:
    """The element whose matrix is w1 @ w2 up to a diagonal sign matrix.

    The six matrices are coset representatives; products agree with a
    listed element after stripping signs, and the induced permutations
    compose exactly.
    """
    prod = w1.matrix @ w2.matrix
    pattern = np.abs(prod)
    for w in WEYL_GROUP:
        if np.array_equal(np.abs(w.matrix), pattern):
            return w
    raise RuntimeError("Weyl composition left the group; matrices corrupted")


def weyl_act_mu(mu: MuLike, w: WeylElement) -> SpectralParams:
    """mu^w, the coordinate permutation induced by conjugation."""
    t = as_mu(mu).as_tuple()
    p = w.permute_mu(t)
    return SpectralParams(p[0], p[1], p[2])


def _check_tangent_poles(diffs, pole_tol: float) -> None:
    for d in diffs:
        re = float(np.real(d))
        nearest_odd = 2.0 * np.round((re - 1.0) / 2.0) + 1.0
        if abs(d - nearest_odd) < pole_tol:
            raise PoleError(
                f"mu_j - mu_k = {d} is within {pole_tol:.1e} of the odd integer "
                f"{nearest_odd:g} (tangent pole)"
            )


def spec_measure(mu: MuLike, pole_tol: float = config.POLE_TOL) -> complex:
    """spec(mu) = -prod_{j<k} (mu_j - mu_k) tan(pi (mu_j - mu_k)/2).

    The Plancherel-type density weighting every mu-line integral.
    Symmetric under all six Weyl permutations.
    """
    diffs = as_mu(mu).differences()
    _check_tangent_poles(diffs, pole_tol)
    out = -1.0 + 0.0j
    for d in diffs:
        out *= d * np.tan(0.5 * np.pi * d)
    return complex(out)


def sin_mu(mu: MuLike) -> complex:
    """prod_{j<k} sin(pi (mu_j - mu_k)/2)."""
    out = 1.0 + 0.0j
    for d in as_mu(mu).differences():
        out *= np.sin(0.5 * np.pi * d)
    return complex(out)


def cos_mu(mu: MuLike) -> complex:
    """prod_{j<k} cos(pi (mu_j - mu_k)/2)."""
    out = 1.0 + 0.0j
    for d in as_mu(mu).differences():
        out *= np.cos(0.5 * np.pi * d)
    return complex(out)


def spec_over_sin_mu(mu: MuLike, pole_tol: float = config.POLE_TOL) -> complex:
    """spec(mu)/sin_mu(mu) as the fused form -prod (mu_j-mu_k)/cos(...).

    Writing tan = sin/cos factorwise cancels the sines, so the quotient is
    finite at coinciding mu components where spec and sin_mu separately
    vanish.  Poles only where some cos factor vanishes (odd-integer
    differences).
    """
    diffs = as_mu(mu).differences()
    _check_tangent_poles(diffs, pole_tol)
    out = -1.0 + 0.0j
    for d in diffs:
        out *= d / np.cos(0.5 * np.pi * d)
    return complex(out)


def _gamma(z: complex) -> complex:
    # deferred import; gammafns does not import spectral
    from .gammafns import gamma_fn

    return gamma_fn(z)


def lambda_norm(mu: MuLike, pole_tol: float = config.POLE_TOL) -> complex:
    """The gamma normalizer Lambda(mu) of the completed Whittaker function.

    Lambda(mu) = pi^(-3/2+mu3-mu1) Gamma((1+mu1-mu2)/2) Gamma((1+mu1-mu3)/2)
    Gamma((1+mu2-mu3)/2).  Satisfies Lambda(mu) Lambda(-mu) cos_mu(mu) = 1
    and is symmetric in mu.
    """
    m = as_mu(mu)
    d12, d13, d23 = m.differences()
    out = np.power(np.pi, -1.5 + m.mu3 - m.mu1)
    for d in (d12, d13, d23):
        arg = 0.5 * (1.0 + d)
        _reject_gamma_pole(arg, pole_tol)
        out *= _gamma(arg)
    return complex(out)


def c1_asymp(
    mu: MuLike,
    degeneracy_tol: float = config.DEGENERACY_TOL,
    pole_tol: float = config.POLE_TOL,
) -> complex:
    """Leading-coefficient factor of the small-y Whittaker asymptotic.

    C1(mu) = pi^(mu1-mu3) prod_{i<j} Gamma((mu_j - mu_i)/2); the weight of
    p_{rho+mu^w}(y) in the sum over the Weyl group.
    """
    m = as_mu(mu)
    m.require_distinct(degeneracy_tol)
    d12, d13, d23 = m.differences()
    out = np.power(np.pi, m.mu1 - m.mu3)
    for d in (-d12, -d13, -d23):  # (mu2-mu1), (mu3-mu1), (mu3-mu2)
        _reject_gamma_pole(0.5 * d, pole_tol)
        out *= _gamma(0.5 * d)
    return complex(out)


def _reject_gamma_pole(z: complex, pole_tol: float) -> None:
    n = np.round(np.real(z))
    if n <= 0 and abs(z - n) < pole_tol:
        raise PoleError(f"gamma argument {z} within {pole_tol:.1e} of pole at {n:g}")


def eigenvalues(mu: MuLike) -> tuple[complex, complex]:
    """(lambda1, lambda2) of the two Casimir operators at mu.

    lambda1 = 1 - (mu1^2+mu2^2+mu3^2)/2, lambda2 = -mu1 mu2 mu3; symmetric
    polynomials, hence Weyl-invariant.
    """
    m1, m2, m3 = as_mu(mu).as_tuple()
    lam1 = 1.0 - 0.5 * (m1 * m1 + m2 * m2 + m3 * m3)
    lam2 = -m1 * m2 * m3
    return (complex(lam1), complex(lam2))
