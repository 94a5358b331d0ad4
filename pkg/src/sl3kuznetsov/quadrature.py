"""Complex-contour quadrature on piecewise-linear paths.

All Mellin-Barnes integrals in the package run over polyline contours:
straight vertical lines, the five-segment "bulged" line that separates the
two pole families near the real axis, and the racetrack variant whose
far tails are folded into horizontal legs (a pure deformation; no poles
are crossed above the truncation height, and the integrands fall off
superexponentially along the legs).

Nodes and weights come from composite Gauss-Legendre panels, one panel
per unit of arclength, with a per-segment node density.  Weights carry
the complex direction factor of their segment, so sum(w * f(s)) is the
path integral of f ds, not |ds|.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np

from . import config
from .errors import GeometryError
from .spectral import MuLike, as_mu

__all__ = [
    "Contour", "contour_nodes", "quad_contour",
    "build_contour_box", "build_racetrack", "build_vertical_line",
    "leg_length_for",
]

TWO_PI_I = 2.0j * np.pi


@lru_cache(maxsize=64)
def _gl_rule(n: int) -> tuple[np.ndarray, np.ndarray]:
    x, w = np.polynomial.legendre.leggauss(n)
    return x, w


@dataclass(frozen=True)
class Contour:
    """A piecewise-linear integration path.

    vertices are traversed in order; seg_nodes_per_unit gives the
    Gauss-Legendre node density on each segment (len(vertices)-1 entries,
    or a single value broadcast to all segments).  truncation_height
    records where the infinite tails were cut, and certificate holds the
    pole-separation distances measured when the contour was built.
    """

    vertices: tuple[complex, ...]
    truncation_height: float
    seg_nodes_per_unit: tuple[int, ...]
    certificate: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        nseg = len(self.vertices) - 1
        if nseg < 1:
            raise GeometryError("contour needs at least two vertices")
        dens = self.seg_nodes_per_unit
        if len(dens) == 1:
            object.__setattr__(self, "seg_nodes_per_unit", dens * nseg)
        elif len(dens) != nseg:
            raise GeometryError(
                f"{len(dens)} segment densities for {nseg} segments"
            )

    def nodes(self) -> tuple[np.ndarray, np.ndarray]:
        return contour_nodes(self)

    def n_nodes(self) -> int:
        return contour_nodes(self)[0].size

    def refined(self, extra: int = 8) -> "Contour":
        """Same path with `extra` more nodes per unit on every segment."""
        dens = tuple(d + extra for d in self.seg_nodes_per_unit)
        return Contour(self.vertices, self.truncation_height, dens,
                       dict(self.certificate))


def contour_nodes(contour: Contour) -> tuple[np.ndarray, np.ndarray]:
    """Quadrature nodes and complex weights for a polyline contour."""
    ss: list[np.ndarray] = []
    ws: list[np.ndarray] = []
    verts = contour.vertices
    for k in range(len(verts) - 1):
        a, b = complex(verts[k]), complex(verts[k + 1])
        seg = b - a
        length = abs(seg)
        if length == 0.0:
            continue
        per_unit = contour.seg_nodes_per_unit[k]
        npanels = max(1, int(np.ceil(length)))
        # keep panel size near one unit; node count per panel from density
        nn = max(4, int(np.ceil(per_unit * length / npanels)))
        x, w = _gl_rule(nn)
        edges = np.linspace(0.0, 1.0, npanels + 1)
        for p in range(npanels):
            p0 = a + seg * edges[p]
            p1 = a + seg * edges[p + 1]
            half = 0.5 * (p1 - p0)
            ss.append(0.5 * (p0 + p1) + half * x)
            ws.append(half * w)
    return np.concatenate(ss), np.concatenate(ws)


def quad_contour(
    f: Callable[[np.ndarray], np.ndarray],
    contour: Contour,
    err_nodes: int = 8,
) -> tuple[complex, float]:
    """Integrate f along the contour; returns (integral, error estimate).

    The error estimate is the difference against the same path refined by
    err_nodes extra nodes per unit.  Pass err_nodes=0 to skip the second
    evaluation (the estimate is then nan).
    """
    s, w = contour.nodes()
    coarse = complex(np.sum(w * f(s)))
    if err_nodes <= 0:
        return coarse, float("nan")
    s2, w2 = contour.refined(err_nodes).nodes()
    fine = complex(np.sum(w2 * f(s2)))
    return fine, abs(fine - coarse)


def build_vertical_line(
    re: float,
    height: float,
    nodes_per_unit: int = config.NODES_PER_UNIT,
    center_im: float = 0.0,
) -> Contour:
    """Straight vertical segment Re(s)=re from center-height to center+height."""
    if height <= 0:
        raise GeometryError("height must be positive")
    v = (complex(re, center_im - height), complex(re, center_im + height))
    return Contour(v, height, (nodes_per_unit,), {"shape": "vertical"})


def build_contour_box(
    mu: MuLike,
    eta: float = config.CONTOUR_ETA,
    truncation_height: float | None = None,
    nodes_per_unit: int = config.NODES_PER_UNIT,
    bulge_height: float | None = None,
    bulge_nodes_per_unit: int | None = None,
) -> Contour:
    """The five-segment bulged line separating the two pole families.

    Tails run upward on Re(s) = -2*eta; around the pole region
    |Im(s)| <= max|Im(mu)| + eta the path jogs right to Re(s) = +eta, so
    every pole of a Gamma(s - mu_i) factor (descending from mu_i) stays
    strictly left of the path and every pole of a Gamma(a - s) factor with
    Re(a) >= some positive bound stays right.

    Raises GeometryError if some |Re(mu_i)| >= eta, in which case no such
    separation exists at this eta.
    """
    m = as_mu(mu)
    re_max = m.max_abs_re()
    if re_max >= eta:
        raise GeometryError(
            f"max |Re mu| = {re_max:.3g} >= eta = {eta:.3g}; bulge cannot "
            "separate the pole families"
        )
    bulge = _resolve_bulge(m, eta, bulge_height)
    if truncation_height is None:
        truncation_height = bulge + 24.0
    if truncation_height <= bulge:
        raise GeometryError("truncation height lies inside the bulge")
    if bulge_nodes_per_unit is None:
        bulge_nodes_per_unit = nodes_per_unit
    t, b, e2 = truncation_height, bulge, -2.0 * eta
    verts = (
        complex(e2, -t), complex(e2, -b), complex(eta, -b),
        complex(eta, b), complex(e2, b), complex(e2, t),
    )
    # the bulge and its jogs pass within eta of the pole towers, so they
    # get their own (usually much higher) node density
    dens = (nodes_per_unit, bulge_nodes_per_unit, bulge_nodes_per_unit,
            bulge_nodes_per_unit, nodes_per_unit)
    cert = _separation_certificate(m, eta, bulge)
    return Contour(verts, truncation_height, dens, cert)


def build_racetrack(
    mu: MuLike,
    eta: float = config.CONTOUR_ETA,
    leg_height: float | None = None,
    leg_length: float = 48.0,
    nodes_per_unit: int = config.NODES_PER_UNIT,
    leg_nodes_per_unit: int | None = None,
    bulge_height: float | None = None,
    bulge_nodes_per_unit: int | None = None,
    tail_nodes_per_unit: int | None = None,
) -> Contour:
    """Bulged line with its far tails rotated into horizontal legs.

    Above height leg_height (which must clear the bulge) the vertical
    tails turn left and run to Re(s) = -leg_length.  Gamma factors of the
    integrands reflect into reciprocal gammas along the legs, so the
    integrand dies off superexponentially there and the truncation error
    at the leg ends is negligible.
    """
    m = as_mu(mu)
    re_max = m.max_abs_re()
    if re_max >= eta:
        raise GeometryError(
            f"max |Re mu| = {re_max:.3g} >= eta = {eta:.3g}; bulge cannot "
            "separate the pole families"
        )
    bulge = _resolve_bulge(m, eta, bulge_height)
    if leg_height is None:
        leg_height = bulge + 2.0
    if leg_height <= bulge:
        raise GeometryError("leg height lies inside the bulge")
    if leg_nodes_per_unit is None:
        leg_nodes_per_unit = max(8, nodes_per_unit // 2)
    if bulge_nodes_per_unit is None:
        bulge_nodes_per_unit = nodes_per_unit
    if tail_nodes_per_unit is None:
        tail_nodes_per_unit = nodes_per_unit
    t, b, e2 = leg_height, bulge, -2.0 * eta
    far = e2 - leg_length
    verts = (
        complex(far, -t), complex(e2, -t),
        complex(e2, -b), complex(eta, -b),
        complex(eta, b), complex(e2, b),
        complex(e2, t), complex(far, t),
    )
    # the jogs adjoin the same pole-proximal region as the bulge and
    # share its density
    dens = (leg_nodes_per_unit, tail_nodes_per_unit, bulge_nodes_per_unit,
            bulge_nodes_per_unit, bulge_nodes_per_unit, tail_nodes_per_unit,
            leg_nodes_per_unit)
    cert = _separation_certificate(m, eta, bulge)
    cert["leg_height"] = leg_height
    cert["leg_length"] = leg_length
    return Contour(verts, leg_height, dens, cert)


def _resolve_bulge(m, eta: float, override: float | None) -> float:
    """Bulge half-height: the minimum that clears the poles, or a larger
    caller-supplied value (rounding the geometry up lets node arrays and
    coupling matrices be shared across nearby spectral parameters)."""
    minimal = m.max_abs_im() + eta
    if override is None:
        return minimal
    if override < minimal - 1e-12:
        raise GeometryError(
            f"bulge height {override:.3g} below minimal {minimal:.3g}"
        )
    return float(override)


def _separation_certificate(m, eta: float, bulge: float) -> dict:
    """Measured clearances between the path and the two pole families."""
    horiz = min(eta - mi.real for mi in m.as_tuple())   # bulge vs left poles
    vert = min(bulge - abs(mi.imag) for mi in m.as_tuple())  # tails vs poles
    return {
        "shape": "bulged",
        "eta": eta,
        "bulge_height": bulge,
        "left_pole_clearance": horiz,
        "tail_pole_clearance": vert,
        "ok": horiz > 0.0 and vert > 0.0,
    }


def leg_length_for(
    falling_powers: float,
    log_scale: float,
    target: float = 70.0,
    max_length: float = 400.0,
) -> float:
    """Leg length x at which falling_powers*log|Gamma(x)| - log_scale*x >= target.

    Crude Stirling model of the superexponential decay along a horizontal
    leg: each net falling gamma power contributes log Gamma(|x|) of decay,
    while a y-power factor of modulus exp(log_scale) per unit grows.  The
    returned length makes the truncated tail smaller than exp(-target)
    relative to the leg entrance.
    """
    if falling_powers <= 0:
        raise GeometryError("need at least one net falling gamma power")
    x = 8.0
    while x < max_length:
        decay = falling_powers * (x * np.log(x) - x) - log_scale * x
        if decay >= target:
            return float(np.ceil(x + 2.0))
        x *= 1.25
    return max_length
