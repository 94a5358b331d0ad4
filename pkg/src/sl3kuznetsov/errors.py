"""Exception taxonomy shared by every module.

All library errors derive from Sl3KuznetsovError so callers can catch one
type at the CLI boundary.  The split mirrors the failure modes that actually
occur: pole proximity, degenerate spectral parameters, quadrature failure,
bad geometry/divisibility inputs, and finite-difference setup problems.
"""


class Sl3KuznetsovError(Exception):
    """Base class for all library errors."""


class PoleError(Sl3KuznetsovError):
    """An evaluation point sits on (or within pole_tol of) a pole."""


class DegenerateMu(Sl3KuznetsovError):
    """Spectral parameter components coincide below degeneracy_tol.

    Symmetrized kernels divide by sin/Gamma factors that vanish at
    mu_i = mu_j; we reject rather than return a catastrophically
    cancelled value.
    """


class ConvergenceError(Sl3KuznetsovError):
    """A quadrature or summation could not reach its error target."""


class NonConvergence(ConvergenceError):
    """A power series exceeded its term budget before the tail shrank."""


class ConstraintError(Sl3KuznetsovError):
    """A linear parameter constraint (e.g. Barnes' second lemma) fails."""


class DomainError(Sl3KuznetsovError):
    """Input outside the validity strip/domain of a formula."""


class SingularError(Sl3KuznetsovError):
    """A matrix that must be invertible is (numerically) singular."""


class GeometryError(Sl3KuznetsovError):
    """A contour cannot be built with the required pole separation."""


class SignMismatch(Sl3KuznetsovError):
    """Sign pattern of y does not match the requested kernel variant."""


class StencilError(Sl3KuznetsovError):
    """A finite-difference stencil would sample an invalid point."""


class DivisibilityError(Sl3KuznetsovError):
    """A Kloosterman-sum divisibility precondition (D1 | D2) fails."""


class UnsupportedWeyl(Sl3KuznetsovError):
    """Operation not defined for this Weyl element (I, w2, w3 sums)."""


class DegenerateGrid(Sl3KuznetsovError):
    """A mu-quadrature grid contains nodes too close to mu_i = mu_j."""


class CancellationWarning(UserWarning):
    """A symmetrized combination lost most of its magnitude to cancellation.

    The attached err_estimate remains honest; the warning exists so grid
    drivers can notice systematically ill-conditioned regions.
    """
