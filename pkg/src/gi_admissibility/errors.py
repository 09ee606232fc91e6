"""Exception hierarchy shared by all modules."""


class GIAdmissibilityError(Exception):
    """Base class for every error raised by this package."""


class DomainError(GIAdmissibilityError, ValueError):
    """An argument lies outside the domain of the requested formula."""


class AmbiguousCase(GIAdmissibilityError):
    """A discriminant is within tolerance of a threshold whose sides disagree."""


class UnsupportedCase(GIAdmissibilityError):
    """No branch-cut layout exists for the given case label."""


class ConvergenceError(GIAdmissibilityError):
    """An iterative solver did not reach its residual target."""


class OnCutError(GIAdmissibilityError):
    """Evaluation requested on (or too close to) a branch cut."""


class PathError(GIAdmissibilityError):
    """No cut-avoiding continuation path was found."""


class PoleError(GIAdmissibilityError):
    """Evaluation requested at a pole of E(k)."""


class ResolutionError(GIAdmissibilityError):
    """The grid is too coarse to isolate the branch points."""


class InconclusiveError(GIAdmissibilityError):
    """Geometric answer changed between two grid resolutions."""


class TailError(GIAdmissibilityError):
    """A profile does not decay fast enough for the gauge integral."""


class StiffnessError(GIAdmissibilityError):
    """ODE step control failed."""


class ValidityError(GIAdmissibilityError):
    """A scattering column was requested outside its validity half-plane."""


class NotExactBackground(GIAdmissibilityError):
    """Boundary values of a profile differ from the pure background."""


class RegionError(GIAdmissibilityError):
    """A spectral point is not in the closure of an unbounded D1 component."""
