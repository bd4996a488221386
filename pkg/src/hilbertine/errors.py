"""Exception types shared across the package."""


class HilbertineError(Exception):
    """Base class for all geometry errors raised by this package."""


class NonCollinear(HilbertineError):
    """Four points fed to a cross-ratio do not lie on a common line."""


class CoincidentPoints(HilbertineError):
    """Two points that must be distinct coincide up to tolerance."""


class CoincidentLines(HilbertineError):
    """Two lines that must be distinct coincide up to tolerance."""


class CoincidentEndpoints(HilbertineError):
    """A cross-ratio endpoint coincides with an inner point."""


class DegenerateConic(HilbertineError):
    """Conic matrix does not have signature (2,1) up to tolerance."""


class NotProper(HilbertineError):
    """Candidate domain is not properly convex (contains a full line)."""


class NotInterior(HilbertineError):
    """A point required to be interior to a domain is not."""


class DegenerateInput(HilbertineError):
    """Input degenerate for the requested construction."""


class DegenerateTriangle(HilbertineError):
    """Three boundary points do not span a nondegenerate triangle."""


class NonIntegrable(HilbertineError):
    """Volume integrand blows up inside the region and was not truncated."""


class NonConvergent(HilbertineError):
    """An adaptive computation exhausted its budget without converging."""


class BadPic(HilbertineError):
    """Pic region is invalid: apex not on the boundary, or edges leave the domain."""


class NotConvexCompatible(HilbertineError):
    """Spectrum pattern of a transform matches none of the six convex-compatible families."""


class WrongFamily(HilbertineError):
    """Operation requires a transform of a different dynamical family."""


class NoRealLogarithm(HilbertineError):
    """Transform has no real one-parameter interpolation for the requested exponent."""


class FixedBasePoint(HilbertineError):
    """Bisector of an element fixing the base point is undefined."""


class StabilizedBasePoint(HilbertineError):
    """A listed group element stabilizes the Dirichlet base point."""


class NotOnSigma(HilbertineError):
    """Vector does not lie on the characteristic surface Sigma."""


class DomainNotPreserved(HilbertineError):
    """A holonomy matrix does not preserve the given domain."""


class ConfigError(HilbertineError):
    """CLI configuration file is malformed or has the wrong version."""
