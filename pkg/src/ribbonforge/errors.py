"""Exception types shared across the package."""


class RibbonError(Exception):
    """Base class for all package-specific errors."""


class DegenerateVertex(RibbonError):
    """A vertex coincides with one of its neighbours."""


class NoFoldNeeded(RibbonError):
    """Requested a fold line at a straight (angle pi) vertex."""


class DegenerateOverlap(RibbonError):
    """Two segments overlap along a collinear stretch."""


class EndpointTouch(RibbonError):
    """Two segments meet at an endpoint of at least one of them."""


class ParameterError(RibbonError, ValueError):
    """A construction parameter is out of range."""


class EmptyDiagram(RibbonError):
    """Asked to measure a diagram with no strands."""


class LedgerError(RibbonError):
    """A crossing record references a nonexistent strand or edge."""


class GenericityError(RibbonError):
    """Layout is not in generic position (overlap, tangency, triple point)."""


class ComponentError(RibbonError):
    """Operation needs a specific component count and didn't get it."""


class TooLarge(RibbonError):
    """Diagram exceeds the configured bracket crossing limit."""


class PDError(RibbonError, ValueError):
    """Malformed planar-diagram code."""


class FormatError(RibbonError, ValueError):
    """Malformed serialized document."""
