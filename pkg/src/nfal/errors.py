"""Exception types shared across the package."""


class NfalError(Exception):
    """Base class for all package errors."""


class InvalidArgumentError(NfalError, ValueError):
    """A builder or operation received out-of-contract parameters."""


class SingularityError(NfalError):
    """A field evaluation was requested closer to an antenna than the guard radius."""


class UnsupportedGeometryError(NfalError):
    """The array lacks the uniform spacing an aliasing test requires."""


class BorderPeakError(NfalError):
    """The peak sits on the grid border, so its width cannot be measured."""


class UnboundedRegionError(NfalError):
    """A resolution cell is unbounded because the bandwidth vanishes along an axis."""


class DegenerateExpansionError(NfalError):
    """The small-offset expansion behind the conic fit does not exist (zero offset)."""


class ScenarioError(NfalError):
    """A scenario file failed to parse or validate."""
