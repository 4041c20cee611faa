"""Exception types shared across the package."""


class PorecapError(Exception):
    """Base class for all porecap errors."""


class MappingFormatError(PorecapError):
    """A mapping file or table violates the mapping format contract."""


class ChannelError(PorecapError):
    """A strand or readout violates the channel's input contract."""


class StateCapExceededError(PorecapError):
    """Subset construction would materialize more DFA states than the cap allows."""


class ConvergenceError(PorecapError):
    """An iterative numeric routine failed to reach its tolerance."""


class DimensionCapError(PorecapError):
    """A matrix is too large for the exact-polynomial route."""


class EnumerationCapError(PorecapError):
    """An exhaustive enumeration would exceed its configured cap."""


class CodecError(PorecapError):
    """Encoding or decoding failed (infeasible scheme, unknown readout, bad shape)."""
