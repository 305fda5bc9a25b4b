"""Exception types shared across the package."""


class CapacityError(RuntimeError):
    """An enumeration would exceed its hard cap; the message names the cap."""


class DataFormatError(ValueError):
    """A dataset file is malformed; the message names the offending line."""
