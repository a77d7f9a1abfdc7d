"""Exception types shared across the simulator."""


class McMimoError(Exception):
    """Base class for all simulator errors."""


class InvalidScenario(McMimoError):
    """Scenario parameters cannot produce a valid gain tensor / pilot book."""


class ShapeMismatch(McMimoError):
    """Array arguments are inconsistent with the system configuration."""


class RankDeficient(McMimoError):
    """Estimated channel Gram matrix is singular beyond the conditioning threshold."""


class PreconditionViolated(McMimoError):
    """Operation called outside the setting in which its formula is valid."""


class InvalidSpec(McMimoError):
    """Experiment specification is malformed (empty sweep axis, bad name, ...)."""
