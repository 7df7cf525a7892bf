"""Exception hierarchy shared by all modules."""

import os


class RobotSysError(Exception):
    pass


class ResourceLimitError(RobotSysError):
    """An enumeration or search exceeded its configured budget."""


class InadmissibleChoiceError(RobotSysError):
    pass


class NondeterministicStepError(RobotSysError):
    pass


class PreconditionError(RobotSysError):
    pass


class EmbeddingError(RobotSysError):
    pass


class ContractError(RobotSysError):
    """An internal invariant that a construction relies on did not hold."""


class FormatError(RobotSysError):
    def __init__(self, msg, line=None):
        self.line = line
        super().__init__(f"line {line}: {msg}" if line is not None else msg)


def budget(name: str, default: int) -> int:
    """Read an integer budget from ``ROBOTSYS_<NAME>``, falling back to ``default``."""
    raw = os.environ.get(f"ROBOTSYS_{name.upper()}")
    return int(raw) if raw else default
