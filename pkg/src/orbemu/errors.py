"""Exception types shared across the package."""


class ContractError(ValueError):
    """An argument violated a documented precondition (dimension, norm, range)."""


class FrameMismatch(ContractError):
    """A wrench or pose was supplied in the wrong coordinate frame."""


class SolverError(RuntimeError):
    """A linear solve or integration step failed; message names the configuration."""


class ConfigError(ValueError):
    """A scenario configuration document is invalid."""
