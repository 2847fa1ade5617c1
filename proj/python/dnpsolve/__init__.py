"""Python front end of the dnp solver.

    >>> import dnpsolve
    >>> res = dnpsolve.run("heat")
    >>> res["exit_code"], res["trajectory"]["u"].shape
"""

from ._core import (
    ConfigError,
    DomainError,
    Error,
    Graph,
    InvalidParameter,
    OutOfRangeError,
    SolverError,
    preset_names,
    preset_text,
    run,
    study,
)

__all__ = [
    "ConfigError",
    "DomainError",
    "Error",
    "Graph",
    "InvalidParameter",
    "OutOfRangeError",
    "SolverError",
    "preset_names",
    "preset_text",
    "run",
    "study",
]
