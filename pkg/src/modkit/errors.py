"""Exception types shared across modkit."""


class ModkitError(Exception):
    """Base class for all modkit errors."""


class ParseError(ModkitError, ValueError):
    """Malformed graph document (self-loop, duplicate edge, bad weight...)."""


class DomainError(ModkitError, ValueError):
    """An argument lies outside the documented domain of an operation."""


class Infeasible(ModkitError):
    """The requested combinatorial object does not exist on this graph."""


class SolverError(ModkitError, RuntimeError):
    """A numerical solve failed to converge or stalled."""


class DegenerateResult(ModkitError):
    """A result carries no usable multiplier mass."""
