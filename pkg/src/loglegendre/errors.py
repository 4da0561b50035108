"""Exception types shared across the library and mapped to CLI exit codes."""


class ParamError(ValueError):
    """Invalid parameters or malformed user input (CLI exit code 2)."""


class HypothesisError(RuntimeError):
    """A theorem hypothesis fails, so no bound can be reported (exit code 3)."""


class PrecisionError(RuntimeError):
    """Requested precision is infeasible or an iteration failed to converge."""


class InternalCheckError(RuntimeError):
    """An internal invariant that should hold by construction was violated.

    Raising this signals a bug in the library, never a user error
    (CLI exit code 4).
    """
