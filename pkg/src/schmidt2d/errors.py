"""Exception hierarchy shared by all schmidt2d modules."""


class Schmidt2DError(Exception):
    """Base class for every error raised by schmidt2d."""


class ConfigurationError(Schmidt2DError, ValueError):
    """Invalid grid, truncation or run configuration."""

    def __init__(self, message, problems=None):
        super().__init__(message)
        self.problems = list(problems or [])


class DegenerateStateError(Schmidt2DError):
    pass


class StateEvaluationError(Schmidt2DError):
    """A state returned a non-finite amplitude at ``(rho, varrho)``."""

    def __init__(self, rho, varrho, value):
        super().__init__(
            f"state evaluation failure at rho={rho!r}, varrho={varrho!r} (got {value!r})"
        )
        self.rho = rho
        self.varrho = varrho
        self.value = value


class KernelAsymmetryError(Schmidt2DError):
    pass


class SolverError(Schmidt2DError):
    pass


class OrbitalExtensionError(Schmidt2DError):
    pass


class DomainError(Schmidt2DError, ValueError):
    pass


class OracleError(Schmidt2DError):
    pass


class NormDeficitWarning(UserWarning):
    """Sum of occupancies deviates from one by more than the tolerance."""

    def __init__(self, deficit, tolerance):
        super().__init__(
            f"norm deficit {deficit:.3e} exceeds tolerance {tolerance:.1e}; "
            "increase rho_max, m_max, s_max or grid_n"
        )
        self.deficit = deficit
        self.tolerance = tolerance
