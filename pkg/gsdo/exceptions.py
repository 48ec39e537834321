"""Exception hierarchy shared by the solver, the CLI and the service."""


class GsdoError(Exception):
    """Base class for every error raised by gsdo."""


class ContractError(GsdoError, ValueError):
    """A precondition of an operation was violated by its caller."""


class DuplicatePointError(ContractError):
    """A decision vector is already present in the archive."""


class ConfigError(GsdoError, ValueError):
    """Invalid solver configuration or configuration file."""


class RankError(GsdoError):
    """Candidate centers do not span an affine basis (rank [P e] < d+1)."""


class FitError(GsdoError):
    """The RBF system stayed numerically singular after regularization."""


class BudgetExhaustedError(GsdoError):
    """An expensive evaluation was requested beyond the run budget."""


class SimulationError(GsdoError):
    """Raised by an evaluator when the simulation fails (hidden constraint)."""


class ScenarioError(GsdoError, ValueError):
    """A constraint scenario cannot be applied to a problem."""


class UnknownProblemError(GsdoError, KeyError):
    """No problem is registered under the requested name."""

    def __str__(self) -> str:
        return str(self.args[0]) if self.args else "unknown problem"
