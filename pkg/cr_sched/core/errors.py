# cr_sched/core/errors.py

"""
Exception hierarchy shared by every cr-sched module.

The CLI maps CheckFailed to exit code 1, any other CrSchedError to exit code 2.
"""


class CrSchedError(Exception):
    """Base class for all errors raised by cr-sched."""


class DomainError(CrSchedError, ValueError):
    """An argument lies outside the domain of the operation."""


class NearDegenerate(DomainError):
    """A closed-form identity was asked to evaluate nearly coincident parameters."""

    def __init__(self, a: float, b: float, gap: float, tau_rel: float):
        self.a = a
        self.b = b
        self.gap = gap
        self.tau_rel = tau_rel
        super().__init__(
            f"parameters {a!r} and {b!r} are near-degenerate "
            f"(relative gap {gap:.3e} <= tau_rel {tau_rel:.1e})"
        )


class ConvergenceFailure(CrSchedError):
    """Adaptive quadrature stopped before reaching the requested tolerance."""

    def __init__(self, best_estimate: float, error_bound: float, subdivisions: int, message: str = ""):
        self.best_estimate = best_estimate
        self.error_bound = error_bound
        self.subdivisions = subdivisions
        self.message = message
        super().__init__(
            f"quadrature did not converge after {subdivisions} subdivisions: "
            f"estimate={best_estimate!r}, error bound={error_bound:.3e}"
            + (f" ({message})" if message else "")
        )


class UnsupportedK(CrSchedError):
    """Closed forms exist only for K = 2 and K = 3."""

    def __init__(self, k: int):
        self.k = k
        super().__init__(f"closed-form selection probabilities are available for K = 2, 3 only (got K = {k})")


class ScenarioLoadError(CrSchedError):
    """A scenario document could not be parsed or validated."""

    def __init__(self, message: str, field: str | None = None, line: int | None = None, source: str | None = None):
        self.field = field
        self.line = line
        self.source = source
        where = []
        if source:
            where.append(str(source))
        if line is not None:
            where.append(f"line {line}")
        prefix = ":".join(where)
        detail = f"{field}: {message}" if field else message
        super().__init__(f"{prefix}: {detail}" if prefix else detail)


class CheckFailed(CrSchedError):
    """Monte Carlo frequencies fell outside the 3-sigma bound around the analytic values."""
