"""
Exception hierarchy for boostdecay

Every error carries the process exit code the CLI returns for it.
"""

from typing import Any, Dict, Optional


class BoostDecayError(Exception):
    """Base exception for boostdecay errors"""

    def __init__(
        self,
        message: str,
        exit_code: int = 1,
        error_type: str = "internal_error",
        error_code: Optional[str] = None,
        details: Optional[Dict[str, Any]] = None,
    ):
        self.message = message
        self.exit_code = exit_code
        self.error_type = error_type
        self.error_code = error_code
        self.details = details or {}
        super().__init__(self.message)

    def to_dict(self) -> Dict[str, Any]:
        """Convert exception to dictionary format"""
        error_dict: Dict[str, Any] = {
            "message": self.message,
            "type": self.error_type,
        }

        if self.error_code:
            error_dict["code"] = self.error_code
        if self.details:
            error_dict["details"] = self.details

        return {"error": error_dict}


class InputError(BoostDecayError):
    """Malformed input: unparsable files, invalid flags, bad shapes"""

    def __init__(
        self,
        message: str,
        error_type: str = "input_error",
        error_code: Optional[str] = None,
        details: Optional[Dict[str, Any]] = None,
    ):
        super().__init__(
            message=message,
            exit_code=2,
            error_type=error_type,
            error_code=error_code,
            details=details,
        )


class DomainError(InputError):
    """Argument outside the mathematical domain of an operation"""

    def __init__(
        self,
        message: str,
        error_type: str = "domain_error",
        error_code: Optional[str] = None,
        details: Optional[Dict[str, Any]] = None,
    ):
        super().__init__(message, error_type=error_type, error_code=error_code, details=details)


class SingularityError(DomainError):
    """Evaluation at a pole (Y1 at 0, Xi at pt = 0)"""

    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None):
        super().__init__(message, error_type="singularity_error", details=details)


class InfiniteTimeError(DomainError):
    """Inverse of the decay law requested at probability zero"""

    def __init__(self, message: str = "P0^-1(0) is infinite", details: Optional[Dict[str, Any]] = None):
        super().__init__(message, error_type="infinite_time_error", details=details)


class OutOfWindowError(DomainError):
    """Time outside the exponential window"""

    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None):
        super().__init__(message, error_type="out_of_window_error", details=details)


class DiagnosticUnavailableError(InputError):
    """Diagnostic requested on an empty window"""

    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None):
        super().__init__(message, error_type="diagnostic_unavailable", details=details)


class NumericalError(BoostDecayError):
    """Numerical procedure failed to reach its target"""

    def __init__(
        self,
        message: str,
        error_type: str = "numerical_error",
        error_code: Optional[str] = None,
        details: Optional[Dict[str, Any]] = None,
    ):
        super().__init__(
            message=message,
            exit_code=3,
            error_type=error_type,
            error_code=error_code,
            details=details,
        )


class FitError(NumericalError):
    """Prony fit failed; carries the best model found so far"""

    def __init__(self, message: str, best: Any = None, report: Any = None):
        self.best = best
        self.report = report
        details = {"best_rmse": getattr(report, "rmse", None)} if report is not None else None
        super().__init__(message, error_type="fit_error", details=details)


class PrecisionError(NumericalError):
    """Quadrature did not converge; carries the achieved estimate"""

    def __init__(self, message: str, estimate: complex = 0j, error: float = float("inf")):
        self.estimate = estimate
        self.error = error
        super().__init__(
            message,
            error_type="precision_error",
            details={"estimate": [estimate.real, estimate.imag], "error": error},
        )


class NoSolutionError(NumericalError):
    """Equation has no root in the admissible range"""

    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None):
        super().__init__(message, error_type="no_solution_error", details=details)


class ExcludedRegimeError(BoostDecayError):
    """Request falls in a regime the model excludes (nonrelativistic limit)"""

    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None):
        super().__init__(
            message=message,
            exit_code=4,
            error_type="excluded_regime_error",
            details=details,
        )
