"""Exception types.

Every error carries a short machine-readable ``code`` used by the CLI when it
reports failures on standard error.
"""


class ShellwaveError(Exception):
    code = "error"


class ValidationError(ShellwaveError, ValueError):
    code = "validation-failed"


class TimelikeConditionError(ValidationError):
    code = "timelike-condition-violated"


class ProfileRegularityError(ValidationError):
    code = "profile-regularity-insufficient"


class SingularLocusError(ShellwaveError, ArithmeticError):
    """Evaluation requested on (or too close to) the focal circle or branch disk."""

    code = "singular-locus"


class SingularEvaluationError(ShellwaveError, ArithmeticError):
    """Analytic signal evaluated at a real time inside the support of g."""

    code = "singular-evaluation"


class QuadratureError(ShellwaveError, ArithmeticError):
    code = "quadrature-nonconvergence"

    def __init__(self, message, achieved=None):
        super().__init__(message)
        self.achieved = achieved
