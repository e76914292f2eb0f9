"""Exception types.  Each carries a short machine-readable ``code`` used in CLI reports."""


class IwkError(Exception):
    code = "error"


class PrecisionError(IwkError, ArithmeticError):
    """A decision needed more p-adic digits than the working precision."""

    code = "precision-exhausted"


class ZeroWithinPrecision(PrecisionError):
    code = "zero-within-precision"


class LambdaExceedsTruncation(IwkError, ValueError):
    code = "lambda-exceeds-truncation"


class ExactBackendRequired(IwkError, ValueError):
    code = "exact-backend-required"


class NotInS(IwkError, ValueError):
    code = "not-in-S"


class NotTorsion(IwkError, ValueError):
    code = "not-torsion"


class ValidationError(IwkError, ValueError):
    """Malformed input; the message names the offending field or violated axiom."""

    code = "invalid-input"


class NoConsistentSolution(IwkError, ValueError):
    code = "no-consistent-solution"


class NonIntegralTotal(IwkError, ValueError):
    code = "non-integral-total"
