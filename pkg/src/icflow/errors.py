"""Exception hierarchy.

Every error carries a stable ``code`` string so that the CLI can print a
machine-parsable ``REASON=`` field.
"""


class FlowError(Exception):
    code = "ERROR"


class ConeViolation(FlowError):
    code = "CONE_VIOLATION"


class UnsupportedMode(FlowError):
    code = "UNSUPPORTED_MODE"


class NumericalDegeneracy(FlowError):
    code = "NUMERICAL_DEGENERACY"


class AdmissibilityLost(FlowError):
    code = "ADMISSIBILITY_LOST"

    def __init__(self, message, node=None, kappa=None):
        super().__init__(message)
        self.node = node
        self.kappa = kappa


class PastBlowup(FlowError):
    code = "PAST_BLOWUP"


class NoPreimage(FlowError):
    code = "NO_PREIMAGE"


class RegraphFailed(FlowError):
    code = "REGRAPH_FAILED"


class NonpositiveH(FlowError):
    code = "NONPOSITIVE_H"


class DegenerateSeries(FlowError):
    code = "DEGENERATE_SERIES"


class ParseError(FlowError):
    code = "PARSE_ERROR"

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class ValidationError(FlowError):
    code = "VALIDATION_ERROR"

    def __init__(self, field, message):
        super().__init__(f"{field}: {message}")
        self.field = field
