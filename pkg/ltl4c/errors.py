"""
Exceptions raised by the ltl4c package.
"""


class Ltl4cError(Exception):
    """Base class for all ltl4c errors"""


class ConfigError(Ltl4cError):
    """Invalid configuration value"""


class PropertyError(Ltl4cError):
    """A property text could not be turned into a canonical AST"""

    def __init__(self, message, line=None, column=None):
        self.message = message
        self.line = line
        self.column = column
        if line is not None:
            message = f"{message} (line {line}, column {column})"
        super().__init__(message)


class PropertySyntaxError(PropertyError):
    """Bad token or grammar violation"""


class NonCanonicalError(PropertyError):
    """A quantifier appears under a temporal or boolean operator"""


class UnboundVariableError(PropertyError):
    """A body predicate uses a variable no quantifier binds"""


class ConstraintRangeError(PropertyError):
    """Counting constant outside its admissible range"""


class MalformedRecord(Ltl4cError):
    """A trace line could not be turned into an event"""

    def __init__(self, message, line_number):
        self.line_number = line_number
        super().__init__(f"line {line_number}: {message}")


class SynthesisBudgetExceeded(Ltl4cError):
    """Monitor synthesis produced more states than allowed"""

    def __init__(self, what, limit):
        self.what = what
        self.limit = limit
        super().__init__(f"monitor synthesis exceeded the {what} cap of {limit}")
