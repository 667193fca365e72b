"""Exception hierarchy shared across the engine."""


class EvoIpdError(Exception):
    """Base class for all engine errors."""


class DslError(EvoIpdError):
    pass


class ParseError(DslError):
    def __init__(self, message, line=None, col=None, expected=None):
        self.line = line
        self.col = col
        self.expected = tuple(sorted(expected)) if expected else ()
        loc = f" at line {line}, col {col}" if line is not None else ""
        exp = f" (expected one of: {', '.join(self.expected)})" if self.expected else ""
        super().__init__(f"{message}{loc}{exp}")


class LimitError(DslError):
    """A static resource limit (window length, rule count, ...) was exceeded."""


class EvaluationError(DslError):
    """Checked arithmetic overflowed during guard or register evaluation."""


class StrategyEvaluationError(EvoIpdError):
    """A strategy's decision procedure faulted during a match."""


class UnknownStrategyError(EvoIpdError):
    pass


class AttitudeMismatchError(EvoIpdError):
    pass


class EmptyBankError(EvoIpdError):
    pass


class BankValidationError(EvoIpdError):
    def __init__(self, filename, diagnostics):
        self.filename = filename
        self.diagnostics = diagnostics
        msgs = "; ".join(str(d) for d in diagnostics)
        super().__init__(f"{filename}: {msgs}")


class TransportError(EvoIpdError):
    pass


class FixtureMissError(TransportError):
    pass


class ExhaustedRetriesError(EvoIpdError):
    def __init__(self, message, last_verdict=None):
        self.last_verdict = last_verdict
        super().__init__(message)


class MaxIterationsError(EvoIpdError):
    def __init__(self, iterations, counts):
        self.iterations = iterations
        self.counts = counts
        super().__init__(
            f"Moran process did not fixate within {iterations} iterations "
            f"(counts: {counts})"
        )


class ConfigError(EvoIpdError):
    """Bad user configuration; maps to CLI exit code 2."""
