"""Exception types shared across the pipeline."""


class PipelineError(Exception):
    """Base class for errors raised by this package."""


class CorpusValidationError(PipelineError):
    """Malformed input records.

    ``problems`` is a list of ``(line_number, field, message)`` triples, one
    per defect found, so callers can report every bad line at once.
    """

    def __init__(self, problems):
        self.problems = list(problems)
        detail = "; ".join(
            f"line {line}: field '{field}': {message}"
            for line, field, message in self.problems
        )
        super().__init__(f"{len(self.problems)} malformed record(s): {detail}")


class EmptyCorpusError(PipelineError):
    """No documents survived filtering and tokenization."""


class InvariantError(PipelineError):
    """Internal bookkeeping is inconsistent; continuing would corrupt results."""


class JoinError(PipelineError):
    """Model rows and corpus metadata could not be matched up."""


class DegenerateMixingError(PipelineError):
    """Assortativity is undefined: all edge endpoints share one attribute class."""


class ConfigError(PipelineError):
    """Invalid pipeline configuration; carries every violation found."""

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))
