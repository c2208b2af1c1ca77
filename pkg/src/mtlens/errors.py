"""Exception hierarchy shared across the toolkit."""


class MtLensError(Exception):
    """Base class for all toolkit errors."""


class MalformedTaskName(MtLensError):
    pass


class MissingDataset(MtLensError):
    pass


class AlignmentError(MtLensError):
    pass


class EncodingError(MtLensError):
    pass


class EmptyInput(MtLensError):
    pass


class IdMismatch(MtLensError):
    pass


class SchemaError(MtLensError):
    pass


class DuplicateMetric(MtLensError):
    pass


class PluginCrash(MtLensError):
    def __init__(self, message, stderr=""):
        super().__init__(message)
        self.stderr = stderr


class PluginTimeout(MtLensError):
    pass


class SpanOutOfRange(MtLensError):
    pass


class MissingScores(MtLensError):
    pass


class MissingVariant(MtLensError):
    pass


class WordTooShort(MtLensError):
    pass


class PositionOutOfRange(MtLensError):
    pass


class MissingHypotheses(MtLensError):
    pass


class MetricMissing(MtLensError):
    pass


class DegenerateInput(MtLensError):
    pass


class RunNotFound(MtLensError):
    pass


class ConfigError(MtLensError):
    pass
