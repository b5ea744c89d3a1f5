"""Exception hierarchy shared across the toolkit."""


class CurationError(Exception):
    """Base class for all toolkit errors."""


class ConfigError(CurationError, ValueError):
    pass


# corpus ingestion
class MalformedLine(CurationError, ValueError):
    pass


class EmptyId(CurationError, ValueError):
    pass


class DuplicateId(CurationError, ValueError):
    pass


class InvalidLanguage(CurationError, ValueError):
    pass


# features / metrics
class EmptyText(CurationError, ValueError):
    pass


class EmptyInput(CurationError, ValueError):
    pass


class InvalidWeights(CurationError, ValueError):
    pass


class OutOfRange(CurationError, ValueError):
    pass


class LengthMismatch(CurationError, ValueError):
    pass


class DegenerateInput(CurationError, ValueError):
    pass


# LM scoring
class ScorerUnavailable(CurationError, RuntimeError):
    pass


class NonFinite(CurationError, ArithmeticError):
    pass


class EmptyCorpus(CurationError, ValueError):
    pass


# selection / splitting
class InsufficientValidPairs(CurationError, RuntimeError):
    pass


class InfeasibleSpec(CurationError, ValueError):
    pass


# reward
class InvalidPattern(CurationError, ValueError):
    pass


class InvalidExpertScore(CurationError, ValueError):
    pass


class GroupTooSmall(CurationError, ValueError):
    pass


# training objectives / LTP
class TargetLanguageAsSource(CurationError, ValueError):
    pass


class EmptySource(CurationError, ValueError):
    pass


class UnregisteredLanguage(CurationError, KeyError):
    pass


class IndexOutOfRange(CurationError, IndexError):
    pass


class InvalidEpsilon(CurationError, ValueError):
    pass


class InvalidDistribution(CurationError, ValueError):
    pass


class PositiveLogProb(CurationError, ValueError):
    pass


# reporting
class MissingArtifact(CurationError, FileNotFoundError):
    pass
