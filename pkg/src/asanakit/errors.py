"""Exception types raised across the toolkit."""


class AsanakitError(Exception):
    """Base class for all toolkit errors."""


class WrongCount(AsanakitError):
    """Landmark list length does not match the frame kind."""

    def __init__(self, expected: int, got: int):
        super().__init__(f"expected {expected} landmarks, got {got}")
        self.expected = expected
        self.got = got


class DegenerateTriple(AsanakitError):
    """An angle was requested at a joint whose arms collapse to a point."""


class DegeneratePair(AsanakitError):
    """A slope was requested for two coincident points."""


class MissingLandmarks(AsanakitError):
    """One or more landmarks fall below the confidence threshold."""

    def __init__(self, missing):
        self.missing = frozenset(missing)
        super().__init__(f"landmarks below confidence threshold: {sorted(self.missing)}")


class ParseError(AsanakitError):
    """A dataset file contains an unparseable cell."""

    def __init__(self, message: str, line: int, column: int = 0):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class SchemaError(AsanakitError):
    """A dataset row does not match the declared kind's column layout."""

    def __init__(self, message: str, line: int = 0):
        super().__init__(message if not line else f"line {line}: {message}")
        self.line = line


class TooFewSamples(AsanakitError):
    """Not enough samples to honor the requested split/fold/profile."""

    def __init__(self, message: str, class_name: str | None = None):
        super().__init__(message)
        self.class_name = class_name


class InvalidHyperparam(AsanakitError):
    """A hyperparameter name or value is not valid for the model family."""


class SingleClassDataset(AsanakitError):
    """Training requires at least two distinct classes."""


class NonFiniteFeature(AsanakitError):
    """A feature matrix contains NaN or infinite entries."""


class LengthMismatch(AsanakitError):
    """A feature vector's length does not match the model's input width."""

    def __init__(self, expected: int, got: int):
        super().__init__(f"model expects {expected} features, got {got}")
        self.expected = expected
        self.got = got


class LabelSpaceMismatch(AsanakitError):
    """Model and dataset disagree on the class-name list."""


class VersionMismatch(AsanakitError):
    """A model file was written by a newer format version."""


class CorruptModel(AsanakitError):
    """A model file is truncated or otherwise unreadable."""


class ProfileError(AsanakitError):
    """A pose profile file is invalid."""


class KindMismatch(AsanakitError):
    """Frame kind and profile kind disagree."""


class OutOfOrder(AsanakitError):
    """A frame arrived with a sequence number not above the last seen."""


class UnknownSession(AsanakitError):
    """No open session with the given id."""


class BadFrame(AsanakitError):
    """A frame message failed validation; the session stays open."""
