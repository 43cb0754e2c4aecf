"""Exception types shared across the pipeline."""


class PetDetectError(Exception):
    """Base class for all library errors."""


class CorpusError(PetDetectError):
    """Raised for unreadable or malformed corpus/model files."""


class NotInVocabulary(PetDetectError, KeyError):
    """Raised when a token is queried against a model that does not contain it."""

    def __init__(self, token: str):
        super().__init__(token)
        self.token = token

    def __str__(self) -> str:
        return f"token not in vocabulary: {self.token!r}"


class TrainingError(PetDetectError):
    """Raised when model training cannot proceed (e.g. empty vocabulary)."""


class ProtocolError(PetDetectError):
    """Raised when a remote scorer misbehaves (bad response, invariant violation)."""


class ScorerUnavailable(ProtocolError):
    """Raised when the remote scorer cannot be reached after retries."""
