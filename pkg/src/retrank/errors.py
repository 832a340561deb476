"""Exception hierarchy for the retrieval engine.

Every error raised by the library derives from :class:`RetrankError` so
callers can catch one type at the CLI boundary. Subclasses map 1:1 onto
the failure modes of the operations that raise them.
"""


class RetrankError(Exception):
    """Base class for all library errors."""


# --- record / type validation -------------------------------------------------

class ValidationError(RetrankError):
    """A record or ranked list violates a structural invariant."""


class EmptyId(ValidationError):
    pass


class EmptySegments(ValidationError):
    pass


class InterleavedMissingModality(ValidationError):
    """Interleaved record lacks an image segment or a text segment."""


# --- embedding store ----------------------------------------------------------

class StoreError(RetrankError):
    """Base for embedding-store failures."""


class NonFiniteValue(StoreError):
    pass


class DuplicateId(StoreError):
    pass


class FormatError(StoreError):
    """On-disk bytes do not match the store format (bad magic, truncation,
    checksum mismatch, id/count disagreement)."""


class NotFound(StoreError):
    def __init__(self, doc_id: str):
        super().__init__(f"id not in store: {doc_id!r}")
        self.doc_id = doc_id


class ZeroVector(StoreError):
    def __init__(self, doc_id: str = ""):
        super().__init__(f"zero vector has no direction: {doc_id!r}")
        self.doc_id = doc_id


# --- retrieval ----------------------------------------------------------------

class DimMismatch(RetrankError):
    pass


class EmptyPool(RetrankError):
    pass


# --- training -----------------------------------------------------------------

class NonPositiveTemperature(RetrankError):
    pass


class UnknownId(RetrankError):
    def __init__(self, doc_id: str):
        super().__init__(f"unknown id: {doc_id!r}")
        self.doc_id = doc_id


class EmptyDataset(RetrankError):
    pass


class MissingQrels(RetrankError):
    def __init__(self, query_id: str):
        super().__init__(f"no relevance judgments for query {query_id!r}")
        self.query_id = query_id


class NoNegativesAvailable(RetrankError):
    pass


class InsufficientNegatives(RetrankError):
    pass


# --- reranking / fusion -------------------------------------------------------

class AlphaOutOfRange(RetrankError):
    pass


class DepthExceedsList(RetrankError):
    pass


class NegativeProbability(RetrankError):
    pass


class AllZero(RetrankError):
    pass


class ScorerError(RetrankError):
    """A scorer call failed; carries the candidate context when known."""


# --- scorer gateway -----------------------------------------------------------

class ProtocolViolation(ScorerError):
    def __init__(self, field: str, reason: str):
        super().__init__(f"protocol violation in {field}: {reason}")
        self.field = field
        self.reason = reason


class TransportError(ScorerError):
    pass


class Timeout(TransportError):
    pass


# --- evaluation ---------------------------------------------------------------

class WrongCandidateCount(RetrankError):
    pass


class UnknownDataset(RetrankError):
    pass


class IncompatibleReports(RetrankError):
    pass


# --- cli / ingest -------------------------------------------------------------

class IdMismatch(RetrankError):
    def __init__(self, missing, extra):
        self.missing = sorted(missing)
        self.extra = sorted(extra)
        super().__init__(
            f"record/embedding id mismatch: missing={self.missing[:10]} "
            f"extra={self.extra[:10]}"
        )


class BadRunFile(RetrankError):
    pass
