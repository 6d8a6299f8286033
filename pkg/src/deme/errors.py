"""Error taxonomy shared by every layer of the deliberation service.

Each error class pins a stable machine-readable ``code`` (snake_case) and the
HTTP status class it belongs to: 400 for validation failures, 404 for unknown
ids, 409 for conflicts with current state. The HTTP layer maps these 1:1 onto
the wire format ``{"error": {"code": ..., "message": ...}}``; the CLI maps any
of them to exit code 1 with the message on stderr.
"""

from __future__ import annotations


class DemeError(Exception):
    """Base class for all domain errors."""

    code = "internal_error"
    http_status = 500


class EmptyTitle(DemeError):
    code = "empty_title"
    http_status = 400


class EmptyBody(DemeError):
    code = "empty_body"
    http_status = 400


class EmptyHeader(DemeError):
    code = "empty_header"
    http_status = 400


class EmptyQuestion(DemeError):
    code = "empty_question"
    http_status = 400


class EmptyEligibleSet(DemeError):
    code = "empty_eligible_set"
    http_status = 400


class EmptyName(DemeError):
    code = "empty_name"
    http_status = 400


class InvalidRule(DemeError):
    code = "invalid_rule"
    http_status = 400


class InvalidChoice(DemeError):
    code = "invalid_choice"
    http_status = 400


class InvalidAnchor(DemeError):
    code = "invalid_anchor"
    http_status = 400


class SpanOutOfRange(DemeError):
    code = "span_out_of_range"
    http_status = 400


class LengthMismatch(DemeError):
    code = "length_mismatch"
    http_status = 400


class CrossDocumentParent(DemeError):
    code = "cross_document_parent"
    http_status = 400


class MemberRequired(DemeError):
    code = "member_required"
    http_status = 400


class UnknownMember(DemeError):
    code = "unknown_member"
    http_status = 404


class UnknownDocument(DemeError):
    code = "unknown_document"
    http_status = 404


class UnknownVersion(DemeError):
    code = "unknown_version"
    http_status = 404


class UnknownParent(DemeError):
    code = "unknown_parent"
    http_status = 404


class UnknownPoll(DemeError):
    code = "unknown_poll"
    http_status = 404


class PollClosed(DemeError):
    code = "poll_closed"
    http_status = 409


class NotEligible(DemeError):
    code = "not_eligible"
    http_status = 409


class StorageFailure(DemeError):
    code = "storage_failure"
    http_status = 500


class CorruptLog(DemeError):
    """Raised when the event log contains a truncated or invalid record.

    ``seq`` identifies the first bad record (1-based position in the log).
    """

    code = "corrupt_log"
    http_status = 500

    def __init__(self, seq: int, message: str | None = None):
        self.seq = seq
        super().__init__(message or f"corrupt event log record at seq {seq}")


class SchemaMismatch(DemeError):
    code = "schema_mismatch"
    http_status = 409


class NonEmptyTarget(DemeError):
    code = "non_empty_target"
    http_status = 409
