"""Deme: asynchronous document-centered deliberation.

Versioned text documents, comments anchored to character spans that are
tracked across revisions, hierarchical discussion threads, polls under
explicit decision rules, an append-only event store, and an HTTP service
with long-poll live updates.
"""

from .anchoring import (
    Delete,
    EditScript,
    Insert,
    MigrationResult,
    Span,
    apply_edits,
    diff,
    migrate_span,
    resolve_span,
)
from .decisions import DecisionRule, Poll, Tally, Vote, decide, tally_poll
from .errors import DemeError
from .model import Anchor, Comment, DeliberationState, Document, DocumentVersion, Member
from .service import DemeService
from .store import Event, EventLog

__version__ = "0.1.0"

__all__ = [
    "Anchor",
    "Comment",
    "DecisionRule",
    "DeliberationState",
    "Delete",
    "DemeError",
    "DemeService",
    "Document",
    "DocumentVersion",
    "EditScript",
    "Event",
    "EventLog",
    "Insert",
    "Member",
    "MigrationResult",
    "Poll",
    "Span",
    "Tally",
    "Vote",
    "apply_edits",
    "decide",
    "diff",
    "migrate_span",
    "resolve_span",
    "tally_poll",
]
