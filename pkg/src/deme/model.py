"""Documents, versions, members, and span-anchored threaded comments.

State is held in a :class:`DeliberationState` aggregate that is only ever
mutated by applying events (see :mod:`deme.store` for the event vocabulary).
Applying the same events in the same order always reconstructs the same
state, which is what makes the append-only log the single source of truth.

Pertinence tracking: every span-anchored comment carries a ``live_span`` with
its coordinates in the latest document version for as long as the excerpt
survives revision. When a new version's edit script inserts into or deletes
from the excerpt, the comment flips to ``obsolete`` and records the version
that killed it; it is never re-evaluated afterwards.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from datetime import datetime

from .anchoring import (
    INTACT,
    EditScript,
    Span,
    diff,
    migrate_span,
    migrate_span_chain,
    resolve_span,
)
from .errors import UnknownDocument, UnknownVersion

WHOLE_DOCUMENT = "whole_document"
SPAN = "span"
CURRENT = "current"
OBSOLETE = "obsolete"


@dataclass(frozen=True)
class Member:
    member_id: str
    display_name: str


@dataclass(frozen=True)
class Anchor:
    """What a comment points at: the whole document, or a span of one version."""

    kind: str
    version_number: int | None = None
    span: Span | None = None

    @classmethod
    def whole_document(cls) -> Anchor:
        return cls(kind=WHOLE_DOCUMENT)

    @classmethod
    def to_span(cls, version_number: int, span: Span) -> Anchor:
        return cls(kind=SPAN, version_number=version_number, span=span)

    @property
    def is_span(self) -> bool:
        return self.kind == SPAN


@dataclass(frozen=True)
class DocumentVersion:
    version_number: int
    body: str
    author: str
    created_at: datetime


@dataclass
class Comment:
    """One discussion item. Identity fields never change after creation;
    ``pertinence``/``live_span`` are derived tracking state owned by the
    version-migration machinery."""

    comment_id: str
    document_id: str
    anchor: Anchor
    header: str
    body: str
    author: str
    created_at: datetime
    parent_id: str | None = None
    pertinence: str = CURRENT
    obsolete_at_version: int | None = None
    live_span: Span | None = None


@dataclass
class Document:
    document_id: str
    title: str
    created_by: str
    versions: list[DocumentVersion] = field(default_factory=list)
    # edit_scripts[k] transforms versions[k].body into versions[k + 1].body
    edit_scripts: list[EditScript] = field(default_factory=list)

    @property
    def latest(self) -> DocumentVersion:
        return self.versions[-1]

    def version(self, version_number: int) -> DocumentVersion:
        if not 1 <= version_number <= len(self.versions):
            raise UnknownVersion(
                f"document {self.document_id} has no version {version_number}"
            )
        return self.versions[version_number - 1]

    def scripts_between(self, from_version: int, to_version: int) -> list[EditScript]:
        """Edit scripts carrying version ``from_version`` to ``to_version``."""
        return self.edit_scripts[from_version - 1 : to_version - 1]


@dataclass(frozen=True)
class ThreadNode:
    comment: Comment
    depth: int
    children: list[ThreadNode]


class DeliberationState:
    """In-memory fold of the event log. Mutated only via ``apply_*`` methods."""

    def __init__(self) -> None:
        self.members: dict[str, Member] = {}
        self.documents: dict[str, Document] = {}
        self.comments: dict[str, Comment] = {}
        self.comment_ids_by_document: dict[str, list[str]] = {}

    # -- queries -------------------------------------------------------

    def document(self, document_id: str) -> Document:
        doc = self.documents.get(document_id)
        if doc is None:
            raise UnknownDocument(f"unknown document {document_id}")
        return doc

    def document_comments(self, document_id: str) -> list[Comment]:
        self.document(document_id)
        return [self.comments[cid] for cid in self.comment_ids_by_document[document_id]]

    def thread_tree(self, document_id: str) -> list[ThreadNode]:
        """Comment forest: children under parents, siblings by creation time
        (ties broken by comment id). Every comment appears exactly once."""
        comments = self.document_comments(document_id)
        by_parent: dict[str | None, list[Comment]] = {}
        for comment in comments:
            by_parent.setdefault(comment.parent_id, []).append(comment)
        for siblings in by_parent.values():
            siblings.sort(key=lambda c: (c.created_at, c.comment_id))

        def build(parent_id: str | None, depth: int) -> list[ThreadNode]:
            return [
                ThreadNode(c, depth, build(c.comment_id, depth + 1))
                for c in by_parent.get(parent_id, [])
            ]

        return build(None, 0)

    def original_excerpt(self, comment: Comment) -> str | None:
        """The excerpt as it read in the version the comment anchored to."""
        if not comment.anchor.is_span:
            return None
        doc = self.document(comment.document_id)
        body = doc.version(comment.anchor.version_number).body
        return resolve_span(body, comment.anchor.span)

    def span_in_version(self, comment: Comment, version_number: int) -> Span | None:
        """The comment's span in the coordinates of ``version_number``, or
        None when the excerpt does not survive intact up to that version
        (or the comment anchors to a later version, or to the whole
        document)."""
        anchor = comment.anchor
        if not anchor.is_span or anchor.version_number > version_number:
            return None
        doc = self.document(comment.document_id)
        scripts = doc.scripts_between(anchor.version_number, version_number)
        return migrate_span_chain(anchor.span, scripts)

    # -- event application ----------------------------------------------

    def apply_member_added(self, member_id: str, display_name: str) -> None:
        self.members[member_id] = Member(member_id, display_name)

    def apply_document_created(
        self, document_id: str, title: str, body: str, author: str, at: datetime
    ) -> None:
        doc = Document(document_id=document_id, title=title, created_by=author)
        doc.versions.append(DocumentVersion(1, body, author, at))
        self.documents[document_id] = doc
        self.comment_ids_by_document[document_id] = []

    def apply_version_added(
        self, document_id: str, version_number: int, body: str, author: str, at: datetime
    ) -> list[str]:
        """Append a version and re-evaluate every current span comment against
        the edit from the previous latest version. Returns the ids of
        comments marked obsolete by this version, sorted."""
        doc = self.documents[document_id]
        script = diff(doc.latest.body, body)
        doc.versions.append(DocumentVersion(version_number, body, author, at))
        doc.edit_scripts.append(script)
        obsoleted: list[str] = []
        for cid in self.comment_ids_by_document[document_id]:
            comment = self.comments[cid]
            if not comment.anchor.is_span or comment.pertinence != CURRENT:
                continue
            result = migrate_span(comment.live_span, script)
            if result.status == INTACT:
                comment.live_span = result.new_span
            else:
                comment.pertinence = OBSOLETE
                comment.obsolete_at_version = version_number
                comment.live_span = None
                obsoleted.append(cid)
        return sorted(obsoleted)

    def apply_comment_added(
        self,
        comment_id: str,
        document_id: str,
        anchor: Anchor,
        header: str,
        body: str,
        author: str,
        parent_id: str | None,
        at: datetime,
    ) -> Comment:
        comment = Comment(
            comment_id=comment_id,
            document_id=document_id,
            anchor=anchor,
            header=header,
            body=body,
            author=author,
            created_at=at,
            parent_id=parent_id,
        )
        if anchor.is_span:
            doc = self.documents[document_id]
            span = anchor.span
            for step, script in enumerate(
                doc.scripts_between(anchor.version_number, len(doc.versions))
            ):
                result = migrate_span(span, script)
                if result.status != INTACT:
                    comment.pertinence = OBSOLETE
                    comment.obsolete_at_version = anchor.version_number + step + 1
                    span = None
                    break
                span = result.new_span
            comment.live_span = span
        self.comments[comment_id] = comment
        self.comment_ids_by_document[document_id].append(comment_id)
        return comment

    def apply_pertinence_changed(self, comment_id: str, at_version: int) -> None:
        """Idempotent confirmation: version application above already flipped
        the comment; replaying the explicit event must agree with it."""
        comment = self.comments[comment_id]
        comment.pertinence = OBSOLETE
        if comment.obsolete_at_version is None:
            comment.obsolete_at_version = at_version
        comment.live_span = None
