"""The single-writer deployment service tying model, decisions, and store.

Every command validates against current in-memory state, appends its event(s)
to the durable log, applies them through the same fold used at startup, and
wakes long-poll watchers. Reads take the same lock, so a mutation's effects
are visible to any request answered after it was acknowledged.

Payload composition for the HTTP layer also lives here: the meeting view
(document body + migrated references + thread forest + polls), document and
poll summaries, and event notices.
"""

from __future__ import annotations

import secrets
import threading
import time
from datetime import datetime, timedelta, timezone
from pathlib import Path

from . import store
from .anchoring import Span
from .decisions import (
    DecisionRule,
    Poll,
    PollRegistry,
    decide,
    tally_poll,
    validate_choice,
)
from .errors import (
    CrossDocumentParent,
    EmptyBody,
    EmptyEligibleSet,
    EmptyHeader,
    EmptyName,
    EmptyQuestion,
    EmptyTitle,
    InvalidAnchor,
    NotEligible,
    PollClosed,
    UnknownMember,
    UnknownParent,
)
from .model import (
    SPAN,
    WHOLE_DOCUMENT,
    Anchor,
    Comment,
    DeliberationState,
    Document,
    Member,
    ThreadNode,
)
from .store import Event, EventLog


def _new_id(prefix: str) -> str:
    return f"{prefix}-{secrets.token_hex(8)}"


def anchor_to_payload(anchor: Anchor) -> dict:
    if anchor.kind == WHOLE_DOCUMENT:
        return {"kind": WHOLE_DOCUMENT}
    return {
        "kind": SPAN,
        "version_number": anchor.version_number,
        "span": {"start": anchor.span.start, "end": anchor.span.end},
    }


def anchor_from_payload(payload: dict) -> Anchor:
    kind = payload.get("kind")
    if kind == WHOLE_DOCUMENT:
        return Anchor.whole_document()
    if kind == SPAN:
        version_number = payload.get("version_number")
        span = payload.get("span") or {}
        if not isinstance(version_number, int) or version_number < 1:
            raise InvalidAnchor(f"span anchor needs a positive version_number, got {version_number!r}")
        if not isinstance(span.get("start"), int) or not isinstance(span.get("end"), int):
            raise InvalidAnchor("span anchor needs integer span.start and span.end")
        return Anchor.to_span(version_number, Span(span["start"], span["end"]))
    raise InvalidAnchor(f"anchor kind must be '{WHOLE_DOCUMENT}' or '{SPAN}', got {kind!r}")


class DemeService:
    """One deployment: loads the log on construction, then serves commands
    and queries under a single writer lock."""

    def __init__(self, data_dir: str | Path):
        self._log = EventLog(data_dir)
        self._state = DeliberationState()
        self._polls = PollRegistry()
        self._events: list[Event] = []
        self._lock = threading.RLock()
        self._changed = threading.Condition(self._lock)
        self._last_ts: datetime | None = None
        for event in self._log.load():
            self._events.append(event)
            self._apply(event)
            self._last_ts = event.occurred_at

    # -- lifecycle -------------------------------------------------------

    def close(self) -> None:
        self._log.close()

    @property
    def last_seq(self) -> int:
        return self._log.last_seq

    @property
    def state(self) -> DeliberationState:
        return self._state

    # -- commands --------------------------------------------------------

    def add_member(self, display_name: str) -> Member:
        if not display_name:
            raise EmptyName("member display_name must be non-empty")
        with self._lock:
            member_id = _new_id("mem")
            self._record(
                store.MEMBER_ADDED,
                {"member_id": member_id, "display_name": display_name},
            )
            return self._state.members[member_id]

    def create_document(self, title: str, body: str, author: str) -> Document:
        if not title:
            raise EmptyTitle("document title must be non-empty")
        if not body:
            raise EmptyBody("document body must be non-empty")
        with self._lock:
            self._require_member(author)
            document_id = _new_id("doc")
            self._record(
                store.DOCUMENT_CREATED,
                {
                    "document_id": document_id,
                    "title": title,
                    "body": body,
                    "author": author,
                },
            )
            return self._state.documents[document_id]

    def add_version(self, document_id: str, body: str, author: str) -> tuple[int, list[str]]:
        """Returns the new version number and the ids of comments this
        version made obsolete."""
        if not body:
            raise EmptyBody("version body must be non-empty")
        with self._lock:
            self._require_member(author)
            doc = self._state.document(document_id)
            version_number = len(doc.versions) + 1
            _, obsoleted = self._record(
                store.VERSION_ADDED,
                {
                    "document_id": document_id,
                    "version_number": version_number,
                    "body": body,
                    "author": author,
                },
            )
            for comment_id in obsoleted:
                self._record(
                    store.PERTINENCE_CHANGED,
                    {
                        "document_id": document_id,
                        "comment_id": comment_id,
                        "at_version": version_number,
                    },
                )
            return version_number, obsoleted

    def add_comment(
        self,
        document_id: str,
        anchor_payload: dict,
        header: str,
        body: str,
        author: str,
        parent_id: str | None = None,
    ) -> Comment:
        if not header:
            raise EmptyHeader("comment header must be non-empty")
        with self._lock:
            self._require_member(author)
            doc = self._state.document(document_id)
            anchor = anchor_from_payload(anchor_payload)
            if anchor.is_span:
                version = doc.version(anchor.version_number)
                anchor.span.require_within(len(version.body))
            if parent_id is not None:
                parent = self._state.comments.get(parent_id)
                if parent is None:
                    raise UnknownParent(f"unknown parent comment {parent_id}")
                if parent.document_id != document_id:
                    raise CrossDocumentParent(
                        f"parent {parent_id} belongs to document {parent.document_id}"
                    )
            comment_id = _new_id("com")
            self._record(
                store.COMMENT_ADDED,
                {
                    "comment_id": comment_id,
                    "document_id": document_id,
                    "anchor": anchor_to_payload(anchor),
                    "header": header,
                    "body": body,
                    "author": author,
                    "parent_id": parent_id,
                },
            )
            return self._state.comments[comment_id]

    def open_poll(
        self,
        document_id: str,
        version_number: int,
        question: str,
        rule_payload: dict,
        eligible: list[str],
        opened_by: str,
    ) -> Poll:
        if not question:
            raise EmptyQuestion("poll question must be non-empty")
        with self._lock:
            self._require_member(opened_by)
            doc = self._state.document(document_id)
            doc.version(version_number)
            rule = DecisionRule.from_payload(rule_payload)
            members = sorted(set(eligible))
            if not members:
                raise EmptyEligibleSet("poll needs at least one eligible member")
            for member_id in members:
                self._require_member(member_id)
            poll_id = _new_id("poll")
            self._record(
                store.POLL_OPENED,
                {
                    "poll_id": poll_id,
                    "document_id": document_id,
                    "version_number": version_number,
                    "question": question,
                    "rule": rule.to_payload(),
                    "eligible": members,
                },
            )
            return self._polls.poll(poll_id)

    def cast_vote(self, poll_id: str, member_id: str, choice: str) -> dict:
        with self._lock:
            poll = self._polls.poll(poll_id)
            self._require_member(member_id)
            validate_choice(choice)
            if not poll.is_open:
                raise PollClosed(f"poll {poll_id} is closed")
            if member_id not in poll.eligible:
                raise NotEligible(
                    f"member {member_id} is not eligible to vote in poll {poll_id}"
                )
            self._record(
                store.VOTE_CAST,
                {"poll_id": poll_id, "member_id": member_id, "choice": choice},
            )
            return self.poll_status(poll_id)

    def close_poll(self, poll_id: str, closed_by: str) -> dict:
        with self._lock:
            poll = self._polls.poll(poll_id)
            self._require_member(closed_by)
            if not poll.is_open:
                raise PollClosed(f"poll {poll_id} is already closed")
            self._record(store.POLL_CLOSED, {"poll_id": poll_id})
            return self.poll_status(poll_id)

    # -- queries ----------------------------------------------------------

    def document_info(self, document_id: str) -> dict:
        with self._lock:
            doc = self._state.document(document_id)
            return {
                "document_id": doc.document_id,
                "title": doc.title,
                "created_by": doc.created_by,
                "latest_version": len(doc.versions),
                "versions": [
                    {
                        "version_number": v.version_number,
                        "author": v.author,
                        "created_at": v.created_at.isoformat(),
                        "length": len(v.body),
                    }
                    for v in doc.versions
                ],
            }

    def meeting_view(self, document_id: str, version_number: int | None = None) -> dict:
        """The composite payload joining one document version, its reference
        spans migrated into that version's coordinates, the full thread
        forest, and every poll with a live outcome."""
        with self._lock:
            doc = self._state.document(document_id)
            latest = len(doc.versions)
            shown = latest if version_number is None else version_number
            version = doc.version(shown)
            references = []
            for comment in self._state.document_comments(document_id):
                span = self._state.span_in_version(comment, shown)
                if span is None:
                    continue
                references.append(
                    {
                        "comment_id": comment.comment_id,
                        "span": {"start": span.start, "end": span.end},
                        "pertinence": comment.pertinence,
                    }
                )
            references.sort(
                key=lambda r: (r["span"]["start"], r["span"]["end"], r["comment_id"])
            )
            return {
                "document_id": doc.document_id,
                "title": doc.title,
                "version_number": shown,
                "latest_version": latest,
                "body": version.body,
                "references": references,
                "threads": self._thread_payload(document_id),
                "polls": [
                    self._poll_payload(p) for p in self._polls.polls_for_document(document_id)
                ],
            }

    def comments_payload(self, document_id: str) -> dict:
        with self._lock:
            self._state.document(document_id)
            return {
                "document_id": document_id,
                "threads": self._thread_payload(document_id),
            }

    def poll_status(self, poll_id: str) -> dict:
        with self._lock:
            return self._poll_payload(self._polls.poll(poll_id))

    def events_since(self, since: int) -> list[dict]:
        with self._lock:
            return [self._notice(ev) for ev in self._events[since:]]

    def wait_for_events(self, since: int, timeout_ms: int) -> list[dict]:
        """Long-poll primitive: immediate answer when events past ``since``
        exist, otherwise wait until one arrives or the timeout lapses."""
        deadline = time.monotonic() + timeout_ms / 1000.0
        with self._changed:
            while True:
                if self._log.last_seq > since:
                    return self.events_since(since)
                remaining = deadline - time.monotonic()
                if remaining <= 0:
                    return []
                self._changed.wait(remaining)

    def export_archive(self, path: str | Path) -> int:
        with self._lock:
            store.export_archive(self._events, path)
            return len(self._events)

    def import_archive(self, path: str | Path) -> int:
        with self._lock:
            events = store.import_archive(self._log, path)
            for event in events:
                self._events.append(event)
                self._apply(event)
                self._last_ts = event.occurred_at
            self._changed.notify_all()
            return len(events)

    # -- internals --------------------------------------------------------

    def _require_member(self, member_id: str) -> Member:
        member = self._state.members.get(member_id)
        if member is None:
            raise UnknownMember(f"unknown member {member_id}")
        return member

    def _now(self) -> datetime:
        # Single server clock, clamped monotonic so sibling ordering and
        # parent/child timestamp invariants survive clock regressions.
        now = datetime.now(timezone.utc)
        if self._last_ts is not None and now <= self._last_ts:
            now = self._last_ts + timedelta(microseconds=1)
        self._last_ts = now
        return now

    def _record(self, kind: str, payload: dict):
        event = self._log.append(kind, payload, self._now())
        self._events.append(event)
        result = self._apply(event)
        self._changed.notify_all()
        return event, result

    def _apply(self, event: Event):
        kind, p, at = event.kind, event.payload, event.occurred_at
        if kind == store.MEMBER_ADDED:
            self._state.apply_member_added(p["member_id"], p["display_name"])
        elif kind == store.DOCUMENT_CREATED:
            self._state.apply_document_created(
                p["document_id"], p["title"], p["body"], p["author"], at
            )
        elif kind == store.VERSION_ADDED:
            return self._state.apply_version_added(
                p["document_id"], p["version_number"], p["body"], p["author"], at
            )
        elif kind == store.COMMENT_ADDED:
            self._state.apply_comment_added(
                p["comment_id"],
                p["document_id"],
                anchor_from_payload(p["anchor"]),
                p["header"],
                p["body"],
                p["author"],
                p.get("parent_id"),
                at,
            )
        elif kind == store.PERTINENCE_CHANGED:
            self._state.apply_pertinence_changed(p["comment_id"], p["at_version"])
        elif kind == store.POLL_OPENED:
            self._polls.apply_poll_opened(
                p["poll_id"],
                p["document_id"],
                p["version_number"],
                p["question"],
                DecisionRule.from_payload(p["rule"]),
                tuple(p["eligible"]),
                at,
            )
        elif kind == store.VOTE_CAST:
            self._polls.apply_vote_cast(p["poll_id"], p["member_id"], p["choice"], at)
        elif kind == store.POLL_CLOSED:
            self._polls.apply_poll_closed(p["poll_id"])
        return None

    def _thread_payload(self, document_id: str) -> list[dict]:
        return [self._node_payload(node) for node in self._state.thread_tree(document_id)]

    def _node_payload(self, node: ThreadNode) -> dict:
        comment = node.comment
        member = self._state.members.get(comment.author)
        return {
            "comment_id": comment.comment_id,
            "header": comment.header,
            "body": comment.body,
            "author": comment.author,
            "author_display_name": member.display_name if member else comment.author,
            "created_at": comment.created_at.isoformat(),
            "depth": node.depth,
            "parent_id": comment.parent_id,
            "pertinence": comment.pertinence,
            "obsolete_at_version": comment.obsolete_at_version,
            "anchor": anchor_to_payload(comment.anchor),
            "excerpt": self._state.original_excerpt(comment),
            "replies": [self._node_payload(child) for child in node.children],
        }

    def _poll_payload(self, poll: Poll) -> dict:
        tally = tally_poll(poll)
        return {
            "poll_id": poll.poll_id,
            "document_id": poll.document_id,
            "version_number": poll.version_number,
            "question": poll.question,
            "rule": poll.rule.to_payload(),
            "eligible": list(poll.eligible),
            "status": poll.status,
            "created_at": poll.created_at.isoformat(),
            "tally": tally.to_payload(),
            "outcome": decide(poll.rule, tally),
        }

    def _notice(self, event: Event) -> dict:
        keys = _AFFECTED_KEYS[event.kind]
        return {
            "seq": event.seq,
            "kind": event.kind,
            "affected": {k: event.payload[k] for k in keys if k in event.payload},
        }


_AFFECTED_KEYS = {
    store.MEMBER_ADDED: ("member_id",),
    store.DOCUMENT_CREATED: ("document_id",),
    store.VERSION_ADDED: ("document_id", "version_number"),
    store.COMMENT_ADDED: ("document_id", "comment_id"),
    store.PERTINENCE_CHANGED: ("document_id", "comment_id", "at_version"),
    store.POLL_OPENED: ("document_id", "poll_id"),
    store.VOTE_CAST: ("poll_id", "member_id"),
    store.POLL_CLOSED: ("poll_id",),
}
