"""Polls over document versions, vote replacement semantics, and decision rules.

Rules are evaluated with exact rational arithmetic: a supermajority threshold
p/q adopts when ``yes * q >= p * (yes + no)``, so boundary tallies like 4-2
against 2/3 are decided by integers, never floats. Abstentions count toward
quorum but never toward the yes/no ratio.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from datetime import datetime
from fractions import Fraction

from .errors import InvalidChoice, InvalidRule, UnknownPoll

MAJORITY = "majority"
SUPERMAJORITY = "supermajority"
UNANIMITY = "unanimity"
RULE_KINDS = (MAJORITY, SUPERMAJORITY, UNANIMITY)

YES = "yes"
NO = "no"
ABSTAIN = "abstain"
CHOICES = (YES, NO, ABSTAIN)

OPEN = "open"
CLOSED = "closed"

ADOPTED = "adopted"
REJECTED = "rejected"
QUORUM_NOT_MET = "quorum_not_met"


def parse_fraction(value, what: str) -> Fraction:
    """Accept ``"2/3"``, ``"0.5"``, ints, and floats (by their decimal
    rendering, so 0.5 means exactly 1/2)."""
    try:
        if isinstance(value, bool):
            raise ValueError(value)
        if isinstance(value, int):
            return Fraction(value)
        if isinstance(value, float):
            return Fraction(repr(value))
        if isinstance(value, str):
            return Fraction(value.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise InvalidRule(f"{what} is not a valid fraction: {value!r}") from exc
    raise InvalidRule(f"{what} is not a valid fraction: {value!r}")


@dataclass(frozen=True)
class DecisionRule:
    """One of majority / supermajority(threshold) / unanimity, plus a quorum
    fraction of eligible members who must cast any vote at all."""

    kind: str
    quorum: Fraction = Fraction(0)
    threshold: Fraction | None = None

    def __post_init__(self) -> None:
        if self.kind not in RULE_KINDS:
            raise InvalidRule(f"unknown rule kind {self.kind!r}")
        if not 0 <= self.quorum <= 1:
            raise InvalidRule(f"quorum {self.quorum} outside [0, 1]")
        if self.kind == SUPERMAJORITY:
            if self.threshold is None:
                raise InvalidRule("supermajority requires a threshold")
            if not Fraction(1, 2) < self.threshold <= 1:
                raise InvalidRule(f"threshold {self.threshold} outside (1/2, 1]")
        elif self.threshold is not None:
            raise InvalidRule(f"{self.kind} does not take a threshold")

    @classmethod
    def from_payload(cls, payload: dict) -> DecisionRule:
        if not isinstance(payload, dict) or "kind" not in payload:
            raise InvalidRule("rule must be an object with a 'kind'")
        known = {"kind", "threshold", "quorum"}
        extra = set(payload) - known
        if extra:
            raise InvalidRule(f"unknown rule fields: {sorted(extra)}")
        threshold = payload.get("threshold")
        return cls(
            kind=payload["kind"],
            quorum=parse_fraction(payload.get("quorum", 0), "quorum"),
            threshold=None if threshold is None else parse_fraction(threshold, "threshold"),
        )

    def to_payload(self) -> dict:
        payload = {"kind": self.kind, "quorum": str(self.quorum)}
        if self.threshold is not None:
            payload["threshold"] = str(self.threshold)
        return payload


@dataclass(frozen=True)
class Vote:
    member_id: str
    choice: str
    cast_at: datetime


@dataclass
class Poll:
    poll_id: str
    document_id: str
    version_number: int
    question: str
    rule: DecisionRule
    eligible: tuple[str, ...]
    created_at: datetime
    status: str = OPEN
    # Effective vote per member: a later cast replaces the earlier one.
    votes: dict[str, Vote] = field(default_factory=dict)

    @property
    def is_open(self) -> bool:
        return self.status == OPEN


@dataclass(frozen=True)
class Tally:
    yes: int
    no: int
    abstain: int
    cast: int
    eligible_count: int

    def to_payload(self) -> dict:
        return {
            "yes": self.yes,
            "no": self.no,
            "abstain": self.abstain,
            "cast": self.cast,
            "eligible_count": self.eligible_count,
        }


def validate_choice(choice: str) -> str:
    if choice not in CHOICES:
        raise InvalidChoice(f"choice must be one of {CHOICES}, got {choice!r}")
    return choice


def tally_poll(poll: Poll) -> Tally:
    """Counts over effective (latest per member) votes only."""
    counts = {YES: 0, NO: 0, ABSTAIN: 0}
    for vote in poll.votes.values():
        counts[vote.choice] += 1
    return Tally(
        yes=counts[YES],
        no=counts[NO],
        abstain=counts[ABSTAIN],
        cast=len(poll.votes),
        eligible_count=len(poll.eligible),
    )


def decide(rule: DecisionRule, tally: Tally) -> str:
    """Pure outcome of a rule over a tally; usable as a live projection on an
    open poll and as the final outcome at close."""
    needed = math.ceil(rule.quorum * tally.eligible_count)
    if tally.cast < needed:
        return QUORUM_NOT_MET
    if rule.kind == MAJORITY:
        return ADOPTED if tally.yes > tally.no else REJECTED
    if rule.kind == SUPERMAJORITY:
        expressed = tally.yes + tally.no
        p, q = rule.threshold.numerator, rule.threshold.denominator
        if expressed > 0 and tally.yes * q >= p * expressed:
            return ADOPTED
        return REJECTED
    return ADOPTED if tally.no == 0 and tally.yes >= 1 else REJECTED


class PollRegistry:
    """All polls of a deployment, mutated only by applying events."""

    def __init__(self) -> None:
        self.polls: dict[str, Poll] = {}
        self._by_document: dict[str, list[str]] = {}

    def poll(self, poll_id: str) -> Poll:
        poll = self.polls.get(poll_id)
        if poll is None:
            raise UnknownPoll(f"unknown poll {poll_id}")
        return poll

    def polls_for_document(self, document_id: str) -> list[Poll]:
        return [self.polls[pid] for pid in self._by_document.get(document_id, [])]

    def apply_poll_opened(
        self,
        poll_id: str,
        document_id: str,
        version_number: int,
        question: str,
        rule: DecisionRule,
        eligible: tuple[str, ...],
        at: datetime,
    ) -> Poll:
        poll = Poll(
            poll_id=poll_id,
            document_id=document_id,
            version_number=version_number,
            question=question,
            rule=rule,
            eligible=eligible,
            created_at=at,
        )
        self.polls[poll_id] = poll
        self._by_document.setdefault(document_id, []).append(poll_id)
        return poll

    def apply_vote_cast(self, poll_id: str, member_id: str, choice: str, at: datetime) -> None:
        self.polls[poll_id].votes[member_id] = Vote(member_id, choice, at)

    def apply_poll_closed(self, poll_id: str) -> None:
        self.polls[poll_id].status = CLOSED
