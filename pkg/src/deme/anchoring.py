"""Character-level edit scripts and span migration between document versions.

All offsets count Unicode code points. Spans are half-open ``[start, end)``
and never empty. ``diff`` produces a deterministic shortest edit script
(minimal total inserted + deleted characters); ``migrate_span`` decides
whether a commented excerpt survives an edit and, if so, where it landed.

Canonical script form: the longest common prefix and suffix are always kept,
and within the remaining core every edit takes the earliest position
consistent with minimality, with deletions ordered before insertions at the
same position. This makes scripts reproducible across runs and platforms,
which in turn makes pertinence decisions reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import LengthMismatch, SpanOutOfRange

# Below _SMALL_DP_CELLS a plain-Python table beats numpy call overhead; above
# _MAX_DP_CELLS the full table would not fit in sane memory and the trimmed
# core is replaced wholesale. Scripts from the fallback are still valid and
# deterministic; minimality is only guaranteed up to the limit (~25M cells,
# i.e. dissimilar cores of roughly 5000x5000 characters).
_SMALL_DP_CELLS = 4096
_MAX_DP_CELLS = 25_000_000

INTACT = "intact"
OBSOLETE = "obsolete"
REASON_DELETED = "deleted"
REASON_MODIFIED = "modified"


@dataclass(frozen=True)
class Span:
    """Half-open character range ``[start, end)``; zero-length is invalid."""

    start: int
    end: int

    def __post_init__(self) -> None:
        if not (0 <= self.start < self.end):
            raise SpanOutOfRange(f"invalid span [{self.start}, {self.end})")

    def require_within(self, length: int) -> None:
        """Raise unless the span indexes into a text of ``length`` code points."""
        if self.end > length:
            raise SpanOutOfRange(
                f"span [{self.start}, {self.end}) exceeds text of length {length}"
            )

    def shifted(self, delta: int) -> Span:
        return Span(self.start + delta, self.end + delta)


@dataclass(frozen=True)
class Insert:
    """Insert ``text`` immediately before old-text offset ``position``."""

    position: int
    text: str


@dataclass(frozen=True)
class Delete:
    """Delete ``length`` characters starting at old-text offset ``position``."""

    position: int
    length: int


EditOp = Insert | Delete


def _op_key(op: EditOp) -> tuple[int, int]:
    # Deletes sort before inserts at the same position.
    return (op.position, 0 if isinstance(op, Delete) else 1)


@dataclass(frozen=True)
class EditScript:
    """Ordered edit operations transforming a text of ``old_length`` into one
    of ``new_length``. Validated on construction: ops sorted, in bounds,
    non-overlapping, and consistent with the declared lengths."""

    ops: tuple[EditOp, ...]
    old_length: int
    new_length: int

    def __post_init__(self) -> None:
        if self.old_length < 0 or self.new_length < 0:
            raise ValueError("negative text length")
        prev_key = (-1, -1)
        delete_end = 0
        delta = 0
        for op in self.ops:
            key = _op_key(op)
            if key <= prev_key:
                raise ValueError(f"edit ops out of canonical order at {op!r}")
            prev_key = key
            if isinstance(op, Delete):
                if op.length < 1:
                    raise ValueError("empty delete")
                if op.position < delete_end or op.position + op.length > self.old_length:
                    raise ValueError(f"delete out of bounds or overlapping: {op!r}")
                delete_end = op.position + op.length
                delta -= op.length
            else:
                if not op.text:
                    raise ValueError("empty insert")
                if not (0 <= op.position <= self.old_length):
                    raise ValueError(f"insert out of bounds: {op!r}")
                delta += len(op.text)
        if self.old_length + delta != self.new_length:
            raise ValueError(
                f"script changes length by {delta}, but declares "
                f"{self.old_length} -> {self.new_length}"
            )

    @property
    def is_empty(self) -> bool:
        return not self.ops

    def inserts(self) -> list[Insert]:
        return [op for op in self.ops if isinstance(op, Insert)]

    def deletes(self) -> list[Delete]:
        return [op for op in self.ops if isinstance(op, Delete)]

    def total_edit_size(self) -> int:
        """Total characters inserted plus deleted."""
        return sum(
            len(op.text) if isinstance(op, Insert) else op.length for op in self.ops
        )


@dataclass(frozen=True)
class MigrationResult:
    """Outcome of carrying a span across one edit script.

    ``intact`` guarantees the excerpt at ``new_span`` in the new text equals
    the excerpt at the original span in the old text.
    """

    status: str
    new_span: Span | None = None
    reason: str | None = None

    @classmethod
    def intact(cls, new_span: Span) -> MigrationResult:
        return cls(status=INTACT, new_span=new_span)

    @classmethod
    def obsolete(cls, reason: str) -> MigrationResult:
        return cls(status=OBSOLETE, reason=reason)


def resolve_span(body: str, span: Span) -> str:
    """Return the exact excerpt the span points at."""
    span.require_within(len(body))
    return body[span.start : span.end]


def diff(old: str, new: str) -> EditScript:
    """Deterministic shortest edit script turning ``old`` into ``new``."""
    if old == new:
        return EditScript((), len(old), len(new))
    n, m = len(old), len(new)
    limit = min(n, m)
    prefix = 0
    while prefix < limit and old[prefix] == new[prefix]:
        prefix += 1
    suffix = 0
    while suffix < limit - prefix and old[n - 1 - suffix] == new[m - 1 - suffix]:
        suffix += 1
    core_old = old[prefix : n - suffix]
    core_new = new[prefix : m - suffix]
    ops = _core_ops(core_old, core_new, prefix)
    return EditScript(tuple(ops), n, m)


def apply_edits(old: str, script: EditScript) -> str:
    """Apply a script produced for a text of the same length as ``old``."""
    if len(old) != script.old_length:
        raise LengthMismatch(
            f"script expects old text of length {script.old_length}, got {len(old)}"
        )
    parts: list[str] = []
    cursor = 0
    for op in script.ops:
        if op.position > cursor:
            parts.append(old[cursor : op.position])
            cursor = op.position
        if isinstance(op, Delete):
            cursor = op.position + op.length
        else:
            parts.append(op.text)
    parts.append(old[cursor:])
    return "".join(parts)


def migrate_span(span: Span, script: EditScript) -> MigrationResult:
    """Carry a span of the old text across a script.

    The span survives iff no insert lands strictly inside it and no delete
    overlaps it; inserts exactly at its boundaries leave the excerpt
    untouched. A surviving span is shifted by the net length change of all
    edits at positions at or before its start. A delete covering the whole
    span reports ``deleted``; any other interior edit reports ``modified``.
    """
    span.require_within(script.old_length)
    shift = 0
    interior_edit = False
    for op in script.ops:
        if isinstance(op, Delete):
            if op.position <= span.start and op.position + op.length >= span.end:
                return MigrationResult.obsolete(REASON_DELETED)
            if op.position < span.end and op.position + op.length > span.start:
                interior_edit = True
            elif op.position + op.length <= span.start:
                shift -= op.length
        else:
            if span.start < op.position < span.end:
                interior_edit = True
            elif op.position <= span.start:
                shift += len(op.text)
    if interior_edit:
        return MigrationResult.obsolete(REASON_MODIFIED)
    return MigrationResult.intact(span.shifted(shift))


def migrate_span_chain(span: Span, scripts: list[EditScript]) -> Span | None:
    """Carry a span through consecutive scripts; None once any step fails."""
    current = span
    for script in scripts:
        result = migrate_span(current, script)
        if result.status != INTACT:
            return None
        current = result.new_span
    return current


def _core_ops(core_old: str, core_new: str, base: int) -> list[EditOp]:
    """Edit ops for the trimmed cores, with positions offset by ``base``."""
    if not core_old and not core_new:
        return []
    if not core_old:
        return [Insert(base, core_new)]
    if not core_new:
        return [Delete(base, len(core_old))]
    cells = len(core_old) * len(core_new)
    if cells <= _SMALL_DP_CELLS:
        table = _lcs_table_py(core_old, core_new)
    elif cells <= _MAX_DP_CELLS:
        table = _lcs_table_np(core_old, core_new)
    else:
        return [Delete(base, len(core_old)), Insert(base + len(core_old), core_new)]
    return _ops_from_table(core_old, core_new, base, table)


def _lcs_table_py(a: str, b: str):
    """Longest-common-subsequence length table, rows are running maxima."""
    m = len(b)
    table = [[0] * (m + 1)]
    for i, ca in enumerate(a, 1):
        prev = table[i - 1]
        row = [0] * (m + 1)
        best = 0
        for j in range(1, m + 1):
            cand = prev[j - 1] + 1 if ca == b[j - 1] else prev[j]
            if cand > best:
                best = cand
            row[j] = best
        table.append(row)
    return table


def _lcs_table_np(a: str, b: str):
    """Same table as :func:`_lcs_table_py`, vectorized row by row.

    Uses the running-maximum form of the recurrence: the row candidate is
    ``prev[j-1]+1`` on a character match (always >= ``prev[j]`` there) and
    ``prev[j]`` otherwise, after which a cumulative maximum supplies the
    in-row dependency.
    """
    a_codes = np.frombuffer(a.encode("utf-32-le"), dtype=np.uint32)
    b_codes = np.frombuffer(b.encode("utf-32-le"), dtype=np.uint32)
    n, m = len(a_codes), len(b_codes)
    table = np.zeros((n + 1, m + 1), dtype=np.int32)
    for i in range(1, n + 1):
        eq = b_codes == a_codes[i - 1]
        cand = np.where(eq, table[i - 1, :m] + 1, table[i - 1, 1:])
        np.maximum.accumulate(cand, out=cand)
        table[i, 1:] = cand
    return table


def _ops_from_table(a: str, b: str, base: int, table) -> list[EditOp]:
    """Backward walk over the LCS table, then merge runs into ops.

    Preferring match > insert > delete during the backward walk places every
    edit at the earliest minimal position once the walk is reversed.
    """
    i, j = len(a), len(b)
    steps: list[int] = []  # 0 = match, 1 = insert, 2 = delete (reversed order)
    while i > 0 or j > 0:
        here = table[i][j]
        if i > 0 and j > 0 and a[i - 1] == b[j - 1] and table[i - 1][j - 1] + 1 == here:
            i -= 1
            j -= 1
            steps.append(0)
        elif j > 0 and table[i][j - 1] == here:
            j -= 1
            steps.append(1)
        else:
            i -= 1
            steps.append(2)
    ops: list[EditOp] = []
    old_pos = 0
    new_pos = 0
    idx = len(steps) - 1
    while idx >= 0:
        step = steps[idx]
        if step == 0:
            old_pos += 1
            new_pos += 1
            idx -= 1
        elif step == 2:
            start = old_pos
            while idx >= 0 and steps[idx] == 2:
                old_pos += 1
                idx -= 1
            ops.append(Delete(base + start, old_pos - start))
        else:
            start = new_pos
            while idx >= 0 and steps[idx] == 1:
                new_pos += 1
                idx -= 1
            ops.append(Insert(base + old_pos, b[start:new_pos]))
    ops.sort(key=_op_key)
    return ops
