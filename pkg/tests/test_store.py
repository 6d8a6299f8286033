"""Event log durability, strict loading, and archive round-trips."""

from __future__ import annotations

import json
from datetime import datetime, timezone

import pytest

from deme.errors import CorruptLog, NonEmptyTarget, SchemaMismatch, StorageFailure
from deme.service import DemeService
from deme.store import (
    ARCHIVE_HEADER,
    EventLog,
    export_archive,
    import_archive,
    read_archive,
)

NOW = datetime(2026, 1, 1, tzinfo=timezone.utc)


class TestEventLog:
    def test_first_event_gets_seq_1(self, tmp_path):
        log = EventLog(tmp_path)
        log.load()
        event = log.append("member_added", {"member_id": "m1", "display_name": "A"}, NOW)
        assert event.seq == 1

    def test_sequences_increase(self, tmp_path):
        log = EventLog(tmp_path)
        log.load()
        seqs = [
            log.append("member_added", {"member_id": f"m{i}", "display_name": "x"}, NOW).seq
            for i in range(2)
        ]
        assert seqs == [1, 2]

    def test_append_after_reload_continues_sequence(self, tmp_path):
        log = EventLog(tmp_path)
        log.load()
        for i in range(5):
            log.append("member_added", {"member_id": f"m{i}", "display_name": "x"}, NOW)
        log.close()
        reopened = EventLog(tmp_path)
        assert len(reopened.load()) == 5
        assert reopened.append("poll_closed", {"poll_id": "p"}, NOW).seq == 6

    def test_empty_directory_is_empty_state(self, tmp_path):
        log = EventLog(tmp_path)
        assert log.load() == []
        assert log.last_seq == 0

    def test_round_trip_preserves_events(self, tmp_path):
        log = EventLog(tmp_path)
        log.load()
        written = [
            log.append("member_added", {"member_id": f"m{i}", "display_name": "ü"}, NOW)
            for i in range(3)
        ]
        log.close()
        assert EventLog(tmp_path).load() == written

    def test_mangled_record_reports_seq(self, tmp_path):
        log = EventLog(tmp_path)
        log.load()
        for i in range(5):
            log.append("member_added", {"member_id": f"m{i}", "display_name": "x"}, NOW)
        log.close()
        path = tmp_path / "events.log"
        lines = path.read_text(encoding="utf-8").splitlines()
        lines[2] = lines[2][: len(lines[2]) // 2]  # mangle record 3
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
        with pytest.raises(CorruptLog) as info:
            EventLog(tmp_path).load()
        assert info.value.seq == 3

    def test_truncated_tail_reports_seq(self, tmp_path):
        log = EventLog(tmp_path)
        log.load()
        for i in range(3):
            log.append("member_added", {"member_id": f"m{i}", "display_name": "x"}, NOW)
        log.close()
        path = tmp_path / "events.log"
        data = path.read_bytes()
        path.write_bytes(data[:-10])  # chop mid-record, no trailing newline
        with pytest.raises(CorruptLog) as info:
            EventLog(tmp_path).load()
        assert info.value.seq == 3

    def test_gap_in_seq_detected(self, tmp_path):
        log = EventLog(tmp_path)
        log.load()
        for i in range(3):
            log.append("member_added", {"member_id": f"m{i}", "display_name": "x"}, NOW)
        log.close()
        path = tmp_path / "events.log"
        lines = path.read_text(encoding="utf-8").splitlines()
        del lines[1]
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
        with pytest.raises(CorruptLog) as info:
            EventLog(tmp_path).load()
        assert info.value.seq == 2

    def test_second_writer_is_refused_instead_of_corrupting(self, tmp_path):
        first = EventLog(tmp_path)
        first.load()
        second = EventLog(tmp_path)
        second.load()
        first.append("member_added", {"member_id": "m1", "display_name": "A"}, NOW)
        with pytest.raises(StorageFailure):
            second.append("member_added", {"member_id": "m2", "display_name": "B"}, NOW)
        first.close()
        second.close()
        # the interloper never wrote, so the log stays loadable
        assert len(EventLog(tmp_path).load()) == 1

    def test_append_requires_load(self, tmp_path):
        log = EventLog(tmp_path)
        with pytest.raises(StorageFailure):
            log.append("poll_closed", {"poll_id": "p"}, NOW)


class TestArchives:
    def seed(self, tmp_path, n: int = 4) -> EventLog:
        log = EventLog(tmp_path / "src")
        log.load()
        for i in range(n):
            log.append("member_added", {"member_id": f"m{i}", "display_name": f"Ms {i}"}, NOW)
        return log

    def test_export_import_reexport_identical(self, tmp_path):
        log = self.seed(tmp_path)
        events = EventLog(tmp_path / "src").load()
        first = tmp_path / "a.archive"
        export_archive(events, first)
        target = EventLog(tmp_path / "dst")
        target.load()
        imported = import_archive(target, first)
        second = tmp_path / "b.archive"
        export_archive(imported, second)
        assert first.read_bytes() == second.read_bytes()
        log.close()
        target.close()

    def test_archive_has_header(self, tmp_path):
        log = self.seed(tmp_path, 1)
        out = tmp_path / "x.archive"
        export_archive(EventLog(tmp_path / "src").load(), out)
        assert out.read_text(encoding="utf-8").splitlines()[0] == ARCHIVE_HEADER
        log.close()

    def test_import_into_non_empty_target(self, tmp_path):
        log = self.seed(tmp_path)
        out = tmp_path / "x.archive"
        export_archive(EventLog(tmp_path / "src").load(), out)
        busy = EventLog(tmp_path / "busy")
        busy.load()
        busy.append("member_added", {"member_id": "mx", "display_name": "x"}, NOW)
        with pytest.raises(NonEmptyTarget):
            import_archive(busy, out)
        log.close()
        busy.close()

    def test_newer_schema_rejected(self, tmp_path):
        out = tmp_path / "future.archive"
        out.write_text("deme-archive v2\n", encoding="utf-8")
        with pytest.raises(SchemaMismatch):
            read_archive(out)

    def test_garbage_header_rejected(self, tmp_path):
        out = tmp_path / "junk.archive"
        out.write_text("not an archive\n", encoding="utf-8")
        with pytest.raises(SchemaMismatch):
            read_archive(out)


class TestServiceDurability:
    def test_state_survives_restart(self, tmp_path):
        data = tmp_path / "data"
        svc = DemeService(data)
        alice = svc.add_member("Alice").member_id
        doc = svc.create_document("D", "hello world", alice)
        svc.add_comment(
            doc.document_id,
            {"kind": "span", "version_number": 1, "span": {"start": 0, "end": 5}},
            "hi",
            "",
            alice,
        )
        before = svc.meeting_view(doc.document_id)
        svc.close()
        reopened = DemeService(data)
        assert reopened.meeting_view(doc.document_id) == before
        reopened.close()

    def test_pertinence_events_only_flip_current_to_obsolete(self, tmp_path):
        svc = DemeService(tmp_path / "data")
        alice = svc.add_member("Alice").member_id
        doc = svc.create_document("D", "one two three four", alice)
        for start, end in [(0, 3), (4, 7), (8, 13)]:
            svc.add_comment(
                doc.document_id,
                {"kind": "span", "version_number": 1, "span": {"start": start, "end": end}},
                "h",
                "",
                alice,
            )
        svc.add_version(doc.document_id, "one TWO three four", alice)
        svc.add_version(doc.document_id, "three four", alice)
        log_path = tmp_path / "data" / "events.log"
        flips: dict[str, list[int]] = {}
        for line in log_path.read_text(encoding="utf-8").splitlines():
            record = json.loads(line)
            if record["kind"] == "pertinence_changed":
                flips.setdefault(record["payload"]["comment_id"], []).append(
                    record["payload"]["at_version"]
                )
        assert flips, "scenario should have obsoleted at least one comment"
        for versions in flips.values():
            assert len(versions) == 1  # never re-flipped
        svc.close()
