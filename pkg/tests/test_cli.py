"""Operator CLI: scriptability contract (stdout value, stderr diagnostics, 0/1)."""

from __future__ import annotations

import re
import socket
import subprocess

import httpx

from .serverproc import CLI, run_cli, start_server


class TestAddMember:
    def test_prints_member_id(self, tmp_path):
        result = run_cli("add-member", "--name", "Alice", "--data-dir", str(tmp_path / "d"))
        assert result.returncode == 0
        assert re.fullmatch(r"mem-[0-9a-f]+", result.stdout.strip())

    def test_empty_name_fails(self, tmp_path):
        result = run_cli("add-member", "--name", "", "--data-dir", str(tmp_path / "d"))
        assert result.returncode == 1
        assert "error" in result.stderr

    def test_data_dir_env_var(self, tmp_path):
        result = subprocess.run(
            [*CLI, "add-member", "--name", "Bob"],
            capture_output=True,
            text=True,
            env={"PATH": "/usr/bin:/bin", "DEME_DATA_DIR": str(tmp_path / "d")},
            timeout=60,
        )
        assert result.returncode == 0
        assert result.stdout.strip().startswith("mem-")


class TestImportDoc:
    def seed_member(self, data_dir) -> str:
        return run_cli("add-member", "--name", "Alice", "--data-dir", str(data_dir)).stdout.strip()

    def test_happy_path(self, tmp_path):
        data_dir = tmp_path / "d"
        member = self.seed_member(data_dir)
        doc_file = tmp_path / "charter.txt"
        doc_file.write_text("We meet weekly.", encoding="utf-8")
        result = run_cli(
            "import-doc",
            "--file", str(doc_file),
            "--title", "Charter",
            "--author", member,
            "--data-dir", str(data_dir),
        )
        assert result.returncode == 0
        assert re.fullmatch(r"doc-[0-9a-f]+", result.stdout.strip())

    def test_missing_file(self, tmp_path):
        data_dir = tmp_path / "d"
        member = self.seed_member(data_dir)
        result = run_cli(
            "import-doc",
            "--file", str(tmp_path / "nope.txt"),
            "--title", "T",
            "--author", member,
            "--data-dir", str(data_dir),
        )
        assert result.returncode == 1
        assert "cannot read" in result.stderr

    def test_non_utf8_file(self, tmp_path):
        data_dir = tmp_path / "d"
        member = self.seed_member(data_dir)
        bad = tmp_path / "bad.txt"
        bad.write_bytes(b"\xff\xfe\x00 broken \x80")
        result = run_cli(
            "import-doc",
            "--file", str(bad),
            "--title", "T",
            "--author", member,
            "--data-dir", str(data_dir),
        )
        assert result.returncode == 1
        assert "UTF-8" in result.stderr or "utf-8" in result.stderr

    def test_unknown_author(self, tmp_path):
        data_dir = tmp_path / "d"
        self.seed_member(data_dir)
        doc_file = tmp_path / "x.txt"
        doc_file.write_text("text", encoding="utf-8")
        result = run_cli(
            "import-doc",
            "--file", str(doc_file),
            "--title", "T",
            "--author", "mem-ghost",
            "--data-dir", str(data_dir),
        )
        assert result.returncode == 1
        assert "unknown member" in result.stderr


class TestArchiveCommands:
    def test_export_import_round_trip(self, tmp_path):
        src = tmp_path / "src"
        run_cli("add-member", "--name", "Alice", "--data-dir", str(src))
        run_cli("add-member", "--name", "Bob", "--data-dir", str(src))
        first = tmp_path / "a.archive"
        result = run_cli("export", "--out", str(first), "--data-dir", str(src))
        assert result.returncode == 0
        assert result.stdout.strip() == str(first)

        dst = tmp_path / "dst"
        result = run_cli("import", "--in", str(first), "--data-dir", str(dst))
        assert result.returncode == 0
        assert result.stdout.strip() == "2"

        second = tmp_path / "b.archive"
        run_cli("export", "--out", str(second), "--data-dir", str(dst))
        assert first.read_bytes() == second.read_bytes()

    def test_import_into_non_empty_dir(self, tmp_path):
        src = tmp_path / "src"
        run_cli("add-member", "--name", "Alice", "--data-dir", str(src))
        archive = tmp_path / "a.archive"
        run_cli("export", "--out", str(archive), "--data-dir", str(src))
        result = run_cli("import", "--in", str(archive), "--data-dir", str(src))
        assert result.returncode == 1
        assert "empty" in result.stderr

    def test_export_unwritable_path(self, tmp_path):
        src = tmp_path / "src"
        run_cli("add-member", "--name", "Alice", "--data-dir", str(src))
        result = run_cli(
            "export", "--out", str(tmp_path / "no-such-dir" / "x.archive"), "--data-dir", str(src)
        )
        assert result.returncode == 1


class TestServe:
    def test_serves_fresh_and_restored_state(self, tmp_path):
        data_dir = tmp_path / "d"
        member = run_cli("add-member", "--name", "Alice", "--data-dir", str(data_dir)).stdout.strip()
        process, base = start_server(data_dir)
        try:
            created = httpx.post(
                f"{base}/api/v1/documents",
                json={"title": "T", "body": "hello"},
                headers={"X-Deme-Member": member},
            )
            assert created.status_code == 200
            doc_id = created.json()["document_id"]
        finally:
            process.terminate()
            process.wait(timeout=10)
        process, base = start_server(data_dir)
        try:
            view = httpx.get(f"{base}/api/v1/documents/{doc_id}/meeting-view")
            assert view.status_code == 200
            assert view.json()["body"] == "hello"
        finally:
            process.terminate()
            process.wait(timeout=10)

    def test_occupied_port_exits_1(self, tmp_path):
        blocker = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
        blocker.bind(("127.0.0.1", 0))
        blocker.listen(1)
        port = blocker.getsockname()[1]
        try:
            result = run_cli(
                "serve", "--addr", f"127.0.0.1:{port}", "--data-dir", str(tmp_path / "d")
            )
            assert result.returncode == 1
            assert "cannot bind" in result.stderr
        finally:
            blocker.close()

    def test_corrupt_log_exits_1(self, tmp_path):
        data_dir = tmp_path / "d"
        run_cli("add-member", "--name", "Alice", "--data-dir", str(data_dir))
        log = data_dir / "events.log"
        log.write_text(log.read_text(encoding="utf-8")[:-20], encoding="utf-8")
        result = run_cli("serve", "--addr", "127.0.0.1:0", "--data-dir", str(data_dir))
        assert result.returncode == 1
        assert "corrupt" in result.stderr
