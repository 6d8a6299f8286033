"""Helpers for driving the CLI and a real server subprocess in tests."""

from __future__ import annotations

import re
import subprocess
import sys
import time

import httpx

CLI = [sys.executable, "-m", "deme.cli"]


def run_cli(*args: str) -> subprocess.CompletedProcess:
    return subprocess.run([*CLI, *args], capture_output=True, text=True, timeout=60)


def start_server(data_dir, extra: list[str] | None = None) -> tuple[subprocess.Popen, str]:
    """Start ``deme serve`` on an OS-assigned port; returns (process, base_url)."""
    process = subprocess.Popen(
        [*CLI, "serve", "--addr", "127.0.0.1:0", "--data-dir", str(data_dir), *(extra or [])],
        stdout=subprocess.PIPE,
        stderr=subprocess.PIPE,
        text=True,
    )
    assert process.stderr is not None
    line = process.stderr.readline()
    match = re.search(r"http://([0-9.]+):(\d+)", line)
    if not match:
        process.kill()
        raise AssertionError(f"no listen line on stderr, got {line!r}")
    base = f"http://{match.group(1)}:{match.group(2)}"
    deadline = time.monotonic() + 10
    while time.monotonic() < deadline:
        try:
            httpx.get(f"{base}/api/v1/events?since=0", timeout=1)
            return process, base
        except httpx.TransportError:
            time.sleep(0.05)
    process.kill()
    raise AssertionError("server did not come up in time")
