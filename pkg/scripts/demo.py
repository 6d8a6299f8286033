#!/usr/bin/env python3
"""Narrative walkthrough of a deliberation, end to end against a live server.

Starts `deme serve` on a scratch directory, then plays out a small group
deciding on a charter: seeding members, importing the document, anchoring
comments to spans, revising the text (watch one comment go obsolete), and
settling the question with a supermajority poll.

Run from the repository root:  python3 scripts/demo.py
"""

from __future__ import annotations

import re
import subprocess
import sys
import tempfile
import time
from pathlib import Path

import httpx

CLI = [sys.executable, "-m", "deme.cli"]


def cli(*args: str) -> str:
    result = subprocess.run([*CLI, *args], capture_output=True, text=True, check=True)
    return result.stdout.strip()


def main() -> None:
    data_dir = Path(tempfile.mkdtemp(prefix="deme-demo-"))
    print(f"deployment directory: {data_dir}")

    print("\n1. Seed three members (membership is operator-controlled):")
    members = {
        name: cli("add-member", "--name", name, "--data-dir", str(data_dir))
        for name in ("Alice", "Bob", "Carol")
    }
    for name, member_id in members.items():
        print(f"   {name}: {member_id}")

    charter = data_dir / "charter.txt"
    charter.write_text("We meet every Monday at noon.\nDecisions need broad support.\n")
    doc_id = cli(
        "import-doc",
        "--file", str(charter),
        "--title", "Group Charter",
        "--author", members["Alice"],
        "--data-dir", str(data_dir),
    )
    print(f"\n2. Imported the charter as {doc_id} (version 1).")

    server = subprocess.Popen(
        [*CLI, "serve", "--addr", "127.0.0.1:0", "--data-dir", str(data_dir)],
        stdout=subprocess.PIPE, stderr=subprocess.PIPE, text=True,
    )
    try:
        line = server.stderr.readline()
        base = re.search(r"http://[0-9.:]+", line).group(0) + "/api/v1"
        for _ in range(100):
            try:
                httpx.get(f"{base}/events?since=0", timeout=1)
                break
            except httpx.TransportError:
                time.sleep(0.05)
        print(f"   server listening ({base})")

        def post(path: str, member: str, payload: dict) -> dict:
            response = httpx.post(f"{base}{path}", json=payload, headers={"X-Deme-Member": member})
            response.raise_for_status()
            return response.json()

        print("\n3. Bob comments on the span 'Monday at noon':")
        body_v1 = charter.read_text()
        start = body_v1.index("Monday")
        span = {"start": start, "end": start + len("Monday at noon")}
        comment = post(f"/documents/{doc_id}/comments", members["Bob"], {
            "anchor": {"kind": "span", "version_number": 1, "span": span},
            "header": "Scheduling conflict",
            "body": "Noon clashes with the standup. Evening?",
        })
        print(f"   comment {comment['comment_id']} is {comment['pertinence']}")

        print("\n4. Carol replies in the thread:")
        post(f"/documents/{doc_id}/comments", members["Carol"], {
            "anchor": {"kind": "whole_document"},
            "header": "Re: Scheduling conflict",
            "body": "Evenings work for me.",
            "parent_id": comment["comment_id"],
        })

        print("\n5. Alice revises the charter; the anchored text changes:")
        revision = post(f"/documents/{doc_id}/versions", members["Alice"], {
            "body": body_v1.replace("Monday at noon", "Thursday evening"),
        })
        print(f"   version {revision['version_number']} obsoleted: {revision['obsoleted_comment_ids']}")

        view = httpx.get(f"{base}/documents/{doc_id}/meeting-view").json()
        print("\n6. Meeting view now shows:")
        print(f"   body: {view['body'].splitlines()[0]!r} ...")
        print(f"   references (live highlights): {len(view['references'])}")
        for node in view["threads"]:
            marker = f"OBSOLETE since v{node['obsolete_at_version']}" if node["pertinence"] == "obsolete" else "current"
            print(f"   [{marker}] {node['author_display_name']}: {node['header']!r} excerpt={node['excerpt']!r}")
            for reply in node["replies"]:
                print(f"      replied: {reply['author_display_name']}: {reply['header']!r}")

        print("\n7. Poll under a 2/3 supermajority with 2/3 quorum:")
        poll = post(f"/documents/{doc_id}/polls", members["Alice"], {
            "version_number": 2,
            "question": "Adopt the revised charter?",
            "rule": {"kind": "supermajority", "threshold": "2/3", "quorum": "2/3"},
            "eligible": list(members.values()),
        })
        for name, choice in (("Alice", "yes"), ("Bob", "yes"), ("Carol", "abstain")):
            ack = post(f"/polls/{poll['poll_id']}/votes", members[name], {"choice": choice})
            print(f"   {name} votes {choice}: tally={ack['tally']}, live outcome={ack['outcome']}")

        final = post(f"/polls/{poll['poll_id']}/close", members["Alice"], {})
        print(f"\n8. Poll closed. Final outcome: {final['outcome'].upper()}")

        feed = httpx.get(f"{base}/events?since=0").json()["events"]
        print(f"\n9. The event log recorded {len(feed)} events; every client can replay them:")
        print("   " + ", ".join(sorted({n["kind"] for n in feed})))
    finally:
        server.terminate()
        server.wait(timeout=10)
    print("\nDone. Re-run `deme serve` on the same directory to pick up exactly this state.")


if __name__ == "__main__":
    main()
