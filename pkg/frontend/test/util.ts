// Shared fixtures: a canonical meeting view with multi-byte text and
// overlapping references, plus a fake fetch backend with a parkable
// long-poll so tests can drive live updates deterministically.

import { vi } from "vitest";
import { cpSlice } from "../src/spans.js";
import type {
  EventNotice,
  MeetingView,
  PollView,
  SpanRange,
  ThreadNode,
} from "../src/types.js";

// Code points: h0 é1 l2 l3 o4 ␣5 𝒲6 o7 r8 l9 d10 ␣11 猫12 と13 犬14 ␣15 😀16 e17 n18 d19
export const BODY = "héllo 𝒲orld 猫と犬 😀end";

export function makeNode(
  id: string,
  header: string,
  span: SpanRange | null,
  overrides: Partial<ThreadNode> = {},
): ThreadNode {
  return {
    comment_id: id,
    header,
    body: `body of ${id}`,
    author: "mem-bob",
    author_display_name: "Bob",
    created_at: "2026-02-01T10:00:00+00:00",
    depth: 0,
    parent_id: null,
    pertinence: "current",
    obsolete_at_version: null,
    anchor:
      span === null
        ? { kind: "whole_document" }
        : { kind: "span", version_number: 2, span },
    excerpt: span === null ? null : cpSlice(BODY, span.start, span.end),
    replies: [],
    ...overrides,
  };
}

export function makePoll(overrides: Partial<PollView> = {}): PollView {
  return {
    poll_id: "poll-1",
    document_id: "doc-1",
    version_number: 2,
    question: "Adopt the charter?",
    rule: { kind: "majority", quorum: "0" },
    eligible: ["mem-bob", "mem-test"],
    status: "open",
    created_at: "2026-02-01T09:00:00+00:00",
    tally: { yes: 0, no: 0, abstain: 0, cast: 0, eligible_count: 2 },
    outcome: "rejected",
    ...overrides,
  };
}

export function makeView(): MeetingView {
  const c1 = makeNode("c1", "On world", { start: 6, end: 11 });
  const c2 = makeNode("c2", "On animals", { start: 12, end: 15 });
  const c3 = makeNode("c3", "Overlapping", { start: 8, end: 14 });
  const c4 = makeNode("c4", "Overall", null);
  const c5 = makeNode("c5", "Old greeting", { start: 0, end: 5 }, {
    pertinence: "obsolete",
    obsolete_at_version: 2,
    anchor: { kind: "span", version_number: 1, span: { start: 0, end: 5 } },
    excerpt: "héllo",
  });
  return {
    document_id: "doc-1",
    title: "Charter",
    version_number: 2,
    latest_version: 2,
    body: BODY,
    references: [
      { comment_id: "c1", span: { start: 6, end: 11 }, pertinence: "current" },
      { comment_id: "c3", span: { start: 8, end: 14 }, pertinence: "current" },
      { comment_id: "c2", span: { start: 12, end: 15 }, pertinence: "current" },
    ],
    threads: [c1, c2, c3, c4, c5],
    polls: [makePoll()],
  };
}

export class FakeBackend {
  view: MeetingView = makeView();
  posted: Array<{ path: string; body: unknown }> = [];
  meetingViewFetches = 0;
  private parked: ((notices: EventNotice[]) => void) | null = null;
  private counter = 0;

  install(): void {
    vi.stubGlobal("fetch", (input: unknown, init?: RequestInit) =>
      this.route(String(input), init),
    );
  }

  /** Resolve the parked long-poll with notices. */
  push(notices: EventNotice[]): void {
    const resolve = this.parked;
    this.parked = null;
    resolve?.(notices);
  }

  get hasParkedPoll(): boolean {
    return this.parked !== null;
  }

  private json(data: unknown, status = 200): Response {
    return new Response(JSON.stringify(data), {
      status,
      headers: { "Content-Type": "application/json" },
    });
  }

  private async route(url: string, init?: RequestInit): Promise<Response> {
    const method = init?.method ?? "GET";
    const parsed = new URL(url, "http://fake");
    const path = parsed.pathname;

    if (method === "GET" && path.endsWith("/meeting-view")) {
      this.meetingViewFetches++;
      return this.json(this.view);
    }
    if (method === "GET" && path === "/api/v1/events") {
      const timeout = Number(parsed.searchParams.get("timeout_ms") ?? "0");
      if (timeout === 0) return this.json({ events: [] });
      const notices = await new Promise<EventNotice[]>((resolve) => {
        this.parked = resolve;
      });
      return this.json({ events: notices });
    }
    if (method === "POST" && path.endsWith("/comments")) {
      const body = JSON.parse(String(init?.body)) as {
        anchor: ThreadNode["anchor"];
        header: string;
        body: string;
        parent_id: string | null;
      };
      this.posted.push({ path, body });
      const id = `c-new-${++this.counter}`;
      const span = body.anchor.kind === "span" ? body.anchor.span! : null;
      const node = makeNode(id, body.header, span, {
        body: body.body,
        parent_id: body.parent_id ?? null,
        author: "mem-test",
        author_display_name: "Tester",
      });
      this.view = {
        ...this.view,
        threads: [...this.view.threads, node],
        references: span
          ? [...this.view.references, { comment_id: id, span, pertinence: "current" }]
          : this.view.references,
      };
      return this.json({ comment_id: id, pertinence: "current" });
    }
    if (method === "POST" && path.endsWith("/votes")) {
      const body = JSON.parse(String(init?.body)) as { choice: "yes" | "no" | "abstain" };
      this.posted.push({ path, body });
      const poll = { ...this.view.polls[0] };
      const tally = { ...poll.tally };
      tally[body.choice]++;
      tally.cast++;
      poll.tally = tally;
      poll.outcome = tally.yes > tally.no ? "adopted" : "rejected";
      this.view = { ...this.view, polls: [poll] };
      return this.json({ recorded: true, tally, outcome: poll.outcome });
    }
    if (method === "POST" && path.endsWith("/close")) {
      this.posted.push({ path, body: {} });
      const poll = { ...this.view.polls[0], status: "closed" as const };
      this.view = { ...this.view, polls: [poll] };
      return this.json(poll);
    }
    return this.json({ error: { code: "not_found", message: path } }, 404);
  }
}
