// Long-poll follower: cursor advancement, one request in flight, clean stop.

import { describe, expect, it, vi } from "vitest";
import type { ApiClient } from "../src/api.js";
import { FeedFollower } from "../src/feed.js";
import type { EventNotice } from "../src/types.js";

function notice(seq: number): EventNotice {
  return { seq, kind: "comment_added", affected: { document_id: "doc-1" } };
}

function controlledApi() {
  const resolvers: Array<(n: EventNotice[]) => void> = [];
  const calls: Array<{ since: number; timeoutMs: number }> = [];
  const api = {
    events(since: number, timeoutMs: number): Promise<EventNotice[]> {
      calls.push({ since, timeoutMs });
      return new Promise((resolve) => resolvers.push(resolve));
    },
  } as unknown as ApiClient;
  return { api, resolvers, calls };
}

describe("FeedFollower", () => {
  it("advances the cursor with each delivered batch", async () => {
    const { api, resolvers, calls } = controlledApi();
    const batches: EventNotice[][] = [];
    const feed = new FeedFollower(api, (n) => batches.push(n), 5000);
    feed.start(3);
    await vi.waitFor(() => expect(calls.length).toBe(1));
    expect(calls[0]).toEqual({ since: 3, timeoutMs: 5000 });

    resolvers[0]([notice(4), notice(7)]);
    await vi.waitFor(() => expect(calls.length).toBe(2));
    expect(batches).toEqual([[notice(4), notice(7)]]);
    expect(calls[1].since).toBe(7);
    expect(feed.cursor).toBe(7);

    feed.stop();
    resolvers[1]([]);
  });

  it("empty batches leave the cursor unchanged and keep polling", async () => {
    const { api, resolvers, calls } = controlledApi();
    const feed = new FeedFollower(api, () => {}, 5000);
    feed.start(10);
    await vi.waitFor(() => expect(calls.length).toBe(1));
    resolvers[0]([]);
    await vi.waitFor(() => expect(calls.length).toBe(2));
    expect(calls[1].since).toBe(10);
    feed.stop();
    resolvers[1]([]);
  });

  it("stops cleanly: no further requests, no callback after stop", async () => {
    const { api, resolvers, calls } = controlledApi();
    const batches: EventNotice[][] = [];
    const feed = new FeedFollower(api, (n) => batches.push(n), 5000);
    feed.start(0);
    await vi.waitFor(() => expect(calls.length).toBe(1));
    feed.stop();
    resolvers[0]([notice(1)]);
    await new Promise((resolve) => setTimeout(resolve, 20));
    expect(calls.length).toBe(1);
    expect(batches).toEqual([]);
  });

  it("start is idempotent while running", async () => {
    const { api, resolvers, calls } = controlledApi();
    const feed = new FeedFollower(api, () => {}, 5000);
    feed.start(0);
    feed.start(0);
    await new Promise((resolve) => setTimeout(resolve, 20));
    expect(calls.length).toBe(1);
    feed.stop();
    resolvers[0]([]);
  });
});
