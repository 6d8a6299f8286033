// Long-poll follower: one in-flight GET /events at a time, cursor advances
// with each batch of notices. This is what keeps the view current without
// any page reload.

import type { ApiClient } from "./api.js";
import type { EventNotice } from "./types.js";

const POLL_TIMEOUT_MS = 25_000;
const RETRY_DELAY_MS = 1_000;

export class FeedFollower {
  private running = false;
  cursor = 0;

  constructor(
    private readonly api: ApiClient,
    private readonly onNotices: (notices: EventNotice[]) => void,
    private readonly timeoutMs: number = POLL_TIMEOUT_MS,
  ) {}

  start(cursor: number): void {
    this.cursor = cursor;
    if (this.running) return;
    this.running = true;
    void this.loop();
  }

  stop(): void {
    this.running = false;
  }

  private async loop(): Promise<void> {
    while (this.running) {
      try {
        const notices = await this.api.events(this.cursor, this.timeoutMs);
        if (!this.running) return;
        if (notices.length > 0) {
          this.cursor = notices[notices.length - 1].seq;
          this.onNotices(notices);
        }
      } catch {
        // transient failure (server restart, network blip): back off, retry
        await new Promise((resolve) => setTimeout(resolve, RETRY_DELAY_MS));
      }
    }
  }
}
