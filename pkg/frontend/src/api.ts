// Thin fetch client for the server's /api/v1 routes. The acting member id
// travels in the X-Deme-Member header on every mutation.

import type {
  CommentCreate,
  EventNotice,
  MeetingView,
  TallyPayload,
  VoteChoice,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    public readonly code: string,
    message: string,
    public readonly status: number,
  ) {
    super(message);
  }
}

interface VoteAck {
  recorded: boolean;
  tally: TallyPayload;
  outcome: string;
}

export class ApiClient {
  constructor(
    private readonly base: string = "",
    public memberId: string = "",
  ) {}

  async meetingView(documentId: string, version?: number): Promise<MeetingView> {
    const query = version === undefined ? "" : `?version=${version}`;
    return this.request("GET", `/documents/${documentId}/meeting-view${query}`);
  }

  async postComment(
    documentId: string,
    payload: CommentCreate,
  ): Promise<{ comment_id: string; pertinence: string }> {
    return this.request("POST", `/documents/${documentId}/comments`, payload);
  }

  async castVote(pollId: string, choice: VoteChoice): Promise<VoteAck> {
    return this.request("POST", `/polls/${pollId}/votes`, { choice });
  }

  async closePoll(pollId: string): Promise<unknown> {
    return this.request("POST", `/polls/${pollId}/close`, {});
  }

  async events(since: number, timeoutMs: number): Promise<EventNotice[]> {
    const payload = await this.request<{ events: EventNotice[] }>(
      "GET",
      `/events?since=${since}&timeout_ms=${timeoutMs}`,
    );
    return payload.events;
  }

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const headers: Record<string, string> = {};
    if (body !== undefined) headers["Content-Type"] = "application/json";
    if (this.memberId) headers["X-Deme-Member"] = this.memberId;
    const response = await fetch(`${this.base}/api/v1${path}`, {
      method,
      headers,
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    if (!response.ok) {
      let code = "http_error";
      let message = `${response.status}`;
      try {
        const payload = (await response.json()) as { error?: { code: string; message: string } };
        if (payload.error) {
          code = payload.error.code;
          message = payload.error.message;
        }
      } catch {
        // non-JSON error body; keep the status text
      }
      throw new ApiError(code, message, response.status);
    }
    return (await response.json()) as T;
  }
}
