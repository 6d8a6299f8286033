// Wire types mirroring the server's JSON payloads (snake_case preserved).

export interface SpanRange {
  start: number; // code points, half-open [start, end)
  end: number;
}

export interface AnchorPayload {
  kind: "whole_document" | "span";
  version_number?: number;
  span?: SpanRange;
}

export interface Reference {
  comment_id: string;
  span: SpanRange;
  pertinence: "current" | "obsolete";
}

export interface ThreadNode {
  comment_id: string;
  header: string;
  body: string;
  author: string;
  author_display_name: string;
  created_at: string;
  depth: number;
  parent_id: string | null;
  pertinence: "current" | "obsolete";
  obsolete_at_version: number | null;
  anchor: AnchorPayload;
  excerpt: string | null;
  replies: ThreadNode[];
}

export interface TallyPayload {
  yes: number;
  no: number;
  abstain: number;
  cast: number;
  eligible_count: number;
}

export interface RulePayload {
  kind: "majority" | "supermajority" | "unanimity";
  quorum: string;
  threshold?: string;
}

export interface PollView {
  poll_id: string;
  document_id: string;
  version_number: number;
  question: string;
  rule: RulePayload;
  eligible: string[];
  status: "open" | "closed";
  created_at: string;
  tally: TallyPayload;
  outcome: "adopted" | "rejected" | "quorum_not_met";
}

export interface MeetingView {
  document_id: string;
  title: string;
  version_number: number;
  latest_version: number;
  body: string;
  references: Reference[];
  threads: ThreadNode[];
  polls: PollView[];
}

export interface EventNotice {
  seq: number;
  kind: string;
  affected: Record<string, unknown>;
}

export interface CommentCreate {
  anchor: AnchorPayload;
  header: string;
  body: string;
  parent_id?: string | null;
}

export type VoteChoice = "yes" | "no" | "abstain";
