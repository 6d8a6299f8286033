// The meeting-area application: split-screen viewer state and wiring.
//
// Left pane: one document version with every reference span highlighted.
// Right pane: the thread forest, polls, and the comment composer. Clicking a
// current anchored comment scrolls its highlight into view and draws the
// transient dotted arrow; the arrow disappears on the first scroll in either
// pane. A long-poll follower patches the view when other members act; the
// page itself never reloads.

import { ApiClient, ApiError } from "./api.js";
import { PointerArrow } from "./arrow.js";
import { FeedFollower } from "./feed.js";
import { renderBody } from "./highlights.js";
import { renderPolls } from "./polls.js";
import { cpSlice, rangeToSpan } from "./spans.js";
import { renderThreads } from "./threads.js";
import type {
  EventNotice,
  MeetingView,
  SpanRange,
  ThreadNode,
  VoteChoice,
} from "./types.js";

export interface ViewerState {
  documentId: string | null;
  version: number | null;
  latestVersion: number | null;
  selection: SpanRange | null;
  pointer: { commentId: string } | null;
  replyTo: ThreadNode | null;
}

export class App {
  readonly state: ViewerState = {
    documentId: null,
    version: null,
    latestVersion: null,
    selection: null,
    pointer: null,
    replyTo: null,
  };

  view: MeetingView | null = null;

  readonly itemPane: HTMLElement;
  readonly discussionPane: HTMLElement;
  private readonly bodyEl: HTMLElement;
  private readonly titleEl: HTMLElement;
  private readonly versionSelect: HTMLSelectElement;
  private readonly threadsEl: HTMLElement;
  private readonly pollsEl: HTMLElement;
  private readonly statusEl: HTMLElement;
  private readonly composerForm: HTMLFormElement;
  private readonly composerHeader: HTMLInputElement;
  private readonly composerBody: HTMLTextAreaElement;
  private readonly composerTarget: HTMLElement;
  private readonly arrow: PointerArrow;
  private readonly feed: FeedFollower;

  private highlightsByComment = new Map<string, HTMLElement[]>();
  private headersByComment = new Map<string, HTMLElement>();
  private pollIds = new Set<string>();
  private feedStarted = false;

  constructor(
    root: HTMLElement,
    private readonly api: ApiClient,
    feedTimeoutMs?: number,
  ) {
    root.innerHTML = `
      <div class="meeting-area">
        <section class="item-pane" aria-label="document">
          <h2 class="doc-title"></h2>
          <div class="doc-controls">
            <label>version
              <select class="version-select"></select>
            </label>
          </div>
          <div class="doc-body"></div>
        </section>
        <svg class="arrow-overlay"></svg>
        <section class="discussion-pane" aria-label="discussion">
          <div class="status-line" role="status"></div>
          <form class="composer">
            <div class="composer-target">commenting on: whole document</div>
            <input class="composer-header" name="header" placeholder="topic line (required)" />
            <textarea class="composer-body" name="body" placeholder="comment text"></textarea>
            <div class="composer-actions">
              <button type="submit" class="composer-submit">post comment</button>
              <button type="button" class="composer-reset">clear target</button>
            </div>
          </form>
          <div class="threads"></div>
          <div class="polls"></div>
        </section>
      </div>`;
    this.itemPane = root.querySelector<HTMLElement>(".item-pane")!;
    this.discussionPane = root.querySelector<HTMLElement>(".discussion-pane")!;
    this.bodyEl = root.querySelector<HTMLElement>(".doc-body")!;
    this.titleEl = root.querySelector<HTMLElement>(".doc-title")!;
    this.versionSelect = root.querySelector<HTMLSelectElement>(".version-select")!;
    this.threadsEl = root.querySelector<HTMLElement>(".threads")!;
    this.pollsEl = root.querySelector<HTMLElement>(".polls")!;
    this.statusEl = root.querySelector<HTMLElement>(".status-line")!;
    this.composerForm = root.querySelector<HTMLFormElement>(".composer")!;
    this.composerHeader = root.querySelector<HTMLInputElement>(".composer-header")!;
    this.composerBody = root.querySelector<HTMLTextAreaElement>(".composer-body")!;
    this.composerTarget = root.querySelector<HTMLElement>(".composer-target")!;

    const overlay = root.querySelector<SVGSVGElement>(".arrow-overlay")!;
    this.arrow = new PointerArrow(overlay, [this.itemPane, this.discussionPane]);
    this.feed = new FeedFollower(this.api, (n) => this.handleNotices(n), feedTimeoutMs);

    this.composerForm.addEventListener("submit", (event) => {
      event.preventDefault(); // mutation goes over fetch, never a page navigation
      void this.submitComment();
    });
    this.composerForm
      .querySelector<HTMLButtonElement>(".composer-reset")!
      .addEventListener("click", () => this.clearComposerTarget());
    this.versionSelect.addEventListener("change", () => {
      const version = Number(this.versionSelect.value);
      void this.loadDocument(this.state.documentId!, version);
    });
    this.bodyEl.addEventListener("click", (event) => this.handleBodyClick(event));
    document.addEventListener("selectionchange", () => this.captureSelection());
  }

  // -- loading and rendering -------------------------------------------

  async loadDocument(documentId: string, version?: number): Promise<void> {
    try {
      // Pin the feed cursor before fetching the view: anything that happens
      // after the pin wakes the long poll, anything before it is in the view.
      const cursor = this.feedStarted ? null : await this.currentSeq();
      const view = await this.api.meetingView(documentId, version);
      this.state.documentId = documentId;
      this.render(view);
      this.setStatus("");
      if (cursor !== null) {
        this.feedStarted = true;
        this.feed.start(cursor);
      }
    } catch (error) {
      this.showError(error);
    }
  }

  render(view: MeetingView): void {
    this.view = view;
    this.state.version = view.version_number;
    this.state.latestVersion = view.latest_version;
    this.state.pointer = null;
    this.arrow.clear();

    this.titleEl.textContent = `${view.title}`;
    this.versionSelect.innerHTML = "";
    for (let v = 1; v <= view.latest_version; v++) {
      const option = document.createElement("option");
      option.value = String(v);
      option.textContent = v === view.latest_version ? `${v} (latest)` : String(v);
      if (v === view.version_number) option.selected = true;
      this.versionSelect.appendChild(option);
    }

    this.highlightsByComment = renderBody(this.bodyEl, view.body, view.references);
    this.headersByComment = renderThreads(this.threadsEl, view.threads, {
      onPoint: (node, headerEl) => this.pointTo(node.comment_id, headerEl),
      onReply: (node) => this.setReplyTarget(node),
      onShowVersion: (v) => void this.loadDocument(view.document_id, v),
    });
    renderPolls(this.pollsEl, view.polls, {
      onVote: (pollId, choice) => void this.vote(pollId, choice),
      onClose: (pollId) => void this.closePoll(pollId),
    });
    this.pollIds = new Set(view.polls.map((poll) => poll.poll_id));
  }

  async refresh(): Promise<void> {
    if (!this.state.documentId) return;
    // Stay on the pinned old version if the user navigated back; follow the
    // head otherwise.
    const pinned =
      this.state.version !== null && this.state.version !== this.state.latestVersion
        ? this.state.version
        : undefined;
    await this.loadDocument(this.state.documentId, pinned);
  }

  // -- ostensive pointing ------------------------------------------------

  pointTo(commentId: string, headerEl?: HTMLElement): void {
    const node = this.findNode(commentId);
    const header = headerEl ?? this.headersByComment.get(commentId);
    if (!node || !header) return;
    if (node.anchor.kind === "whole_document") {
      this.setStatus("This comment addresses the whole document.");
      return;
    }
    const highlights = this.highlightsByComment.get(commentId);
    if (node.pertinence === "obsolete" && (!highlights || highlights.length === 0)) {
      this.setStatus(
        `Comment references version ${node.anchor.version_number}; its text no longer appears here.`,
      );
      return;
    }
    if (!highlights || highlights.length === 0) {
      this.setStatus(`No visible reference for this comment in version ${this.state.version}.`);
      return;
    }
    const target = highlights[0];
    target.scrollIntoView({ block: "center" });
    this.arrow.point(header, target, () => {
      this.state.pointer = null;
    });
    this.state.pointer = { commentId };
    this.setStatus("");
  }

  private handleBodyClick(event: MouseEvent): void {
    const segment = (event.target as HTMLElement).closest<HTMLElement>(".seg");
    const ids = segment?.dataset.ids?.split(",").filter(Boolean) ?? [];
    this.closePopover();
    if (ids.length === 0) return;
    if (ids.length === 1) {
      this.focusComment(ids[0]);
      return;
    }
    // Overlapping references: let the reader pick which comment they meant.
    const popover = document.createElement("div");
    popover.className = "ref-popover";
    const label = document.createElement("div");
    label.className = "ref-popover-label";
    label.textContent = `${ids.length} comments reference this text:`;
    popover.appendChild(label);
    for (const id of ids) {
      const node = this.findNode(id);
      const button = document.createElement("button");
      button.type = "button";
      button.dataset.commentId = id;
      button.textContent = node ? node.header : id;
      button.addEventListener("click", () => {
        this.closePopover();
        this.focusComment(id);
      });
      popover.appendChild(button);
    }
    segment!.appendChild(popover);
  }

  private closePopover(): void {
    this.bodyEl.querySelector(".ref-popover")?.remove();
  }

  private focusComment(commentId: string): void {
    const header = this.headersByComment.get(commentId);
    if (!header) return;
    header.scrollIntoView({ block: "center" });
    header.classList.add("flash");
    setTimeout(() => header.classList.remove("flash"), 900);
  }

  // -- composing ----------------------------------------------------------

  captureSelection(): void {
    const selection = document.getSelection();
    if (!selection || selection.rangeCount === 0 || selection.isCollapsed) return;
    const span = rangeToSpan(this.bodyEl, selection.getRangeAt(0));
    if (!span) return;
    this.state.selection = span;
    this.state.replyTo = null;
    const excerpt = this.view ? cpSlice(this.view.body, span.start, span.end) : "";
    this.composerTarget.textContent =
      `commenting on: [${span.start}, ${span.end}) ` +
      `"${excerpt.length > 60 ? excerpt.slice(0, 60) + "…" : excerpt}"`;
  }

  setReplyTarget(node: ThreadNode): void {
    this.state.replyTo = node;
    this.state.selection = null;
    this.composerTarget.textContent = `replying to: "${node.header}" (${node.author_display_name})`;
    this.composerHeader.focus();
  }

  clearComposerTarget(): void {
    this.state.selection = null;
    this.state.replyTo = null;
    this.composerTarget.textContent = "commenting on: whole document";
  }

  async submitComment(): Promise<void> {
    if (!this.state.documentId || !this.view) return;
    const header = this.composerHeader.value.trim();
    if (!header) {
      this.setStatus("A topic line is required.");
      return;
    }
    const anchor =
      this.state.selection === null
        ? { kind: "whole_document" as const }
        : {
            kind: "span" as const,
            version_number: this.state.version ?? this.view.latest_version,
            span: this.state.selection,
          };
    try {
      await this.api.postComment(this.state.documentId, {
        anchor,
        header,
        body: this.composerBody.value,
        parent_id: this.state.replyTo?.comment_id ?? null,
      });
      this.composerHeader.value = "";
      this.composerBody.value = "";
      this.clearComposerTarget();
      await this.refresh();
    } catch (error) {
      this.showError(error);
    }
  }

  // -- polls ---------------------------------------------------------------

  async vote(pollId: string, choice: VoteChoice): Promise<void> {
    try {
      await this.api.castVote(pollId, choice);
      await this.refresh();
    } catch (error) {
      this.showError(error);
    }
  }

  async closePoll(pollId: string): Promise<void> {
    try {
      await this.api.closePoll(pollId);
      await this.refresh();
    } catch (error) {
      this.showError(error);
    }
  }

  // -- live updates ----------------------------------------------------------

  handleNotices(notices: EventNotice[]): void {
    if (!this.state.documentId) return;
    const relevant = notices.some((notice) => {
      const affected = notice.affected as { document_id?: string; poll_id?: string };
      if (affected.document_id === this.state.documentId) return true;
      if (affected.poll_id && this.pollIds.has(affected.poll_id)) return true;
      return false;
    });
    if (relevant) void this.refresh();
  }

  stop(): void {
    this.feed.stop();
  }

  // -- helpers ---------------------------------------------------------------

  private async currentSeq(): Promise<number> {
    const notices = await this.api.events(0, 0);
    return notices.length === 0 ? 0 : notices[notices.length - 1].seq;
  }

  private findNode(commentId: string): ThreadNode | null {
    const walk = (nodes: ThreadNode[]): ThreadNode | null => {
      for (const node of nodes) {
        if (node.comment_id === commentId) return node;
        const hit = walk(node.replies);
        if (hit) return hit;
      }
      return null;
    };
    return this.view ? walk(this.view.threads) : null;
  }

  setStatus(text: string): void {
    this.statusEl.textContent = text;
    this.statusEl.classList.toggle("error", false);
  }

  showError(error: unknown): void {
    const message =
      error instanceof ApiError ? `${error.code}: ${error.message}` : String(error);
    this.statusEl.textContent = message;
    this.statusEl.classList.add("error");
  }
}
