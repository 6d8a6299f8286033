// Document body rendering with highlight overlays. The body is split into
// segments at every reference boundary; a segment covered by N references
// gets a translucent highlight class that stacks visually for overlaps, and
// carries the covering comment ids so clicks can disambiguate.

import { cpLength, cpSlice } from "./spans.js";
import type { Reference } from "./types.js";

export interface Segment {
  cpStart: number;
  cpEnd: number;
  ids: string[];
}

export function computeSegments(bodyCpLength: number, references: Reference[]): Segment[] {
  const bounds = new Set<number>([0, bodyCpLength]);
  for (const ref of references) {
    bounds.add(Math.max(0, Math.min(ref.span.start, bodyCpLength)));
    bounds.add(Math.max(0, Math.min(ref.span.end, bodyCpLength)));
  }
  const sorted = [...bounds].sort((a, b) => a - b);
  const segments: Segment[] = [];
  for (let i = 0; i + 1 < sorted.length; i++) {
    const start = sorted[i];
    const end = sorted[i + 1];
    if (start >= end) continue;
    const ids = references
      .filter((ref) => ref.span.start <= start && end <= ref.span.end)
      .map((ref) => ref.comment_id);
    segments.push({ cpStart: start, cpEnd: end, ids });
  }
  return segments;
}

/**
 * Render the body into `container` and return, per comment id, the ordered
 * highlight elements covering its span (several when spans overlap).
 */
export function renderBody(
  container: HTMLElement,
  body: string,
  references: Reference[],
): Map<string, HTMLElement[]> {
  container.textContent = "";
  const byComment = new Map<string, HTMLElement[]>();
  for (const segment of computeSegments(cpLength(body), references)) {
    const el = document.createElement("span");
    el.className = "seg";
    el.dataset.cpstart = String(segment.cpStart);
    el.textContent = cpSlice(body, segment.cpStart, segment.cpEnd);
    if (segment.ids.length > 0) {
      el.classList.add("hl", `hl-${Math.min(segment.ids.length, 3)}`);
      el.dataset.ids = segment.ids.join(",");
      for (const id of segment.ids) {
        const list = byComment.get(id) ?? [];
        list.push(el);
        byComment.set(id, list);
      }
    }
    container.appendChild(el);
  }
  return byComment;
}

/** The text a comment's highlights display, across overlap splits. */
export function highlightedText(elements: HTMLElement[]): string {
  return elements.map((el) => el.textContent ?? "").join("");
}
