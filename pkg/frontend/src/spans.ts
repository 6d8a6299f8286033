// Code-point arithmetic. The server counts offsets in Unicode code points;
// JS strings and DOM Range offsets count UTF-16 units, so every conversion
// between a DOM selection and a server span goes through these helpers.

import type { SpanRange } from "./types.js";

export function cpLength(text: string): number {
  let count = 0;
  for (const _ of text) count++;
  return count;
}

/** UTF-16 index of the code point at `cpIndex` (or text.length at the end). */
export function cpToUtf16(text: string, cpIndex: number): number {
  if (cpIndex < 0) throw new RangeError(`negative code point index ${cpIndex}`);
  let cp = 0;
  let units = 0;
  for (const ch of text) {
    if (cp === cpIndex) return units;
    cp++;
    units += ch.length;
  }
  if (cp === cpIndex) return units;
  throw new RangeError(`code point index ${cpIndex} beyond length ${cp}`);
}

/** Code points before `utf16Index`; an index inside a pair rounds up. */
export function utf16ToCp(text: string, utf16Index: number): number {
  let cp = 0;
  let units = 0;
  for (const ch of text) {
    if (units >= utf16Index) return cp;
    units += ch.length;
    cp++;
  }
  return cp;
}

/** Slice by code-point offsets; mirrors the server's excerpt resolution. */
export function cpSlice(text: string, start: number, end: number): string {
  return text.slice(cpToUtf16(text, start), cpToUtf16(text, end));
}

/**
 * Convert a DOM Range inside the rendered body to a server span.
 *
 * Rendered body segments carry `data-cpstart` (code-point offset of the
 * segment within the document body), so a range endpoint is the segment
 * offset plus the code points consumed inside the endpoint's text node.
 * Returns null for collapsed ranges or endpoints outside the body pane.
 */
export function rangeToSpan(bodyRoot: HTMLElement, range: Range): SpanRange | null {
  const start = pointToCp(bodyRoot, range.startContainer, range.startOffset);
  const end = pointToCp(bodyRoot, range.endContainer, range.endOffset);
  if (start === null || end === null || start === end) return null;
  return start < end ? { start, end } : { start: end, end: start };
}

function pointToCp(bodyRoot: HTMLElement, node: Node, offset: number): number | null {
  const element = node.nodeType === Node.ELEMENT_NODE ? (node as HTMLElement) : node.parentElement;
  const segment = element?.closest<HTMLElement>("[data-cpstart]") ?? null;
  if (!segment || !bodyRoot.contains(segment)) return null;
  const segStart = Number(segment.dataset.cpstart);
  if (Number.isNaN(segStart)) return null;
  if (node.nodeType === Node.TEXT_NODE) {
    return segStart + utf16ToCp((node as Text).data, offset);
  }
  const text = segment.textContent ?? "";
  return segStart + (offset === 0 ? 0 : cpLength(text));
}
