// Highlight overlay correctness: segment computation, overlap stacking, and
// the fidelity invariant (highlighted DOM text equals the server excerpt).

import { describe, expect, it } from "vitest";
import { computeSegments, highlightedText, renderBody } from "../src/highlights.js";
import { cpLength, cpSlice } from "../src/spans.js";
import { BODY, makeView } from "./util.js";

describe("computeSegments", () => {
  it("splits at every reference boundary with covering ids", () => {
    const refs = makeView().references;
    const segments = computeSegments(cpLength(BODY), refs);
    expect(segments).toEqual([
      { cpStart: 0, cpEnd: 6, ids: [] },
      { cpStart: 6, cpEnd: 8, ids: ["c1"] },
      { cpStart: 8, cpEnd: 11, ids: ["c1", "c3"] },
      { cpStart: 11, cpEnd: 12, ids: ["c3"] },
      { cpStart: 12, cpEnd: 14, ids: ["c3", "c2"] },
      { cpStart: 14, cpEnd: 15, ids: ["c2"] },
      { cpStart: 15, cpEnd: 20, ids: [] },
    ]);
  });

  it("handles a body with no references", () => {
    expect(computeSegments(5, [])).toEqual([{ cpStart: 0, cpEnd: 5, ids: [] }]);
  });
});

describe("renderBody", () => {
  it("reassembles the exact body text", () => {
    const container = document.createElement("div");
    renderBody(container, BODY, makeView().references);
    expect(container.textContent).toBe(BODY);
  });

  it("highlighted DOM text equals the server-resolved excerpt for every reference", () => {
    const view = makeView();
    const container = document.createElement("div");
    const byComment = renderBody(container, view.body, view.references);
    for (const ref of view.references) {
      const elements = byComment.get(ref.comment_id)!;
      expect(elements.length).toBeGreaterThan(0);
      expect(highlightedText(elements)).toBe(
        cpSlice(view.body, ref.span.start, ref.span.end),
      );
    }
  });

  it("marks overlap depth with stacked classes and joined ids", () => {
    const container = document.createElement("div");
    renderBody(container, BODY, makeView().references);
    const stacked = [...container.querySelectorAll<HTMLElement>(".hl-2")];
    expect(stacked.map((el) => el.dataset.ids)).toEqual(["c1,c3", "c3,c2"]);
    expect(container.querySelectorAll(".hl-1").length).toBe(3);
  });
});
