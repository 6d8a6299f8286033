// The transient pointing arrow: a dotted SVG line drawn from a comment's
// header to its highlighted reference when the comment is clicked, removed
// by the first scroll in either pane.

export class PointerArrow {
  private line: SVGLineElement | null = null;
  private onCleared: (() => void) | null = null;

  constructor(
    private readonly overlay: SVGSVGElement,
    panes: HTMLElement[],
  ) {
    for (const pane of panes) {
      pane.addEventListener("scroll", () => this.clear());
    }
    // Window scrolling counts as scrolling "either pane" too.
    window.addEventListener("scroll", () => this.clear());
  }

  get active(): boolean {
    return this.line !== null;
  }

  point(from: HTMLElement, to: HTMLElement, onCleared?: () => void): void {
    this.clear();
    const overlayBox = this.overlay.getBoundingClientRect();
    const fromBox = from.getBoundingClientRect();
    const toBox = to.getBoundingClientRect();
    const line = document.createElementNS("http://www.w3.org/2000/svg", "line");
    line.setAttribute("x1", String(fromBox.left - overlayBox.left));
    line.setAttribute("y1", String(fromBox.top + fromBox.height / 2 - overlayBox.top));
    line.setAttribute("x2", String(toBox.right - overlayBox.left));
    line.setAttribute("y2", String(toBox.top + toBox.height / 2 - overlayBox.top));
    line.classList.add("pointer-arrow");
    this.overlay.appendChild(line);
    this.line = line;
    this.onCleared = onCleared ?? null;
  }

  clear(): void {
    if (this.line) {
      this.line.remove();
      this.line = null;
      const callback = this.onCleared;
      this.onCleared = null;
      callback?.();
    }
  }
}
