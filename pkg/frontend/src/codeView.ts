import { clear, el } from "./dom.js";
import type { EmittedFile } from "./types.js";

export interface CodeViewOptions {
  /** Fired when a line is clicked, with the step that owns it. */
  onPickStep?: (stepId: string | null, line: number) => void;
}

/**
 * Read-only pane for one emitted file.  Lines map back to steps via
 * the span table, so clicking a line selects its step and selecting a
 * step highlights its lines.
 */
export class CodeView {
  readonly element: HTMLElement;
  private file: EmittedFile | null = null;
  private stepByLine = new Map<number, string>();

  constructor(private readonly options: CodeViewOptions = {}) {
    this.element = el("pre", "code-view");
  }

  render(file: EmittedFile): void {
    this.file = file;
    this.stepByLine.clear();
    for (const [stepId, span] of Object.entries(file.spans)) {
      const [start, end] = span;
      for (let line = start; line <= end; line++) {
        this.stepByLine.set(line, stepId);
      }
    }
    clear(this.element);
    this.element.appendChild(el("div", "code-path", file.path));
    const lines = file.text.length > 0 ? file.text.replace(/\n$/, "").split("\n") : [];
    lines.forEach((text, index) => {
      const number = index + 1;
      const row = el("div", "code-line", "", [
        el("span", "code-number", String(number)),
        el("span", "code-text", text),
      ]);
      row.dataset.line = String(number);
      const owner = this.stepByLine.get(number);
      if (owner) row.dataset.stepId = owner;
      row.addEventListener("click", () => {
        this.options.onPickStep?.(owner ?? null, number);
      });
      this.element.appendChild(row);
    });
  }

  lineCount(): number {
    return this.element.querySelectorAll(".code-line").length;
  }

  stepAt(line: number): string | null {
    return this.stepByLine.get(line) ?? null;
  }

  /** Lines owned by the step, 1-based, empty when it emits nothing. */
  linesOf(stepId: string): number[] {
    const span = this.file?.spans[stepId];
    if (!span) return [];
    const [start, end] = span;
    const lines: number[] = [];
    for (let line = start; line <= end; line++) lines.push(line);
    return lines;
  }

  highlightStep(stepId: string | null): void {
    for (const row of this.element.querySelectorAll(".code-line--focus")) {
      row.classList.remove("code-line--focus");
    }
    if (stepId === null) return;
    for (const row of this.element.querySelectorAll(".code-line")) {
      if ((row as HTMLElement).dataset.stepId === stepId) {
        row.classList.add("code-line--focus");
      }
    }
  }
}
