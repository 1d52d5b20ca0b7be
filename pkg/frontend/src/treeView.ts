import { clear, el } from "./dom.js";
import type { Goal, Step, StepKind } from "./types.js";

export interface TreeViewOptions {
  /** Called after a click or keyboard move changes the selection. */
  onSelect?: (step: SelectedStep | null) => void;
}

export interface SelectedStep {
  id: string;
  kind: StepKind;
  label: string;
  enabled: boolean;
  interaction: string | null;
}

/**
 * Renders the goal forest as nested lists.  The view is rebuilt from
 * every server snapshot; only the selection and collapse set survive a
 * render, and the selection is dropped when its step no longer exists.
 */
export class TreeView {
  readonly element: HTMLElement;
  private steps = new Map<string, SelectedStep>();
  private selectedId: string | null = null;
  private collapsed = new Set<string>();
  private highlighted: string | null = null;

  constructor(private readonly options: TreeViewOptions = {}) {
    this.element = el("div", "tree-view");
  }

  render(goals: Goal[]): void {
    this.steps.clear();
    clear(this.element);
    for (const goal of goals) {
      const heading = el("div", "tree-goal", `goal ${goal.name}`);
      this.element.appendChild(heading);
      this.element.appendChild(this.renderStep(goal.root, true));
    }
    if (this.selectedId !== null && !this.steps.has(this.selectedId)) {
      this.selectedId = null;
      this.options.onSelect?.(null);
    }
    this.applySelection();
  }

  private renderStep(step: Step, subtreeEnabled: boolean): HTMLElement {
    const effectiveEnabled = subtreeEnabled && step.enabled;
    this.steps.set(step.id, {
      id: step.id,
      kind: step.kind,
      label: step.label,
      enabled: step.enabled,
      interaction: step.interaction,
    });

    const label = el("span", `tree-label tree-label--${step.kind}`, step.label);
    label.dataset.stepId = step.id;
    label.addEventListener("click", () => this.select(step.id));
    const row = el("div", "tree-row", "", [label]);
    if (!step.enabled) {
      row.appendChild(el("span", "tree-badge", "disabled"));
    }

    const item = el("li", "tree-step", "", [row]);
    item.dataset.stepId = step.id;
    // dim the entire subtree under a disabled step
    if (!effectiveEnabled) item.classList.add("tree-step--off");
    if (step.children.length > 0 && !this.collapsed.has(step.id)) {
      const children = el("ul", "tree-children");
      for (const child of step.children) {
        children.appendChild(this.renderStep(child, effectiveEnabled));
      }
      item.appendChild(children);
    }
    if (step.kind === "root") {
      return el("ul", "tree-root", "", [item]);
    }
    return item;
  }

  select(stepId: string | null): void {
    if (stepId !== null && !this.steps.has(stepId)) return;
    this.selectedId = stepId;
    this.applySelection();
    this.options.onSelect?.(this.selected());
  }

  selected(): SelectedStep | null {
    if (this.selectedId === null) return null;
    return this.steps.get(this.selectedId) ?? null;
  }

  /** Flash one step, used by movie playback to mark the frame focus. */
  highlight(stepId: string | null): void {
    this.highlighted = stepId;
    for (const label of this.element.querySelectorAll(".tree-label--focus")) {
      label.classList.remove("tree-label--focus");
    }
    if (stepId !== null) {
      this.labelFor(stepId)?.classList.add("tree-label--focus");
    }
  }

  toggleCollapse(stepId: string): void {
    if (this.collapsed.has(stepId)) {
      this.collapsed.delete(stepId);
    } else {
      this.collapsed.add(stepId);
    }
  }

  /** Ids of every rendered step, in document order. */
  visibleIds(): string[] {
    const ids: string[] = [];
    for (const node of this.element.querySelectorAll("li.tree-step")) {
      const id = (node as HTMLElement).dataset.stepId;
      if (id) ids.push(id);
    }
    return ids;
  }

  private labelFor(stepId: string): HTMLElement | null {
    for (const label of this.element.querySelectorAll(".tree-label")) {
      if ((label as HTMLElement).dataset.stepId === stepId) {
        return label as HTMLElement;
      }
    }
    return null;
  }

  private applySelection(): void {
    for (const label of this.element.querySelectorAll(".tree-label--selected")) {
      label.classList.remove("tree-label--selected");
    }
    if (this.selectedId !== null) {
      this.labelFor(this.selectedId)?.classList.add("tree-label--selected");
    }
    if (this.highlighted !== null) this.highlight(this.highlighted);
  }
}
