import type { StudioApi } from "./api.js";
import { clear, el } from "./dom.js";
import type { ComponentDetail, ControlSpec, InteractionResult } from "./types.js";

export interface InteractionFormOptions {
  /** Step the interaction is anchored at; the server defaults it. */
  anchorStepId?: string;
  /** Present when editing an existing interaction (re-submit as PUT). */
  interactionId?: string;
  /** Starting values; controls fall back to their declared defaults. */
  initialValues?: Record<string, string>;
  onSubmitted?: (result: InteractionResult) => void;
  onCancel?: () => void;
}

/**
 * Form rendered from a component's page schema.  Pages become tabs,
 * controls map to inputs by kind, and submit stays disabled while any
 * value fails its kind check, so an invalid form never reaches the
 * server.
 *
 * A checkbox gates the controls that follow it on the same page (up to
 * the next checkbox): they stay disabled until it is checked.  Gated
 * controls keep their values; the mask decides whether to read them.
 *
 * Keyboard: ArrowUp/ArrowDown move between controls, Enter toggles a
 * checkbox, Ctrl+W submits.
 */
export class InteractionForm {
  readonly element: HTMLElement;
  private values: Record<string, string> = {};
  private inputs = new Map<string, HTMLInputElement | HTMLSelectElement>();
  private errorSlots = new Map<string, HTMLElement>();
  private submitButton: HTMLButtonElement;
  private activePage = 0;

  constructor(
    private readonly api: StudioApi,
    readonly detail: ComponentDetail,
    private readonly options: InteractionFormOptions = {},
  ) {
    for (const control of this.controls()) {
      this.values[control.name] = options.initialValues?.[control.name] ?? control.default;
    }
    this.submitButton = el("button", "form-submit", options.interactionId ? "Apply" : "OK");
    this.submitButton.type = "button";
    this.submitButton.addEventListener("click", () => void this.submit());
    this.element = el("div", "interaction-form");
    this.element.addEventListener("keydown", (event) => this.handleKey(event));
    this.renderAll();
  }

  private controls(): ControlSpec[] {
    return this.detail.pages.flatMap((page) => page.controls);
  }

  value(name: string): string {
    return this.values[name] ?? "";
  }

  setValue(name: string, value: string): void {
    if (!(name in this.values)) return;
    this.values[name] = value;
    const input = this.inputs.get(name);
    if (input instanceof HTMLInputElement && input.type === "checkbox") {
      input.checked = value === "1";
    } else if (input) {
      input.value = value;
    }
    this.revalidate();
  }

  /** Per-control messages for values that fail their kind check. */
  validationErrors(): Record<string, string> {
    const problems: Record<string, string> = {};
    for (const control of this.controls()) {
      const value = this.value(control.name);
      if (control.kind === "number") {
        if (value.trim() === "" || Number.isNaN(Number(value))) {
          problems[control.name] = `not a number: ${value}`;
        }
      } else if (control.kind === "checkbox") {
        if (value !== "0" && value !== "1") {
          problems[control.name] = "checkbox takes 0 or 1";
        }
      } else if (control.kind === "choice") {
        if (!control.options.includes(value)) {
          problems[control.name] = `not an option: ${value}`;
        }
      }
    }
    return problems;
  }

  /**
   * Validate and send.  Returns the server outcome, or null when
   * validation failed and nothing was sent.
   */
  async submit(): Promise<InteractionResult | null> {
    const problems = this.validationErrors();
    this.showErrors(problems);
    if (Object.keys(problems).length > 0) return null;
    const result = this.options.interactionId
      ? await this.api.modifyInteraction(this.options.interactionId, { ...this.values })
      : await this.api.interact(this.detail.id, { ...this.values }, this.options.anchorStepId);
    this.options.onSubmitted?.(result);
    return result;
  }

  showPage(index: number): void {
    if (index < 0 || index >= this.detail.pages.length) return;
    this.activePage = index;
    this.renderAll();
  }

  private handleKey(event: KeyboardEvent): void {
    if (event.key === "w" && event.ctrlKey) {
      event.preventDefault();
      void this.submit();
      return;
    }
    if (event.key === "Escape") {
      this.options.onCancel?.();
      return;
    }
    if (event.key === "ArrowDown" || event.key === "ArrowUp") {
      event.preventDefault();
      this.moveFocus(event.key === "ArrowDown" ? 1 : -1);
      return;
    }
    if (event.key === "Enter") {
      const target = event.target;
      if (target instanceof HTMLInputElement && target.type === "checkbox") {
        event.preventDefault();
        target.checked = !target.checked;
        this.setValue(target.name, target.checked ? "1" : "0");
      }
    }
  }

  private moveFocus(delta: number): void {
    const order = [...this.inputs.values()].filter((input) => !input.disabled);
    const active = document.activeElement;
    const position = order.findIndex((input) => input === active);
    const next = order[position + delta] ?? order[position < 0 ? 0 : position];
    next?.focus();
  }

  /** Names of controls currently disabled by an unchecked checkbox. */
  gatedControls(): string[] {
    const gated: string[] = [];
    for (const page of this.detail.pages) {
      let gate: boolean | null = null;
      for (const control of page.controls) {
        if (control.kind === "checkbox") {
          gate = this.value(control.name) !== "1";
        } else if (gate) {
          gated.push(control.name);
        }
      }
    }
    return gated;
  }

  private revalidate(): void {
    const gated = new Set(this.gatedControls());
    for (const [name, input] of this.inputs) {
      input.disabled = gated.has(name);
    }
    this.showErrors(this.validationErrors());
  }

  private showErrors(problems: Record<string, string>): void {
    for (const [name, slot] of this.errorSlots) {
      slot.textContent = problems[name] ?? "";
    }
    this.submitButton.disabled = Object.keys(problems).length > 0;
  }

  private renderAll(): void {
    clear(this.element);
    this.inputs.clear();
    this.errorSlots.clear();
    this.element.appendChild(el("h2", "form-title", this.detail.name));

    if (this.detail.pages.length > 1) {
      const tabs = el("div", "form-tabs");
      this.detail.pages.forEach((page, index) => {
        const tab = el("button", "form-tab", page.id);
        tab.type = "button";
        if (index === this.activePage) tab.classList.add("form-tab--active");
        tab.addEventListener("click", () => this.showPage(index));
        tabs.appendChild(tab);
      });
      this.element.appendChild(tabs);
    }

    const page = this.detail.pages[this.activePage];
    const body = el("div", "form-page");
    for (const control of page?.controls ?? []) {
      body.appendChild(this.renderControl(control));
    }
    this.element.appendChild(body);
    this.element.appendChild(el("div", "form-actions", "", [this.submitButton]));
    this.revalidate();
  }

  private renderControl(control: ControlSpec): HTMLElement {
    const label = el("label", "form-label", control.label);
    label.htmlFor = control.name;
    let input: HTMLInputElement | HTMLSelectElement;
    if (control.kind === "choice") {
      input = el("select", "form-input");
      for (const option of control.options) {
        const entry = document.createElement("option");
        entry.value = option;
        entry.textContent = option;
        input.appendChild(entry);
      }
      input.value = this.value(control.name);
    } else {
      input = el("input", "form-input");
      if (control.kind === "checkbox") {
        input.type = "checkbox";
        input.checked = this.value(control.name) === "1";
      } else {
        input.type = "text";
        input.value = this.value(control.name);
      }
    }
    input.id = control.name;
    input.name = control.name;
    input.addEventListener("input", () => {
      if (input instanceof HTMLInputElement && input.type === "checkbox") {
        this.values[control.name] = input.checked ? "1" : "0";
      } else {
        this.values[control.name] = input.value;
      }
      this.revalidate();
    });
    this.inputs.set(control.name, input);

    const error = el("span", "form-error");
    this.errorSlots.set(control.name, error);
    return el("div", `form-row form-row--${control.kind}`, "", [label, input, error]);
  }
}
