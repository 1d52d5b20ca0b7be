import { ApiError, StudioApi, type HttpTransport } from "./api.js";
import { CodeView } from "./codeView.js";
import { ComponentsBrowser } from "./componentsBrowser.js";
import { clear, el } from "./dom.js";
import { InteractionForm } from "./interactionForm.js";
import { MoviePlayer, TimelinePanel } from "./timeline.js";
import { TreeView, type SelectedStep } from "./treeView.js";
import type { ComponentDetail } from "./types.js";

interface ToolbarButton {
  id: string;
  label: string;
  /** Enabled for this selection; null means "needs any selection". */
  usable: (selection: SelectedStep | null) => boolean;
  run: (selection: SelectedStep | null) => Promise<void>;
}

const needsStep = (s: SelectedStep | null): s is SelectedStep =>
  s !== null && s.kind !== "root";

/**
 * The studio shell: tree editor, components browser, interaction
 * forms, code pane, and timeline, glued to one project session over
 * HTTP.  The server stays authoritative; every action round-trips and
 * the views re-render from fresh snapshots, so a refused operation
 * changes nothing locally.
 */
export class Studio {
  readonly element: HTMLElement;
  readonly api: StudioApi;
  readonly tree: TreeView;
  readonly browser: ComponentsBrowser;
  readonly timeline: TimelinePanel;
  readonly movie: MoviePlayer;
  readonly codeView: CodeView;
  private formHost: HTMLElement;
  private errorBanner: HTMLElement;
  private toolbar: HTMLElement;
  private buttons = new Map<string, HTMLButtonElement>();
  private activeForm: InteractionForm | null = null;

  constructor(transport: HttpTransport, movieFrameDelayMs = 400) {
    this.api = new StudioApi(transport);
    this.tree = new TreeView({ onSelect: () => this.refreshToolbar() });
    this.browser = new ComponentsBrowser(this.api, {
      onOpen: (detail) => this.openForm(detail),
    });
    this.timeline = new TimelinePanel(this.api, {
      onSeeked: () => void this.refresh(),
      onSeekError: (error) => this.showError(error),
    });
    this.movie = new MoviePlayer(this.api, this.tree, {
      frameDelayMs: movieFrameDelayMs,
      onFinished: () => void this.refresh(),
    });
    this.codeView = new CodeView({
      onPickStep: (stepId) => {
        if (stepId) this.tree.select(stepId);
      },
    });

    this.errorBanner = el("div", "studio-error");
    this.formHost = el("div", "studio-form-host");
    this.toolbar = el("div", "studio-toolbar");
    this.buildToolbar();
    this.element = el("div", "studio", "", [
      this.errorBanner,
      this.toolbar,
      el("div", "studio-main", "", [
        el("div", "studio-left", "", [this.tree.element, this.timeline.element, this.movie.captionElement]),
        el("div", "studio-middle", "", [this.browser.element, this.formHost]),
        el("div", "studio-right", "", [this.codeView.element]),
      ]),
    ]);
  }

  async start(): Promise<void> {
    await this.browser.load();
    await this.refresh();
  }

  /** Re-pull tree, code, and timeline from the server. */
  async refresh(): Promise<void> {
    const snapshot = await this.api.tree();
    this.tree.render(snapshot.goals);
    const code = await this.api.code();
    const first = code.files[0];
    if (first) this.codeView.render(first);
    await this.timeline.load();
    this.refreshToolbar();
  }

  openForm(detail: ComponentDetail, interactionId?: string, values?: Record<string, string>): void {
    const selection = this.tree.selected();
    this.activeForm = new InteractionForm(this.api, detail, {
      anchorStepId: interactionId ? undefined : selection?.id,
      interactionId,
      initialValues: values,
      onSubmitted: () => {
        this.closeForm();
        void this.refresh();
      },
      onCancel: () => this.closeForm(),
    });
    clear(this.formHost);
    this.formHost.appendChild(this.activeForm.element);
  }

  currentForm(): InteractionForm | null {
    return this.activeForm;
  }

  closeForm(): void {
    this.activeForm = null;
    clear(this.formHost);
  }

  lastError(): string {
    return this.errorBanner.textContent ?? "";
  }

  private showError(error: ApiError): void {
    this.errorBanner.textContent = error.message;
  }

  /** Run one toolbar action against the current selection. */
  async runAction(id: string): Promise<void> {
    const action = this.actions().find((a) => a.id === id);
    if (!action) throw new Error(`no toolbar action ${id}`);
    const selection = this.tree.selected();
    if (!action.usable(selection)) return;
    this.errorBanner.textContent = "";
    try {
      await action.run(selection);
    } catch (error) {
      if (!(error instanceof ApiError)) throw error;
      this.showError(error);
      return;
    }
    await this.refresh();
  }

  private actions(): ToolbarButton[] {
    const api = this.api;
    return [
      {
        id: "add-comment",
        label: "New Comment",
        usable: (s) => s !== null,
        run: async (s) => {
          const label = window.prompt("Comment label", "note") ?? "";
          if (!label) return;
          await api.treeOp({ op: "add-comment", parentId: s!.id, label });
        },
      },
      {
        id: "edit",
        label: "Edit Label",
        usable: needsStep,
        run: async (s) => {
          const label = window.prompt("New label", s!.label) ?? "";
          if (!label) return;
          await api.treeOp({ op: "edit", stepId: s!.id, label });
        },
      },
      {
        id: "delete",
        label: "Delete",
        usable: needsStep,
        run: async (s) => {
          await api.treeOp({ op: "delete", stepIds: [s!.id] });
        },
      },
      {
        id: "move-up",
        label: "Move Up",
        usable: needsStep,
        run: async (s) => {
          await api.treeOp({ op: "move", stepIds: [s!.id], direction: "up" });
        },
      },
      {
        id: "move-down",
        label: "Move Down",
        usable: needsStep,
        run: async (s) => {
          await api.treeOp({ op: "move", stepIds: [s!.id], direction: "down" });
        },
      },
      {
        id: "toggle",
        label: "Enable/Disable",
        usable: needsStep,
        run: async (s) => {
          await api.treeOp({ op: s!.enabled ? "disable" : "enable", stepIds: [s!.id] });
        },
      },
      {
        id: "cut",
        label: "Cut",
        usable: needsStep,
        run: async (s) => {
          await api.treeOp({ op: "cut", stepIds: [s!.id] });
        },
      },
      {
        id: "copy",
        label: "Copy",
        usable: needsStep,
        run: async (s) => {
          await api.treeOp({ op: "copy", stepIds: [s!.id] });
        },
      },
      {
        id: "paste",
        label: "Paste",
        usable: (s) => s !== null,
        run: async (s) => {
          await api.treeOp({ op: "paste", targetId: s!.id });
        },
      },
      {
        // only generated steps belong to an interaction
        id: "modify",
        label: "Modify",
        usable: (s) => needsStep(s) && s.interaction !== null,
        run: async (s) => {
          const record = await api.interactionDetail(s!.interaction!);
          const detail = await api.component(record.componentId);
          this.openForm(detail, record.interactionId, record.values);
        },
      },
      {
        id: "code-behind",
        label: "Code Behind",
        usable: needsStep,
        run: async (s) => {
          this.codeView.highlightStep(s!.id);
          await api.codeBehind(s!.id);
        },
      },
    ];
  }

  private buildToolbar(): void {
    for (const action of this.actions()) {
      const button = el("button", "toolbar-button", action.label);
      button.type = "button";
      button.dataset.action = action.id;
      button.addEventListener("click", () => void this.runAction(action.id));
      this.buttons.set(action.id, button);
      this.toolbar.appendChild(button);
    }
  }

  private refreshToolbar(): void {
    const selection = this.tree.selected();
    for (const action of this.actions()) {
      const button = this.buttons.get(action.id);
      if (button) button.disabled = !action.usable(selection);
    }
  }
}
