import type { StudioApi } from "./api.js";
import { clear, el } from "./dom.js";
import type { ComponentDetail, ComponentSummary } from "./types.js";

export interface ComponentsBrowserOptions {
  /** Called when the user confirms the selected component (Enter). */
  onOpen?: (detail: ComponentDetail) => void;
  /** Narrow every search to one domain. */
  domain?: string;
}

/**
 * Component list with incremental keyboard search: every printable key
 * extends the query, the server filters by name prefix, and the first
 * match becomes the selection.  Backspace widens the query again and
 * Enter opens the selected component's interaction form.
 */
export class ComponentsBrowser {
  readonly element: HTMLElement;
  private query = "";
  private matches: ComponentSummary[] = [];
  private selectedIndex = -1;
  private queryLabel: HTMLElement;
  private list: HTMLElement;

  constructor(
    private readonly api: StudioApi,
    private readonly options: ComponentsBrowserOptions = {},
  ) {
    this.queryLabel = el("div", "browser-query");
    this.list = el("ul", "browser-list");
    this.element = el("div", "components-browser", "", [this.queryLabel, this.list]);
    this.element.tabIndex = 0;
    this.element.addEventListener("keydown", (event) => {
      void this.handleKey(event.key);
      event.preventDefault();
    });
  }

  /** Populate the unfiltered list. */
  async load(): Promise<void> {
    await this.refresh();
  }

  /**
   * One keystroke of the search flow.  Returns once the view reflects
   * the key, including any server round-trip it triggered.
   */
  async handleKey(key: string): Promise<void> {
    if (key === "Enter") {
      await this.openSelected();
      return;
    }
    if (key === "Backspace") {
      if (this.query.length === 0) return;
      this.query = this.query.slice(0, -1);
      await this.refresh();
      return;
    }
    if (key === "ArrowDown" || key === "ArrowUp") {
      this.moveSelection(key === "ArrowDown" ? 1 : -1);
      return;
    }
    if (key.length === 1) {
      this.query += key.toLowerCase();
      await this.refresh();
    }
  }

  selected(): ComponentSummary | null {
    return this.matches[this.selectedIndex] ?? null;
  }

  currentQuery(): string {
    return this.query;
  }

  currentMatches(): ComponentSummary[] {
    return [...this.matches];
  }

  private async refresh(): Promise<void> {
    const index = await this.api.components(this.query, this.options.domain);
    this.matches = index.components;
    this.selectedIndex = this.matches.length > 0 ? 0 : -1;
    this.renderList();
  }

  private moveSelection(delta: number): void {
    if (this.matches.length === 0) return;
    const next = this.selectedIndex + delta;
    if (next < 0 || next >= this.matches.length) return;
    this.selectedIndex = next;
    this.renderList();
  }

  private async openSelected(): Promise<void> {
    const pick = this.selected();
    if (pick === null) return;
    const detail = await this.api.component(pick.id);
    this.options.onOpen?.(detail);
  }

  private renderList(): void {
    this.queryLabel.textContent = this.query === "" ? "(all components)" : this.query;
    clear(this.list);
    if (this.matches.length === 0) {
      this.list.appendChild(el("li", "browser-empty", "no match"));
      return;
    }
    this.matches.forEach((summary, position) => {
      const item = el("li", "browser-item", "", [
        el("span", "browser-name", summary.name),
        el("span", "browser-domain", summary.domain),
      ]);
      item.dataset.componentId = summary.id;
      if (position === this.selectedIndex) item.classList.add("browser-item--selected");
      item.addEventListener("click", () => {
        this.selectedIndex = position;
        this.renderList();
      });
      item.addEventListener("dblclick", () => void this.openSelected());
      this.list.appendChild(item);
    });
  }
}
