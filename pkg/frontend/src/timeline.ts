import { ApiError, type StudioApi } from "./api.js";
import { clear, el } from "./dom.js";
import type { TreeView } from "./treeView.js";
import type { MovieFrame } from "./types.js";

export interface TimelinePanelOptions {
  /** Receives the rewound tree after every successful seek. */
  onSeeked?: (head: number) => void;
  onSeekError?: (error: ApiError) => void;
}

/**
 * Slider over the event log.  Dragging to position t asks the server
 * to move its head there; the tree and code views are then refreshed
 * from the server, never patched locally.  A refused seek snaps the
 * slider back to the last confirmed head.
 */
export class TimelinePanel {
  readonly element: HTMLElement;
  readonly slider: HTMLInputElement;
  private headValue = 0;
  private lengthValue = 0;
  private positionLabel: HTMLElement;

  constructor(
    private readonly api: StudioApi,
    private readonly options: TimelinePanelOptions = {},
  ) {
    this.slider = el("input", "timeline-slider");
    this.slider.type = "range";
    this.slider.min = "0";
    this.slider.addEventListener("change", () => {
      void this.seekTo(Number(this.slider.value));
    });
    this.positionLabel = el("span", "timeline-position");
    this.element = el("div", "timeline-panel", "", [this.slider, this.positionLabel]);
  }

  async load(): Promise<void> {
    const info = await this.api.timeline();
    this.lengthValue = info.length;
    this.headValue = info.head;
    this.slider.max = String(info.length);
    this.slider.value = String(info.head);
    this.renderPosition();
  }

  head(): number {
    return this.headValue;
  }

  length(): number {
    return this.lengthValue;
  }

  async seekTo(t: number): Promise<void> {
    try {
      const outcome = await this.api.seek(t);
      this.headValue = outcome.head;
      this.lengthValue = outcome.length;
      this.slider.max = String(outcome.length);
      this.slider.value = String(outcome.head);
      this.renderPosition();
      this.options.onSeeked?.(outcome.head);
    } catch (error) {
      if (!(error instanceof ApiError)) throw error;
      this.slider.value = String(this.headValue);
      this.options.onSeekError?.(error);
    }
  }

  private renderPosition(): void {
    this.positionLabel.textContent = `${this.headValue} / ${this.lengthValue}`;
  }
}

export interface MoviePlayerOptions {
  /** Milliseconds between frames; 0 plays as fast as rendering allows. */
  frameDelayMs?: number;
  onFrame?: (frame: MovieFrame) => void;
  onFinished?: () => void;
}

/**
 * Plays the edit history as a movie: the tree view is cleared, then
 * each frame's snapshot is rendered in event order with its caption,
 * highlighting the step the frame touched.
 */
export class MoviePlayer {
  readonly captionElement: HTMLElement;
  private playing = false;
  private played: MovieFrame[] = [];

  constructor(
    private readonly api: StudioApi,
    private readonly view: TreeView,
    private readonly options: MoviePlayerOptions = {},
  ) {
    this.captionElement = el("div", "movie-caption");
  }

  /** Frames rendered by the last play, in the order they appeared. */
  playedFrames(): MovieFrame[] {
    return [...this.played];
  }

  isPlaying(): boolean {
    return this.playing;
  }

  /** Stop after the frame currently on screen. */
  pause(): void {
    this.playing = false;
  }

  async play(from = 0): Promise<MovieFrame[]> {
    const info = await this.api.movie(from);
    this.played = [];
    this.playing = true;
    this.view.render([]);
    clear(this.captionElement);
    for (const frame of info.frames) {
      if (!this.playing) break;
      this.view.render(frame.goals);
      this.view.highlight(frame.focus);
      this.captionElement.textContent = `[${frame.index}] ${frame.caption}`;
      this.played.push(frame);
      this.options.onFrame?.(frame);
      if (this.options.frameDelayMs) {
        await new Promise((resolve) => setTimeout(resolve, this.options.frameDelayMs));
      }
    }
    this.playing = false;
    this.view.highlight(null);
    this.options.onFinished?.();
    return this.playedFrames();
  }
}
