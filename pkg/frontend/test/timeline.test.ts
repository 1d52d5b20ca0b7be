import { describe, expect, it } from "vitest";

import { ApiError, StudioApi } from "../src/api.js";
import { MoviePlayer, TimelinePanel } from "../src/timeline.js";
import { TreeView } from "../src/treeView.js";
import type { MovieFrame } from "../src/types.js";
import { FakeBackend } from "./fakeBackend.js";

describe("TimelinePanel", () => {
  it("loads the slider bounds from the timeline", async () => {
    const backend = new FakeBackend();
    const panel = new TimelinePanel(new StudioApi(backend));
    await panel.load();
    expect(panel.length()).toBe(3);
    expect(panel.head()).toBe(3);
    expect(panel.slider.max).toBe("3");
    expect(panel.slider.value).toBe("3");
  });

  it("confirms a seek with the server before reporting it", async () => {
    const backend = new FakeBackend();
    const heads: number[] = [];
    const panel = new TimelinePanel(new StudioApi(backend), {
      onSeeked: (head) => heads.push(head),
    });
    await panel.load();
    await panel.seekTo(1);
    expect(backend.head).toBe(1);
    expect(heads).toEqual([1]);
    expect(panel.slider.value).toBe("1");
  });

  it("snaps back when the server refuses the seek", async () => {
    const backend = new FakeBackend();
    const errors: ApiError[] = [];
    const panel = new TimelinePanel(new StudioApi(backend), {
      onSeekError: (error) => errors.push(error),
    });
    await panel.load();
    backend.failNext(400, "OutOfRange", "no event 9");
    panel.slider.value = "1";
    panel.slider.dispatchEvent(new Event("change"));
    await new Promise((resolve) => setTimeout(resolve, 0));
    expect(panel.slider.value).toBe("3");
    expect(panel.head()).toBe(3);
    expect(errors.map((e) => e.errorName)).toEqual(["OutOfRange"]);
  });
});

describe("MoviePlayer", () => {
  it("starts from an empty tree and shows each caption", async () => {
    const backend = new FakeBackend();
    const view = new TreeView();
    const seen: string[] = [];
    const player = new MoviePlayer(new StudioApi(backend), view, {
      onFrame: (frame) => seen.push(frame.caption),
    });
    await player.play(0);
    expect(seen).toEqual([
      'Add comment "The First Step"',
      "Interact with Print Text to Console",
      "Interact with Wait Key/Seconds",
    ]);
    expect(player.captionElement.textContent).toBe("[3] Interact with Wait Key/Seconds");
  });

  it("plays a suffix when asked to start later", async () => {
    const backend = new FakeBackend();
    const player = new MoviePlayer(new StudioApi(backend), new TreeView());
    const frames = await player.play(2);
    expect(frames.map((f) => f.index)).toEqual([3]);
  });

  it("pause leaves the prefix on screen", async () => {
    const backend = new FakeBackend();
    const view = new TreeView();
    const player: MoviePlayer = new MoviePlayer(new StudioApi(backend), view, {
      onFrame: (frame: MovieFrame) => {
        if (frame.index === 1) player.pause();
      },
    });
    const frames = await player.play(0);
    expect(frames.map((f) => f.index)).toEqual([1]);
    expect(player.isPlaying()).toBe(false);
    const labels = [...view.element.querySelectorAll(".tree-label")].map(
      (node) => node.textContent,
    );
    expect(labels).toEqual(["Start Point (NOT STEP)", "The First Step"]);
  });

  it("highlights the step each frame touched while playing", async () => {
    const backend = new FakeBackend();
    const view = new TreeView();
    const focused: (string | null)[] = [];
    const player = new MoviePlayer(new StudioApi(backend), view, {
      onFrame: () => {
        const focus = view.element.querySelector(".tree-label--focus");
        focused.push((focus as HTMLElement | null)?.dataset.stepId ?? null);
      },
    });
    await player.play(0);
    expect(focused).toEqual(["s2", "s3", "s4"]);
    expect(view.element.querySelector(".tree-label--focus")).toBeNull();
  });
});
