"""Time machine: seek, snapshots, and replay-as-movie frames.

The event log is the source of truth; any past state is recovered by
replaying the log from the start (or from a cached snapshot, which is
only ever an accelerator).  Movie frames are derived data: one frame
per event with a human caption and the step to spotlight.
"""

from __future__ import annotations

from dataclasses import dataclass

from .components import ComponentLibrary
from .events import Event

SNAPSHOT_EVERY = 25


@dataclass(frozen=True)
class MovieFrame:
    index: int
    kind: str
    caption: str
    focus: str | None  # step to highlight once the frame applies

    def to_dict(self) -> dict:
        return {
            "index": self.index,
            "kind": self.kind,
            "caption": self.caption,
            "focus": self.focus,
        }


def event_caption(event: Event, library: ComponentLibrary | None = None) -> str:
    p = event.payload
    kind = event.kind
    if kind == "addComment":
        return f"Add comment \"{p['label']}\""
    if kind == "editLabel":
        return f"Rename step {p['stepId']} to \"{p['label']}\""
    if kind == "deleteStep":
        return f"Delete step {p['stepId']}"
    if kind == "moveStep":
        return f"Move step {p['stepId']} {p['direction']}"
    if kind == "setEnabled":
        verb = "Enable" if p["enabled"] else "Disable"
        return f"{verb} step {p['stepId']}"
    if kind == "addGoal":
        return f"Add goal \"{p['name']}\""
    if kind == "clipboardCut":
        return f"Cut {len(p['stepIds'])} step(s)"
    if kind == "paste":
        return f"Paste {len(p['items'])} step(s)"
    if kind == "batch":
        return f"Batch {p['op']} on {len(p['stepIds'])} step(s)"
    if kind == "interaction":
        name = p["componentId"]
        if library is not None and name in library.components:
            name = library.components[name].name
        return f"Interact with {name}"
    if kind == "modifyInteraction":
        return f"Modify interaction {p['interactionId']}"
    if kind == "deleteInteraction":
        return f"Delete interaction {p['interactionId']}"
    return kind


def event_focus(event: Event) -> str | None:
    p = event.payload
    kind = event.kind
    if kind == "addComment":
        return event.result_ids[0] if event.result_ids else None
    if kind == "addGoal":
        return event.result_ids[1] if len(event.result_ids) > 1 else None
    if kind == "interaction":
        return event.result_ids[1] if len(event.result_ids) > 1 else None
    if kind == "modifyInteraction":
        return event.result_ids[0] if event.result_ids else None
    if kind in ("editLabel", "moveStep", "setEnabled"):
        return p["stepId"]
    if kind == "paste":
        return next((rid for rid in event.result_ids if rid.startswith("s")), None)
    return None


def movie_frames(
    events: list[Event],
    library: ComponentLibrary | None = None,
    start: int = 0,
) -> list[MovieFrame]:
    """One frame per committed event from ``start`` (0-based offset into
    the log) to the end, in order."""
    return [
        MovieFrame(e.index, e.kind, event_caption(e, library), event_focus(e))
        for e in events[start:]
    ]
