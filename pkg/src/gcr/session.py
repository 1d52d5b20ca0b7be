"""Project session: the live façade every caller talks to.

A session owns the event log, the state at the current head, the
component library, and the clipboard.  Every mutation is committed the
same way: apply the candidate event to a scratch clone, and only on
success append it to the log and swap the clone in.  A failed operation
therefore leaves no trace, and listeners only ever see committed
events.

Seeking moves the head without touching the log; committing while
rewound truncates the future first (editing the past forks history).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

from .components import Component, ComponentLibrary
from .errors import ClipboardEmpty, OutOfRange, UnknownStep
from .events import Event, apply_event, document_order, replay
from .model import (
    DEFAULT_GOAL,
    FIRST_STEP_LABEL,
    ProjectState,
    Step,
    initial_state,
)
from .timeline import SNAPSHOT_EVERY, MovieFrame, movie_frames


@dataclass
class PendingInteraction:
    """An interaction form in progress: defaults pre-filled, ready for
    the caller to overwrite values and submit."""

    component_id: str
    anchor_step_id: str
    values: dict[str, str]


@dataclass
class Clipboard:
    """Captured subtrees plus the record info needed to paste them.

    A cut clipboard re-points the original interaction records on first
    paste; any further paste (or any paste of a copy clipboard) clones
    the records instead.
    """

    source: str  # "cut" | "copy"
    items: list[dict] = field(default_factory=list)
    records: dict[str, dict] = field(default_factory=dict)
    consumed: bool = False

    def to_dict(self) -> dict:
        return {
            "source": self.source,
            "items": self.items,
            "records": self.records,
            "consumed": self.consumed,
        }

    @staticmethod
    def from_dict(data: dict) -> "Clipboard":
        return Clipboard(data["source"], data["items"], data["records"], data["consumed"])


def _capture_templates(state: ProjectState, step_ids: list[str]) -> tuple[list[dict], dict]:
    """Deep-copy subtrees into paste templates, collecting the records
    of every generated step involved."""
    records: dict[str, dict] = {}

    def template(step: Step) -> dict:
        key = None
        if step.interaction_id is not None:
            key = step.interaction_id
            if key not in records:
                record = state.records[key]
                records[key] = {
                    "id": record.interaction_id,
                    "component": record.component_id,
                    "anchor": record.anchor_step_id,
                    "values": dict(record.page_values),
                }
            # the cut step id is about to go stale; entries are
            # re-pointed at paste time via the slot
        return {
            "label": step.label,
            "kind": step.kind,
            "enabled": step.enabled,
            "slot": step.slot,
            "code": list(step.code_lines),
            "info": list(step.info_lines),
            "record": key,
            "children": [template(c) for c in step.children],
        }

    items = []
    for step_id in document_order(state, step_ids):
        items.append(template(state.locate(step_id)[3]))
    return items, records


class ProjectSession:
    def __init__(
        self,
        initial: ProjectState,
        events: list[Event],
        library: ComponentLibrary,
        path: str | None = None,
        head: int | None = None,
    ):
        self.initial = initial.clone()
        self.events = events
        self.library = library
        self.path = path
        self.head = len(events) if head is None else head
        self.snapshots: dict[int, ProjectState] = {}
        self.listeners: list[Callable[[Event], None]] = []
        self.clipboard: Clipboard | None = None
        self.state = self._state_at(self.head)

    # --- construction -----------------------------------------------------

    @classmethod
    def create(
        cls,
        project_id: str,
        library: ComponentLibrary,
        library_path: str,
        path: str | None = None,
    ) -> "ProjectSession":
        initial = initial_state(project_id, library.library_id, library_path)
        session = cls(initial, [], library, path=path)
        root_id = session.state.goals[0].root.step_id
        session.add_comment(root_id, FIRST_STEP_LABEL)
        return session

    # --- commit pipeline ---------------------------------------------------

    def _mutate(self, kind: str, payload: dict) -> list[str]:
        trial = self.state.clone()
        event = Event(index=self.head + 1, kind=kind, payload=payload)
        minted = apply_event(trial, event, self.library)
        event.result_ids = minted
        del self.events[self.head:]
        for index in [i for i in self.snapshots if i > self.head]:
            del self.snapshots[index]
        self.events.append(event)
        self.head = len(self.events)
        self.state = trial
        if self.head % SNAPSHOT_EVERY == 0:
            self.snapshots[self.head] = trial.clone()
        for listener in list(self.listeners):
            listener(event)
        return minted

    def _state_at(self, t: int) -> ProjectState:
        candidates = [i for i in self.snapshots if i <= t]
        base = None
        if candidates:
            best = max(candidates)
            base = (best, self.snapshots[best])
        return replay(self.initial, self.events, t, self.library, base=base)

    # --- time machine ------------------------------------------------------

    def seek(self, t: int) -> None:
        if not 0 <= t <= len(self.events):
            raise OutOfRange(f"t={t} outside 0..{len(self.events)}")
        self.state = self._state_at(t)
        self.head = t

    def movie(self, start: int = 0) -> list[MovieFrame]:
        if not 0 <= start <= len(self.events):
            raise OutOfRange(f"start={start} outside 0..{len(self.events)}")
        return movie_frames(self.events, self.library, start)

    # --- steps tree ----------------------------------------------------------

    def add_comment(self, parent_id: str, label: str) -> str:
        return self._mutate("addComment", {"parentId": parent_id, "label": label})[0]

    def edit_label(self, step_id: str, label: str) -> None:
        self._mutate("editLabel", {"stepId": step_id, "label": label})

    def delete_step(self, step_id: str) -> None:
        self._mutate("deleteStep", {"stepId": step_id})

    def move_step(self, step_id: str, direction: str) -> None:
        self._mutate("moveStep", {"stepId": step_id, "direction": direction})

    def set_enabled(self, step_id: str, enabled: bool) -> None:
        self._mutate("setEnabled", {"stepId": step_id, "enabled": enabled})

    def add_goal(self, name: str) -> list[str]:
        return self._mutate("addGoal", {"name": name})

    def cut(self, step_ids: list[str]) -> None:
        items, records = _capture_templates(self.state, step_ids)
        self._mutate("clipboardCut", {"stepIds": list(step_ids)})
        self.clipboard = Clipboard("cut", items, records)

    def copy(self, step_ids: list[str]) -> None:
        items, records = _capture_templates(self.state, step_ids)
        self.clipboard = Clipboard("copy", items, records)

    def paste(self, target_id: str) -> list[str]:
        clip = self.clipboard
        if clip is None:
            raise ClipboardEmpty("nothing was cut or copied")
        original = clip.source == "cut" and not clip.consumed
        records = {}
        for key, record in clip.records.items():
            if original:
                records[key] = {"mode": "original", "id": record["id"]}
            else:
                records[key] = {
                    "mode": "clone",
                    "component": record["component"],
                    "anchor": record["anchor"],
                    "values": dict(record["values"]),
                }
        minted = self._mutate("paste", {
            "targetId": target_id,
            "items": clip.items,
            "records": records,
        })
        clip.consumed = True
        return minted

    def batch(self, op: str, step_ids: list[str]) -> None:
        if op == "cut":
            self.cut(step_ids)
        elif op == "copy":
            self.copy(step_ids)
        else:
            self._mutate("batch", {"op": op, "stepIds": list(step_ids)})

    def search(self, query: str, scope: str = "name") -> list[Step]:
        """Name search matches labels; data search matches submitted
        page values.  An empty query matches every step."""
        hits: list[Step] = []
        for step in self.state.iter_steps():
            if not query:
                hits.append(step)
                continue
            if scope == "name":
                if query.lower() in step.label.lower():
                    hits.append(step)
            else:
                if step.interaction_id is None:
                    continue
                record = self.state.records.get(step.interaction_id)
                if record and any(query.lower() in v.lower()
                                  for v in record.page_values.values()):
                    hits.append(step)
        return hits

    # --- interactions -----------------------------------------------------

    def begin_interaction(self, component_id: str, anchor_step_id: str | None = None) -> PendingInteraction:
        component = self.library.get(component_id)
        anchor = anchor_step_id if anchor_step_id is not None else self.default_anchor()
        self.state.locate(anchor)  # UnknownStep when stale
        return PendingInteraction(component.component_id, anchor, component.default_values())

    def submit_interaction(self, pending: PendingInteraction, values: dict[str, str] | None = None) -> dict:
        merged = dict(pending.values)
        merged.update(values or {})
        minted = self._mutate("interaction", {
            "componentId": pending.component_id,
            "anchorStepId": pending.anchor_step_id,
            "values": merged,
        })
        return {"interactionId": minted[0], "stepIds": minted[1:]}

    def interact(
        self,
        component_id: str,
        values: dict[str, str] | None = None,
        anchor_step_id: str | None = None,
    ) -> dict:
        pending = self.begin_interaction(component_id, anchor_step_id)
        return self.submit_interaction(pending, values)

    def modify_interaction(self, interaction_id: str, values: dict[str, str] | None = None) -> dict:
        record = self.state.record(interaction_id)
        merged = dict(record.page_values)
        merged.update(values or {})
        minted = self._mutate("modifyInteraction", {
            "interactionId": interaction_id,
            "values": merged,
        })
        record = self.state.record(interaction_id)
        return {"interactionId": interaction_id,
                "stepIds": record.step_ids(),
                "freshIds": minted}

    def delete_interaction(self, interaction_id: str) -> None:
        self._mutate("deleteInteraction", {"interactionId": interaction_id})

    # --- helpers ------------------------------------------------------------

    def default_anchor(self, goal_name: str = DEFAULT_GOAL) -> str:
        """The last step of a goal in pre-order; the root when empty."""
        goal = self.state.goal(goal_name)
        step = goal.root
        while step.children:
            step = step.children[-1]
        return step.step_id

    def component(self, component_id: str) -> Component:
        return self.library.get(component_id)

    def timeline_info(self) -> dict:
        return {
            "length": len(self.events),
            "head": self.head,
            "events": [f.to_dict() for f in self.movie(0)],
        }
