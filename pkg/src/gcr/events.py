"""Events: every mutation of a project, as replayable data.

Each user-level mutation is one event with a self-contained payload.
``apply_event`` is the single interpreter for events; committing a live
mutation and replaying history both go through it, so a log replay
reconstructs byte-identical state.  Generated ids come from counters
inside the state, which makes minting deterministic; events also record
the ids they produced so a replay can verify itself.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .components import ComponentLibrary
from .errors import (
    AtBoundary,
    DuplicateGoal,
    EmptyLabel,
    OverlappingSelection,
    ReplayMismatch,
    RootImmutable,
    UnknownInteraction,
    UnknownStep,
)
from .interactions import (
    perform_delete_interaction,
    perform_interaction,
    perform_modify,
)
from .model import FIRST_STEP_LABEL, ROOT_LABEL, Goal, ProjectState, Step

EVENT_KINDS = (
    "interaction", "modifyInteraction", "deleteInteraction",
    "addComment", "editLabel", "deleteStep", "moveStep", "setEnabled",
    "clipboardCut", "paste", "batch", "addGoal",
)


@dataclass
class Event:
    index: int  # 1-based position in the log
    kind: str
    payload: dict
    result_ids: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "index": self.index,
            "kind": self.kind,
            "payload": self.payload,
            "resultIds": list(self.result_ids),
        }

    @staticmethod
    def from_dict(data: dict) -> "Event":
        return Event(data["index"], data["kind"], data["payload"], list(data["resultIds"]))


# --- plain tree operations ---------------------------------------------

def _require_step(state: ProjectState, step_id: str) -> tuple:
    located = state.locate(step_id)
    if located[3].kind == "root":
        raise RootImmutable(f"step {step_id!r} is a goal root")
    return located


def _apply_add_comment(state: ProjectState, payload: dict, library) -> list[str]:
    label = payload["label"]
    if not label.strip():
        raise EmptyLabel("comment label is empty")
    _, _, _, parent = state.locate(payload["parentId"])
    step = Step(state.mint_step_id(), label, "comment")
    parent.children.append(step)
    return [step.step_id]


def _apply_edit_label(state: ProjectState, payload: dict, library) -> list[str]:
    _, _, _, step = _require_step(state, payload["stepId"])
    if not payload["label"].strip():
        raise EmptyLabel("step label is empty")
    step.label = payload["label"]
    return []


def _apply_delete_step(state: ProjectState, payload: dict, library) -> list[str]:
    _, parent, index, _ = _require_step(state, payload["stepId"])
    del parent.children[index]
    return []


def _apply_move_step(state: ProjectState, payload: dict, library) -> list[str]:
    _, parent, index, _ = _require_step(state, payload["stepId"])
    direction = payload["direction"]
    siblings = parent.children
    if direction == "up":
        if index == 0:
            raise AtBoundary("already first among its siblings")
        siblings[index - 1], siblings[index] = siblings[index], siblings[index - 1]
    elif direction == "down":
        if index == len(siblings) - 1:
            raise AtBoundary("already last among its siblings")
        siblings[index], siblings[index + 1] = siblings[index + 1], siblings[index]
    else:
        raise AtBoundary(f"unknown direction {direction!r}")
    return []


def _apply_set_enabled(state: ProjectState, payload: dict, library) -> list[str]:
    _, _, _, step = _require_step(state, payload["stepId"])
    step.enabled = bool(payload["enabled"])
    return []


def _apply_add_goal(state: ProjectState, payload: dict, library) -> list[str]:
    name = payload["name"]
    if not name.strip():
        raise EmptyLabel("goal name is empty")
    if any(g.name == name for g in state.goals):
        raise DuplicateGoal(f"goal {name!r} already exists")
    root = Step(state.mint_step_id(), ROOT_LABEL, "root")
    first = Step(state.mint_step_id(), FIRST_STEP_LABEL, "comment")
    root.children.append(first)
    state.goals.append(Goal(name, root))
    return [root.step_id, first.step_id]


def _check_no_overlap(state: ProjectState, step_ids: list[str]) -> None:
    subtrees: list[set[str]] = []
    for step_id in step_ids:
        _, _, _, step = state.locate(step_id)
        ids = {s.step_id for s in _subtree(step)}
        subtrees.append(ids)
    for i, ids in enumerate(subtrees):
        for j, other in enumerate(subtrees):
            if i != j and step_ids[j] in ids:
                raise OverlappingSelection(
                    f"step {step_ids[j]!r} is inside the subtree of {step_ids[i]!r}")


def _subtree(step: Step):
    yield step
    for child in step.children:
        yield from _subtree(child)


def document_order(state: ProjectState, step_ids: list[str]) -> list[str]:
    """Sort ids by their pre-order position across all goals."""
    order = {s.step_id: i for i, s in enumerate(state.iter_steps(include_roots=True))}
    missing = [sid for sid in step_ids if sid not in order]
    if missing:
        raise UnknownStep(f"no step {missing[0]!r}")
    return sorted(step_ids, key=order.__getitem__)


def _apply_clipboard_cut(state: ProjectState, payload: dict, library) -> list[str]:
    step_ids = list(payload["stepIds"])
    for step_id in step_ids:
        _require_step(state, step_id)
    _check_no_overlap(state, step_ids)
    for step_id in document_order(state, step_ids):
        _, parent, index, _ = state.locate(step_id)
        del parent.children[index]
    return []


def _apply_paste(state: ProjectState, payload: dict, library) -> list[str]:
    _, _, _, target = state.locate(payload["targetId"])
    minted: list[str] = []

    # Resolve interaction records first: a cut-sourced paste re-points
    # the original record at the new steps, a copy mints a clone.
    # Walk keys in the order they appear in the pasted items, never in
    # dict order: the canonical file writer sorts object keys, so dict
    # order would make a reloaded log mint clone ids differently.
    ordered_keys: list[str] = []

    def collect(template: dict) -> None:
        key = template["record"]
        if key and key not in ordered_keys:
            ordered_keys.append(key)
        for child in template["children"]:
            collect(child)

    for template in payload["items"]:
        collect(template)
    for key in payload["records"]:
        if key not in ordered_keys:
            ordered_keys.append(key)

    record_ids: dict[str, str] = {}
    for key in ordered_keys:
        spec = payload["records"][key]
        if spec["mode"] == "original":
            record = state.records.get(spec["id"])
            if record is None:
                raise UnknownInteraction(f"no interaction {spec['id']!r}")
            record_ids[key] = record.interaction_id
        else:
            from .model import InteractionRecord

            interaction_id = state.mint_interaction_id()
            state.records[interaction_id] = InteractionRecord(
                interaction_id=interaction_id,
                component_id=spec["component"],
                anchor_step_id=spec["anchor"],
                page_values=dict(spec["values"]),
                order_index=len(state.records),
            )
            record_ids[key] = interaction_id
            minted.append(interaction_id)

    def build(template: dict) -> Step:
        step = Step(
            step_id=state.mint_step_id(),
            label=template["label"],
            kind=template["kind"],
            enabled=template["enabled"],
            interaction_id=record_ids[template["record"]] if template["record"] else None,
            slot=template["slot"],
            code_lines=list(template["code"]),
            info_lines=list(template["info"]),
        )
        minted.append(step.step_id)
        if step.interaction_id is not None:
            record = state.records[step.interaction_id]
            slot = step.slot if step.slot is not None else -1
            replaced = False
            for i, (entry_slot, _) in enumerate(record.generated):
                if entry_slot == slot:
                    record.generated[i] = (entry_slot, step.step_id)
                    replaced = True
                    break
            if not replaced:
                record.generated.append((slot, step.step_id))
                record.generated.sort(key=lambda e: e[0])
        step.children = [build(c) for c in template["children"]]
        return step

    for template in payload["items"]:
        target.children.append(build(template))
    return minted


_BATCH_OPS = ("delete", "moveUp", "moveDown", "enable", "disable")


def _apply_batch(state: ProjectState, payload: dict, library) -> list[str]:
    op = payload["op"]
    if op not in _BATCH_OPS:
        raise UnknownStep(f"unknown batch op {op!r}")  # pragma: no cover - session guards
    step_ids = list(payload["stepIds"])
    for step_id in step_ids:
        _require_step(state, step_id)
    ordered = document_order(state, step_ids)
    if op == "delete":
        _check_no_overlap(state, step_ids)
        ordered = list(reversed(ordered))
        for step_id in ordered:
            _apply_delete_step(state, {"stepId": step_id}, library)
    elif op in ("moveUp", "moveDown"):
        if op == "moveDown":
            ordered = list(reversed(ordered))
        direction = "up" if op == "moveUp" else "down"
        for step_id in ordered:
            _apply_move_step(state, {"stepId": step_id, "direction": direction}, library)
    else:
        for step_id in ordered:
            _apply_set_enabled(state, {"stepId": step_id, "enabled": op == "enable"}, library)
    return []


def _apply_interaction(state: ProjectState, payload: dict, library: ComponentLibrary) -> list[str]:
    return perform_interaction(state, library, payload)


def _apply_modify(state: ProjectState, payload: dict, library: ComponentLibrary) -> list[str]:
    return perform_modify(state, library, payload)


def _apply_delete_interaction(state: ProjectState, payload: dict, library) -> list[str]:
    return perform_delete_interaction(state, payload)


_APPLIERS = {
    "addComment": _apply_add_comment,
    "editLabel": _apply_edit_label,
    "deleteStep": _apply_delete_step,
    "moveStep": _apply_move_step,
    "setEnabled": _apply_set_enabled,
    "addGoal": _apply_add_goal,
    "clipboardCut": _apply_clipboard_cut,
    "paste": _apply_paste,
    "batch": _apply_batch,
    "interaction": _apply_interaction,
    "modifyInteraction": _apply_modify,
    "deleteInteraction": _apply_delete_interaction,
}


def apply_event(state: ProjectState, event: Event, library: ComponentLibrary) -> list[str]:
    """Apply one event in place; returns the ids it minted.

    Raises the operation's own error on any violated precondition, in
    which case the state may be half-mutated: callers apply to a scratch
    clone and swap on success, which is what makes mutations atomic.
    """
    applier = _APPLIERS.get(event.kind)
    if applier is None:
        raise ReplayMismatch(f"unknown event kind {event.kind!r}")
    return applier(state, event.payload, library)


def replay(
    initial: ProjectState,
    events: list[Event],
    upto: int | None = None,
    library: ComponentLibrary | None = None,
    base: tuple[int, ProjectState] | None = None,
) -> ProjectState:
    """Fold events over the initial state, verifying recorded ids.

    ``base`` short-circuits from a snapshot: (index, state) meaning
    ``state`` already reflects the first ``index`` events.
    """
    upto = len(events) if upto is None else upto
    start = 0
    state = initial.clone()
    if base is not None and base[0] <= upto:
        start, snapshot = base
        state = snapshot.clone()
    for event in events[start:upto]:
        minted = apply_event(state, event, library)
        if event.result_ids and minted != event.result_ids:
            raise ReplayMismatch(
                f"event {event.index} minted {minted}, log says {event.result_ids}")
    return state
