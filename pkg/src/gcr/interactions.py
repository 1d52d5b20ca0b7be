"""Interactions: the only way generated steps enter the tree.

Submitting an interaction binds page values to mask variables through
the component's matching table, evaluates the mask, and materializes
the resulting step forest relative to the anchor step.  Each generated
step remembers the mask line ("slot") that produced it; modifying the
interaction re-runs the mask and pairs new output with old steps by
slot so surviving steps keep their identity, position, and enabled
flag.  A regeneration that would drop a step still carrying foreign
children (steps of other interactions, or hand-written comments) is
refused atomically with SlotVanished.
"""

from __future__ import annotations

from .components import Component, ComponentLibrary
from .errors import (
    MaskWritesAnchor,
    SlotVanished,
    UnknownInteraction,
    ValidationError,
)
from .mask import Bindings, GeneratedStep, evaluate_mask
from .model import InteractionRecord, ProjectState, Step


def validate_values(component: Component, values: dict[str, str]) -> None:
    """Page values must cover every control exactly and fit its kind."""
    controls = {c.name: c for c in component.controls()}
    for name in values:
        if name not in controls:
            raise ValidationError(name, "unknown control")
    for name, control in controls.items():
        if name not in values:
            raise ValidationError(name, "missing value")
        value = values[name]
        if not isinstance(value, str):
            raise ValidationError(name, "value must be a string")
        if control.kind == "checkbox":
            if value not in ("0", "1"):
                raise ValidationError(name, "checkbox takes 0 or 1")
        elif control.kind == "number":
            try:
                float(value)
            except ValueError:
                raise ValidationError(name, f"not a number: {value!r}")
        elif control.kind == "choice":
            if value not in control.options:
                raise ValidationError(name, f"not an option: {value!r}")


def _run_mask(component: Component, values: dict[str, str]):
    bindings = Bindings(component.bindings_for(values))
    return evaluate_mask(component.mask_script, bindings)


def _materialize(
    state: ProjectState,
    interaction_id: str,
    generated: list[GeneratedStep],
) -> tuple[dict[int, Step], list[str]]:
    """Mint real steps for a whole forest, ids in creation order."""
    by_slot: dict[int, Step] = {}
    minted: list[str] = []
    ordered = sorted(_flatten(generated), key=lambda g: g.slot)
    for g in ordered:
        step = Step(
            step_id=state.mint_step_id(),
            label=g.label,
            kind="generated",
            interaction_id=interaction_id,
            slot=g.slot,
            code_lines=list(g.code_lines),
            info_lines=list(g.info_lines),
        )
        by_slot[g.slot] = step
        minted.append(step.step_id)
    for g in _flatten(generated):
        by_slot[g.slot].children = [by_slot[c.slot] for c in g.children]
    return by_slot, minted


def _flatten(generated: list[GeneratedStep]) -> list[GeneratedStep]:
    out: list[GeneratedStep] = []
    stack = list(reversed(generated))
    while stack:
        g = stack.pop()
        out.append(g)
        stack.extend(reversed(g.children))
    return out


def perform_interaction(state: ProjectState, library: ComponentLibrary, payload: dict) -> list[str]:
    component = library.get(payload["componentId"])
    goal, parent, index, anchor = state.locate(payload["anchorStepId"])
    values = dict(payload["values"])
    validate_values(component, values)
    result = _run_mask(component, values)
    if result.anchor_code or result.anchor_info:
        raise MaskWritesAnchor(
            f"component {component.component_id!r} emits text before any NEWSTEP")

    interaction_id = state.mint_interaction_id()
    by_slot, minted = _materialize(
        state, interaction_id, result.parent_steps + result.anchor_steps)

    siblings = [by_slot[g.slot] for g in result.parent_steps]
    if anchor.kind == "root":
        anchor.children.extend(siblings)
    else:
        parent.children[index + 1:index + 1] = siblings
    anchor.children.extend(by_slot[g.slot] for g in result.anchor_steps)

    record = InteractionRecord(
        interaction_id=interaction_id,
        component_id=component.component_id,
        anchor_step_id=anchor.step_id,
        page_values=values,
        generated=[(slot, by_slot[slot].step_id) for slot in sorted(by_slot)],
        order_index=len(state.records),
    )
    state.records[interaction_id] = record
    return [interaction_id] + minted


def perform_modify(state: ProjectState, library: ComponentLibrary, payload: dict) -> list[str]:
    record = state.record(payload["interactionId"])
    if record.deleted:
        raise UnknownInteraction(f"interaction {record.interaction_id!r} was deleted")
    component = library.get(record.component_id)
    values = dict(payload["values"])
    validate_values(component, values)
    result = _run_mask(component, values)
    if result.anchor_code or result.anchor_info:
        raise MaskWritesAnchor(
            f"component {component.component_id!r} emits text before any NEWSTEP")

    new_by_slot = {g.slot: g for g in _flatten(result.parent_steps + result.anchor_steps)}
    old_entries = dict(record.generated)  # slot -> step id (may be dead)
    live: dict[int, Step] = {}
    for slot, step_id in old_entries.items():
        if state.has_step(step_id):
            live[slot] = state.locate(step_id)[3]

    # Steps whose slot disappeared from this run must not take foreign
    # children (other interactions' steps, comments) down with them.
    drops = {slot: step for slot, step in live.items() if slot not in new_by_slot}
    iid = record.interaction_id
    for step in drops.values():
        for child in step.children:
            if child.interaction_id != iid:
                raise SlotVanished(
                    f"step {step.step_id!r} still carries {child.step_id!r}")

    # Refresh surviving steps in place; they keep id, position, enabled.
    for slot, step in live.items():
        if slot in new_by_slot:
            g = new_by_slot[slot]
            step.label = g.label
            step.code_lines = list(g.code_lines)
            step.info_lines = list(g.info_lines)

    # Splice dropped steps out, their internal children taking their place.
    for slot in sorted(drops):
        step = drops[slot]
        if not state.has_step(step.step_id):
            continue  # already went with an enclosing drop
        _, parent, index, _ = state.locate(step.step_id)
        parent.children[index:index + 1] = step.children
        step.children = []

    # Fresh slots: slots never seen before are created; slots whose old
    # step the user deleted stay deleted (the deletion is sticky), and
    # skipping prunes their whole new subtree.
    fresh_ids: list[str] = []
    fresh_by_slot: dict[int, str] = {}
    placed: dict[int, Step] = {}

    def build(g: GeneratedStep) -> Step:
        step = Step(
            step_id=state.mint_step_id(),
            label=g.label,
            kind="generated",
            interaction_id=iid,
            slot=g.slot,
            code_lines=list(g.code_lines),
            info_lines=list(g.info_lines),
        )
        fresh_ids.append(step.step_id)
        fresh_by_slot[g.slot] = step.step_id
        placed[g.slot] = step
        # Surviving child slots stay where the user sees them; dead
        # child slots stay deleted.  Only brand-new slots nest here.
        step.children = [build(c) for c in g.children if c.slot not in old_entries]
        return step

    def located(slot: int) -> Step | None:
        step = live.get(slot) or placed.get(slot)
        if step is not None and state.has_step(step.step_id):
            return step
        return None

    def insert_after(neighbour: Step, step: Step) -> None:
        _, parent, index, _ = state.locate(neighbour.step_id)
        parent.children.insert(index + 1, step)

    def insert_before(neighbour: Step, step: Step) -> None:
        _, parent, index, _ = state.locate(neighbour.step_id)
        parent.children.insert(index, step)

    def place(region: list[GeneratedStep], fallback) -> None:
        """Fresh slots go after their nearest preceding sibling from the
        same run, else before their nearest following one, else at the
        region's default spot."""
        for pos, g in enumerate(region):
            if g.slot in old_entries:
                continue  # keeper (stays put) or sticky-deleted
            step = build(g)
            prev = next((located(p.slot) for p in reversed(region[:pos])
                         if located(p.slot) is not None), None)
            if prev is not None:
                insert_after(prev, step)
                continue
            nxt = next((located(n.slot) for n in region[pos + 1:]
                        if located(n.slot) is not None), None)
            if nxt is not None:
                insert_before(nxt, step)
                continue
            if fallback is not None:
                fallback(step)
                continue
            raise SlotVanished("nowhere to place a regenerated step")

    def place_children(g: GeneratedStep) -> None:
        """Place fresh child slots beneath their surviving parent slot;
        recurse everywhere else, prune sticky-deleted subtrees."""
        if g.slot in old_entries and g.slot not in live:
            return  # sticky-deleted: the new subtree is pruned
        if g.slot in live:
            # fresh children of a keeper need real placement; fresh
            # children of a fresh step were built together with it
            place(g.children, live[g.slot].children.append)
        for c in g.children:
            place_children(c)

    anchor_alive = state.has_step(record.anchor_step_id)
    anchor = state.locate(record.anchor_step_id)[3] if anchor_alive else None
    if anchor is None:
        sibling_fallback = None
        child_fallback = None
    elif anchor.kind == "root":
        sibling_fallback = anchor.children.append
        child_fallback = anchor.children.append
    else:
        sibling_fallback = lambda step: insert_after(anchor, step)  # noqa: E731
        child_fallback = anchor.children.append
    place(result.parent_steps, sibling_fallback)
    place(result.anchor_steps, child_fallback)
    for g in result.parent_steps + result.anchor_steps:
        place_children(g)

    new_entries: list[tuple[int, str]] = []
    for slot in sorted(new_by_slot):
        if slot in old_entries:
            new_entries.append((slot, old_entries[slot]))
        elif slot in fresh_by_slot:
            new_entries.append((slot, fresh_by_slot[slot]))
    record.generated = new_entries
    record.page_values = values
    return fresh_ids


def perform_delete_interaction(state: ProjectState, payload: dict) -> list[str]:
    record = state.record(payload["interactionId"])
    if record.deleted:
        raise UnknownInteraction(f"interaction {record.interaction_id!r} already deleted")
    for step_id in record.step_ids():
        if not state.has_step(step_id):
            continue
        _, parent, index, step = state.locate(step_id)
        if parent is None:
            continue  # cannot happen: generated steps are never roots
        del parent.children[index]
    record.deleted = True
    return []
