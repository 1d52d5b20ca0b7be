"""Project state: goals, the steps tree, and interaction records.

The visible program is a forest of goals.  Each goal owns exactly one
immutable root ("Start Point (NOT STEP)") whose descendants are the
steps: plain comment steps added by hand, and generated steps owned by
the interaction that produced them.  Interaction records remember the
component, the submitted page values, and which steps each mask slot
produced, which is what later lets a modify regenerate in place.

Everything here is plain data with deterministic serialization; all
mutation goes through the event layer.
"""

from __future__ import annotations

import copy
import json
from dataclasses import dataclass, field
from typing import Iterator

from .errors import UnknownGoal, UnknownStep

ROOT_LABEL = "Start Point (NOT STEP)"
FIRST_STEP_LABEL = "The First Step"
DEFAULT_GOAL = "main"


@dataclass
class Step:
    step_id: str
    label: str
    kind: str  # "root" | "comment" | "generated"
    enabled: bool = True
    interaction_id: str | None = None
    slot: int | None = None  # mask line that generated this step
    code_lines: list[str] = field(default_factory=list)
    info_lines: list[str] = field(default_factory=list)
    children: list["Step"] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "id": self.step_id,
            "label": self.label,
            "kind": self.kind,
            "enabled": self.enabled,
            "interaction": self.interaction_id,
            "slot": self.slot,
            "code": list(self.code_lines),
            "info": list(self.info_lines),
            "children": [c.to_dict() for c in self.children],
        }

    @staticmethod
    def from_dict(data: dict) -> "Step":
        return Step(
            step_id=data["id"],
            label=data["label"],
            kind=data["kind"],
            enabled=data["enabled"],
            interaction_id=data["interaction"],
            slot=data["slot"],
            code_lines=list(data["code"]),
            info_lines=list(data["info"]),
            children=[Step.from_dict(c) for c in data["children"]],
        )


@dataclass
class Goal:
    name: str
    root: Step

    def to_dict(self) -> dict:
        return {"name": self.name, "root": self.root.to_dict()}

    @staticmethod
    def from_dict(data: dict) -> "Goal":
        return Goal(data["name"], Step.from_dict(data["root"]))


@dataclass
class InteractionRecord:
    interaction_id: str
    component_id: str
    anchor_step_id: str
    page_values: dict[str, str]
    # (slot, step_id) in creation order; a step may since have been
    # deleted from the tree, in which case the entry keeps the user's
    # deletion sticky across regenerations.
    generated: list[tuple[int, str]] = field(default_factory=list)
    order_index: int = 0
    deleted: bool = False

    def step_ids(self) -> list[str]:
        return [step_id for _, step_id in self.generated]

    def to_dict(self) -> dict:
        return {
            "id": self.interaction_id,
            "component": self.component_id,
            "anchor": self.anchor_step_id,
            "values": dict(self.page_values),
            "generated": [[slot, step_id] for slot, step_id in self.generated],
            "order": self.order_index,
            "deleted": self.deleted,
        }

    @staticmethod
    def from_dict(data: dict) -> "InteractionRecord":
        return InteractionRecord(
            interaction_id=data["id"],
            component_id=data["component"],
            anchor_step_id=data["anchor"],
            page_values=dict(data["values"]),
            generated=[(slot, step_id) for slot, step_id in data["generated"]],
            order_index=data["order"],
            deleted=data["deleted"],
        )


@dataclass
class ProjectState:
    project_id: str
    library_id: str
    library_path: str
    goals: list[Goal] = field(default_factory=list)
    records: dict[str, InteractionRecord] = field(default_factory=dict)
    next_step: int = 1
    next_interaction: int = 1

    # --- id minting (deterministic, replay-stable) ---------------------

    def mint_step_id(self) -> str:
        step_id = f"s{self.next_step}"
        self.next_step += 1
        return step_id

    def mint_interaction_id(self) -> str:
        interaction_id = f"i{self.next_interaction}"
        self.next_interaction += 1
        return interaction_id

    # --- lookup ----------------------------------------------------------

    def goal(self, name: str) -> Goal:
        for goal in self.goals:
            if goal.name == name:
                return goal
        raise UnknownGoal(f"no goal {name!r}")

    def iter_steps(self, include_roots: bool = False) -> Iterator[Step]:
        """All steps of all goals in pre-order, goals in creation order."""
        for goal in self.goals:
            stack = [goal.root]
            while stack:
                step = stack.pop()
                if step.kind != "root" or include_roots:
                    yield step
                stack.extend(reversed(step.children))

    def locate(self, step_id: str) -> tuple[Goal, Step | None, int, Step]:
        """Find a step; returns (goal, parent, index, step).  The root
        of a goal has parent None and index -1."""
        for goal in self.goals:
            if goal.root.step_id == step_id:
                return goal, None, -1, goal.root
            found = _locate_in(goal.root, step_id)
            if found is not None:
                parent, index, step = found
                return goal, parent, index, step
        raise UnknownStep(f"no step {step_id!r}")

    def has_step(self, step_id: str) -> bool:
        try:
            self.locate(step_id)
            return True
        except UnknownStep:
            return False

    def record(self, interaction_id: str) -> InteractionRecord:
        from .errors import UnknownInteraction

        record = self.records.get(interaction_id)
        if record is None:
            raise UnknownInteraction(f"no interaction {interaction_id!r}")
        return record

    def record_is_orphaned(self, record: InteractionRecord) -> bool:
        """True when none of the record's generated steps survive."""
        return not any(self.has_step(step_id) for step_id in record.step_ids())

    # --- serialization ----------------------------------------------------

    def to_dict(self) -> dict:
        records = []
        for record in self.records.values():
            data = record.to_dict()
            data["orphaned"] = self.record_is_orphaned(record) and not record.deleted
            records.append(data)
        return {
            "projectId": self.project_id,
            "library": {"id": self.library_id, "path": self.library_path},
            "goals": [g.to_dict() for g in self.goals],
            "records": records,
            "nextStep": self.next_step,
            "nextInteraction": self.next_interaction,
        }

    @staticmethod
    def from_dict(data: dict) -> "ProjectState":
        state = ProjectState(
            project_id=data["projectId"],
            library_id=data["library"]["id"],
            library_path=data["library"]["path"],
            goals=[Goal.from_dict(g) for g in data["goals"]],
            next_step=data["nextStep"],
            next_interaction=data["nextInteraction"],
        )
        for entry in data["records"]:
            record = InteractionRecord.from_dict(entry)
            state.records[record.interaction_id] = record
        return state

    def clone(self) -> "ProjectState":
        return copy.deepcopy(self)


def _locate_in(parent: Step, step_id: str) -> tuple[Step, int, Step] | None:
    for index, child in enumerate(parent.children):
        if child.step_id == step_id:
            return parent, index, child
        found = _locate_in(child, step_id)
        if found is not None:
            return found
    return None


def initial_state(project_id: str, library_id: str, library_path: str) -> ProjectState:
    """The pre-event state: one goal with just its root."""
    state = ProjectState(project_id, library_id, library_path)
    root = Step(state.mint_step_id(), ROOT_LABEL, "root")
    state.goals.append(Goal(DEFAULT_GOAL, root))
    return state


def canonical_json(data: dict) -> str:
    return json.dumps(data, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def state_fingerprint(state: ProjectState) -> str:
    return canonical_json(state.to_dict())


def check_integrity(state: ProjectState) -> None:
    """Invariant sweep used by tests: unique ids, root shape, kind rules."""
    seen: set[str] = set()
    goal_names: set[str] = set()
    for goal in state.goals:
        assert goal.name not in goal_names, f"duplicate goal {goal.name}"
        goal_names.add(goal.name)
        assert goal.root.kind == "root"
        assert goal.root.label == ROOT_LABEL
        assert goal.root.enabled
        for step in _walk(goal.root):
            assert step.step_id not in seen, f"duplicate id {step.step_id}"
            seen.add(step.step_id)
            if step.kind == "comment":
                assert step.interaction_id is None
                assert not step.code_lines
            elif step.kind == "generated":
                assert step.interaction_id is not None
                assert step.interaction_id in state.records
            elif step.kind == "root":
                assert step is goal.root, "root below the top"
    for record in state.records.values():
        for step_id in record.step_ids():
            if state.has_step(step_id):
                _, _, _, step = state.locate(step_id)
                assert step.interaction_id == record.interaction_id


def _walk(step: Step) -> Iterator[Step]:
    yield step
    for child in step.children:
        yield from _walk(child)
