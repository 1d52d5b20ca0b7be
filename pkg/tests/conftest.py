"""Shared fixtures and the random scenario driver used by the property
suites."""

from __future__ import annotations

import random
from pathlib import Path

import pytest

from gcr.components import ComponentLibrary, load_library
from gcr.errors import GcrError
from gcr.session import ProjectSession

REPO = Path(__file__).resolve().parents[1]
LIBRARIES = REPO / "libraries"
GOLDEN = Path(__file__).resolve().parent / "golden"


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """One PASS/FAIL line per acceptance check at the end of the run."""
    verdicts: dict[str, bool] = {}
    for outcome in ("passed", "failed", "error"):
        for report in terminalreporter.stats.get(outcome, []):
            nodeid = getattr(report, "nodeid", "")
            if "test_acceptance" not in nodeid or "::" not in nodeid:
                continue
            name = nodeid.split("::")[-1]
            verdicts[name] = verdicts.get(name, True) and outcome == "passed"
    if verdicts:
        terminalreporter.write_sep("-", "acceptance")
        for name in sorted(verdicts):
            flag = "PASS" if verdicts[name] else "FAIL"
            terminalreporter.write_line(f"ACCEPTANCE {flag}: {name}")


@pytest.fixture(scope="session")
def cpp_library() -> ComponentLibrary:
    return load_library(LIBRARIES / "cpp-console")


@pytest.fixture(scope="session")
def py_library() -> ComponentLibrary:
    return load_library(LIBRARIES / "py-console")


@pytest.fixture()
def session(cpp_library) -> ProjectSession:
    return ProjectSession.create("test", cpp_library, str(LIBRARIES / "cpp-console"))


def make_session(cpp_library) -> ProjectSession:
    return ProjectSession.create("test", cpp_library, str(LIBRARIES / "cpp-console"))


# --- random scenario driver -------------------------------------------------

_COMPONENT_POOL = [
    ("print-text-console", {"Page1_Text1": '"hi"'}),
    ("print-number", {"Page1_Expr1": "n"}),
    ("declare-int", {"Page1_Name1": "n"}),
    ("wait-key-seconds", {"Page1_Check1": "1", "Page1_Seconds1": "2"}),
    ("if-else", {"Page1_Cond1": "n > 0", "Page1_Else1": "0"}),
    ("for-loop", {"Page1_Var1": "k", "Page1_From1": "1", "Page1_To1": "5"}),
    ("break-loop", {}),
]


def grow_random_project(
    session: ProjectSession,
    rng: random.Random,
    ops: int,
    max_steps: int = 50,
) -> None:
    """Drive a session through random edits; every op that the engine
    rejects is swallowed, the rest must commit."""
    for _ in range(ops):
        random_op(session, rng, max_steps)


def _random_step(session: ProjectSession, rng: random.Random):
    steps = list(session.state.iter_steps())
    return rng.choice(steps) if steps else None


def random_op(session: ProjectSession, rng: random.Random, max_steps: int = 50) -> str | None:
    """Attempt one random mutation; returns the op name when an event
    committed, None when the engine rejected it."""
    state = session.state
    step_count = sum(1 for _ in state.iter_steps())
    choices = ["comment", "interact", "modify", "edit", "move", "toggle",
               "delete", "cutpaste", "copypaste", "batch"]
    if step_count >= max_steps:
        choices = ["edit", "move", "toggle", "delete", "modify"]
    op = rng.choice(choices)
    try:
        if op == "comment":
            parents = list(state.iter_steps(include_roots=True))
            session.add_comment(rng.choice(parents).step_id, f"note {rng.randrange(1000)}")
        elif op == "interact":
            component_id, values = rng.choice(_COMPONENT_POOL)
            values = dict(values)
            if component_id == "if-else":
                values["Page1_Else1"] = rng.choice(["0", "1"])
            if component_id == "wait-key-seconds":
                values["Page1_Check1"] = rng.choice(["0", "1"])
            anchor = _random_step(session, rng)
            session.interact(component_id, values,
                             anchor.step_id if anchor else None)
        elif op == "modify":
            live = [r for r in state.records.values() if not r.deleted]
            if not live:
                return None
            record = rng.choice(live)
            values = dict(record.page_values)
            if "Page1_Else1" in values:
                values["Page1_Else1"] = rng.choice(["0", "1"])
            elif "Page1_Seconds1" in values:
                values["Page1_Seconds1"] = str(rng.randrange(1, 9))
            elif "Page1_Text1" in values:
                values["Page1_Text1"] = f'"msg {rng.randrange(100)}"'
            elif "Page1_To1" in values:
                values["Page1_To1"] = str(rng.randrange(2, 9))
            session.modify_interaction(record.interaction_id, values)
        elif op == "edit":
            step = _random_step(session, rng)
            if step is None:
                return None
            session.edit_label(step.step_id, f"{step.label} *")
        elif op == "move":
            step = _random_step(session, rng)
            if step is None:
                return None
            session.move_step(step.step_id, rng.choice(["up", "down"]))
        elif op == "toggle":
            step = _random_step(session, rng)
            if step is None:
                return None
            session.set_enabled(step.step_id, rng.random() < 0.5)
        elif op == "delete":
            step = _random_step(session, rng)
            if step is None or rng.random() < 0.5:
                return None  # keep trees from shrinking too fast
            session.delete_step(step.step_id)
        elif op == "cutpaste":
            step = _random_step(session, rng)
            if step is None:
                return None
            session.cut([step.step_id])
            targets = list(session.state.iter_steps(include_roots=True))
            session.paste(rng.choice(targets).step_id)
        elif op == "copypaste":
            step = _random_step(session, rng)
            if step is None:
                return None
            session.copy([step.step_id])
            targets = list(session.state.iter_steps(include_roots=True))
            session.paste(rng.choice(targets).step_id)
        elif op == "batch":
            steps = list(state.iter_steps())
            if len(steps) < 2:
                return None
            picked = rng.sample(steps, k=min(len(steps), rng.randrange(2, 4)))
            session.batch(rng.choice(["enable", "disable", "delete"]),
                          [s.step_id for s in picked])
        return op
    except GcrError:
        return None
