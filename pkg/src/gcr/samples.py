"""Builders for the two sample projects used by tests and demos.

Both follow the interaction flows a user would perform by hand: the
hello-world project prints a message and waits three seconds; the
counting project prints 1..3, a message, then 4..10 through two loops.
"""

from __future__ import annotations

from pathlib import Path

from .components import ComponentLibrary, load_library
from .session import ProjectSession

LIBRARY_ROOT = Path(__file__).resolve().parents[2] / "libraries"


def sample_library(name: str = "cpp-console") -> ComponentLibrary:
    return load_library(LIBRARY_ROOT / name)


def build_hello_world(library: ComponentLibrary | None = None) -> ProjectSession:
    """Print "Hello World" then wait three seconds, anchored step by
    step at the end of the goal."""
    library = library or sample_library()
    session = ProjectSession.create("hello-world", library, str(LIBRARY_ROOT / "cpp-console"))
    session.interact("print-text-console", {"Page1_Text1": '"Hello World"'})
    session.interact("wait-key-seconds", {"Page1_Check1": "1", "Page1_Seconds1": "3"})
    return session


def build_counting_program(library: ComponentLibrary | None = None) -> ProjectSession:
    """Two counting loops around a message: 1..3, the message, 4..10."""
    library = library or sample_library()
    session = ProjectSession.create("counting", library, str(LIBRARY_ROOT / "cpp-console"))
    session.interact("declare-int", {"Page1_Name1": "i"})

    first = session.interact("for-loop", {
        "Page1_Var1": "i", "Page1_From1": "1", "Page1_To1": "3"})
    loop_id, start_id = first["stepIds"][0], first["stepIds"][1]
    session.interact("print-number", {"Page1_Expr1": "i"}, anchor_step_id=start_id)

    message = session.interact(
        "print-message-line",
        {"Page1_Text1": "This message between number 3 and number 4"},
        anchor_step_id=loop_id,
    )
    second = session.interact("for-loop", {
        "Page1_Var1": "i", "Page1_From1": "4", "Page1_To1": "10"},
        anchor_step_id=message["stepIds"][0],
    )
    session.interact("print-number", {"Page1_Expr1": "i"},
                     anchor_step_id=second["stepIds"][1])
    return session
