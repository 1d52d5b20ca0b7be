"""Turning the steps tree into textual source code.

Each goal emits one file: enabled steps in pre-order, comment steps as
comment lines in the target syntax, generated steps as their stored
code lines, verbatim.  Disabling a step silences its whole subtree.
Alongside the text the emitter reports which lines every step produced,
so a viewer can trace code back to steps.
"""

from __future__ import annotations

import shutil
import subprocess
import tempfile
from dataclasses import dataclass, field
from pathlib import Path

from .errors import NonZeroExit, ToolchainMissing, UnknownProfile
from .model import Goal, ProjectState, Step


@dataclass(frozen=True)
class TargetProfile:
    """How one target language likes its files."""

    name: str
    extension: str
    comment_prefix: str
    header_lines: tuple[str, ...] = ()
    footer_lines: tuple[str, ...] = ()
    run_command: tuple[str, ...] | None = None  # "{file}" expands to the program


PROFILES: dict[str, TargetProfile] = {
    "cpp-console": TargetProfile(
        name="cpp-console",
        extension=".cpp",
        comment_prefix="// ",
    ),
    "py-console": TargetProfile(
        name="py-console",
        extension=".py",
        comment_prefix="# ",
        run_command=("python3", "{file}"),
    ),
}


def get_profile(name: str) -> TargetProfile:
    try:
        return PROFILES[name]
    except KeyError:
        raise UnknownProfile(f"no target profile {name!r}") from None


@dataclass
class EmittedFile:
    path: str
    text: str
    spans: dict[str, tuple[int, int]] = field(default_factory=dict)  # 1-based inclusive


def emit_goal(goal: Goal, profile: TargetProfile) -> EmittedFile:
    body: list[str] = []
    spans: dict[str, tuple[int, int]] = {}
    offset = len(profile.header_lines)

    def walk(step: Step) -> None:
        if not step.enabled:
            return
        if step.kind == "comment":
            lines = [profile.comment_prefix + step.label]
        elif step.kind == "generated":
            lines = list(step.code_lines)
        else:
            lines = []
        if lines:
            start = offset + len(body) + 1
            body.extend(lines)
            spans[step.step_id] = (start, start + len(lines) - 1)
        for child in step.children:
            walk(child)

    walk(goal.root)
    lines = list(profile.header_lines) + body + list(profile.footer_lines)
    text = "\n".join(lines) + "\n" if lines else ""
    return EmittedFile(goal.name + profile.extension, text, spans)


def emit_project(state: ProjectState, profile: TargetProfile) -> list[EmittedFile]:
    return [emit_goal(goal, profile) for goal in state.goals]


def code_behind_step(state: ProjectState, step_id: str) -> str:
    """The code one step contributes, regardless of the enabled flag.
    Comments and roots own no code."""
    _, _, _, step = state.locate(step_id)
    if step.kind != "generated" or not step.code_lines:
        return ""
    return "\n".join(step.code_lines) + "\n"


def extract_all(state: ProjectState, profile: TargetProfile, out_dir: str | Path) -> list[Path]:
    """Write every goal's file plus a stepspans.tsv sidecar mapping
    stepId, file, startLine, endLine."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []
    sidecar: list[str] = []
    for emitted in emit_project(state, profile):
        path = out / emitted.path
        path.write_text(emitted.text, encoding="utf-8")
        written.append(path)
        for step_id, (start, end) in emitted.spans.items():
            sidecar.append(f"{step_id}\t{emitted.path}\t{start}\t{end}")
    spans_path = out / "stepspans.tsv"
    spans_path.write_text("\n".join(sidecar) + ("\n" if sidecar else ""), encoding="utf-8")
    written.append(spans_path)
    return written


def run_program(
    state: ProjectState,
    profile: TargetProfile,
    workdir: str | Path | None = None,
) -> str:
    """Extract and execute the first goal's program; returns stdout.

    Needs a profile with a run command and the matching tool on PATH.
    A non-zero exit becomes NonZeroExit carrying the captured stderr.
    """
    if profile.run_command is None:
        raise ToolchainMissing(f"profile {profile.name!r} has no run command")
    tool = profile.run_command[0]
    if shutil.which(tool) is None:
        raise ToolchainMissing(f"{tool!r} not found on PATH")
    if workdir is None:
        with tempfile.TemporaryDirectory() as tmp:
            return _run_in(state, profile, Path(tmp))
    return _run_in(state, profile, Path(workdir))


def _run_in(state: ProjectState, profile: TargetProfile, workdir: Path) -> str:
    extract_all(state, profile, workdir)
    program = workdir / (state.goals[0].name + profile.extension)
    command = [part.format(file=str(program)) for part in profile.run_command]
    proc = subprocess.run(command, capture_output=True, text=True)
    if proc.returncode != 0:
        raise NonZeroExit(proc.returncode, proc.stderr)
    return proc.stdout
