"""Project files: one JSON document, the event log as source of truth.

The file stores project identity, the library reference, the full event
log, the current head, snapshots every few events, and a checksum of
the final replayed state.  Loading replays the log (through a snapshot
when one checks out) and verifies the checksum; a snapshot that does
not reproduce the checksum is discarded in favour of a full replay, and
only when that also disagrees does the load fail.  Serialization is
canonical (sorted keys, fixed separators), so saving the same history
always produces the same bytes.
"""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
from pathlib import Path

from .components import ComponentLibrary, load_library
from .errors import ChecksumMismatch, IoError, LibraryLoadError, VersionUnsupported
from .events import Event, replay
from .model import ProjectState, canonical_json, initial_state
from .session import ProjectSession
from .timeline import SNAPSHOT_EVERY

FORMAT = 1


def state_checksum(state: ProjectState) -> str:
    digest = hashlib.sha256(canonical_json(state.to_dict()).encode("utf-8")).hexdigest()
    return f"sha256:{digest}"


def save_project(session: ProjectSession, path: str | Path | None = None) -> Path:
    target = Path(path or session.path or "")
    if not str(target):
        raise IoError("no path to save to")
    final = replay(session.initial, session.events, library=session.library)
    snapshots = {}
    for index in range(SNAPSHOT_EVERY, len(session.events) + 1, SNAPSHOT_EVERY):
        snapshots[str(index)] = replay(
            session.initial, session.events, index, session.library).to_dict()
    data = {
        "format": FORMAT,
        "projectId": session.initial.project_id,
        "library": {
            "id": session.initial.library_id,
            "path": session.initial.library_path,
        },
        "events": [e.to_dict() for e in session.events],
        "head": session.head,
        "checksum": state_checksum(final),
        "snapshots": snapshots,
    }
    text = canonical_json(data) + "\n"
    try:
        fd, tmp_name = tempfile.mkstemp(dir=str(target.parent) or ".", suffix=".tmp")
    except OSError as exc:
        raise IoError(str(exc)) from exc
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp_name, target)
    except OSError as exc:
        try:
            os.unlink(tmp_name)
        except OSError:
            pass
        raise IoError(str(exc)) from exc
    session.path = str(target)
    return target


def load_project(path: str | Path, library: ComponentLibrary | None = None) -> ProjectSession:
    source = Path(path)
    try:
        text = source.read_text(encoding="utf-8")
    except OSError as exc:
        raise IoError(str(exc)) from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise IoError(f"{source}: not a project file: {exc}") from exc
    if data.get("format") != FORMAT:
        raise VersionUnsupported(f"format {data.get('format')!r}, expected {FORMAT}")

    library_ref = data["library"]
    if library is None:
        library_path = Path(library_ref["path"])
        if not library_path.is_absolute():
            library_path = source.parent / library_path
        library = load_library(library_path)
    if library.library_id != library_ref["id"]:
        raise LibraryLoadError(
            f"project wants library {library_ref['id']!r}, found {library.library_id!r}")

    initial = initial_state(data["projectId"], library_ref["id"], library_ref["path"])
    events = [Event.from_dict(e) for e in data["events"]]
    expected = data["checksum"]

    final = None
    snapshots = {int(k): v for k, v in data.get("snapshots", {}).items()}
    usable = [i for i in snapshots if 0 < i <= len(events)]
    if usable:
        best = max(usable)
        try:
            base_state = ProjectState.from_dict(snapshots[best])
            candidate = replay(initial, events, library=library, base=(best, base_state))
            if state_checksum(candidate) == expected:
                final = candidate
        except Exception:
            final = None  # fall back to the log, the only source of truth
    if final is None:
        final = replay(initial, events, library=library)
        if state_checksum(final) != expected:
            raise ChecksumMismatch(f"{source}: stored checksum does not match the log")

    head = data.get("head", len(events))
    head = max(0, min(int(head), len(events)))
    session = ProjectSession(initial, events, library, path=str(source), head=head)
    return session
