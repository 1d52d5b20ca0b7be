"""HTTP API over one project session.

The service holds a single open project.  Mutations are serialized by a
lock, saved to the project file when one is attached, and broadcast to
``/events`` subscribers (server-sent events, at-least-once, carrying
the event index).  Read endpoints reflect the state at the current
head, so seeking the timeline changes what ``/tree`` and ``/code``
return, exactly like the engine API.
"""

from __future__ import annotations

import json
import queue
import threading

from fastapi import Body, FastAPI, Query
from fastapi.responses import JSONResponse, StreamingResponse

from .components import find_components
from .emitter import code_behind_step, emit_project, get_profile
from .errors import (
    AtBoundary,
    ClipboardEmpty,
    DuplicateGoal,
    GcrError,
    OverlappingSelection,
    RootImmutable,
    SlotVanished,
    UnknownComponent,
    UnknownDomain,
    UnknownGoal,
    UnknownInteraction,
    UnknownProfile,
    UnknownStep,
)
from .projectfile import save_project
from .session import ProjectSession

_NOT_FOUND = (UnknownStep, UnknownGoal, UnknownComponent, UnknownInteraction,
              UnknownDomain, UnknownProfile)
_CONFLICT = (SlotVanished, RootImmutable, AtBoundary, OverlappingSelection,
             DuplicateGoal, ClipboardEmpty)


def _status_for(exc: GcrError) -> int:
    if isinstance(exc, _NOT_FOUND):
        return 404
    if isinstance(exc, _CONFLICT):
        return 409
    return 400


def create_app(session: ProjectSession, autosave: bool = True) -> FastAPI:
    app = FastAPI(title="gcr studio service")
    lock = threading.RLock()
    subscribers: list[queue.Queue] = []

    def on_commit(event) -> None:
        for q in list(subscribers):
            q.put(event)

    session.listeners.append(on_commit)

    def committed() -> None:
        if autosave and session.path:
            save_project(session)

    @app.exception_handler(GcrError)
    async def engine_error(request, exc: GcrError):
        return JSONResponse(
            status_code=_status_for(exc),
            content={"error": type(exc).__name__, "detail": str(exc)},
        )

    # --- component library -------------------------------------------------

    @app.get("/components")
    def components(domain: str | None = None, query: str = ""):
        hits = find_components(session.library, domain, query)
        return {
            "libraryId": session.library.library_id,
            "targetProfile": session.library.target_profile,
            "domains": session.library.domains(),
            "components": [
                {"id": c.component_id, "name": c.name, "domain": c.domain}
                for c in hits
            ],
        }

    @app.get("/components/{component_id}")
    def component_detail(component_id: str):
        c = session.library.get(component_id)
        return {
            "id": c.component_id,
            "name": c.name,
            "domain": c.domain,
            "pages": [
                {
                    "id": page.page_id,
                    "role": page.role,
                    "controls": [
                        {
                            "name": control.name,
                            "kind": control.kind,
                            "label": control.label,
                            "default": control.default,
                            "options": list(control.options),
                        }
                        for control in page.controls
                    ],
                }
                for page in c.pages
            ],
        }

    # --- steps tree -----------------------------------------------------------

    @app.get("/tree")
    def tree(goal: str | None = None):
        goals = session.state.goals
        if goal is not None:
            goals = [session.state.goal(goal)]
        return {"goals": [g.to_dict() for g in goals], "head": session.head}

    @app.post("/tree/ops")
    def tree_op(payload: dict = Body(...)):
        op = payload.get("op")
        with lock:
            if op == "search":
                hits = session.search(payload.get("query", ""), payload.get("scope", "name"))
                return {"matches": [{"id": s.step_id, "label": s.label} for s in hits]}
            result = _run_tree_op(session, op, payload)
            committed()
            return {"resultIds": result, "head": session.head}

    # --- interactions -----------------------------------------------------------

    @app.post("/interactions", status_code=201)
    def interactions(payload: dict = Body(...)):
        with lock:
            outcome = session.interact(
                payload["componentId"],
                payload.get("values") or {},
                payload.get("anchorStepId"),
            )
            committed()
            outcome["head"] = session.head
            return outcome

    @app.get("/interactions/{interaction_id}")
    def interaction_detail(interaction_id: str):
        record = session.state.record(interaction_id)
        if record.deleted:
            raise UnknownInteraction(f"interaction {interaction_id!r} already deleted")
        return {
            "interactionId": record.interaction_id,
            "componentId": record.component_id,
            "anchorStepId": record.anchor_step_id,
            "values": dict(record.page_values),
            "stepIds": [s for s in record.step_ids() if session.state.has_step(s)],
        }

    @app.put("/interactions/{interaction_id}")
    def modify(interaction_id: str, payload: dict = Body(...)):
        with lock:
            outcome = session.modify_interaction(interaction_id, payload.get("values") or {})
            committed()
            outcome["head"] = session.head
            return outcome

    @app.delete("/interactions/{interaction_id}")
    def delete_interaction(interaction_id: str):
        with lock:
            session.delete_interaction(interaction_id)
            committed()
            return {"interactionId": interaction_id, "deleted": True, "head": session.head}

    # --- code ----------------------------------------------------------------------

    @app.get("/code")
    def code(goal: str | None = None, profile: str | None = None):
        target = get_profile(profile or session.library.target_profile)
        files = emit_project(session.state, target)
        if goal is not None:
            session.state.goal(goal)
            files = [f for f in files if f.path.startswith(goal + ".")]
        return {
            "files": [
                {
                    "path": f.path,
                    "text": f.text,
                    "spans": {sid: list(span) for sid, span in f.spans.items()},
                }
                for f in files
            ],
        }

    @app.get("/code/step/{step_id}")
    def code_for_step(step_id: str):
        return {"stepId": step_id, "code": code_behind_step(session.state, step_id)}

    # --- time machine -----------------------------------------------------------------

    @app.get("/timeline")
    def timeline():
        return session.timeline_info()

    @app.post("/timeline/seek")
    def seek(payload: dict = Body(...)):
        with lock:
            session.seek(int(payload["t"]))
            committed()
            return {"head": session.head, "length": len(session.events)}

    @app.get("/movie")
    def movie(start: int = Query(0, alias="from")):
        frames = []
        for frame in session.movie(start):
            state = session._state_at(frame.index)
            data = frame.to_dict()
            data["goals"] = [g.to_dict() for g in state.goals]
            frames.append(data)
        return {"frames": frames, "length": len(session.events), "head": session.head}

    # --- event stream ------------------------------------------------------------------

    @app.get("/events")
    def events(start: int = Query(0, alias="from"), max: int | None = None):
        q: queue.Queue = queue.Queue()
        subscribers.append(q)
        stored = list(session.events)

        def stream():
            sent = 0
            last = 0
            try:
                for event in stored:
                    if event.index <= start:
                        continue
                    yield _sse(event)
                    last = event.index
                    sent += 1
                    if max is not None and sent >= max:
                        return
                while True:
                    try:
                        event = q.get(timeout=10.0)
                    except queue.Empty:
                        yield ": keepalive\n\n"
                        continue
                    if event.index <= last:
                        continue
                    yield _sse(event)
                    last = event.index
                    sent += 1
                    if max is not None and sent >= max:
                        return
            finally:
                subscribers.remove(q)

        return StreamingResponse(stream(), media_type="text/event-stream")

    return app


def _sse(event) -> str:
    return f"id: {event.index}\ndata: {json.dumps(event.to_dict(), sort_keys=True)}\n\n"


def _run_tree_op(session: ProjectSession, op: str | None, payload: dict) -> list[str]:
    if op == "add-comment":
        return [session.add_comment(payload["parentId"], payload["label"])]
    if op == "edit":
        session.edit_label(payload["stepId"], payload["label"])
        return []
    if op == "delete":
        ids = _step_ids(payload)
        if len(ids) == 1:
            session.delete_step(ids[0])
        else:
            session.batch("delete", ids)
        return []
    if op == "move":
        ids = _step_ids(payload)
        direction = payload["direction"]
        if len(ids) == 1:
            session.move_step(ids[0], direction)
        else:
            session.batch("moveUp" if direction == "up" else "moveDown", ids)
        return []
    if op in ("enable", "disable"):
        ids = _step_ids(payload)
        if len(ids) == 1:
            session.set_enabled(ids[0], op == "enable")
        else:
            session.batch(op, ids)
        return []
    if op == "cut":
        session.cut(_step_ids(payload))
        return []
    if op == "copy":
        session.copy(_step_ids(payload))
        return []
    if op == "paste":
        return session.paste(payload["targetId"])
    if op == "add-goal":
        return session.add_goal(payload["name"])
    raise GcrError(f"unknown tree op {op!r}")


def _step_ids(payload: dict) -> list[str]:
    if "stepIds" in payload:
        return list(payload["stepIds"])
    return [payload["stepId"]]
