"""Command line front end.

Every invocation loads the project file, applies one operation, and
saves.  Mutating commands print a small JSON object with the ids they
produced so scripts can chain them.  Engine errors exit 1 with the
error name on stderr; usage errors exit 2.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .components import component_to_text, find_components, load_library
from .emitter import code_behind_step, extract_all, get_profile, run_program
from .errors import GcrError
from .model import Step
from .projectfile import load_project, save_project
from .session import Clipboard, ProjectSession


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gcr",
        description="Build programs as a steps tree and generate their code.",
    )
    parser.add_argument("--project", default="project.gcrp",
                        help="project file (default: ./project.gcrp)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("new", help="create a project")
    p.add_argument("path")
    p.add_argument("--library", required=True, help="component library directory")
    p.set_defaults(func=cmd_new)

    p = sub.add_parser("components", help="browse the component library")
    comp_sub = p.add_subparsers(dest="subcommand", required=True)
    c = comp_sub.add_parser("list")
    c.add_argument("--domain")
    c.add_argument("--query", default="")
    c.add_argument("--library", help="library directory (defaults to the project's)")
    c.add_argument("--format", choices=("text", "json"), default="text")
    c.set_defaults(func=cmd_components_list)
    c = comp_sub.add_parser("show")
    c.add_argument("id")
    c.add_argument("--library")
    c.set_defaults(func=cmd_components_show)

    p = sub.add_parser("interact", help="run a component against the tree")
    p.add_argument("--component", required=True)
    p.add_argument("--anchor", help="anchor step (default: last step of main)")
    p.add_argument("--set", action="append", default=[], metavar="NAME=VALUE")
    p.set_defaults(func=cmd_interact)

    p = sub.add_parser("modify", help="re-run an interaction with new values")
    p.add_argument("--interaction", required=True)
    p.add_argument("--set", action="append", default=[], metavar="NAME=VALUE")
    p.set_defaults(func=cmd_modify)

    p = sub.add_parser("delete-interaction", help="remove an interaction's steps")
    p.add_argument("--interaction", required=True)
    p.set_defaults(func=cmd_delete_interaction)

    p = sub.add_parser("tree", help="inspect or edit the steps tree")
    tree_sub = p.add_subparsers(dest="subcommand", required=True)
    t = tree_sub.add_parser("show")
    t.add_argument("--format", choices=("text", "json"), default="text")
    t.add_argument("--goal")
    t.set_defaults(func=cmd_tree_show)
    t = tree_sub.add_parser("op")
    t.add_argument("op", choices=(
        "add-comment", "edit", "delete", "move", "enable", "disable",
        "cut", "copy", "paste", "search", "add-goal"))
    t.add_argument("--step", action="append", default=[])
    t.add_argument("--parent")
    t.add_argument("--label")
    t.add_argument("--dir", choices=("up", "down"))
    t.add_argument("--target")
    t.add_argument("--query", default="")
    t.add_argument("--scope", choices=("name", "data"), default="name")
    t.add_argument("--name")
    t.set_defaults(func=cmd_tree_op)

    p = sub.add_parser("emit", help="generate source code")
    p.add_argument("--profile")
    p.add_argument("--out", help="directory to extract files into")
    p.set_defaults(func=cmd_emit)

    p = sub.add_parser("code", help="show the code behind one step")
    p.add_argument("--step", required=True)
    p.set_defaults(func=cmd_code)

    p = sub.add_parser("replay", help="move the head to a past event")
    p.add_argument("--to", type=int, required=True)
    p.set_defaults(func=cmd_replay)

    p = sub.add_parser("movie", help="list replay frames")
    p.add_argument("--from", dest="start", type=int, default=0)
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_movie)

    p = sub.add_parser("run", help="emit and execute the program")
    p.add_argument("--profile")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("serve", help="serve the HTTP API")
    p.add_argument("--port", type=int, default=8323)
    p.add_argument("--host", default="127.0.0.1")
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        result = args.func(args)
        return 0 if result is None else result
    except GcrError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


def _usage(message: str) -> int:
    print(f"usage error: {message}", file=sys.stderr)
    return 2


# --- session plumbing ------------------------------------------------------

def _clipboard_path(project: str) -> Path:
    return Path(str(project) + ".clipboard.json")


def _open(args) -> ProjectSession:
    session = load_project(args.project)
    clip = _clipboard_path(args.project)
    if clip.exists():
        try:
            session.clipboard = Clipboard.from_dict(json.loads(clip.read_text(encoding="utf-8")))
        except (json.JSONDecodeError, KeyError):
            pass  # a broken sidecar only loses the clipboard
    return session


def _save(args, session: ProjectSession) -> None:
    save_project(session, args.project)
    clip = _clipboard_path(args.project)
    if session.clipboard is not None:
        clip.write_text(json.dumps(session.clipboard.to_dict()), encoding="utf-8")


def _parse_sets(pairs: list[str]) -> dict[str, str] | int:
    values: dict[str, str] = {}
    for pair in pairs:
        name, sep, value = pair.partition("=")
        if not sep or not name:
            return _usage(f"--set needs NAME=VALUE, got {pair!r}")
        values[name] = value
    return values


def _print_json(data) -> None:
    print(json.dumps(data, sort_keys=True))


# --- commands ---------------------------------------------------------------

def cmd_new(args) -> int | None:
    library_path = Path(args.library).resolve()
    library = load_library(library_path)
    session = ProjectSession.create(Path(args.path).stem, library, str(library_path))
    save_project(session, args.path)
    print(args.path)
    return None


def _library_for(args):
    if getattr(args, "library", None):
        return load_library(args.library)
    return _open(args).library


def cmd_components_list(args) -> int | None:
    library = _library_for(args)
    hits = find_components(library, args.domain, args.query)
    if args.format == "json":
        _print_json([
            {"id": c.component_id, "name": c.name, "domain": c.domain}
            for c in hits
        ])
    else:
        for c in hits:
            print(f"{c.component_id}\t{c.name}\t{c.domain}")
    return None


def cmd_components_show(args) -> int | None:
    library = _library_for(args)
    print(component_to_text(library.get(args.id)), end="")
    return None


def cmd_interact(args) -> int | None:
    values = _parse_sets(args.set)
    if isinstance(values, int):
        return values
    session = _open(args)
    outcome = session.interact(args.component, values, args.anchor)
    _save(args, session)
    _print_json(outcome)
    return None


def cmd_modify(args) -> int | None:
    values = _parse_sets(args.set)
    if isinstance(values, int):
        return values
    session = _open(args)
    outcome = session.modify_interaction(args.interaction, values)
    _save(args, session)
    _print_json(outcome)
    return None


def cmd_delete_interaction(args) -> int | None:
    session = _open(args)
    session.delete_interaction(args.interaction)
    _save(args, session)
    _print_json({"interactionId": args.interaction, "deleted": True})
    return None


def _render_tree(session: ProjectSession, goal_name: str | None) -> str:
    lines: list[str] = []
    goals = session.state.goals
    if goal_name is not None:
        goals = [session.state.goal(goal_name)]

    def walk(step: Step, depth: int) -> None:
        flag = "" if step.enabled else "  [disabled]"
        lines.append(f"{'  ' * depth}{step.step_id}: {step.label}{flag}")
        for child in step.children:
            walk(child, depth + 1)

    for goal in goals:
        lines.append(f"goal {goal.name}")
        for child in goal.root.children:
            walk(child, 1)
    return "\n".join(lines)


def cmd_tree_show(args) -> int | None:
    session = _open(args)
    if args.format == "json":
        goals = session.state.goals
        if args.goal is not None:
            goals = [session.state.goal(args.goal)]
        _print_json({"goals": [g.to_dict() for g in goals]})
    else:
        print(_render_tree(session, args.goal))
    return None


def cmd_tree_op(args) -> int | None:
    session = _open(args)
    op = args.op
    if op == "add-comment":
        if not args.parent or args.label is None:
            return _usage("add-comment needs --parent and --label")
        step_id = session.add_comment(args.parent, args.label)
        _save(args, session)
        _print_json({"resultIds": [step_id]})
        return None
    if op == "search":
        hits = session.search(args.query, args.scope)
        _print_json([{"id": s.step_id, "label": s.label} for s in hits])
        return None
    if op == "add-goal":
        if not args.name:
            return _usage("add-goal needs --name")
        ids = session.add_goal(args.name)
        _save(args, session)
        _print_json({"resultIds": ids})
        return None
    if op == "paste":
        if not args.target:
            return _usage("paste needs --target")
        ids = session.paste(args.target)
        _save(args, session)
        _print_json({"resultIds": ids})
        return None
    if not args.step:
        return _usage(f"{op} needs at least one --step")
    if op == "edit":
        if args.label is None:
            return _usage("edit needs --label")
        session.edit_label(args.step[0], args.label)
    elif op == "move":
        if not args.dir:
            return _usage("move needs --dir up|down")
        if len(args.step) == 1:
            session.move_step(args.step[0], args.dir)
        else:
            session.batch("moveUp" if args.dir == "up" else "moveDown", args.step)
    elif op == "delete":
        if len(args.step) == 1:
            session.delete_step(args.step[0])
        else:
            session.batch("delete", args.step)
    elif op in ("enable", "disable"):
        if len(args.step) == 1:
            session.set_enabled(args.step[0], op == "enable")
        else:
            session.batch(op, args.step)
    elif op == "cut":
        session.cut(args.step)
    elif op == "copy":
        session.copy(args.step)
    _save(args, session)
    _print_json({"resultIds": []})
    return None


def _profile_for(args, session: ProjectSession):
    return get_profile(args.profile or session.library.target_profile)


def cmd_emit(args) -> int | None:
    session = _open(args)
    profile = _profile_for(args, session)
    if args.out:
        written = extract_all(session.state, profile, args.out)
        for path in written:
            print(path)
    else:
        from .emitter import emit_project

        for emitted in emit_project(session.state, profile):
            sys.stdout.write(emitted.text)
    return None


def cmd_code(args) -> int | None:
    session = _open(args)
    sys.stdout.write(code_behind_step(session.state, args.step))
    return None


def cmd_replay(args) -> int | None:
    session = _open(args)
    session.seek(args.to)
    _save(args, session)
    _print_json({"head": session.head, "length": len(session.events)})
    return None


def cmd_movie(args) -> int | None:
    session = _open(args)
    frames = session.movie(args.start)
    if args.format == "json":
        _print_json([f.to_dict() for f in frames])
    else:
        for frame in frames:
            print(f"[{frame.index}] {frame.caption}")
    return None


def cmd_run(args) -> int | None:
    session = _open(args)
    profile = _profile_for(args, session)
    sys.stdout.write(run_program(session.state, profile))
    return None


def cmd_serve(args) -> int | None:
    import uvicorn

    from .service import create_app

    session = _open(args)
    uvicorn.run(create_app(session), host=args.host, port=args.port, log_level="warning")
    return None


if __name__ == "__main__":
    sys.exit(main())
