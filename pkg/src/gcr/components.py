"""Component bundles: reusable generators the user interacts with.

A component file (``*.gcrc``) is a small sectioned text format: metadata,
one interaction page per ``[page]`` section, a matching table wiring
page controls to mask variables, and a verbatim mask script between
``[mask]`` and ``[endmask]``.  A library is a directory (or zip archive)
of component files next to a ``library.gcrl`` manifest naming the
library id and its target language profile.

Libraries load fail-closed: one malformed or invalid component file
aborts the whole load and names the offending file.
"""

from __future__ import annotations

import shlex
import zipfile
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path

from .errors import (
    ComponentSyntaxError,
    DuplicateComponentId,
    DuplicateControl,
    LibraryLoadError,
    MaskSyntaxError,
    UnknownComponent,
    UnknownControlKind,
    UnknownDomain,
    UnknownPageVariable,
)
from .mask import MaskScript, mask_variable_names, parse_mask

CONTROL_KINDS = ("text", "number", "checkbox", "choice")
PAGE_ROLES = ("default", "set-attributes", "get-attributes", "invoke-method")
_IDENT_OK = set("abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789_")


@dataclass(frozen=True)
class Control:
    name: str
    kind: str
    label: str
    default: str
    options: tuple[str, ...] = ()


@dataclass(frozen=True)
class Page:
    page_id: str
    role: str
    controls: tuple[Control, ...]


@dataclass
class Component:
    component_id: str
    name: str
    domain: str
    pages: tuple[Page, ...]
    matching: tuple[tuple[str, str], ...]  # (pageVariable, maskVariable) pairs
    mask_text: str

    @cached_property
    def mask_script(self) -> MaskScript:
        return parse_mask(self.mask_text)

    def controls(self) -> list[Control]:
        return [c for page in self.pages for c in page.controls]

    def find_control(self, name: str) -> Control | None:
        for control in self.controls():
            if control.name == name:
                return control
        return None

    def default_values(self) -> dict[str, str]:
        return {c.name: c.default for c in self.controls()}

    def bindings_for(self, values: dict[str, str]) -> dict[str, str]:
        """Project page values through the matching table.

        Several controls may feed the same mask variable; the last pair
        in table order wins.
        """
        out: dict[str, str] = {}
        for page_var, mask_var in self.matching:
            out[mask_var] = values[page_var]
        return out


@dataclass(frozen=True)
class Finding:
    """One validation problem; an empty findings list means valid."""

    code: str
    message: str


# --- file format -----------------------------------------------------------

def _is_identifier(text: str) -> bool:
    return bool(text) and not text[0].isdigit() and all(c in _IDENT_OK for c in text)


def _is_component_id(text: str) -> bool:
    return bool(text) and all(c.isalnum() or c in "-_" for c in text)


def parse_component_text(text: str) -> Component:
    """Parse one component file; raises ComponentSyntaxError subclasses."""
    meta: dict[str, str] = {}
    pages: list[Page] = []
    matching: list[tuple[str, str]] = []
    mask_lines: list[str] = []
    seen_controls: set[str] = set()
    seen_pages: set[str] = set()
    section = None  # None | "meta" | "page" | "match" | "mask" | "done"
    current_controls: list[Control] = []
    current_page: tuple[str, str] | None = None

    def close_page() -> None:
        nonlocal current_page
        if current_page is not None:
            pages.append(Page(current_page[1], current_page[0], tuple(current_controls)))
            current_page = None
            current_controls.clear()

    for no, raw in enumerate(text.split("\n"), start=1):
        if section == "mask":
            if raw == "[endmask]":
                section = "done"
            else:
                mask_lines.append(raw)
            continue
        line = raw.strip()
        if not line:
            continue
        if section == "done":
            raise ComponentSyntaxError(no, "content after [endmask]")
        if line.startswith("["):
            close_page()
            if line == "[meta]":
                section = "meta"
            elif line == "[match]":
                section = "match"
            elif line == "[mask]":
                section = "mask"
            elif line.startswith("[page ") and line.endswith("]"):
                parts = line[1:-1].split()
                if len(parts) != 3:
                    raise ComponentSyntaxError(no, "page header needs a role and an id")
                _, role, page_id = parts
                if role not in PAGE_ROLES:
                    raise ComponentSyntaxError(no, f"unknown page role {role!r}")
                if page_id in seen_pages:
                    raise ComponentSyntaxError(no, f"duplicate page id {page_id!r}")
                seen_pages.add(page_id)
                section = "page"
                current_page = (role, page_id)
            else:
                raise ComponentSyntaxError(no, f"unknown section {line!r}")
            continue
        if section == "meta":
            key, sep, value = line.partition("=")
            if not sep:
                raise ComponentSyntaxError(no, "expected key = value")
            key, value = key.strip(), value.strip()
            if key not in ("id", "name", "domain"):
                raise ComponentSyntaxError(no, f"unknown meta key {key!r}")
            meta[key] = value
        elif section == "page":
            try:
                parts = shlex.split(line)
            except ValueError as exc:
                raise ComponentSyntaxError(no, f"bad quoting: {exc}")
            if not parts or parts[0] != "control":
                raise ComponentSyntaxError(no, "expected a control line")
            if len(parts) not in (5, 6):
                raise ComponentSyntaxError(no, "control needs name, kind, label, default")
            _, name, kind, label, default = parts[:5]
            options = tuple(parts[5].split(",")) if len(parts) == 6 else ()
            if kind not in CONTROL_KINDS:
                raise UnknownControlKind(no, f"unknown control kind {kind!r}")
            if options and kind != "choice":
                raise ComponentSyntaxError(no, "only choice controls take options")
            if name in seen_controls:
                raise DuplicateControl(no, f"duplicate control {name!r}")
            seen_controls.add(name)
            current_controls.append(Control(name, kind, label, default, options))
        elif section == "match":
            left, sep, right = line.partition("->")
            if not sep:
                raise ComponentSyntaxError(no, "expected pageVariable -> maskVariable")
            page_var, mask_var = left.strip(), right.strip()
            if page_var not in seen_controls:
                raise UnknownPageVariable(no, f"no control named {page_var!r}")
            if not _is_identifier(mask_var):
                raise ComponentSyntaxError(no, f"bad mask variable {mask_var!r}")
            matching.append((page_var, mask_var))
        else:
            raise ComponentSyntaxError(no, "content outside any section")
    if section == "mask":
        raise ComponentSyntaxError(len(text.split("\n")), "[mask] without [endmask]")
    close_page()
    for key in ("id", "name", "domain"):
        if not meta.get(key):
            raise ComponentSyntaxError(len(text.split("\n")), f"missing meta key {key!r}")
    return Component(
        component_id=meta["id"],
        name=meta["name"],
        domain=meta["domain"],
        pages=tuple(pages),
        matching=tuple(matching),
        mask_text="\n".join(mask_lines),
    )


def _quote(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def component_to_text(component: Component) -> str:
    """Serialize back to the file format; parse(serialize(c)) == c."""
    out = ["[meta]"]
    out.append(f"id = {component.component_id}")
    out.append(f"name = {component.name}")
    out.append(f"domain = {component.domain}")
    for page in component.pages:
        out.append(f"[page {page.role} {page.page_id}]")
        for c in page.controls:
            line = f"control {c.name} {c.kind} {_quote(c.label)} {_quote(c.default)}"
            if c.options:
                line += f" {_quote(','.join(c.options))}"
            out.append(line)
    out.append("[match]")
    for page_var, mask_var in component.matching:
        out.append(f"{page_var} -> {mask_var}")
    out.append("[mask]")
    if component.mask_text:
        out.extend(component.mask_text.split("\n"))
    out.append("[endmask]")
    return "\n".join(out) + "\n"


# --- validation ---------------------------------------------------------

def validate_component(component: Component) -> list[Finding]:
    """Structural validation; an empty report means the component is
    safe to expose for interactions."""
    findings: list[Finding] = []

    def bad(code: str, message: str) -> None:
        findings.append(Finding(code, message))

    if not _is_component_id(component.component_id):
        bad("BadId", f"bad component id {component.component_id!r}")
    if not component.name.strip():
        bad("EmptyName", "component name is empty")
    if not component.domain.strip():
        bad("EmptyDomain", "component domain is empty")

    seen_pages: set[str] = set()
    seen_controls: set[str] = set()
    for page in component.pages:
        if page.page_id in seen_pages:
            bad("DuplicatePage", f"duplicate page id {page.page_id!r}")
        seen_pages.add(page.page_id)
        if page.role not in PAGE_ROLES:
            bad("BadRole", f"unknown page role {page.role!r}")
        for c in page.controls:
            if c.name in seen_controls:
                bad("DuplicateControl", f"duplicate control {c.name!r}")
            seen_controls.add(c.name)
            if c.kind not in CONTROL_KINDS:
                bad("BadKind", f"control {c.name!r} has unknown kind {c.kind!r}")
                continue
            if c.kind == "checkbox" and c.default not in ("0", "1"):
                bad("BadDefault", f"checkbox {c.name!r} default must be 0 or 1")
            elif c.kind == "number":
                try:
                    float(c.default)
                except ValueError:
                    bad("BadDefault", f"number {c.name!r} default is not numeric")
            elif c.kind == "choice":
                if not c.options:
                    bad("BadDefault", f"choice {c.name!r} has no options")
                elif c.default not in c.options:
                    bad("BadDefault", f"choice {c.name!r} default not among options")

    bound: set[str] = set()
    for page_var, mask_var in component.matching:
        if page_var not in seen_controls:
            bad("UnknownPageVariable", f"matching names undeclared control {page_var!r}")
        if not _is_identifier(mask_var):
            bad("BadMaskVariable", f"bad mask variable {mask_var!r}")
        bound.add(mask_var)

    try:
        script = component.mask_script
    except MaskSyntaxError as exc:
        bad("MaskSyntax", str(exc))
        return findings
    for name in mask_variable_names(script):
        if name not in bound:
            bad("UnboundMaskVariable", f"mask reads <{name}> which nothing binds")
    return findings


# --- libraries -------------------------------------------------------------

@dataclass
class ComponentLibrary:
    library_id: str
    target_profile: str
    components: dict[str, Component] = field(default_factory=dict)
    path: str | None = None

    def get(self, component_id: str) -> Component:
        try:
            return self.components[component_id]
        except KeyError:
            raise UnknownComponent(f"no component {component_id!r}") from None

    def domains(self) -> list[str]:
        return sorted({c.domain for c in self.components.values()})


def _parse_manifest(text: str) -> tuple[str, str]:
    library_id = profile = ""
    for raw in text.split("\n"):
        line = raw.strip()
        if not line or line == "[library]":
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise LibraryLoadError(f"library.gcrl: bad line {line!r}")
        key, value = key.strip(), value.strip()
        if key == "id":
            library_id = value
        elif key == "targetProfile":
            profile = value
        else:
            raise LibraryLoadError(f"library.gcrl: unknown key {key!r}")
    if not library_id or not profile:
        raise LibraryLoadError("library.gcrl must set id and targetProfile")
    return library_id, profile


def _read_source(path: Path) -> list[tuple[str, str]]:
    """Return (filename, text) pairs for the manifest and components,
    from a directory or a zip archive, sorted by filename."""
    entries: list[tuple[str, str]] = []
    if path.is_dir():
        for p in sorted(path.iterdir()):
            if p.name == "library.gcrl" or p.suffix == ".gcrc":
                entries.append((p.name, p.read_text(encoding="utf-8")))
    elif path.is_file() and zipfile.is_zipfile(path):
        with zipfile.ZipFile(path) as zf:
            for name in sorted(zf.namelist()):
                base = name.rsplit("/", 1)[-1]
                if base == "library.gcrl" or base.endswith(".gcrc"):
                    entries.append((base, zf.read(name).decode("utf-8")))
    else:
        raise LibraryLoadError(f"{path}: not a library directory or archive")
    return entries


def load_library(source: str | Path) -> ComponentLibrary:
    """Load and validate a whole library; any invalid component file
    aborts the load naming that file."""
    path = Path(source)
    if not path.exists():
        raise LibraryLoadError(f"{path}: no such library")
    entries = _read_source(path)
    manifest = next((text for name, text in entries if name == "library.gcrl"), None)
    if manifest is None:
        raise LibraryLoadError(f"{path}: missing library.gcrl")
    library_id, profile = _parse_manifest(manifest)
    library = ComponentLibrary(library_id, profile, path=str(path))
    for name, text in entries:
        if not name.endswith(".gcrc"):
            continue
        try:
            component = parse_component_text(text)
        except ComponentSyntaxError as exc:
            raise LibraryLoadError(f"{name}: {exc}") from exc
        findings = validate_component(component)
        if findings:
            first = findings[0]
            raise LibraryLoadError(f"{name}: {first.code}: {first.message}")
        if component.component_id in library.components:
            raise DuplicateComponentId(
                f"{name}: duplicate component id {component.component_id!r}")
        library.components[component.component_id] = component
    return library


def find_components(
    library: ComponentLibrary,
    domain: str | None = None,
    query: str = "",
) -> list[Component]:
    """Case-insensitive name-prefix search, optionally narrowed to one
    domain.  Results come back sorted by name then id."""
    if domain is not None and domain not in library.domains():
        raise UnknownDomain(f"no domain {domain!r}")
    prefix = query.lower()
    hits = [
        c for c in library.components.values()
        if (domain is None or c.domain == domain) and c.name.lower().startswith(prefix)
    ]
    hits.sort(key=lambda c: (c.name.lower(), c.component_id))
    return hits
