"""Code-mask language: parsing, substitution, and the generation machine.

A mask is a line-oriented script.  A line starting with ``<RPWI:`` is a
directive, a line starting with ``<*>`` is a script comment, and every
other line is a literal that is appended (after variable substitution)
to the code of the step most recently created.  Evaluating a mask yields
a forest of generated steps plus any code attached directly to the
anchor step the interaction was started from.

Placement model
---------------
The machine keeps an insertion point made of a *current parent* and a
cursor.  It starts out pointing just after the anchor, among the
anchor's siblings, so consecutive ``NEWSTEP`` directives produce
siblings in script order.  ``PUTMARK n`` saves the current step (the
last one created, initially the anchor itself) into register ``n``;
``SETMARK n`` re-parents the insertion point beneath that saved step,
which is the only way to build nested structure.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .errors import (
    EmptyMark,
    InvalidDirectiveArgument,
    MarkOutOfRange,
    MaskSyntaxError,
    MisplacedDirective,
    NoActiveVariable,
    UnbalancedTest,
    UnboundVariable,
    UnknownDirective,
)

VAR_TOKEN = re.compile(r"<([A-Za-z_][A-Za-z0-9_]*)>")
_DIRECTIVE = re.compile(r"^<RPWI:([A-Za-z]+)>(?: (.*))?$")
_IDENT = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")

MARK_RANGE = range(1, 31)

DIRECTIVES = frozenset({
    "NEWSTEP", "TEST", "ENDTEST", "VALUE", "POSITIVE", "NEGATIVE",
    "INFORMATION", "NOTE", "PUTMARK", "SETMARK", "IGNORELAST",
    "NEWVAR", "SETVARVALUE", "SELECTVAR", "REPLACEVARSWITHVALUES",
})

# Directives whose argument must be empty.
_NO_ARG = frozenset({"ENDTEST", "POSITIVE", "NEGATIVE", "REPLACEVARSWITHVALUES"})


# --- parsed form ---------------------------------------------------------

@dataclass(frozen=True)
class Directive:
    line_no: int
    kind: str
    arg: str


@dataclass(frozen=True)
class Literal:
    line_no: int
    text: str


@dataclass(frozen=True)
class MaskScript:
    lines: tuple


def parse_mask(text: str) -> MaskScript:
    """Parse mask text into a validated script.

    Validation covers directive names, argument shape, mark register
    range, TEST/ENDTEST balance, and placement of the TEST-configuring
    directives (VALUE, POSITIVE, NEGATIVE must sit inside a block).
    """
    raw = text.split("\n") if text else []
    lines: list = []
    depth = 0
    for idx, raw_line in enumerate(raw):
        no = idx + 1
        if raw_line.startswith("<*>"):
            lines.append(Directive(no, "NOTE", raw_line[3:].lstrip()))
            continue
        if not raw_line.startswith("<RPWI:"):
            lines.append(Literal(no, raw_line))
            continue
        m = _DIRECTIVE.match(raw_line)
        if not m:
            raise MaskSyntaxError(no, "malformed directive line")
        kind, arg = m.group(1), m.group(2) or ""
        if kind not in DIRECTIVES:
            raise UnknownDirective(no, f"unknown directive {kind}")
        if kind in _NO_ARG and arg:
            raise InvalidDirectiveArgument(no, f"{kind} takes no argument")
        if kind in ("PUTMARK", "SETMARK"):
            try:
                register = int(arg)
            except ValueError:
                raise InvalidDirectiveArgument(no, f"{kind} needs an integer register")
            if register not in MARK_RANGE:
                raise MarkOutOfRange(no, f"mark register {register} outside 1..30")
            arg = str(register)
        elif kind == "IGNORELAST":
            if len(arg) != 1:
                raise InvalidDirectiveArgument(no, "IGNORELAST needs exactly one character")
        elif kind in ("NEWVAR", "SELECTVAR"):
            name = arg[1:-1] if arg.startswith("<") and arg.endswith(">") else arg
            if not _IDENT.match(name):
                raise InvalidDirectiveArgument(no, f"{kind} needs a variable name")
            arg = name
        if kind == "TEST":
            depth += 1
        elif kind == "ENDTEST":
            if depth == 0:
                raise UnbalancedTest(no, "ENDTEST without TEST")
            depth -= 1
        elif kind in ("VALUE", "POSITIVE", "NEGATIVE") and depth == 0:
            raise MisplacedDirective(no, f"{kind} outside a TEST block")
        lines.append(Directive(no, kind, arg))
    if depth != 0:
        raise UnbalancedTest(len(raw), "TEST without ENDTEST")
    return MaskScript(tuple(lines))


# --- variables -----------------------------------------------------------

@dataclass
class Bindings:
    """Variable values plus the currently selected variable."""

    values: dict[str, str] = field(default_factory=dict)
    active: str | None = None

    def copy(self) -> "Bindings":
        return Bindings(dict(self.values), self.active)


def substitute_variables(text: str, bindings: Bindings) -> tuple[str, list[str]]:
    """Replace ``<name>`` tokens in a single pass.

    Returns the substituted text and the names of tokens that had no
    binding; those tokens are left intact.  Replacement values are not
    re-scanned, so a value containing a token does not recurse.
    """
    unbound: list[str] = []

    def repl(m: re.Match) -> str:
        name = m.group(1)
        if name in bindings.values:
            return bindings.values[name]
        unbound.append(name)
        return m.group(0)

    return VAR_TOKEN.sub(repl, text), unbound


# --- evaluation result -----------------------------------------------------

@dataclass
class GeneratedStep:
    """One step produced by NEWSTEP, with nested children."""

    label: str
    slot: int  # script line number of the NEWSTEP that produced it
    code_lines: list[str] = field(default_factory=list)
    info_lines: list[str] = field(default_factory=list)
    children: list["GeneratedStep"] = field(default_factory=list)

    def as_dict(self) -> dict:
        return {
            "label": self.label,
            "slot": self.slot,
            "code": list(self.code_lines),
            "info": list(self.info_lines),
            "children": [c.as_dict() for c in self.children],
        }


ANCHOR = "anchor"  # sentinel value used in mark registers


@dataclass
class GenerationResult:
    """Outcome of one mask run, independent of any concrete tree."""

    parent_steps: list[GeneratedStep] = field(default_factory=list)
    anchor_steps: list[GeneratedStep] = field(default_factory=list)
    anchor_code: list[str] = field(default_factory=list)
    anchor_info: list[str] = field(default_factory=list)
    marks: dict[int, object] = field(default_factory=dict)

    def ordered_steps(self) -> list[GeneratedStep]:
        """All generated steps in creation order (ascending slot)."""
        out: list[GeneratedStep] = []

        def walk(step: GeneratedStep) -> None:
            out.append(step)
            for child in step.children:
                walk(child)

        for s in self.parent_steps:
            walk(s)
        for s in self.anchor_steps:
            walk(s)
        out.sort(key=lambda s: s.slot)
        return out

    def as_dict(self) -> dict:
        marks = {}
        for reg, target in sorted(self.marks.items()):
            marks[str(reg)] = ANCHOR if target is ANCHOR else target.slot
        return {
            "parentSteps": [s.as_dict() for s in self.parent_steps],
            "anchorSteps": [s.as_dict() for s in self.anchor_steps],
            "anchorCode": list(self.anchor_code),
            "anchorInfo": list(self.anchor_info),
            "marks": marks,
        }


# --- structured evaluator -----------------------------------------------

@dataclass
class _TestBlock:
    line_no: int
    arg: str
    value_arg: str
    negative: bool
    body: list


def _structure(lines: tuple) -> list:
    """Group a flat validated line list into nested TEST blocks.

    Direct VALUE/POSITIVE/NEGATIVE rows configure their block (the last
    of each wins) and do not join the body.
    """
    stack: list[list] = [[]]
    blocks: list[_TestBlock] = []
    for line in lines:
        if isinstance(line, Directive) and line.kind == "TEST":
            block = _TestBlock(line.line_no, line.arg, "", False, [])
            blocks.append(block)
            stack.append([])
        elif isinstance(line, Directive) and line.kind == "ENDTEST":
            body = stack.pop()
            block = blocks.pop()
            block.body = body
            stack[-1].append(block)
        elif isinstance(line, Directive) and line.kind == "VALUE" and blocks:
            blocks[-1].value_arg = line.arg
        elif isinstance(line, Directive) and line.kind == "POSITIVE" and blocks:
            blocks[-1].negative = False
        elif isinstance(line, Directive) and line.kind == "NEGATIVE" and blocks:
            blocks[-1].negative = True
        else:
            stack[-1].append(line)
    return stack[0]


class _Machine:
    """Execution state for one mask run."""

    def __init__(self, bindings: Bindings, result: GenerationResult):
        self.bindings = bindings
        self.result = result
        # Insertion point: the list new steps go into, plus a cursor.
        self.region: list[GeneratedStep] = result.parent_steps
        self.cursor = 0
        # Target of literal/INFORMATION/IGNORELAST lines.
        self.current: object = ANCHOR
        self.registers: dict[int, object] = {}

    # Substitution that must resolve immediately (control flow).
    def sub_strict(self, text: str) -> str:
        out, unbound = substitute_variables(text, self.bindings)
        if unbound:
            raise UnboundVariable(unbound[0])
        return out

    def sub(self, text: str) -> str:
        out, _ = substitute_variables(text, self.bindings)
        return out

    def code_buffer(self) -> list[str]:
        if self.current is ANCHOR:
            return self.result.anchor_code
        return self.current.code_lines

    def info_buffer(self) -> list[str]:
        if self.current is ANCHOR:
            return self.result.anchor_info
        return self.current.info_lines


def _resubstitute(result: GenerationResult, bindings: Bindings) -> None:
    def sub(text: str) -> str:
        return substitute_variables(text, bindings)[0]

    result.anchor_code[:] = [sub(t) for t in result.anchor_code]
    result.anchor_info[:] = [sub(t) for t in result.anchor_info]
    for step in result.ordered_steps():
        step.label = sub(step.label)
        step.code_lines[:] = [sub(t) for t in step.code_lines]
        step.info_lines[:] = [sub(t) for t in step.info_lines]


def _final_unbound_check(result: GenerationResult) -> None:
    """Fail on the first leftover variable token, scanning anchor code,
    anchor info, then every step in creation order."""

    def first_token(lines: list[str]) -> str | None:
        for text in lines:
            m = VAR_TOKEN.search(text)
            if m:
                return m.group(1)
        return None

    for lines in (result.anchor_code, result.anchor_info):
        name = first_token(lines)
        if name:
            raise UnboundVariable(name)
    for step in result.ordered_steps():
        m = VAR_TOKEN.search(step.label)
        if m:
            raise UnboundVariable(m.group(1))
        for lines in (step.code_lines, step.info_lines):
            name = first_token(lines)
            if name:
                raise UnboundVariable(name)


def evaluate_mask(script: MaskScript, bindings: Bindings, anchor: str = ANCHOR) -> GenerationResult:
    """Run a mask against variable bindings.

    The run is pure: the passed bindings are copied, mark registers are
    fresh, and the result depends only on the arguments.  Unresolved
    variable tokens surviving to the end of the run raise
    UnboundVariable; tokens appearing in TEST conditions fail
    immediately because control flow cannot proceed without a value.
    """
    machine = _Machine(bindings.copy(), GenerationResult())
    _run_nodes(_structure(script.lines), machine)
    machine.result.marks = machine.registers
    _final_unbound_check(machine.result)
    return machine.result


def _run_nodes(nodes: list, machine: _Machine) -> None:
    for node in nodes:
        if isinstance(node, _TestBlock):
            left = machine.sub_strict(node.arg)
            right = machine.sub_strict(node.value_arg)
            if (left == right) != node.negative:
                _run_nodes(node.body, machine)
            continue
        if isinstance(node, Literal):
            machine.code_buffer().append(machine.sub(node.text))
            continue
        _run_directive(node, machine)


def _run_directive(d: Directive, machine: _Machine) -> None:
    result = machine.result
    if d.kind == "NEWSTEP":
        step = GeneratedStep(label=machine.sub(d.arg), slot=d.line_no)
        machine.region.insert(machine.cursor, step)
        machine.cursor += 1
        machine.current = step
    elif d.kind == "INFORMATION":
        machine.info_buffer().append(machine.sub(d.arg))
    elif d.kind == "NOTE":
        pass
    elif d.kind == "PUTMARK":
        machine.registers[int(d.arg)] = machine.current
    elif d.kind == "SETMARK":
        register = int(d.arg)
        if register not in machine.registers:
            raise EmptyMark(register)
        target = machine.registers[register]
        if target is ANCHOR:
            machine.region = result.anchor_steps
        else:
            machine.region = target.children
        machine.cursor = len(machine.region)
        machine.current = target
    elif d.kind == "IGNORELAST":
        _ignore_last(machine.code_buffer(), d.arg)
    elif d.kind == "NEWVAR":
        machine.bindings.values[d.arg] = ""
        machine.bindings.active = d.arg
    elif d.kind == "SETVARVALUE":
        if machine.bindings.active is None:
            raise NoActiveVariable()
        machine.bindings.values[machine.bindings.active] = machine.sub(d.arg)
    elif d.kind == "SELECTVAR":
        if d.arg not in machine.bindings.values:
            raise UnboundVariable(d.arg)
        machine.bindings.active = d.arg
    elif d.kind == "REPLACEVARSWITHVALUES":
        _resubstitute(result, machine.bindings)
    else:  # pragma: no cover - parse_mask admits no other kind
        raise AssertionError(d.kind)


def _ignore_last(buffer: list[str], char: str) -> None:
    """Delete the final occurrence of ``char`` from accumulated code.

    Scans the newest line first, rightmost occurrence first; when the
    character never occurs the buffer is left unchanged.
    """
    for i in range(len(buffer) - 1, -1, -1):
        pos = buffer[i].rfind(char)
        if pos >= 0:
            buffer[i] = buffer[i][:pos] + buffer[i][pos + 1:]
            return


def mask_variable_names(script: MaskScript) -> list[str]:
    """Variable tokens a mask can read, in first-use order, ignoring
    names introduced by an earlier NEWVAR."""
    seen: list[str] = []
    declared: set[str] = set()
    for line in script.lines:
        if isinstance(line, Directive):
            if line.kind == "NEWVAR":
                declared.add(line.arg)
                continue
            if line.kind == "SELECTVAR":
                if line.arg not in declared and line.arg not in seen:
                    seen.append(line.arg)
                continue
            if line.kind not in ("NEWSTEP", "TEST", "VALUE", "INFORMATION", "SETVARVALUE"):
                continue
            text = line.arg
        else:
            text = line.text
        for m in VAR_TOKEN.finditer(text):
            name = m.group(1)
            if name not in declared and name not in seen:
                seen.append(name)
    return seen
