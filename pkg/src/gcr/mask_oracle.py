"""Reference mask evaluator used to cross-check the production one.

Deliberately written along a different axis: a flat program counter
walking the parsed line list, a hand-rolled token scanner instead of
regex substitution, and forward scans to resolve TEST blocks.  It only
shares the parsed line types and the result containers with the main
evaluator, never its logic.  The differential suite requires both
implementations to agree on results and on error types.
"""

from __future__ import annotations

from .errors import EmptyMark, NoActiveVariable, UnboundVariable
from .mask import (
    ANCHOR,
    Bindings,
    Directive,
    GeneratedStep,
    GenerationResult,
    Literal,
    MaskScript,
)


def _is_ident(name: str) -> bool:
    if not name:
        return False
    head, rest = name[0], name[1:]
    if not (head.isalpha() or head == "_"):
        return False
    return all(c.isalnum() or c == "_" for c in rest)


def _scan_sub(text: str, values: dict[str, str]) -> tuple[str, list[str]]:
    out: list[str] = []
    missing: list[str] = []
    i = 0
    while i < len(text):
        if text[i] == "<":
            close = text.find(">", i + 1)
            if close > i + 1:
                name = text[i + 1:close]
                if _is_ident(name):
                    if name in values:
                        out.append(values[name])
                    else:
                        missing.append(name)
                        out.append(text[i:close + 1])
                    i = close + 1
                    continue
        out.append(text[i])
        i += 1
    return "".join(out), missing


def _matching_end(lines: tuple, start: int) -> int:
    depth = 0
    for i in range(start, len(lines)):
        line = lines[i]
        if isinstance(line, Directive):
            if line.kind == "TEST":
                depth += 1
            elif line.kind == "ENDTEST":
                depth -= 1
                if depth == 0:
                    return i
    raise AssertionError("parse_mask guarantees balance")


def _block_config(lines: tuple, start: int, end: int) -> tuple[str, bool]:
    value_arg = ""
    negative = False
    depth = 0
    for i in range(start + 1, end):
        line = lines[i]
        if not isinstance(line, Directive):
            continue
        if line.kind == "TEST":
            depth += 1
        elif line.kind == "ENDTEST":
            depth -= 1
        elif depth == 0 and line.kind == "VALUE":
            value_arg = line.arg
        elif depth == 0 and line.kind == "POSITIVE":
            negative = False
        elif depth == 0 and line.kind == "NEGATIVE":
            negative = True
    return value_arg, negative


def reference_evaluate(script: MaskScript, bindings: Bindings, anchor: str = ANCHOR) -> GenerationResult:
    values = dict(bindings.values)
    active = bindings.active
    result = GenerationResult()
    created: list[GeneratedStep] = []
    registers: dict[int, object] = {}
    region: list[GeneratedStep] = result.parent_steps
    cursor = 0
    current: object = ANCHOR

    def code_of(target: object) -> list[str]:
        return result.anchor_code if target is ANCHOR else target.code_lines

    def info_of(target: object) -> list[str]:
        return result.anchor_info if target is ANCHOR else target.info_lines

    def sub(text: str) -> str:
        return _scan_sub(text, values)[0]

    def sub_strict(text: str) -> str:
        out, missing = _scan_sub(text, values)
        if missing:
            raise UnboundVariable(missing[0])
        return out

    lines = script.lines
    pc = 0
    while pc < len(lines):
        line = lines[pc]
        if isinstance(line, Literal):
            code_of(current).append(sub(line.text))
            pc += 1
            continue
        kind = line.kind
        if kind == "TEST":
            end = _matching_end(lines, pc)
            value_arg, negative = _block_config(lines, pc, end)
            equal = sub_strict(line.arg) == sub_strict(value_arg)
            if equal != negative:
                pc += 1  # walk into the body
            else:
                pc = end + 1
            continue
        if kind in ("ENDTEST", "VALUE", "POSITIVE", "NEGATIVE", "NOTE"):
            pc += 1
            continue
        if kind == "NEWSTEP":
            step = GeneratedStep(label=sub(line.arg), slot=line.line_no)
            region.insert(cursor, step)
            cursor += 1
            current = step
            created.append(step)
        elif kind == "INFORMATION":
            info_of(current).append(sub(line.arg))
        elif kind == "PUTMARK":
            registers[int(line.arg)] = current
        elif kind == "SETMARK":
            reg = int(line.arg)
            if reg not in registers:
                raise EmptyMark(reg)
            target = registers[reg]
            region = result.anchor_steps if target is ANCHOR else target.children
            cursor = len(region)
            current = target
        elif kind == "IGNORELAST":
            buf = code_of(current)
            hit = None
            for i, text in enumerate(buf):
                for pos, ch in enumerate(text):
                    if ch == line.arg:
                        hit = (i, pos)
            if hit is not None:
                i, pos = hit
                buf[i] = buf[i][:pos] + buf[i][pos + 1:]
        elif kind == "NEWVAR":
            values[line.arg] = ""
            active = line.arg
        elif kind == "SETVARVALUE":
            if active is None:
                raise NoActiveVariable()
            values[active] = sub(line.arg)
        elif kind == "SELECTVAR":
            if line.arg not in values:
                raise UnboundVariable(line.arg)
            active = line.arg
        elif kind == "REPLACEVARSWITHVALUES":
            result.anchor_code[:] = [sub(t) for t in result.anchor_code]
            result.anchor_info[:] = [sub(t) for t in result.anchor_info]
            for step in created:
                step.label = sub(step.label)
                step.code_lines[:] = [sub(t) for t in step.code_lines]
                step.info_lines[:] = [sub(t) for t in step.info_lines]
        else:  # pragma: no cover
            raise AssertionError(kind)
        pc += 1

    result.marks = registers

    def check(text: str) -> None:
        _, missing = _scan_sub(text, {})
        real = [m for m in missing]
        if real:
            raise UnboundVariable(real[0])

    for text in result.anchor_code:
        check(text)
    for text in result.anchor_info:
        check(text)
    for step in created:
        check(step.label)
        for text in step.code_lines:
            check(text)
        for text in step.info_lines:
            check(text)
    return result
