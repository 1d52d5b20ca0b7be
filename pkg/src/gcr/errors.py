"""Error taxonomy shared by every engine module.

All engine failures derive from GcrError so callers (CLI, HTTP service)
can map them uniformly: the class name is the stable machine-readable
error code, str(e) the human-readable detail.
"""

from __future__ import annotations


class GcrError(Exception):
    """Base class for all engine errors."""


# --- component files and libraries -------------------------------------

class ComponentSyntaxError(GcrError):
    """Malformed component file; carries the 1-based source line."""

    def __init__(self, line: int, reason: str):
        super().__init__(f"line {line}: {reason}")
        self.line = line
        self.reason = reason


class DuplicateControl(ComponentSyntaxError):
    pass


class UnknownControlKind(ComponentSyntaxError):
    pass


class UnknownPageVariable(ComponentSyntaxError):
    pass


class LibraryLoadError(GcrError):
    """A library failed to load; names the offending file."""


class DuplicateComponentId(LibraryLoadError):
    pass


class UnknownComponent(GcrError):
    pass


class UnknownDomain(GcrError):
    pass


# --- mask scripts -------------------------------------------------------

class MaskSyntaxError(GcrError):
    """Malformed mask script; carries the 1-based script line."""

    def __init__(self, line: int, reason: str):
        super().__init__(f"line {line}: {reason}")
        self.line = line
        self.reason = reason


class UnknownDirective(MaskSyntaxError):
    pass


class UnbalancedTest(MaskSyntaxError):
    pass


class MarkOutOfRange(MaskSyntaxError):
    pass


class MisplacedDirective(MaskSyntaxError):
    pass


class InvalidDirectiveArgument(MaskSyntaxError):
    pass


class MaskEvalError(GcrError):
    """Mask executed but could not complete."""


class UnboundVariable(MaskEvalError):
    def __init__(self, name: str):
        super().__init__(f"variable <{name}> has no value")
        self.name = name


class EmptyMark(MaskEvalError):
    def __init__(self, register: int):
        super().__init__(f"mark register {register} was never set")
        self.register = register


class NoActiveVariable(MaskEvalError):
    def __init__(self) -> None:
        super().__init__("no variable selected")


# --- steps tree ----------------------------------------------------------

class UnknownStep(GcrError):
    pass


class UnknownGoal(GcrError):
    pass


class DuplicateGoal(GcrError):
    pass


class RootImmutable(GcrError):
    pass


class EmptyLabel(GcrError):
    pass


class AtBoundary(GcrError):
    pass


class OverlappingSelection(GcrError):
    pass


class ClipboardEmpty(GcrError):
    pass


# --- interactions ---------------------------------------------------------

class UnknownInteraction(GcrError):
    pass


class ValidationError(GcrError):
    """A submitted page value failed validation."""

    def __init__(self, control: str, reason: str):
        super().__init__(f"{control}: {reason}")
        self.control = control
        self.reason = reason


class SlotVanished(GcrError):
    """A regeneration would drop a step that still owns foreign children,
    or has nowhere left to place a regenerated step."""


class MaskWritesAnchor(GcrError):
    """Interactions require masks that create their own steps instead of
    appending code or info to the step they were started from."""


# --- time machine ----------------------------------------------------------

class OutOfRange(GcrError):
    pass


class ReplayMismatch(GcrError):
    """Replaying the event log produced different ids than recorded."""


# --- emitter / runner -------------------------------------------------------

class UnknownProfile(GcrError):
    pass


class ToolchainMissing(GcrError):
    pass


class NonZeroExit(GcrError):
    def __init__(self, status: int, stderr: str):
        super().__init__(f"program exited with status {status}")
        self.status = status
        self.stderr = stderr


# --- project files -----------------------------------------------------------

class IoError(GcrError):
    pass


class ChecksumMismatch(GcrError):
    pass


class VersionUnsupported(GcrError):
    pass
