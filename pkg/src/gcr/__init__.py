"""Build programs as a steps tree and generate their code.

The engine turns interactions with reusable components into a visible
tree of steps and hidden generated code, with full time travel over the
edit history.  See the README for the CLI and HTTP surfaces.
"""

from .components import (
    Component,
    ComponentLibrary,
    find_components,
    load_library,
    parse_component_text,
    validate_component,
)
from .emitter import PROFILES, TargetProfile, emit_project, get_profile
from .mask import Bindings, evaluate_mask, parse_mask, substitute_variables
from .model import ProjectState
from .projectfile import load_project, save_project
from .session import ProjectSession

__version__ = "0.1.0"

__all__ = [
    "Bindings",
    "Component",
    "ComponentLibrary",
    "PROFILES",
    "ProjectSession",
    "ProjectState",
    "TargetProfile",
    "emit_project",
    "evaluate_mask",
    "find_components",
    "get_profile",
    "load_library",
    "load_project",
    "parse_component_text",
    "parse_mask",
    "save_project",
    "substitute_variables",
    "validate_component",
    "__version__",
]
