"""modelsync: keep PlantUML class models and code structurally in sync."""

from .consistency import (Finding, FindingKind, InputDescriptor, Location,
                          MatchOptions, MatchResult, Report, check,
                          match_models)
from .correction import (CorrectionEdit, CorrectionSet, Policy, apply,
                         propose, resolve)
from .model import (Attribute, ClassDef, ClassModel, Method, Parameter,
                    Relationship, SourceSpan, TypeRef, Visibility,
                    model_equal, normalize_name, type_equivalent)
from .plantuml import PlantUmlDocument, parse_plantuml, render_plantuml
from .pycode import (CodeDocument, CodeEdit, apply_code_edits, parse_code,
                     render_code_skeleton)

__version__ = "0.1.0"

__all__ = [
    "Attribute", "ClassDef", "ClassModel", "CodeDocument", "CodeEdit",
    "CorrectionEdit", "CorrectionSet", "Finding", "FindingKind",
    "InputDescriptor", "Location", "MatchOptions", "MatchResult", "Method",
    "Parameter", "PlantUmlDocument", "Policy", "Relationship", "Report",
    "SourceSpan", "TypeRef", "Visibility", "apply", "apply_code_edits",
    "check", "match_models", "model_equal", "normalize_name", "parse_code",
    "parse_plantuml", "propose", "render_code_skeleton", "render_plantuml",
    "resolve", "type_equivalent",
]
