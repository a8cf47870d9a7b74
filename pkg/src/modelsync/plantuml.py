"""Parser and canonical renderer for a PlantUML class-diagram subset.

Supported inside one ``@startuml``/``@enduml`` region (or a single
```` ```plantuml ```` fenced block):

* ``class NAME {`` ... ``}`` blocks
* attributes ``VIS name[: TYPE]`` with VIS one of ``+ - #``
* methods ``VIS name(p[: TYPE], ...)[: TYPE]``
* binary associations ``A ["m"] -- ["m"] B [: label [>]]``

Types are identifiers, optionally suffixed ``[]`` for collections; a bare
``void`` names the void type.  A member whose name equals its class name is
a constructor.  Absent types mean "unknown" and are never flagged by the
checker.  Anything else inside the region is a syntax error carrying the
1-based line number.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import (DuplicateClassError, DuplicateMemberError,
                     MissingRegionError, ParseError)
from .model import (Attribute, ClassDef, ClassModel, Method, Parameter,
                    Relationship, SourceSpan, TypeRef, Visibility,
                    normalize_name)

_CLASS_RE = re.compile(r"^class\s+(\w+)\s*\{$")
_METHOD_RE = re.compile(r"^([+\-#])\s*(\w+)\s*\((.*)\)\s*(?::\s*(.+?))?\s*$")
_ATTR_RE = re.compile(r"^([+\-#])\s*(\w+)\s*(?::\s*(.+?))?\s*$")
_RELATION_RE = re.compile(
    r'^(\w+)\s*(?:"([^"]*)"\s*)?--\s*(?:"([^"]*)"\s*)?(\w+)\s*(?::(.*))?$')
_PARAM_RE = re.compile(r"^(\w+)\s*(?::\s*(.+?))?\s*$")

_VIS_MARKERS = {"+": Visibility.PUBLIC, "-": Visibility.PRIVATE,
                "#": Visibility.PROTECTED}


@dataclass
class PlantUmlDocument:
    """A parsed model plus the prose surrounding its envelope."""

    model: ClassModel
    leading_text: str = ""
    trailing_text: str = ""


def _parse_type(text: str, artifact: str, line_no: int) -> TypeRef:
    t = text.strip()
    if t.endswith("[]"):
        return TypeRef.collection(_parse_type(t[:-2], artifact, line_no))
    if t == "void":
        return TypeRef.void()
    if not re.fullmatch(r"\w+", t):
        raise ParseError(f"invalid type {text.strip()!r}",
                         artifact=artifact, line=line_no, col=1,
                         expected="type name")
    return TypeRef.named(t)


def _parse_params(text: str, artifact: str, line_no: int,
                  span: SourceSpan) -> list[Parameter]:
    text = text.strip()
    if not text:
        return []
    params: list[Parameter] = []
    for piece in text.split(","):
        m = _PARAM_RE.match(piece.strip())
        if not m:
            raise ParseError(f"invalid parameter {piece.strip()!r}",
                             artifact=artifact, line=line_no, col=1,
                             expected="name[: TYPE]")
        name, type_text = m.groups()
        ptype = (_parse_type(type_text, artifact, line_no)
                 if type_text else TypeRef.unknown())
        params.append(Parameter(name, ptype, span))
    return params


def _line_span(artifact: str, line_no: int, line: str) -> SourceSpan:
    stripped = line.strip()
    start = line.index(stripped[0]) + 1 if stripped else 1
    return SourceSpan(artifact, line_no, start, line_no,
                      start + len(stripped))


def _find_region(lines: list[str], artifact: str) -> tuple[int, int]:
    """Locate the diagram body; returns (first, last) 0-based line indexes."""
    fence_starts = [i for i, ln in enumerate(lines)
                    if ln.strip().startswith("```plantuml")]
    if len(fence_starts) > 1:
        raise ParseError("multiple ```plantuml blocks",
                         artifact=artifact, line=fence_starts[1] + 1,
                         expected="a single fenced block")
    if fence_starts:
        start = fence_starts[0] + 1
        for j in range(start, len(lines)):
            if lines[j].strip() == "```":
                inner = _inner_startuml(lines, start, j, artifact)
                return inner if inner else (start, j - 1)
        raise ParseError("unterminated ```plantuml block",
                         artifact=artifact, line=fence_starts[0] + 1,
                         expected="```")
    inner = _inner_startuml(lines, 0, len(lines), artifact)
    if inner is None:
        raise MissingRegionError("no @startuml region or ```plantuml block",
                                 artifact=artifact, expected="@startuml")
    return inner


def _inner_startuml(lines: list[str], lo: int, hi: int,
                    artifact: str) -> tuple[int, int] | None:
    starts = [i for i in range(lo, hi) if lines[i].strip() == "@startuml"]
    if not starts:
        return None
    if len(starts) > 1:
        raise ParseError("multiple @startuml regions",
                         artifact=artifact, line=starts[1] + 1,
                         expected="a single region")
    start = starts[0]
    for j in range(start + 1, hi):
        if lines[j].strip() == "@enduml":
            return (start + 1, j - 1)
    raise ParseError("@startuml without matching @enduml",
                     artifact=artifact, line=start + 1, expected="@enduml")


def parse_plantuml(text: str, artifact: str = "model") -> PlantUmlDocument:
    """Parse the subset grammar into a :class:`PlantUmlDocument`."""
    lines = text.split("\n")
    first, last = _find_region(lines, artifact)

    model = ClassModel(origin="model-artifact")
    seen_classes: dict[str, int] = {}
    cur: ClassDef | None = None
    cur_start = 0
    member_keys: set[tuple[str, int]] = set()
    attr_keys: set[str] = set()

    for idx in range(first, last + 1):
        line = lines[idx]
        line_no = idx + 1
        stripped = line.strip()
        if not stripped:
            continue

        if cur is None:
            m = _CLASS_RE.match(stripped)
            if m:
                name = m.group(1)
                key = normalize_name(name)
                if key in seen_classes:
                    raise DuplicateClassError(
                        f"class {name!r} already declared",
                        artifact=artifact, line=line_no)
                seen_classes[key] = line_no
                cur = ClassDef(name)
                cur_start = line_no
                member_keys = set()
                attr_keys = set()
                continue
            rel = _parse_relationship(stripped)
            if rel is not None:
                model.relationships.append(rel)
                continue
            raise ParseError(f"unrecognized line {stripped!r}",
                             artifact=artifact, line=line_no, col=1,
                             expected="class, relationship or blank")

        if stripped == "}":
            cur.span = SourceSpan(artifact, cur_start, 1, line_no,
                                  len(line) + 1)
            model.classes.append(cur)
            cur = None
            continue

        member = _parse_member(stripped, cur, artifact, line_no,
                               _line_span(artifact, line_no, line))
        if isinstance(member, Method):
            key = (normalize_name(member.name), member.arity)
            if key in member_keys:
                raise DuplicateMemberError(
                    f"duplicate method {member.name!r}/{member.arity}",
                    artifact=artifact, line=line_no)
            if member.is_constructor and cur.constructor() is not None:
                raise DuplicateMemberError(
                    f"class {cur.name!r} declares two constructors",
                    artifact=artifact, line=line_no)
            member_keys.add(key)
            cur.methods.append(member)
        else:
            key_a = normalize_name(member.name)
            if key_a in attr_keys:
                raise DuplicateMemberError(
                    f"duplicate attribute {member.name!r}",
                    artifact=artifact, line=line_no)
            attr_keys.add(key_a)
            cur.attributes.append(member)

    if cur is not None:
        raise ParseError(f"class {cur.name!r} is never closed",
                         artifact=artifact, line=cur_start, expected="}")

    _check_relationship_endpoints(model, artifact)
    leading = "\n".join(lines[:max(first - 1, 0)])
    trailing = "\n".join(lines[last + 2:])
    return PlantUmlDocument(model, leading, trailing)


def _parse_member(stripped: str, cls: ClassDef, artifact: str, line_no: int,
                  span: SourceSpan) -> Method | Attribute:
    m = _METHOD_RE.match(stripped)
    if m:
        vis, name, params_text, ret_text = m.groups()
        ret = (_parse_type(ret_text, artifact, line_no)
               if ret_text else TypeRef.unknown())
        return Method(
            name,
            _parse_params(params_text, artifact, line_no, span),
            ret,
            _VIS_MARKERS[vis],
            is_constructor=(name == cls.name),
            span=span,
        )
    a = _ATTR_RE.match(stripped)
    if a:
        vis, name, type_text = a.groups()
        atype = (_parse_type(type_text, artifact, line_no)
                 if type_text else TypeRef.unknown())
        return Attribute(name, atype, _VIS_MARKERS[vis], span)
    raise ParseError(f"unrecognized member line {stripped!r}",
                     artifact=artifact, line=line_no, col=1,
                     expected="attribute, method or }")


def _parse_relationship(stripped: str) -> Relationship | None:
    m = _RELATION_RE.match(stripped)
    if not m or "--" not in stripped:
        return None
    left, lmult, rmult, right, label_part = m.groups()
    label: str | None = None
    directed = False
    if label_part is not None:
        label = label_part.strip()
        if label.endswith(">"):
            directed = True
            label = label[:-1].strip()
        if not label:
            label = None
    return Relationship(left, right, lmult, rmult, label, directed)


def _check_relationship_endpoints(model: ClassModel, artifact: str) -> None:
    names = {normalize_name(c.name) for c in model.classes}
    for rel in model.relationships:
        for end in (rel.left, rel.right):
            if normalize_name(end) not in names:
                raise ParseError(
                    f"relationship endpoint {end!r} names no class",
                    artifact=artifact, expected="declared class name")


def _render_type(t: TypeRef) -> str | None:
    """PlantUML spelling of a type, or None when it has none (unknown)."""
    if t.kind == "named":
        return t.name
    if t.kind == "void":
        return "void"
    if t.kind == "collection":
        inner = _render_type(t.element) if t.element else None
        return f"{inner}[]" if inner else None
    return None


def _marker(vis: Visibility, default: str) -> str:
    for marker, v in _VIS_MARKERS.items():
        if v is vis:
            return marker
    return default


def _render_member(member: Attribute | Method) -> str:
    if isinstance(member, Attribute):
        typed = _render_type(member.type)
        suffix = f": {typed}" if typed else ""
        return f"  {_marker(member.visibility, '-')}{member.name}{suffix}"
    parts = []
    for p in member.params:
        typed = _render_type(p.type)
        parts.append(f"{p.name}: {typed}" if typed else p.name)
    ret = _render_type(member.return_type)
    suffix = f": {ret}" if ret and member.return_type.kind != "unknown" else ""
    return (f"  {_marker(member.visibility, '+')}{member.name}"
            f"({', '.join(parts)}){suffix}")


def _render_relationship(rel: Relationship) -> str:
    out = rel.left
    if rel.left_mult:
        out += f' "{rel.left_mult}"'
    out += " --"
    if rel.right_mult:
        out += f' "{rel.right_mult}"'
    out += f" {rel.right}"
    if rel.label:
        out += f" : {rel.label}"
        if rel.directed:
            out += " >"
    elif rel.directed:
        out += " : >"
    return out


def render_plantuml(model: ClassModel) -> str:
    """Render a model back to canonical PlantUML text.

    Declaration order is preserved; spacing and punctuation are normalized,
    so rendering is a pure function of the model's content.
    """
    blocks: list[list[str]] = []
    for cls in model.classes:
        lines = [f"class {cls.name} {{"]
        lines += [_render_member(a) for a in cls.attributes]
        lines += [_render_member(m) for m in cls.methods]
        lines.append("}")
        blocks.append(lines)
    if model.relationships:
        blocks.append([_render_relationship(r) for r in model.relationships])

    out: list[str] = ["@startuml"]
    for i, block in enumerate(blocks):
        if i:
            out.append("")
        out.extend(block)
    out.append("@enduml")
    return "\n".join(out) + "\n"
