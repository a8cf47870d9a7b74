"""Turn findings into paired corrections and apply them under a policy.

Every error finding yields one :class:`CorrectionSet` holding a model-side
and/or code-side alternative that each repair it on their own.  A policy
picks among alternatives:

* ``model-wins`` edits the code, ``code-wins`` edits the model
* ``union`` adds missing entities to whichever side lacks them and, for
  value conflicts, imposes the preferred side's value (default: model)
* ``report-only`` applies nothing

Model edits are made on the class-model values and re-rendered canonically;
code edits compile down to span-based text patches so method bodies and
comments survive byte-for-byte.  Members copied from the code into the
model get snake_case names converted to camelCase, mirroring how merged
models conventionally spell them.
"""

from __future__ import annotations

import copy
from dataclasses import dataclass
from enum import Enum

from .consistency import (Finding, FindingContext, FindingKind,
                          MISSING_KINDS, Report, annotated_findings,
                          fingerprint_text)
from .errors import EditConflictError, StaleReportError
from .model import (Attribute, ClassDef, ClassModel, Method, Parameter,
                    SourceSpan, TypeRef, normalize_name)
from .plantuml import render_plantuml
from .pycode import (CodeDocument, CodeEdit, PY_TYPE_SPELLINGS,
                     apply_code_edits, block_delete_span, body_indent,
                     member_indent, render_class_stub, scan_def_line)


class Policy(Enum):
    MODEL_WINS = "model-wins"
    CODE_WINS = "code-wins"
    UNION = "union"
    REPORT_ONLY = "report-only"


EDIT_KINDS = ("add-class", "add-member", "rename", "change-type",
              "change-signature", "remove-class", "remove-member")


@dataclass(frozen=True)
class CorrectionEdit:
    """One abstract edit on one side; payload fields depend on ``kind``."""

    side: str            # "model" | "code"
    kind: str            # one of EDIT_KINDS
    description: str
    class_name: str
    member_kind: str | None = None       # "method" | "attribute"
    member_name: str | None = None
    new_name: str | None = None          # rename
    new_type: TypeRef | None = None      # change-type
    type_slot: str | None = None         # "param:<i>" | "return" | "attribute"
    new_params: tuple[Parameter, ...] | None = None   # change-signature
    class_payload: ClassDef | None = None             # add-class
    member_payload: object | None = None              # add-member


@dataclass(frozen=True)
class CorrectionSet:
    finding_id: str
    finding_kind: FindingKind
    detail: str
    alternatives: tuple[CorrectionEdit, ...]

    def side(self, side: str) -> CorrectionEdit | None:
        for alt in self.alternatives:
            if alt.side == side:
                return alt
        return None


def snake_to_camel(name: str) -> str:
    parts = [p for p in name.split("_") if p]
    if not parts:
        return name
    head, *rest = parts
    return head + "".join(p[:1].upper() + p[1:] for p in rest)


def _camelized_member(member):
    clone = copy.deepcopy(member)
    clone.name = snake_to_camel(clone.name)
    return clone


def _camelized_class(cls: ClassDef) -> ClassDef:
    clone = copy.deepcopy(cls)
    for a in clone.attributes:
        a.name = snake_to_camel(a.name)
    for m in clone.methods:
        if not m.is_constructor:
            m.name = snake_to_camel(m.name)
    return clone


def verify_fresh(report: Report, design: ClassModel,
                 code_doc: CodeDocument) -> None:
    """Raise StaleReportError when the report predates the artifacts."""
    if report.model_fingerprint is not None and \
            report.model_fingerprint != fingerprint_text(
                render_plantuml(design)):
        raise StaleReportError("design model changed since the report")
    if report.code_fingerprint is not None and \
            report.code_fingerprint != fingerprint_text(code_doc.raw_text):
        raise StaleReportError("code changed since the report")


def propose(report: Report, design: ClassModel,
            code_doc: CodeDocument) -> list[CorrectionSet]:
    """One CorrectionSet per error finding; advisory findings yield none."""
    verify_fresh(report, design, code_doc)
    annotated = {f.id: (f, ctx) for f, ctx in annotated_findings(
        design, code_doc.model, report.options)}
    sets: list[CorrectionSet] = []
    for finding in report.findings:
        if finding.severity != "error":
            continue
        entry = annotated.get(finding.id)
        if entry is None:
            raise StaleReportError(
                f"finding {finding.id} not reproducible from the artifacts")
        _, ctx = entry
        sets.append(_build_set(finding, ctx))
    return sets


def _build_set(f: Finding, ctx: FindingContext) -> CorrectionSet:
    kind = f.kind
    alts: list[CorrectionEdit]
    if kind is FindingKind.MISSING_CLASS_IN_CODE:
        cls = ctx.model_class
        assert cls is not None
        alts = [
            CorrectionEdit("code", "add-class",
                           f"add class '{cls.name}' to the code as a stub",
                           cls.name, class_payload=cls),
            CorrectionEdit("model", "remove-class",
                           f"remove class '{cls.name}' from the design model",
                           cls.name),
        ]
    elif kind is FindingKind.MISSING_CLASS_IN_MODEL:
        cls = ctx.code_class
        assert cls is not None
        alts = [
            CorrectionEdit("model", "add-class",
                           f"add class '{cls.name}' to the design model",
                           cls.name, class_payload=_camelized_class(cls)),
            CorrectionEdit("code", "remove-class",
                           f"remove class '{cls.name}' from the code",
                           cls.name),
        ]
    elif kind in (FindingKind.MISSING_METHOD_IN_CODE,
                  FindingKind.MISSING_ATTRIBUTE_IN_CODE):
        member = ctx.model_member
        what = ("method" if kind is FindingKind.MISSING_METHOD_IN_CODE
                else "attribute")
        alts = [
            CorrectionEdit("code", "add-member",
                           f"add {what} '{member.name}' to class "
                           f"'{ctx.code_class.name}' in the code as a stub",
                           ctx.code_class.name, member_kind=what,
                           member_payload=member),
            CorrectionEdit("model", "remove-member",
                           f"remove {what} '{member.name}' from class "
                           f"'{ctx.model_class.name}' in the design model",
                           ctx.model_class.name, member_kind=what,
                           member_name=member.name),
        ]
    elif kind in (FindingKind.MISSING_METHOD_IN_MODEL,
                  FindingKind.MISSING_ATTRIBUTE_IN_MODEL):
        member = ctx.code_member
        what = ("method" if kind is FindingKind.MISSING_METHOD_IN_MODEL
                else "attribute")
        renamed = _camelized_member(member)
        alts = [
            CorrectionEdit("model", "add-member",
                           f"add {what} '{renamed.name}' to class "
                           f"'{ctx.model_class.name}' in the design model",
                           ctx.model_class.name, member_kind=what,
                           member_payload=renamed),
            CorrectionEdit("code", "remove-member",
                           f"remove {what} '{member.name}' from class "
                           f"'{ctx.code_class.name}' in the code",
                           ctx.code_class.name, member_kind=what,
                           member_name=member.name),
        ]
    elif kind is FindingKind.PROBABLE_RENAME:
        m, c = ctx.model_member, ctx.code_member
        what = "method" if isinstance(m, Method) else "attribute"
        alts = [
            CorrectionEdit("model", "rename",
                           f"rename {what} '{m.name}' to "
                           f"'{snake_to_camel(c.name)}' in the design model",
                           ctx.model_class.name, member_kind=what,
                           member_name=m.name,
                           new_name=snake_to_camel(c.name)),
            CorrectionEdit("code", "rename",
                           f"rename {what} '{c.name}' to '{m.name}' "
                           f"in the code",
                           ctx.code_class.name, member_kind=what,
                           member_name=c.name, new_name=m.name),
        ]
    elif kind is FindingKind.CONSTRUCTOR_ARITY_MISMATCH:
        m, c = ctx.model_member, ctx.code_member
        alts = [
            CorrectionEdit("model", "change-signature",
                           f"make '{m.name}' in the design model take "
                           f"({_params_text(c.params)}) as in the code",
                           ctx.model_class.name, member_kind="method",
                           member_name=m.name,
                           new_params=tuple(copy.deepcopy(c.params))),
            CorrectionEdit("code", "change-signature",
                           f"make '{c.name}' in the code take "
                           f"({_params_text(m.params)}) as in the design "
                           f"model",
                           ctx.code_class.name, member_kind="method",
                           member_name=c.name,
                           new_params=tuple(copy.deepcopy(m.params))),
        ]
    elif kind is FindingKind.PARAM_TYPE_MISMATCH:
        m, c = ctx.model_member, ctx.code_member
        i = ctx.param_index
        assert i is not None
        slot = f"param:{i}"
        alts = [
            CorrectionEdit("model", "change-type",
                           f"change parameter '{m.params[i].name}' of "
                           f"'{m.name}' to '{c.params[i].type}' in the "
                           f"design model",
                           ctx.model_class.name, member_kind="method",
                           member_name=m.name, new_type=c.params[i].type,
                           type_slot=slot),
            CorrectionEdit("code", "change-type",
                           f"change parameter '{c.params[i].name}' of "
                           f"'{c.name}' to "
                           f"'{_py_spelling_text(m.params[i].type)}' in "
                           f"the code",
                           ctx.code_class.name, member_kind="method",
                           member_name=c.name, new_type=m.params[i].type,
                           type_slot=slot),
        ]
    elif kind is FindingKind.RETURN_TYPE_MISMATCH:
        m, c = ctx.model_member, ctx.code_member
        alts = [
            CorrectionEdit("model", "change-type",
                           f"change the return type of '{m.name}' to "
                           f"'{c.return_type}' in the design model",
                           ctx.model_class.name, member_kind="method",
                           member_name=m.name, new_type=c.return_type,
                           type_slot="return"),
            CorrectionEdit("code", "change-type",
                           f"change the return type of '{c.name}' to "
                           f"'{_py_spelling_text(m.return_type)}' in "
                           f"the code",
                           ctx.code_class.name, member_kind="method",
                           member_name=c.name, new_type=m.return_type,
                           type_slot="return"),
        ]
    elif kind is FindingKind.ATTRIBUTE_TYPE_MISMATCH:
        m, c = ctx.model_member, ctx.code_member
        alts = [
            CorrectionEdit("model", "change-type",
                           f"change attribute '{m.name}' to '{c.type}' "
                           f"in the design model",
                           ctx.model_class.name, member_kind="attribute",
                           member_name=m.name, new_type=c.type,
                           type_slot="attribute"),
            CorrectionEdit("code", "change-type",
                           f"change attribute '{c.name}' to "
                           f"'{_py_spelling_text(m.type)}' in the code",
                           ctx.code_class.name, member_kind="attribute",
                           member_name=c.name, new_type=m.type,
                           type_slot="attribute"),
        ]
    else:  # pragma: no cover - advisory kinds are filtered by propose
        raise ValueError(f"no corrections for {kind}")
    return CorrectionSet(f.id, kind, f.detail, tuple(alts))


def _params_text(params) -> str:
    return ", ".join(p.name for p in params)


def _py_spelling_text(t: TypeRef) -> str:
    if t.kind == "named":
        return PY_TYPE_SPELLINGS.get(t.name or "", t.name or "")
    return str(t)


def resolve(sets: list[CorrectionSet], policy: Policy,
            preferred_side: str = "model") -> list[CorrectionEdit]:
    """Pick one alternative per set according to the policy."""
    if policy is Policy.REPORT_ONLY:
        return []
    chosen: list[CorrectionEdit] = []
    for s in sets:
        if policy is Policy.MODEL_WINS:
            pick = s.side("code")
        elif policy is Policy.CODE_WINS:
            pick = s.side("model")
        else:  # union
            if s.finding_kind in MISSING_KINDS:
                pick = next((a for a in s.alternatives
                             if a.kind.startswith("add-")), None)
            else:
                pick = s.side("code" if preferred_side == "model"
                              else "model")
        if pick is not None:
            chosen.append(pick)
    return chosen


def apply(design: ClassModel, code_doc: CodeDocument,
          chosen: list[CorrectionEdit]) -> tuple[ClassModel, str]:
    """Apply chosen edits; returns the new model and the patched code text.

    The model is edited as values (callers re-render it); the code is
    patched span-wise so untouched bytes survive verbatim.
    """
    new_model = copy.deepcopy(design)
    code_edits: list[CodeEdit] = []
    # attribute insertions into classes lacking a constructor are grouped,
    # one synthesized __init__ per class
    ctorless_attrs: dict[str, list[Attribute]] = {}

    # compile class insertions last: they share their insertion point with
    # member stubs appended to the final class, and must come after them
    class_adds: list[CorrectionEdit] = []
    for edit in chosen:
        if edit.side == "model":
            _apply_model_edit(new_model, edit)
        elif edit.kind == "add-class":
            class_adds.append(edit)
        else:
            code_edits.extend(
                _compile_code_edit(code_doc, edit, ctorless_attrs))

    for class_name, attrs in ctorless_attrs.items():
        code_edits.append(_ctor_insertion(code_doc, class_name, attrs))
    for edit in class_adds:
        code_edits.extend(_compile_code_edit(code_doc, edit, ctorless_attrs))

    patched = (apply_code_edits(code_doc, code_edits)
               if code_edits else code_doc.raw_text)
    return new_model, patched


# --- model-side edits ------------------------------------------------------

def _model_class(model: ClassModel, name: str) -> ClassDef:
    cls = model.class_named(name)
    if cls is None:
        raise EditConflictError(f"model edit targets missing class {name!r}")
    return cls


def _find_member(cls: ClassDef, kind: str | None, name: str):
    if kind in (None, "method"):
        for m in cls.methods:
            if m.name == name:
                return m
    if kind in (None, "attribute"):
        for a in cls.attributes:
            if a.name == name:
                return a
    raise EditConflictError(
        f"edit targets missing member {cls.name}.{name}")


def _apply_model_edit(model: ClassModel, edit: CorrectionEdit) -> None:
    if edit.kind == "add-class":
        assert edit.class_payload is not None
        model.classes.append(copy.deepcopy(edit.class_payload))
        return
    if edit.kind == "remove-class":
        cls = _model_class(model, edit.class_name)
        model.classes.remove(cls)
        key = normalize_name(cls.name)
        model.relationships = [
            r for r in model.relationships
            if key not in (normalize_name(r.left), normalize_name(r.right))]
        return

    cls = _model_class(model, edit.class_name)
    if edit.kind == "add-member":
        member = copy.deepcopy(edit.member_payload)
        if edit.member_kind == "attribute":
            cls.attributes.append(member)
        else:
            cls.methods.append(member)
        return
    if edit.kind == "remove-member":
        member = _find_member(cls, edit.member_kind, edit.member_name)
        if isinstance(member, Attribute):
            cls.attributes.remove(member)
        else:
            cls.methods.remove(member)
        return
    if edit.kind == "rename":
        member = _find_member(cls, edit.member_kind, edit.member_name)
        member.name = edit.new_name
        return
    if edit.kind == "change-signature":
        member = _find_member(cls, "method", edit.member_name)
        member.params = list(copy.deepcopy(edit.new_params or ()))
        return
    if edit.kind == "change-type":
        member = _find_member(cls, edit.member_kind, edit.member_name)
        assert edit.new_type is not None
        slot = edit.type_slot or ""
        if slot == "attribute":
            member.type = edit.new_type
        elif slot == "return":
            member.return_type = edit.new_type
        elif slot.startswith("param:"):
            index = int(slot.split(":", 1)[1])
            try:
                member.params[index].type = edit.new_type
            except IndexError:
                raise EditConflictError(
                    f"parameter {index} missing on {member.name!r}")
        else:
            raise EditConflictError(f"unknown type slot {slot!r}")
        return
    raise EditConflictError(f"unknown model edit kind {edit.kind!r}")


# --- code-side edits -------------------------------------------------------

def _code_class(doc: CodeDocument, name: str) -> ClassDef:
    cls = doc.model.class_named(name)
    if cls is None:
        raise EditConflictError(f"code edit targets missing class {name!r}")
    return cls


def _def_layout(doc: CodeDocument, method: Method):
    assert method.span is not None
    line = doc.lines()[method.span.start_line - 1]
    layout = scan_def_line(line)
    if layout is None:
        raise EditConflictError(
            f"cannot re-scan def line for {method.name!r}")
    return layout, method.span.start_line


def _code_method(doc: CodeDocument, cls: ClassDef, name: str) -> Method:
    for m in cls.methods:
        if m.name == name:
            return m
    raise EditConflictError(f"code edit targets missing method "
                            f"{cls.name}.{name}")


def _code_attr(doc: CodeDocument, cls: ClassDef, name: str) -> Attribute:
    for a in cls.attributes:
        if a.name == name:
            return a
    raise EditConflictError(f"code edit targets missing attribute "
                            f"{cls.name}.{name}")


def _py_param_text(p: Parameter) -> str:
    if p.type.kind == "named":
        return f"{p.name}: {PY_TYPE_SPELLINGS.get(p.type.name, p.type.name)}"
    return p.name


def _placeholder_rhs(t: TypeRef) -> str:
    if t.kind == "collection":
        return "[]"
    if t.kind == "named" and t.name in ("bool", "boolean"):
        return "False"
    return "None"


def _insertion_span(artifact: str, line: int) -> SourceSpan:
    return SourceSpan(artifact, line, 1, line, 1)


def _artifact_of(doc: CodeDocument) -> str:
    for cls in doc.model.classes:
        if cls.span is not None:
            return cls.span.artifact
    return "code"


def _compile_code_edit(doc: CodeDocument, edit: CorrectionEdit,
                       ctorless_attrs: dict[str, list[Attribute]]
                       ) -> list[CodeEdit]:
    artifact = _artifact_of(doc)
    if edit.kind == "add-class":
        assert edit.class_payload is not None
        last_line = max((c.span.end_line for c in doc.model.classes
                         if c.span is not None), default=len(doc.lines()))
        stub = "\n".join(render_class_stub(edit.class_payload))
        return [CodeEdit("insert-class",
                         _insertion_span(artifact, last_line + 1),
                         f"\n{stub}\n")]

    cls = _code_class(doc, edit.class_name)
    if edit.kind == "remove-class":
        assert cls.span is not None
        return [CodeEdit("delete-span", block_delete_span(cls.span))]

    if edit.kind == "add-member":
        member = edit.member_payload
        if edit.member_kind == "attribute":
            ctor = cls.constructor()
            if ctor is None:
                ctorless_attrs.setdefault(cls.name, []).append(member)
                return []
            indent = " " * body_indent(doc, ctor)
            line = (f"{indent}self.{member.name} = "
                    f"{_placeholder_rhs(member.type)}\n")
            assert ctor.span is not None
            return [CodeEdit("insert-member",
                             _insertion_span(artifact,
                                             ctor.span.end_line + 1),
                             line)]
        indent = " " * member_indent(doc, cls)
        sig = ", ".join(["self"] + [_py_param_text(p)
                                    for p in member.params])
        ret = ""
        if member.return_type.kind == "named":
            spelled = PY_TYPE_SPELLINGS.get(member.return_type.name,
                                            member.return_type.name)
            ret = f" -> {spelled}"
        name = "__init__" if member.is_constructor else member.name
        stub = (f"{indent}def {name}({sig}){ret}:\n"
                f"{indent}    pass\n")
        assert cls.span is not None
        return [CodeEdit("insert-member",
                         _insertion_span(artifact, cls.span.end_line + 1),
                         stub)]

    if edit.kind == "remove-member":
        member = _find_member(cls, edit.member_kind, edit.member_name)
        assert member.span is not None
        return [CodeEdit("delete-span", block_delete_span(member.span))]

    if edit.kind == "rename":
        if edit.member_kind == "attribute":
            attr = _code_attr(doc, cls, edit.member_name)
            assert attr.span is not None
            line = doc.lines()[attr.span.start_line - 1]
            target = f"self.{attr.name}"
            col = line.index(target) + len("self.") + 1
            span = SourceSpan(artifact, attr.span.start_line, col,
                              attr.span.start_line, col + len(attr.name))
            return [CodeEdit("rename-identifier", span, edit.new_name or "")]
        method = _code_method(doc, cls, edit.member_name)
        layout, line_no = _def_layout(doc, method)
        span = SourceSpan(artifact, line_no, layout.name_start + 1,
                          line_no, layout.name_end + 1)
        return [CodeEdit("rename-identifier", span, edit.new_name or "")]

    if edit.kind == "change-signature":
        method = _code_method(doc, cls, edit.member_name)
        layout, line_no = _def_layout(doc, method)
        sig = ", ".join(["self"] + [_py_param_text(p)
                                    for p in (edit.new_params or ())])
        span = SourceSpan(artifact, line_no, layout.lparen + 2,
                          line_no, layout.rparen + 1)
        return [CodeEdit("set-annotation", span, sig)]

    if edit.kind == "change-type":
        assert edit.new_type is not None
        slot = edit.type_slot or ""
        if slot == "attribute":
            return _attr_type_edit(doc, cls, edit, artifact)
        method = _code_method(doc, cls, edit.member_name)
        layout, line_no = _def_layout(doc, method)
        spelled = (PY_TYPE_SPELLINGS.get(edit.new_type.name,
                                         edit.new_type.name)
                   if edit.new_type.kind == "named" else None)
        if slot == "return":
            if layout.ret is not None:
                span = SourceSpan(artifact, line_no, layout.ret_start + 1,
                                  line_no, layout.ret_end + 1)
                payload = f"-> {spelled}" if spelled else ""
            else:
                span = _after_col(artifact, line_no, layout.rparen + 1)
                payload = f" -> {spelled}" if spelled else ""
            return [CodeEdit("set-annotation", span, payload)]
        index = int(slot.split(":", 1)[1])
        try:
            pl = layout.params[index + 1]  # skip the receiver
        except IndexError:
            raise EditConflictError(
                f"parameter {index} missing on {method.name!r}")
        if pl.annotation is not None:
            span = SourceSpan(artifact, line_no, pl.annot_start + 1,
                              line_no, pl.annot_end + 1)
            payload = f": {spelled}" if spelled else ""
        else:
            span = _after_col(artifact, line_no, pl.name_end)
            payload = f": {spelled}" if spelled else ""
        return [CodeEdit("set-annotation", span, payload)]

    raise EditConflictError(f"unknown code edit kind {edit.kind!r}")


def _after_col(artifact: str, line: int, col0: int) -> SourceSpan:
    return SourceSpan(artifact, line, col0 + 1, line, col0 + 1)


def _attr_type_edit(doc: CodeDocument, cls: ClassDef, edit: CorrectionEdit,
                    artifact: str) -> list[CodeEdit]:
    attr = _code_attr(doc, cls, edit.member_name)
    rhs = doc.attr_exprs.get((cls.name, attr.name))
    ctor = cls.constructor()
    if rhs is not None and ctor is not None:
        rhs_text, rhs_span = rhs
        for i, p in enumerate(ctor.params):
            if p.name == rhs_text.strip():
                # the attribute's type comes from this parameter's
                # annotation, so retarget the edit there
                sub = CorrectionEdit(
                    "code", "change-type", edit.description,
                    cls.name, member_kind="method", member_name=ctor.name,
                    new_type=edit.new_type, type_slot=f"param:{i}")
                return _compile_code_edit(doc, sub, {})
    if rhs is None:
        raise EditConflictError(
            f"no recorded initializer for {cls.name}.{attr.name}")
    rhs_text, rhs_span = rhs
    assert edit.new_type is not None
    return [CodeEdit("set-annotation", rhs_span,
                     _placeholder_rhs(edit.new_type))]


def _ctor_insertion(doc: CodeDocument, class_name: str,
                    attrs: list[Attribute]) -> CodeEdit:
    cls = _code_class(doc, class_name)
    artifact = _artifact_of(doc)
    indent = " " * member_indent(doc, cls)
    body = " " * (member_indent(doc, cls) + 4)
    lines = [f"{indent}def __init__(self):"]
    lines += [f"{body}self.{a.name} = {_placeholder_rhs(a.type)}"
              for a in attrs]
    assert cls.span is not None
    return CodeEdit("insert-member",
                    _insertion_span(artifact, cls.span.start_line + 1),
                    "\n".join(lines) + "\n")
