"""Deterministic structural diff between a design model and a code model.

Classes are paired by canonical name; within paired classes, constructors
pair with constructors, methods pair by canonical name, attributes by
canonical name.  Leftover members on opposite sides whose canonical names
sit within a relative Levenshtein distance threshold (and whose arity
matches, for methods) become rename candidates; a rename candidate
suppresses the pair of missing-member findings it replaces.

Unknown types never produce findings, so unannotated code cannot drown a
report in false positives.  The same principle extends to unpaired
attributes: an attribute whose type carries no named evidence (a bare
``self.x = expr`` assignment, an untyped model field) is not reported as
missing from the other side — attribute evidence is inherently weaker
than declared methods.  A constructor present on one side only is not
reported either: the silent side simply leaves construction implicit.
Relationship checking is advisory, opt-in, and based solely on code-side
type evidence.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from enum import Enum

from .model import (Attribute, ClassDef, ClassModel, Method, SourceSpan,
                    TypeRef, TypeTable, DEFAULT_TYPE_EQUIVALENCES,
                    normalize_name, type_equivalent)


class FindingKind(Enum):
    MISSING_CLASS_IN_CODE = "MissingClassInCode"
    MISSING_CLASS_IN_MODEL = "MissingClassInModel"
    MISSING_METHOD_IN_CODE = "MissingMethodInCode"
    MISSING_METHOD_IN_MODEL = "MissingMethodInModel"
    MISSING_ATTRIBUTE_IN_CODE = "MissingAttributeInCode"
    MISSING_ATTRIBUTE_IN_MODEL = "MissingAttributeInModel"
    PROBABLE_RENAME = "ProbableRename"
    CONSTRUCTOR_ARITY_MISMATCH = "ConstructorArityMismatch"
    PARAM_TYPE_MISMATCH = "ParamTypeMismatch"
    RETURN_TYPE_MISMATCH = "ReturnTypeMismatch"
    ATTRIBUTE_TYPE_MISMATCH = "AttributeTypeMismatch"
    RELATIONSHIP_MISSING_IN_CODE = "RelationshipMissingInCode"
    RELATIONSHIP_MISSING_IN_MODEL = "RelationshipMissingInModel"


MISSING_KINDS = {
    FindingKind.MISSING_CLASS_IN_CODE, FindingKind.MISSING_CLASS_IN_MODEL,
    FindingKind.MISSING_METHOD_IN_CODE, FindingKind.MISSING_METHOD_IN_MODEL,
    FindingKind.MISSING_ATTRIBUTE_IN_CODE,
    FindingKind.MISSING_ATTRIBUTE_IN_MODEL,
}

_ADVISORY_KINDS = {FindingKind.RELATIONSHIP_MISSING_IN_CODE,
                   FindingKind.RELATIONSHIP_MISSING_IN_MODEL}

_KIND_ORDER = {kind: i for i, kind in enumerate(FindingKind)}


@dataclass(frozen=True)
class MatchOptions:
    name_mode: str = "canonical"
    rename_threshold: float = 0.3
    type_table: TypeTable = DEFAULT_TYPE_EQUIVALENCES
    infer_code_relationships: bool = False


@dataclass(frozen=True)
class Location:
    class_name: str
    member: str | None = None
    span: SourceSpan | None = None


@dataclass(frozen=True)
class Finding:
    id: str
    kind: FindingKind
    severity: str  # "error" | "advisory"
    model_loc: Location | None
    code_loc: Location | None
    detail: str


@dataclass(frozen=True)
class FindingContext:
    """The matched entities behind a finding, for the correction engine."""

    model_class: ClassDef | None = None
    code_class: ClassDef | None = None
    model_member: object | None = None  # Method | Attribute
    code_member: object | None = None
    param_index: int | None = None


@dataclass(frozen=True)
class InputDescriptor:
    path: str
    sha256: str


@dataclass(frozen=True)
class Report:
    schema_version: int
    inputs: tuple[InputDescriptor, ...]
    options: MatchOptions
    findings: tuple[Finding, ...]
    model_fingerprint: str | None = None
    code_fingerprint: str | None = None

    def error_findings(self) -> tuple[Finding, ...]:
        return tuple(f for f in self.findings if f.severity == "error")


def levenshtein(a: str, b: str) -> int:
    """Classic edit distance (insert/delete/substitute, unit costs)."""
    if a == b:
        return 0
    if not a:
        return len(b)
    if not b:
        return len(a)
    prev = list(range(len(b) + 1))
    for i, ca in enumerate(a, 1):
        cur = [i]
        for j, cb in enumerate(b, 1):
            cur.append(min(prev[j] + 1, cur[j - 1] + 1,
                           prev[j - 1] + (ca != cb)))
        prev = cur
    return prev[-1]


def relative_distance(a: str, b: str) -> float:
    longest = max(len(a), len(b))
    if longest == 0:
        return 0.0
    return levenshtein(a, b) / longest


@dataclass
class MemberPair:
    model: object  # Method | Attribute
    code: object


@dataclass
class RenamePair:
    model: object
    code: object
    distance: int
    longest: int


@dataclass
class ClassMatch:
    model_class: ClassDef
    code_class: ClassDef
    constructor_pair: MemberPair | None = None
    method_pairs: list[MemberPair] = field(default_factory=list)
    attribute_pairs: list[MemberPair] = field(default_factory=list)
    method_renames: list[RenamePair] = field(default_factory=list)
    attribute_renames: list[RenamePair] = field(default_factory=list)
    model_only_methods: list[Method] = field(default_factory=list)
    code_only_methods: list[Method] = field(default_factory=list)
    model_only_attributes: list[Attribute] = field(default_factory=list)
    code_only_attributes: list[Attribute] = field(default_factory=list)


@dataclass
class MatchResult:
    class_matches: list[ClassMatch] = field(default_factory=list)
    model_only_classes: list[ClassDef] = field(default_factory=list)
    code_only_classes: list[ClassDef] = field(default_factory=list)


def match_models(design: ClassModel, code: ClassModel,
                 opts: MatchOptions | None = None) -> MatchResult:
    """Pair the two sides; see the module docstring for the policy."""
    opts = opts or MatchOptions()
    result = MatchResult()
    code_by_key = {normalize_name(c.name, opts.name_mode): c
                   for c in code.classes}
    paired_code: set[str] = set()

    for mc in design.classes:
        key = normalize_name(mc.name, opts.name_mode)
        cc = code_by_key.get(key)
        if cc is None:
            result.model_only_classes.append(mc)
            continue
        paired_code.add(key)
        result.class_matches.append(_match_class(mc, cc, opts))

    for cc in code.classes:
        if normalize_name(cc.name, opts.name_mode) not in paired_code:
            result.code_only_classes.append(cc)
    return result


def _match_class(mc: ClassDef, cc: ClassDef, opts: MatchOptions) -> ClassMatch:
    match = ClassMatch(mc, cc)

    m_ctor, c_ctor = mc.constructor(), cc.constructor()
    if m_ctor is not None and c_ctor is not None:
        match.constructor_pair = MemberPair(m_ctor, c_ctor)

    m_methods = [m for m in mc.methods if not m.is_constructor]
    c_methods = [m for m in cc.methods if not m.is_constructor]
    m_left, c_left = _pair_by_name(m_methods, c_methods, opts,
                                   match.method_pairs)
    _pair_renames(m_left, c_left, opts, match.method_renames,
                  require_arity=True)
    match.model_only_methods = [m for m in m_left if not _renamed(
        m, match.method_renames, "model")]
    match.code_only_methods = [m for m in c_left if not _renamed(
        m, match.method_renames, "code")]

    a_left, b_left = _pair_by_name(mc.attributes, cc.attributes, opts,
                                   match.attribute_pairs)
    _pair_renames(a_left, b_left, opts, match.attribute_renames,
                  require_arity=False)
    match.model_only_attributes = [a for a in a_left if not _renamed(
        a, match.attribute_renames, "model")]
    match.code_only_attributes = [a for a in b_left if not _renamed(
        a, match.attribute_renames, "code")]
    return match


def _pair_by_name(model_members, code_members, opts: MatchOptions,
                  out_pairs: list[MemberPair]):
    """Pair by canonical name; same-name groups pair equal arity first."""
    c_groups: dict[str, list] = {}
    for m in code_members:
        c_groups.setdefault(normalize_name(m.name, opts.name_mode),
                            []).append(m)

    model_left, code_left = [], []
    for m in model_members:
        key = normalize_name(m.name, opts.name_mode)
        candidates = c_groups.get(key, [])
        if not candidates:
            model_left.append(m)
            continue
        same_arity = [c for c in candidates
                      if isinstance(c, Attribute) or
                      (isinstance(m, Method) and c.arity == m.arity)]
        chosen = same_arity[0] if same_arity else candidates[0]
        candidates.remove(chosen)
        out_pairs.append(MemberPair(m, chosen))
    for rest in c_groups.values():
        code_left.extend(rest)
    return model_left, code_left


def _pair_renames(model_left, code_left, opts: MatchOptions,
                  out: list[RenamePair], *, require_arity: bool) -> None:
    candidates: list[tuple[float, str, str, int, int, object, object]] = []
    for m in model_left:
        for c in code_left:
            if require_arity and m.arity != c.arity:
                continue
            a = normalize_name(m.name, opts.name_mode)
            b = normalize_name(c.name, opts.name_mode)
            longest = max(len(a), len(b))
            dist = levenshtein(a, b)
            if longest and dist / longest <= opts.rename_threshold:
                candidates.append((dist / longest, m.name, c.name,
                                   dist, longest, m, c))
    used_m: set[int] = set()
    used_c: set[int] = set()
    for rel, mn, cn, dist, longest, m, c in sorted(
            candidates, key=lambda t: (t[0], t[1], t[2])):
        if id(m) in used_m or id(c) in used_c:
            continue
        used_m.add(id(m))
        used_c.add(id(c))
        out.append(RenamePair(m, c, dist, longest))


def _renamed(member, renames: list[RenamePair], side: str) -> bool:
    return any((r.model if side == "model" else r.code) is member
               for r in renames)


def _finding_id(kind: FindingKind, model_loc: Location | None,
                code_loc: Location | None, detail: str) -> str:
    def loc_key(loc: Location | None) -> str:
        if loc is None:
            return "-"
        return f"{loc.class_name}.{loc.member or ''}"
    raw = f"{kind.value}|{loc_key(model_loc)}|{loc_key(code_loc)}|{detail}"
    return hashlib.sha256(raw.encode("utf-8")).hexdigest()[:12]


def _loc(cls: ClassDef, member=None) -> Location:
    if member is None:
        return Location(cls.name, None, cls.span)
    return Location(cls.name, member.name, member.span)


AnnotatedFinding = tuple[Finding, FindingContext]


def _emit(out: list[AnnotatedFinding], kind: FindingKind,
          model_loc: Location | None, code_loc: Location | None,
          detail: str, ctx: FindingContext) -> None:
    severity = "advisory" if kind in _ADVISORY_KINDS else "error"
    finding = Finding(_finding_id(kind, model_loc, code_loc, detail),
                      kind, severity, model_loc, code_loc, detail)
    out.append((finding, ctx))


def annotated_findings(design: ClassModel, code: ClassModel,
                       opts: MatchOptions | None = None
                       ) -> list[AnnotatedFinding]:
    """All findings, each paired with the matched entities behind it."""
    opts = opts or MatchOptions()
    matched = match_models(design, code, opts)
    out: list[AnnotatedFinding] = []

    for cls in matched.model_only_classes:
        _emit(out, FindingKind.MISSING_CLASS_IN_CODE, _loc(cls), None,
              f"class '{cls.name}' is declared in the design model but "
              f"missing from the code",
              FindingContext(model_class=cls))
    for cls in matched.code_only_classes:
        _emit(out, FindingKind.MISSING_CLASS_IN_MODEL, None, _loc(cls),
              f"class '{cls.name}' is defined in the code but missing "
              f"from the design model",
              FindingContext(code_class=cls))

    for cm in matched.class_matches:
        _class_findings(out, cm, opts)

    if opts.infer_code_relationships:
        _relationship_findings(out, design, code, opts)

    out.sort(key=lambda pair: _finding_sort_key(pair[0]))
    return out


def check(design: ClassModel, code: ClassModel,
          opts: MatchOptions | None = None, *,
          inputs: tuple[InputDescriptor, ...] = (),
          model_fingerprint: str | None = None,
          code_fingerprint: str | None = None) -> Report:
    """Diff two models into a deterministic, ordered report."""
    opts = opts or MatchOptions()
    findings = tuple(f for f, _ in annotated_findings(design, code, opts))
    return Report(1, tuple(inputs), opts, findings,
                  model_fingerprint, code_fingerprint)


def _class_findings(out: list[AnnotatedFinding], cm: ClassMatch,
                    opts: MatchOptions) -> None:
    mc, cc = cm.model_class, cm.code_class

    if cm.constructor_pair is not None:
        _signature_findings(out, cm, cm.constructor_pair, opts)
    for pair in cm.method_pairs:
        _signature_findings(out, cm, pair, opts)
    for rename in cm.method_renames:
        _rename_finding(out, cm, rename, "method")
        _paired_type_findings(out, cm, rename.model, rename.code, opts)
    for rename in cm.attribute_renames:
        _rename_finding(out, cm, rename, "attribute")
        _attr_type_findings(out, cm, rename.model, rename.code, opts)
    for pair in cm.attribute_pairs:
        _attr_type_findings(out, cm, pair.model, pair.code, opts)

    for m in cm.model_only_methods:
        _emit(out, FindingKind.MISSING_METHOD_IN_CODE, _loc(mc, m),
              Location(cc.name),
              f"method '{m.name}' of class '{mc.name}' is declared in the "
              f"design model but missing from the code",
              FindingContext(mc, cc, model_member=m))
    for m in cm.code_only_methods:
        _emit(out, FindingKind.MISSING_METHOD_IN_MODEL, Location(mc.name),
              _loc(cc, m),
              f"method '{m.name}' of class '{cc.name}' is defined in the "
              f"code but missing from the design model",
              FindingContext(mc, cc, code_member=m))
    for a in cm.model_only_attributes:
        if not _has_named_evidence(a.type):
            continue
        _emit(out, FindingKind.MISSING_ATTRIBUTE_IN_CODE, _loc(mc, a),
              Location(cc.name),
              f"attribute '{a.name}' of class '{mc.name}' is declared in "
              f"the design model but missing from the code",
              FindingContext(mc, cc, model_member=a))
    for a in cm.code_only_attributes:
        if not _has_named_evidence(a.type):
            continue
        _emit(out, FindingKind.MISSING_ATTRIBUTE_IN_MODEL, Location(mc.name),
              _loc(cc, a),
              f"attribute '{a.name}' of class '{cc.name}' is assigned in "
              f"the code but missing from the design model",
              FindingContext(mc, cc, code_member=a))


def _has_named_evidence(t: TypeRef) -> bool:
    """True when a type pins down a name somewhere (named or named[])."""
    if t.kind == "named":
        return True
    if t.kind == "collection" and t.element is not None:
        return _has_named_evidence(t.element)
    return False


def _rename_finding(out: list[AnnotatedFinding], cm: ClassMatch,
                    rename: RenamePair, what: str) -> None:
    _emit(out, FindingKind.PROBABLE_RENAME,
          _loc(cm.model_class, rename.model),
          _loc(cm.code_class, rename.code),
          f"{what} '{rename.model.name}' in the design model likely "
          f"corresponds to '{rename.code.name}' in the code "
          f"(edit distance {rename.distance}/{rename.longest})",
          FindingContext(cm.model_class, cm.code_class,
                         rename.model, rename.code))


def _signature_findings(out: list[AnnotatedFinding], cm: ClassMatch,
                        pair: MemberPair, opts: MatchOptions) -> None:
    model_m: Method = pair.model
    code_m: Method = pair.code
    if model_m.arity != code_m.arity:
        what = ("constructor of" if model_m.is_constructor
                else f"method '{model_m.name}' of")
        _emit(out, FindingKind.CONSTRUCTOR_ARITY_MISMATCH,
              _loc(cm.model_class, model_m), _loc(cm.code_class, code_m),
              f"{what} class '{cm.model_class.name}' takes "
              f"{model_m.arity} parameter(s) in the design model but "
              f"{code_m.arity} in the code",
              FindingContext(cm.model_class, cm.code_class,
                             model_m, code_m))
        return
    _paired_type_findings(out, cm, model_m, code_m, opts)


def _paired_type_findings(out: list[AnnotatedFinding], cm: ClassMatch,
                          model_m: Method, code_m: Method,
                          opts: MatchOptions) -> None:
    if model_m.arity != code_m.arity:
        return
    for i, (mp, cp) in enumerate(zip(model_m.params, code_m.params)):
        if not type_equivalent(mp.type, cp.type, opts.type_table):
            what = ("constructor" if model_m.is_constructor
                    else f"method '{model_m.name}'")
            _emit(out, FindingKind.PARAM_TYPE_MISMATCH,
                  _loc(cm.model_class, model_m), _loc(cm.code_class, code_m),
                  f"{what} parameter '{mp.name}' of class "
                  f"'{cm.model_class.name}' is '{mp.type}' in the design "
                  f"model but '{cp.type}' in the code (position {i + 1})",
                  FindingContext(cm.model_class, cm.code_class,
                                 model_m, code_m, param_index=i))
    if not type_equivalent(model_m.return_type, code_m.return_type,
                           opts.type_table):
        _emit(out, FindingKind.RETURN_TYPE_MISMATCH,
              _loc(cm.model_class, model_m), _loc(cm.code_class, code_m),
              f"method '{model_m.name}' of class '{cm.model_class.name}' "
              f"returns '{model_m.return_type}' in the design model but "
              f"'{code_m.return_type}' in the code",
              FindingContext(cm.model_class, cm.code_class,
                             model_m, code_m))


def _attr_type_findings(out: list[AnnotatedFinding], cm: ClassMatch,
                        model_a: Attribute, code_a: Attribute,
                        opts: MatchOptions) -> None:
    if type_equivalent(model_a.type, code_a.type, opts.type_table):
        return
    _emit(out, FindingKind.ATTRIBUTE_TYPE_MISMATCH,
          _loc(cm.model_class, model_a), _loc(cm.code_class, code_a),
          f"attribute '{model_a.name}' of class '{cm.model_class.name}' is "
          f"'{model_a.type}' in the design model but '{code_a.type}' in "
          f"the code",
          FindingContext(cm.model_class, cm.code_class, model_a, code_a))


def _code_reference_pairs(code: ClassModel,
                          opts: MatchOptions) -> set[frozenset[str]]:
    """Unordered class pairs evidenced by typed attributes or ctor params."""
    class_keys = {normalize_name(c.name, opts.name_mode): c.name
                  for c in code.classes}

    def referenced(t: TypeRef) -> str | None:
        if t.kind == "named":
            return class_keys.get(normalize_name(t.name or "",
                                                 opts.name_mode))
        if t.kind == "collection" and t.element is not None:
            return referenced(t.element)
        return None

    pairs: set[frozenset[str]] = set()
    for cls in code.classes:
        sources: list[TypeRef] = [a.type for a in cls.attributes]
        ctor = cls.constructor()
        if ctor is not None:
            sources.extend(p.type for p in ctor.params)
        for t in sources:
            target = referenced(t)
            if target and normalize_name(target, opts.name_mode) != \
                    normalize_name(cls.name, opts.name_mode):
                pairs.add(frozenset((normalize_name(cls.name, opts.name_mode),
                                     normalize_name(target, opts.name_mode))))
    return pairs


def _relationship_findings(out: list[AnnotatedFinding], design: ClassModel,
                           code: ClassModel, opts: MatchOptions) -> None:
    evidence = _code_reference_pairs(code, opts)
    model_pairs: set[frozenset[str]] = set()
    for rel in design.relationships:
        key = frozenset((normalize_name(rel.left, opts.name_mode),
                         normalize_name(rel.right, opts.name_mode)))
        model_pairs.add(key)
        if key not in evidence:
            label = f" '{rel.label}'" if rel.label else ""
            _emit(out, FindingKind.RELATIONSHIP_MISSING_IN_CODE,
                  Location(rel.left, f"--{rel.right}"), None,
                  f"relationship{label} between '{rel.left}' and "
                  f"'{rel.right}' has no code-side evidence",
                  FindingContext())
    canonical_to_name = {normalize_name(c.name, opts.name_mode): c.name
                         for c in code.classes}
    for pair in sorted(evidence, key=sorted):
        if pair not in model_pairs:
            left, right = sorted(canonical_to_name.get(k, k) for k in pair)
            _emit(out, FindingKind.RELATIONSHIP_MISSING_IN_MODEL, None,
                  Location(left, f"--{right}"),
                  f"code references between '{left}' and '{right}' have "
                  f"no relationship in the design model",
                  FindingContext())


def _finding_sort_key(f: Finding) -> tuple:
    locs = [loc for loc in (f.model_loc, f.code_loc) if loc is not None]
    cls_name = next((loc.class_name for loc in locs if loc.class_name), "")
    member = next((loc.member for loc in locs if loc.member), "")
    if member.startswith("--"):
        member_key = member
    else:
        member_key = normalize_name(member) if member else ""
    cls_key = normalize_name(cls_name) if cls_name else ""
    return (cls_key, member_key, _KIND_ORDER[f.kind], f.detail)


def fingerprint_text(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()
