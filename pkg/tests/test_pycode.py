from __future__ import annotations

import random

import pytest

from modelsync.errors import (DuplicateClassError, DuplicateMemberError,
                              OverlappingEditsError, ParseError,
                              SpanOutOfRangeError)
from modelsync.model import SourceSpan, model_equal
from modelsync.plantuml import parse_plantuml
from modelsync.pycode import (CodeEdit, apply_code_edits, parse_code,
                              render_code_skeleton, scan_def_line)

from modelgen import make_code_model


def test_empty_text_gives_empty_model():
    doc = parse_code("")
    assert doc.model.classes == []
    assert doc.raw_text == ""


def test_v1_code_contents(v1_code_text):
    model = parse_code(v1_code_text).model
    assert [c.name for c in model.classes] == \
        ["Library", "User", "UserCard", "Book"]
    book = model.class_named("Book")
    assert [(a.name, str(a.type)) for a in book.attributes] == \
        [("title", "unknown"), ("borrowed", "boolean")]
    lib = model.class_named("Library")
    assert [(m.name, m.arity) for m in lib.methods if not m.is_constructor] \
        == [("borrowBook", 2), ("returnBook", 2), ("checkLendingStatus", 0)]
    assert [str(a.type) for a in lib.attributes] == \
        ["unknown[]", "unknown[]"]


def test_constructor_renamed_to_class(v1_code_text):
    user = parse_code(v1_code_text).model.class_named("User")
    ctor = user.constructor()
    assert ctor is not None
    assert ctor.name == "User" and ctor.is_constructor
    assert [p.name for p in ctor.params] == ["name", "userCard"]


def test_annotated_param_and_attr_inference(drifted_code_text):
    card = parse_code(drifted_code_text).model.class_named("UserCard")
    ctor = card.constructor()
    assert str(ctor.params[0].type) == "int"
    assert str(card.attributes[0].type) == "int"


def test_v2_code_contents(v2_code_text):
    model = parse_code(v2_code_text).model
    assert [c.name for c in model.classes] == ["Book", "User", "Library"]
    lib = model.class_named("Library")
    assert sorted(m.name for m in lib.methods if not m.is_constructor) == \
        ["add_book", "add_user", "check_overdue_books", "lend_book",
         "return_book"]
    user = model.class_named("User")
    assert [str(a.type) for a in user.attributes] == \
        ["unknown", "unknown", "unknown[]"]


def test_top_level_statements_preserved(v2_code_text):
    doc = parse_code(v2_code_text)
    assert 'library.add_book("Book1", "Author1")' in doc.raw_text
    assert doc.model.class_named("Library") is not None


def test_fenced_envelope_stripped(v1_code_text):
    fenced = f"prose\n```python\n{v1_code_text}```\nmore prose"
    model = parse_code(fenced).model
    assert len(model.classes) == 4


def test_class_level_garbage_rejected():
    with pytest.raises(ParseError) as err:
        parse_code("class A:\n    x = 1\n")
    assert err.value.line == 2


def test_method_without_receiver_rejected():
    with pytest.raises(ParseError):
        parse_code("class A:\n    def f(x):\n        pass\n")


def test_duplicate_class_rejected():
    with pytest.raises(DuplicateClassError):
        parse_code("class A:\n    pass\n\nclass A:\n    pass\n")


def test_duplicate_method_signature_rejected():
    code = ("class A:\n    def go(self, x):\n        pass\n"
            "    def go(self, y):\n        pass\n")
    with pytest.raises(DuplicateMemberError):
        parse_code(code)


def test_same_name_different_arity_allowed():
    code = ("class A:\n    def go(self, x):\n        pass\n"
            "    def go(self, x, y):\n        pass\n")
    model = parse_code(code).model
    assert [m.arity for m in model.classes[0].methods] == [1, 2]


def test_skeleton_empty_model():
    from modelsync.model import ClassModel
    assert render_code_skeleton(ClassModel()) == ""


def test_skeleton_round_trip_fixture_codes(v1_code_text, drifted_code_text,
                                           v2_code_text, merged_code_text):
    for text in (v1_code_text, drifted_code_text, v2_code_text,
                 merged_code_text):
        model = parse_code(text).model
        skeleton = render_code_skeleton(model)
        assert model_equal(parse_code(skeleton).model, model)


def test_skeleton_round_trip_random_models():
    for seed in range(60):
        model = make_code_model(random.Random(seed))
        skeleton = render_code_skeleton(model)
        assert model_equal(parse_code(skeleton).model, model), f"seed {seed}"


def test_skeleton_from_merged_model_defines_added_classes(merged_model_text):
    model = parse_plantuml(merged_model_text).model
    skeleton = render_code_skeleton(model)
    parsed = parse_code(skeleton).model
    assert {"UserCard", "CounterStaff", "LendingInformation"} <= \
        {c.name for c in parsed.classes}


def test_skeleton_from_design_model_keeps_members(v1_model_text):
    model = parse_plantuml(v1_model_text).model
    skeleton = render_code_skeleton(model)
    parsed = parse_code(skeleton).model
    book = parsed.class_named("Book")
    assert {a.name for a in book.attributes} == {"title", "borrowed"}
    assert "def __init__(self, title: String):" in skeleton
    assert "self.borrowed = False" in skeleton


def test_scan_def_line_layout():
    layout = scan_def_line("    def go(self, a: int, b = 2) -> str:  # hi")
    assert layout is not None
    assert layout.name == "go"
    assert [p.name for p in layout.params] == ["self", "a", "b"]
    assert layout.params[1].annotation == "int"
    assert layout.params[2].default == "2"
    assert layout.ret == "str"


def _span(line: int, start: int, end: int) -> SourceSpan:
    return SourceSpan("code", line, start, line, end)


def test_apply_edits_rename_identifier():
    code = "class A:\n    def getName(self):\n        return self.name\n"
    doc = parse_code(code)
    edit = CodeEdit("rename-identifier", _span(2, 9, 16), "getNamae")
    patched = apply_code_edits(doc, [edit])
    assert "def getNamae(self):" in patched
    assert "return self.name" in patched


def test_apply_edits_set_annotation():
    code = "class A:\n    def __init__(self, userID):\n        self.userID = userID\n"
    doc = parse_code(code)
    # zero-width insertion right after the parameter name
    edit = CodeEdit("set-annotation", _span(2, 30, 30), ": str")
    patched = apply_code_edits(doc, [edit])
    assert "def __init__(self, userID: str):" in patched


def test_apply_edits_empty_list_is_identity(v1_code_text):
    doc = parse_code(v1_code_text)
    assert apply_code_edits(doc, []) == v1_code_text


def test_apply_edits_duplicates_collapse():
    code = "class A:\n    def f(self, x):\n        pass\n"
    doc = parse_code(code)
    edit = CodeEdit("set-annotation", _span(2, 19, 19), ": int")
    patched = apply_code_edits(doc, [edit, edit])
    assert patched.count(": int") == 1


def test_apply_edits_overlap_rejected():
    code = "class A:\n    def f(self, x):\n        pass\n"
    doc = parse_code(code)
    edits = [CodeEdit("rename-identifier", _span(2, 9, 12), "g"),
             CodeEdit("rename-identifier", _span(2, 10, 13), "h")]
    with pytest.raises(OverlappingEditsError):
        apply_code_edits(doc, edits)


def test_apply_edits_span_out_of_range():
    doc = parse_code("class A:\n    pass\n")
    with pytest.raises(SpanOutOfRangeError):
        apply_code_edits(doc, [CodeEdit("delete-span", _span(99, 1, 2))])


def test_apply_edits_disjoint_order_independent():
    code = ("class A:\n    def f(self, x):\n        pass\n"
            "    def g(self, y):\n        pass\n")
    doc = parse_code(code)
    e1 = CodeEdit("rename-identifier", _span(2, 9, 10), "ff")
    e2 = CodeEdit("rename-identifier", _span(4, 9, 10), "gg")
    assert apply_code_edits(doc, [e1, e2]) == apply_code_edits(doc, [e2, e1])


def test_patched_code_reparses(v1_code_text):
    doc = parse_code(v1_code_text)
    user = doc.model.class_named("User")
    method = next(m for m in user.methods if m.name == "getName")
    line = method.span.start_line
    text = doc.lines()[line - 1]
    col = text.index("getName") + 1
    edit = CodeEdit("rename-identifier",
                    _span(line, col, col + len("getName")), "getNamae")
    patched = apply_code_edits(doc, [edit])
    renamed = parse_code(patched).model.class_named("User")
    assert any(m.name == "getNamae" for m in renamed.methods)
