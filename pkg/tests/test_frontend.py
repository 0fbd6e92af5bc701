import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from omppat.frontend import (
    CSyntaxError,
    SectionId,
    UnsupportedConstruct,
    enumerate_sections,
    format_directive,
    loop_header,
    nodes as n,
    parse,
    parse_directive,
    parse_statement,
    print_unit,
    region_sections,
    section_loops,
    to_text,
)

from support import FIXTURES, fixture_path, load_fixture


def test_minimal_loop():
    loop = parse_statement("for(i=0;i<n;i++) a[i]=0;")
    assert isinstance(loop, n.For)
    h = loop_header(loop)
    assert (h.index, h.direction, h.canonical) == ("i", "ascending", True)
    assert to_text(h.lower) == "0" and to_text(h.upper) == "n" and h.stride_value == 1
    assert isinstance(loop.body, n.ExprStmt)
    assert isinstance(loop.body.expr, n.Assign)


def test_pragma_attaches_to_following_loop():
    loop = parse_statement("#pragma omp parallel for\nfor(i=0;i<n;i++) a[i]=0;")
    assert isinstance(loop, n.For)
    assert loop.omp.kind == "parallel_for"


def test_goto_is_unsupported():
    with pytest.raises(UnsupportedConstruct) as info:
        parse("void f(void) { goto out; out: ; }")
    assert info.value.construct == "goto"
    assert info.value.span.line == 1


def test_syntax_error_is_located():
    with pytest.raises(CSyntaxError) as info:
        parse("void f(void)\n{\n  int = 3;\n}\n", path="bad.c")
    assert str(info.value).startswith("bad.c:3:")


def test_non_canonical_header():
    loop = parse_statement("for (i = 0; i < n; i++) { i = i + 2; }")
    assert loop_header(loop).canonical is False


def test_descending_stride_and_trip_count():
    h = loop_header(parse_statement("for (i = 10; i > 0; i -= 3) a[i] = 0;"))
    assert h.direction == "descending"
    assert h.stride_value == -3
    assert h.values() == [10, 7, 4, 1]
    assert h.trip_count().constant() == 4


def test_directive_rendering():
    d = parse_directive("omp parallel private(t)")
    assert format_directive(d) == "#pragma omp parallel private(t)"
    loop = parse_statement("#pragma omp for schedule(dynamic, 4) nowait reduction(+:s)\nfor (i = 0; i < n; i++) s += a[i];")
    text = to_text(loop)
    assert "schedule(dynamic, 4)" in text and "nowait" in text and "reduction(+:s)" in text


def test_atomic_combine_inside_loop_survives_printing():
    src = """
void f(double rms[5], double rms_local[5])
{
  int m;
  for (m = 0; m < 5; m++)
  {
#pragma omp atomic
    rms[m] += rms_local[m];
  }
}
"""
    again = parse(to_text(parse(src)))
    loop = section_loops(again, SectionId("f", 0))[0]
    atomics = [s for s in loop.walk() if isinstance(s, n.Stmt) and s.omp is not None and s.omp.kind == "atomic"]
    assert len(atomics) == 1


def test_sections_count_top_level_nests():
    unit = parse(
        "int main(void) { int i, j;"
        " for (i = 0; i < 3; i++) ;"
        " for (i = 0; i < 3; i++) for (j = 0; j < 2; j++) ;"
        " for (i = 0; i < 3; i++) ;"
        " for (i = 0; i < 3; i++) ; return 0; }"
    )
    sections = enumerate_sections(unit)
    assert [str(s) for s in sections] == ["main#0", "main#1", "main#2", "main#3"]
    assert str(SectionId("main", 1, 3)) == "main#1-#3"


def test_function_without_loops_has_no_sections():
    assert enumerate_sections(parse("int f(int x) { return x + 1; }")) == []


def test_doubly_nested_loop_is_one_section():
    unit = parse("void f(void) { int i, j; for (i = 0; i < 4; i++) for (j = 0; j < 4; j++) ; }")
    assert [str(s) for s in enumerate_sections(unit)] == ["f#0"]


def test_region_sections_group_nests_of_one_region():
    unit = load_fixture("bt_compute_rhs")
    assert "compute_rhs#0-#10" in [str(s) for s in region_sections(unit)]


def test_unknown_section_lookup():
    unit = parse("void f(void) { int i; for (i = 0; i < 4; i++) ; }")
    with pytest.raises(KeyError):
        section_loops(unit, SectionId("f", 0, 1))
    with pytest.raises(KeyError):
        section_loops(unit, SectionId("g", 0))


@pytest.mark.parametrize("text", ["main#0", "main#1-#3", "compute_rhs#0-#10"])
def test_section_id_rendering_round_trips(text):
    assert str(SectionId.parse(text)) == text


@pytest.mark.parametrize("bad", ["main", "main#3-#1", "#1", "main#-1"])
def test_malformed_section_ids(bad):
    with pytest.raises(ValueError):
        SectionId.parse(bad)


@given(st.text(alphabet="abcxyz_", min_size=1, max_size=8), st.integers(0, 50), st.integers(0, 50))
def test_section_id_round_trip_property(fn, a, width):
    sid = SectionId(fn, a, a + width)
    assert SectionId.parse(str(sid)) == sid


@pytest.mark.parametrize("stem", sorted(FIXTURES))
def test_every_pragma_is_attached_once(stem):
    text = fixture_path(stem).read_text()
    pragmas = sum(1 for line in text.splitlines() if line.strip().startswith("#pragma omp"))
    unit = parse(text)
    attached = sum(1 for node in unit.walk() if getattr(node, "omp", None) is not None)
    assert attached == pragmas


def test_print_unit_reparses_to_same_tree():
    unit = load_fixture("is_rank")
    out = print_unit(unit)
    assert parse(out.text) == unit


_SNIPPETS = [
    "a[i] = b[i] + 1;",
    "s += a[i] * 2.5;",
    "if (a[i] > 0) { t = a[i]; b[i] = t * t; } else b[i] = 0;",
    "for (j = 0; j < i; j++) c[i][j] = c[j][i];",
    "x = f(a[i], i - 1);",
]


def _render(stmts, pad, comment):
    sep = "\n" + " " * pad + (f"/* {comment} */" if comment else "") + "\n"
    return "void g(void)\n{" + sep + sep.join(f"for (i = 0; i < n; i++) {{ {s} }}" for s in stmts) + sep + "}\n"


@settings(max_examples=60, deadline=None)
@given(
    st.lists(st.sampled_from(_SNIPPETS), min_size=1, max_size=5),
    st.integers(0, 6),
    st.sampled_from(["", "note", "x * y"]),
)
def test_round_trip_and_section_stability(stmts, pad, comment):
    plain = parse(_render(stmts, 0, ""))
    styled = parse(_render(stmts, pad, comment))
    assert styled == plain
    assert enumerate_sections(styled) == enumerate_sections(plain)
    assert parse(to_text(styled)) == styled
