import re

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from omppat.frontend import SectionId, enumerate_sections, parse, to_text
from omppat.patterns import (
    PATTERNS,
    MismatchedPrograms,
    PatternProfile,
    UnknownSection,
    compare_versions,
    load_annotations,
    parse_annotations,
    profile_program,
    profile_section,
)

from support import FIXTURES, SECTION_ROWS, annotations_path, fixture_path, load_fixture


@pytest.mark.parametrize("stem", sorted(FIXTURES))
def test_fixture_rows(stem):
    section = SectionId.parse(FIXTURES[stem])
    prof = profile_section(load_fixture(stem), section, load_annotations(annotations_path(stem)))
    assert prof.values() == SECTION_ROWS[FIXTURES[stem]]


def test_compute_rhs_row_is_eleven_loops_seven_nowaits():
    prof = profile_section(load_fixture("bt_compute_rhs"), SectionId("compute_rhs", 0, 10))
    assert (prof.p3, prof.p8) == (11, 7)
    assert sum(prof.values()) == 18


def test_function_without_loops_profiles_to_zero():
    unit = parse("int f(int x) { return x; }\nvoid g(void) { int i; for (i = 0; i < 2; i++) ; }")
    assert profile_program(parse("int f(int x) { return x; }")).is_zero()
    assert profile_section(unit, SectionId("g", 0)).is_zero()


@pytest.mark.parametrize("section", ["compute_rhs#11", "compute_rhs#3-#12", "nothere#0"])
def test_unknown_section(section):
    with pytest.raises(UnknownSection):
        profile_section(load_fixture("bt_compute_rhs"), SectionId.parse(section))


def test_program_row_of_single_section_unit():
    text = fixture_path("bt_compute_rhs").read_text()
    unit = parse(text)
    # main's own loops are serial, so they add nothing
    whole = profile_program(unit)
    assert whole.values() == profile_section(unit, SectionId("compute_rhs", 0, 10)).values()


def test_program_row_adds_counts():
    a = PatternProfile(None, p8=7)
    b = PatternProfile(None, p8=6, p4=1)
    both = a.combine(b)
    assert both.p8 == 13 and both.p4 == 1
    assert a.combine(PatternProfile(None, p4=1)).combine(b).p4 == 1


def test_empty_unit_program_row():
    assert profile_program(parse("int x;")).is_zero()


def test_negative_counts_rejected():
    with pytest.raises(ValueError):
        PatternProfile(None, p3=-1)


@pytest.mark.parametrize("stem", sorted(FIXTURES))
def test_additivity(stem):
    unit = load_fixture(stem)
    total = profile_program(unit)
    parts = [profile_section(unit, s) for s in enumerate_sections(unit)]
    for k, name in enumerate(PATTERNS):
        column = [p.values()[k] for p in parts]
        if name in ("p1", "p2", "p3", "p8"):
            assert total.values()[k] == sum(column)
        else:
            assert total.values()[k] == int(any(column))


@pytest.mark.parametrize("stem", sorted(FIXTURES))
def test_determinism(stem):
    notes = load_annotations(annotations_path(stem))
    section = SectionId.parse(FIXTURES[stem])
    first = profile_section(load_fixture(stem), section, notes)
    assert profile_section(load_fixture(stem), section, notes) == first


# --- annotations


def test_annotation_parsing():
    notes = parse_annotations("# comment\n\nrank#1-#7 p9=1\nmain#3 p9=0 extra=2\n")
    assert notes == {SectionId("rank", 1, 7): {"p9": 1}, SectionId("main", 3): {"p9": 0, "extra": 2}}


@pytest.mark.parametrize("bad", ["rank p9=1", "rank#1 p9", "rank#1 p9=x"])
def test_bad_annotation_lines(bad):
    with pytest.raises(ValueError):
        parse_annotations(bad)


def test_p9_only_from_annotations():
    unit = load_fixture("is_rank")
    section = SectionId("rank", 1, 7)
    assert profile_section(unit, section).p9 == 0
    assert profile_section(unit, section, {section: {"p9": 1}}).p9 == 1


# --- comparison

SERIAL_NEST = """
void f(int n, double a[64][64], double b[64][64])
{
  int i, j;
%s
  for (i = 0; i < 64; i++)
%s
    for (j = 0; j < 64; j++)
      a[i][j] = b[i][j] * 2.0;
}
"""


def test_identical_versions_give_empty_report():
    unit = load_fixture("bt_initialize")
    assert len(compare_versions(unit, load_fixture("bt_initialize"))) == 0


def test_no_common_function():
    with pytest.raises(MismatchedPrograms):
        compare_versions(parse("void f(void) { }"), parse("void g(void) { }"))


def test_outer_versus_inner_parallelization():
    auto = parse(SERIAL_NEST % ("", "#pragma omp parallel for"))
    manual = parse(SERIAL_NEST % ("#pragma omp parallel for private(j)", ""))
    report = compare_versions(auto, manual)
    row = report.row("f#0")
    assert row.delta("p1") == 1
    assert row.delta("p3") == 0


def test_nowait_delta_on_compute_rhs():
    text = fixture_path("bt_compute_rhs").read_text()
    auto = parse(text.replace(" nowait", ""))
    manual = parse(text)
    notes = load_annotations(annotations_path("bt_compute_rhs"))
    row = compare_versions(auto, manual, notes).row("compute_rhs#0-#10")
    assert row.delta("p8") == 7
    assert [d for k, d in enumerate(row.deltas) if PATTERNS[k] != "p8"] == [0] * 8


def test_rows_with_timings_are_kept():
    unit = load_fixture("mg_zran3")
    report = compare_versions(unit, load_fixture("mg_zran3"), timings={"zran3#1": (2.0, 1.0)})
    assert [str(r.section) for r in report] == ["zran3#1"]


def test_section_present_in_one_version_is_flagged():
    auto = parse("void f(void) { int i; for (i = 0; i < 4; i++) ; }")
    manual = parse("void f(void) { int i; for (i = 0; i < 4; i++) ;\n#pragma omp parallel for\nfor (i = 0; i < 4; i++) ; }")
    (row,) = compare_versions(auto, manual).rows
    assert row.presence == "manual only" and row.delta("p1") == 1


# --- properties

_FOR = re.compile(r"#pragma omp for\b([^\n]*)")


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(sorted(FIXTURES)), st.integers(0, 1000))
def test_adding_nowait_raises_p8_by_one(stem, pick):
    text = fixture_path(stem).read_text()
    spots = [m for m in _FOR.finditer(text) if "nowait" not in m.group(1)]
    if not spots:
        return
    m = spots[pick % len(spots)]
    changed = text[: m.end()] + " nowait" + text[m.end():]
    before, after = parse(text), parse(changed)
    section = SectionId.parse(FIXTURES[stem])
    for s in enumerate_sections(before) + [section]:
        a, b = profile_section(before, s), profile_section(after, s)
        diff = a.delta(b)
        assert diff[PATTERNS.index("p8")] in (0, 1)
        assert [d for k, d in enumerate(diff) if PATTERNS[k] != "p8"] == [0] * 8
    assert profile_program(after).p8 == profile_program(before).p8 + 1


@settings(max_examples=20, deadline=None)
@given(st.sampled_from(sorted(FIXTURES)), st.integers(0, 4))
def test_profiles_survive_reformatting(stem, indent):
    unit = load_fixture(stem)
    text = to_text(unit)
    reformatted = "\n".join((" " * indent + line + "  /* x */" if line.strip().endswith(";") else line) for line in text.splitlines())
    again = parse(reformatted)
    for s in enumerate_sections(unit):
        assert profile_section(again, s) == profile_section(unit, s)
