import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from omppat.analysis import recognize_reductions
from omppat.costmodel import ImbalanceSignal, imbalance_score, workload
from omppat.frontend import nodes as n
from omppat.frontend import parse, parse_statement as L, to_text
from omppat.transforms import (
    PASS_ORDER,
    Context,
    FewerThanTwo,
    NoParallelLoop,
    NotAdjacent,
    NotAnArrayReduction,
    NotStaticOrGlobal,
    PersistsAcrossRegions,
    PlanError,
    ThreadprivateRefused,
    TransformError,
    TransformPlan,
    apply_schedule,
    conditional_parallelize,
    convert_threadprivate,
    form_parallel_region,
    insert_nowait,
    lower_array_reduction,
    parallelize_loop,
    run_pipeline,
    strip_directives,
)

from support import FIXTURES, HAVE_GCC, build, fixture_path, load_fixture, run


def loops(node):
    return [x for x in node.walk() if isinstance(x, n.For)]


# --- parallelize


def test_fully_independent_nest_gets_outer_directive():
    unit = parse(
        "double a[8][8][8], b[8][8][8];\n"
        "void f(void) { int i, j, k; for (i = 0; i < 8; i++) for (j = 0; j < 8; j++) for (k = 0; k < 8; k++)"
        " a[i][j][k] = b[i][j][k] + 1.0; }"
    )
    (p,) = parallelize_loop(loops(unit)[0], Context(unit))
    assert p.depth == 0
    assert p.directive.kind == "parallel_for" and p.directive.private == ["j", "k"]
    assert [lp.omp is not None for lp in loops(unit)] == [True, False, False]


def test_outer_dependence_moves_directive_inward():
    unit = parse("double a[8][8];\nvoid f(void) { int i, j; for (i = 1; i < 8; i++) for (j = 0; j < 8; j++) a[i][j] = a[i - 1][j] + 1.0; }")
    (p,) = parallelize_loop(loops(unit)[0], Context(unit))
    assert p.depth == 1
    res = run_pipeline(parse(to_text(strip_directives(unit))), TransformPlan(("parallelize",)))
    assert [e.action for e in res.log] == ["parallel for (inner)"]


def test_io_call_prevents_parallelization():
    unit = parse('#include <stdio.h>\ndouble a[8];\nvoid f(void) { int i; for (i = 0; i < 8; i++) printf("%g\\n", a[i]); }')
    with pytest.raises(NoParallelLoop) as info:
        parallelize_loop(loops(unit)[0], Context(unit))
    assert "io call printf" in str(info.value)


def test_scalar_reduction_clause():
    unit = parse("double a[100], s;\nvoid f(void) { int i; for (i = 0; i < 100; i++) s = s + a[i]; }")
    (p,) = parallelize_loop(loops(unit)[0], Context(unit))
    assert to_text(loops(unit)[0]).startswith("#pragma omp parallel for reduction(+:s)")


def test_live_out_index_blocks_parallelization():
    unit = parse("double a[8];\nint f(void) { int i; for (i = 0; i < 8; i++) a[i] = 0; return i; }")
    with pytest.raises(NoParallelLoop):
        parallelize_loop(loops(unit)[0], Context(unit))


# --- region formation and nowait

PAIR = """double a[16], b[16], c[16];
void f(void)
{
  int i;
  double t;
#pragma omp parallel for
  for (i = 0; i < 16; i++) a[i] = b[i];
%s#pragma omp parallel for
  for (i = 0; i < 16; i++) c[i] = a[i%s];
}
"""


def _region(between="", shift=""):
    unit = parse(PAIR % (between, shift))
    return unit, unit.function("f").body


def test_two_adjacent_loops_form_one_region():
    unit, body = _region()
    region = form_parallel_region(body, loops(unit))
    assert region.omp.kind == "parallel"
    assert [lp.omp.kind for lp in loops(region)] == ["for", "for"]
    assert sum(1 for x in body.items if isinstance(x, n.For)) == 0


def test_intervening_statement_blocks_merge():
    unit, body = _region("t = 1.0;\n")
    with pytest.raises(NotAdjacent):
        form_parallel_region(body, loops(unit))


def test_single_loop_is_left_alone():
    unit, body = _region()
    before = to_text(unit)
    with pytest.raises(FewerThanTwo):
        form_parallel_region(body, loops(unit)[:1])
    assert to_text(unit) == before


def test_common_private_lists_move_to_region():
    unit = parse(
        "double a[4][4], b[4][4];\nvoid f(void) { int i, j;\n"
        "#pragma omp parallel for private(j)\nfor (i = 0; i < 4; i++) for (j = 0; j < 4; j++) a[i][j] = 0;\n"
        "#pragma omp parallel for private(j)\nfor (i = 0; i < 4; i++) for (j = 0; j < 4; j++) b[i][j] = 1; }"
    )
    body = unit.function("f").body
    region = form_parallel_region(body, [x for x in body.items if isinstance(x, n.For)])
    assert region.omp.private == ["j"]
    assert all(lp.omp.private == [] for lp in loops(region) if lp.omp)


def test_nowait_on_last_and_aligned_producer():
    unit, body = _region()
    region = form_parallel_region(body, loops(unit))
    insert_nowait(region, Context(unit))
    assert [lp.omp.nowait for lp in loops(region)] == [True, True]


def test_no_nowait_before_shifted_consumer():
    unit, body = _region(shift=" + 1")
    region = form_parallel_region(body, loops(unit))
    insert_nowait(region, Context(unit))
    assert [lp.omp.nowait for lp in loops(region)] == [False, True]


# --- array reductions

RMS = """double u[4][4][4][5], rms[5];
void f(void)
{
  int i, j, k, m;
  double add;
#pragma omp parallel for private(j, i, m, add) reduction(+:rms)
  for (k = 0; k < 4; k++)
    for (j = 0; j < 4; j++)
      for (i = 0; i < 4; i++)
        for (m = 0; m < 5; m++)
        {
          add = u[k][j][i][m];
          rms[m] = rms[m] + add * add;
        }
}
"""


def _lowered(strategy, src=RMS):
    unit = parse(src)
    loop = loops(unit)[0]
    lower_array_reduction(loop, recognize_reductions(loop)[0], strategy, Context(unit))
    return unit


def _directives(node):
    return [x.omp.kind for x in node.walk() if isinstance(x, n.Stmt) and x.omp is not None]


def test_atomic_strategy_shape():
    fn = _lowered("atomic").function("f")
    (region,) = [x for x in fn.body.items if x.omp is not None]
    assert region.omp.kind == "parallel"
    decls = [d for x in region.items if isinstance(x, n.DeclStmt) for d in x.decls]
    assert decls[0].name == "rms_local" and decls[0].dims
    main = next(x for x in region.items if isinstance(x, n.For) and x.omp is not None)
    assert main.omp.kind == "for" and main.omp.nowait and not main.omp.reductions
    combine = region.items[-1]
    assert isinstance(combine, n.For) and _directives(combine) == ["atomic"]


def test_critical_strategy_shape():
    fn = _lowered("critical").function("f")
    (region,) = [x for x in fn.body.items if x.omp is not None]
    kinds = [x.omp.kind for x in region.items if x.omp is not None]
    assert kinds == ["for", "critical"]
    init = next(x for x in region.items if isinstance(x, n.For) and x.omp is None)
    assert "= 0.0" in to_text(init)
    critical = next(x for x in region.items if x.omp is not None and x.omp.kind == "critical")
    assert loops(critical)


def test_atomic_refuses_min_max():
    src = RMS.replace("reduction(+:rms)", "reduction(max:rms)").replace("rms[m] = rms[m] + add * add;", "if (add > rms[m]) rms[m] = add;")
    with pytest.raises(TransformError):
        _lowered("atomic", src)
    fn = _lowered("critical", src).function("f")
    assert "critical" in _directives(fn)


def test_scalar_candidate_is_not_an_array_reduction():
    unit = parse(RMS)
    scalar = recognize_reductions(L("for (i = 0; i < 8; i++) s = s + a[i];"))[0]
    with pytest.raises(NotAnArrayReduction):
        lower_array_reduction(loops(unit)[0], scalar, "atomic", Context(unit))


@pytest.mark.skipif(not HAVE_GCC, reason="needs gcc")
@pytest.mark.parametrize("strategy", ["atomic", "critical"])
def test_one_thread_lowering_matches_serial(strategy, tmp_path):
    driver = """
#include <stdio.h>
#include <stdlib.h>
%s
int main(void)
{
  int i, j, k, m;
  for (k = 0; k < 4; k++) for (j = 0; j < 4; j++) for (i = 0; i < 4; i++) for (m = 0; m < 5; m++)
    u[k][j][i][m] = 0.5 * ((k * 7 + j * 5 + i * 3 + m) %% 11) - 2.0;
  f();
  for (m = 0; m < 5; m++) printf("%%.17g\\n", rms[m]);
  return 0;
}
"""
    serial = run(build(driver % to_text(strip_directives(parse(RMS))), tmp_path, "serial"), 1)
    lowered = run(build(driver % to_text(_lowered(strategy)), tmp_path, strategy), 1)
    assert lowered == serial and len(serial.split()) == 5


# --- schedule and conditional parallelization


def test_triangular_loop_gets_dynamic_schedule():
    loop = L("#pragma omp parallel for private(j)\nfor (i = 0; i < n; i++) for (j = 0; j < i; j++) a[i][j] = 0;")
    assert apply_schedule(loop, imbalance_score(loop))
    assert loop.omp.schedule == ("dynamic", None)


def test_uniform_loop_keeps_static_default():
    loop = L("#pragma omp parallel for private(j)\nfor (i = 0; i < n; i++) for (j = 0; j < m; j++) a[i][j] = 0;")
    assert not apply_schedule(loop, imbalance_score(loop))
    assert loop.omp.schedule is None


def test_data_dependent_branch_gets_dynamic_schedule():
    loop = L("#pragma omp parallel for\nfor (i = 0; i < n; i++) { if (key[i] > t) { a[i] = f(a[i]); } }")
    assert apply_schedule(loop, imbalance_score(loop))


def test_nowait_loop_keeps_its_schedule():
    loop = L("#pragma omp for nowait\nfor (i = 0; i < n; i++) for (j = 0; j < i; j++) a[i][j] = 0;")
    assert not apply_schedule(loop, ImbalanceSignal(frozenset({"triangular_inner"})))


BODY5 = "{ a[i] = 0; b[i] = 1; c[i] = 2; d[i] = 3; e[i] = 4; }"


@pytest.mark.parametrize(
    "bound, kind, pragma",
    [
        ("n", "conditional", "#pragma omp parallel for if(5 * n > 10000)"),
        ("1000", "serial", None),
        ("1000000", "parallel", "#pragma omp parallel for"),
    ],
)
def test_conditional_parallelization(bound, kind, pragma):
    loop = L(f"#pragma omp parallel for\nfor (i = 0; i < {bound}; i++) {BODY5}")
    assert conditional_parallelize(loop, workload(loop), 10000).kind == kind
    first = to_text(loop).splitlines()[0]
    assert (first == pragma) if pragma else (loop.omp is None)


# --- threadprivate

TP = """double buf[8];
#pragma omp threadprivate(buf)
double out[8];
void f(void)
{
  int i, k;
#pragma omp parallel private(k)
  {
    for (k = 0; k < 8; k++) buf[k] = k;
#pragma omp for
    for (i = 0; i < 8; i++) out[i] = buf[i] * 2.0;
  }
#pragma omp parallel private(k)
  {
    for (k = 0; k < 8; k++) buf[k] = 1.0;
#pragma omp for
    for (i = 0; i < 8; i++) out[i] = out[i] + buf[i];
  }
}
"""


def test_reinitialized_buffer_becomes_region_private():
    unit = parse(TP)
    changed = convert_threadprivate(unit, ["buf"], "to_loop_private")
    assert len(changed) == 2
    assert all(r.omp.private == ["k", "buf"] for r in changed)
    assert "threadprivate" not in to_text(unit)


def test_round_trip_back_to_threadprivate():
    unit = parse(TP)
    convert_threadprivate(unit, ["buf"], "to_loop_private")
    convert_threadprivate(unit, ["buf"], "to_threadprivate")
    assert unit == parse(TP)


def test_value_flowing_between_regions_persists():
    src = TP.replace("    for (k = 0; k < 8; k++) buf[k] = 1.0;\n", "")
    with pytest.raises(PersistsAcrossRegions) as info:
        convert_threadprivate(parse(src), ["buf"], "to_loop_private")
    assert info.value.var == "buf"


def test_automatic_variable_cannot_become_threadprivate():
    with pytest.raises(NotStaticOrGlobal):
        convert_threadprivate(parse(TP), ["k"], "to_threadprivate")


def test_converting_a_plain_global_to_loop_private_is_refused():
    with pytest.raises(ThreadprivateRefused):
        convert_threadprivate(parse(TP), ["out"], "to_loop_private")


@pytest.mark.skipif(not HAVE_GCC, reason="needs gcc")
def test_threadprivate_conversion_preserves_output(tmp_path):
    main = '\n#include <stdio.h>\nint main(void) { int i; f(); for (i = 0; i < 8; i++) printf("%g\\n", out[i]); return 0; }\n'
    unit = parse(TP)
    convert_threadprivate(unit, ["buf"], "to_loop_private")
    want = run(build(TP + main, tmp_path, "tp"), 3)
    assert run(build(to_text(unit) + main, tmp_path, "lp"), 3) == want


# --- plans and logs


def test_plan_parsing():
    plan = TransformPlan.parse("nowait,parallelize,reduction=critical,threadprivate=to_threadprivate", threshold=50)
    assert plan.passes == ("parallelize", "reduction", "nowait", "threadprivate")
    assert (plan.reduction_strategy, plan.threadprivate_direction, plan.threshold) == ("critical", "to_threadprivate", 50)
    assert PASS_ORDER[0] == "inline" and PASS_ORDER[-1] == "threadprivate"


@pytest.mark.parametrize("spec", ["bogus", "reduction=sum", "nowait=1", "threadprivate=sideways"])
def test_bad_plans(spec):
    with pytest.raises(PlanError):
        TransformPlan.parse(spec)


def test_threshold_must_be_positive():
    with pytest.raises(PlanError):
        TransformPlan(threshold=0)


def test_log_is_tab_separated():
    unit = parse(
        '#include <stdio.h>\ndouble a[8][8];\nvoid f(void) { int i, j;'
        " for (i = 1; i < 8; i++) for (j = 0; j < 8; j++) a[i][j] = a[i - 1][j] + 1.0;"
        ' for (i = 0; i < 8; i++) printf("%g\\n", a[i][0]); }'
    )
    res = run_pipeline(unit, TransformPlan.parse("parallelize,condpar", threshold=10))
    assert res.log_text().splitlines() == [
        "parallelize\tf#0\tparallel for (inner)\t",
        "parallelize\tf#1\trefused\tL0: io call printf",
        "condpar\tf#0\tremoved\tworkload 8",
    ]
    assert len(res.refusals) == 1 and len(res.changes) == 2


# --- properties


def _random_program(rng):
    """A few loop nests over global arrays, some parallelizable, some not."""
    nests = []
    for k in range(rng.randint(2, 5)):
        size = rng.choice([8, 100, 5000])
        kind = rng.randrange(5)
        if kind == 0:
            nests.append(f"for (i = 0; i < {size}; i++) a[i] = b[i] * 2.0 + {k};")
        elif kind == 1:
            nests.append(f"for (i = 1; i < {size}; i++) a[i] = a[i - 1] + b[i];")
        elif kind == 2:
            nests.append(f"for (i = 0; i < {size}; i++) s = s + a[i];")
        elif kind == 3:
            nests.append(f"for (i = 0; i < 40; i++) for (j = 0; j < i; j++) c[i][j] = c[i][j] + b[j];")
        else:
            nests.append(f"for (i = 0; i < n; i++) {{ if (b[i] > 0.5) a[i] = b[i]; }}")
    return (
        "double a[5000], b[5000], c[40][40], s;\nvoid f(int n)\n{\n  int i, j;\n  "
        + "\n  ".join(nests)
        + "\n}\n"
    )


@pytest.mark.parametrize("name", ["region", "nowait", "schedule", "condpar"])
@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 2**31))
def test_pass_idempotence(name, seed):
    src = _random_program(random.Random(seed))
    prep = run_pipeline(parse(src), TransformPlan(("parallelize", "region", "reduction")))
    plan = TransformPlan((name,), threshold=1000)
    once = run_pipeline(parse(to_text(prep.ast)), plan).ast
    twice = run_pipeline(parse(to_text(once)), plan).ast
    assert twice == once


@pytest.mark.parametrize("stem", sorted(FIXTURES))
@pytest.mark.parametrize("name", ["region", "nowait", "schedule", "condpar"])
def test_pass_idempotence_on_fixtures(stem, name):
    plan = TransformPlan((name,))
    once = run_pipeline(load_fixture(stem), plan).ast
    assert run_pipeline(parse(to_text(once)), plan).ast == once


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2**31), strategy=st.sampled_from(["atomic", "critical"]))
def test_serial_elision_on_random_programs(seed, strategy):
    src = _random_program(random.Random(seed))
    plan = TransformPlan(("parallelize", "region", "schedule", "condpar", "nowait"), reduction_strategy=strategy, threshold=1000)
    res = run_pipeline(parse(src), plan)
    assert strip_directives(res.ast) == strip_directives(parse(src))


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 2**31), threshold=st.integers(1, 20000))
def test_condpar_trichotomy(seed, threshold):
    src = _random_program(random.Random(seed))
    prep = run_pipeline(parse(src), TransformPlan(("parallelize",)))
    parallel = sum(1 for x in prep.ast.walk() if isinstance(x, n.Stmt) and x.omp is not None and x.omp.spawns_team)
    res = run_pipeline(parse(to_text(prep.ast)), TransformPlan(("condpar",), threshold=threshold))
    actions = [e.action for e in res.log if e.pass_name == "condpar"]
    assert len(actions) == parallel
    assert all(a in ("removed", "unconditional", "if clause") for a in actions), actions


@pytest.mark.skipif(not HAVE_GCC, reason="needs gcc")
def test_inline_pass_keeps_serial_behavior(tmp_path):
    serial_text = to_text(strip_directives(load_fixture("bt_initialize")))
    res = run_pipeline(parse(serial_text), TransformPlan(("inline", "parallelize")))
    assert any(e.pass_name == "inline" and e.action == "inlined" for e in res.log)
    serial = run(build(serial_text, tmp_path, "serial"), 1)
    inlined = run(build(to_text(strip_directives(res.ast)), tmp_path, "inlined"), 1)
    assert inlined == serial
