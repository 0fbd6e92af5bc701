"""Acceptance criteria 1-8, each at its stated tolerance.

A pass/fail line per criterion is printed in the terminal summary.
"""

import csv
import io
import random
import time

import pytest

from omppat.analysis import dependence_test
from omppat.analysis.oracle import carried_conflicts, cross_thread_conflicts
from omppat.costmodel import WorkloadEstimate, is_profitable, workload
from omppat.frontend import nodes as n
from omppat.frontend import parse, parse_statement, to_text
from omppat.harness.cli import main
from omppat.harness.metrics import overhead, rounded_speedup
from omppat.symbolic import Poly
from omppat.transforms import TransformPlan, conditional_parallelize, insert_nowait, run_pipeline
from omppat.transforms.common import strip_directives
from support import (
    FIXTURES,
    HAVE_GCC,
    SECTION_ROWS,
    annotations_path,
    build,
    fixture_path,
    load_fixture,
    outputs_close,
    pair_of_worksharing_loops,
    random_affine_loop,
    reduction_program,
    run,
)

needs_gcc = pytest.mark.skipif(not HAVE_GCC, reason="gcc with OpenMP is required")


# --------------------------------------------------------------------------
# 1. section rows from `analyze`


@pytest.mark.criterion(1)
def test_c1_analyze_reproduces_section_rows(tmp_path, capsys):
    start = time.perf_counter()
    for stem, section in FIXTURES.items():
        out = tmp_path / f"{stem}.csv"
        code = main(["analyze", str(fixture_path(stem)), "--annotations", str(annotations_path(stem)), "--out", str(out)])
        assert code == 0
        rows = {r["Loop Name"]: r for r in csv.DictReader(io.StringIO(out.read_text()))}
        got = tuple(int(rows[section][f"P{k}"]) for k in range(1, 10))
        assert got[:8] == SECTION_ROWS[section][:8], (section, got)
        assert got[8] == SECTION_ROWS[section][8]
    elapsed = time.perf_counter() - start
    assert elapsed < 5.0, f"analyze took {elapsed:.2f} s"


# --------------------------------------------------------------------------
# 2. published times reproduce published speedups and overheads

# (application, auto 1 core, auto 4 cores, auto speedup, manual 1 core, manual 4 cores, manual speedup)
INTERACTIVE_A = [
    ("SP", 417, 362, 1.2, 425, 110, 3.8),
    ("BT", 414, 356, 1.2, 450, 116, 3.8),
    ("EP", 86, 63, 1.4, 87, 22, 3.9),
    ("MG", 35, 15, 2.3, 31, 8, 3.8),
    ("IS", 8, 7, 1.1, 9, 3, 3.0),
    ("CG", 12, 5, 2.4, 11, 3, 3.7),
]
BATCH_B = [
    ("SP", 543, 284, 1.9, 556, 151, 3.7),
    ("BT", 595, 518, 1.1, 638, 169, 3.8),
    ("EP", 133, 94, 1.4, 129, 35, 3.7),
    ("MG", 26, 8.5, 3.1, 25.5, 7, 3.7),
    ("IS", 3.4, 3, 1.0, 3.2, 0.9, 3.6),
    ("CG", 84, 22, 3.9, 80, 22, 3.7),
]
BATCH_A = [
    ("SP", 134, 72, 1.9, 133, 37, 3.6),
    ("BT", 146, 126, 1.2, 155, 43, 3.6),
    ("EP", 33, 23, 1.4, 33, 8.8, 3.7),
    ("MG", 5.7, 2.1, 2.7, 5.7, 1.5, 3.7),
    ("IS", 0.8, 0.8, 1.0, 0.7, 0.2, 3.1),
    ("CG", 2, 0.5, 3.7, 2, 0.5, 3.7),
]
# (application, serial, hand-parallelized on 1 core, published difference %)
ONE_CORE_OVERHEADS = [
    ("SP", 416, 425, 3),
    ("BT", 414, 450, 9),
    ("EP", 86, 87, 1),
    ("MG", 35, 31, -12),
    ("IS", 8, 9, 11),
    ("CG", 12, 11, -9),
]
# rounded inputs in these rows cannot give the printed speedups
BATCH_A_ROUNDED_INPUTS = {("IS", "manual"), ("CG", "auto"), ("CG", "manual")}


def _cells(table, name):
    for app, a1, a4, asp, m1, m4, msp in table:
        yield pytest.param(a1, a4, asp, id=f"{name}-{app}-auto")
        yield pytest.param(m1, m4, msp, id=f"{name}-{app}-manual")


SPEEDUP_CELLS = list(_cells(INTERACTIVE_A, "interactive-A")) + list(_cells(BATCH_B, "batch-B"))
assert len(SPEEDUP_CELLS) == 24


@pytest.mark.criterion(2)
@pytest.mark.parametrize("t1,t4,published", SPEEDUP_CELLS)
def test_c2_speedup_cells(t1, t4, published):
    assert abs(rounded_speedup(t1, t4) - published) <= 0.1 + 1e-9


@pytest.mark.criterion(2)
@pytest.mark.parametrize("app,serial,par1,published", ONE_CORE_OVERHEADS, ids=[r[0] for r in ONE_CORE_OVERHEADS])
def test_c2_overhead_cells(app, serial, par1, published):
    assert abs(overhead(serial, par1) - published) <= 2


def _batch_a_cells():
    for app, a1, a4, asp, m1, m4, msp in BATCH_A:
        for variant, t1, t4, sp in (("auto", a1, a4, asp), ("manual", m1, m4, msp)):
            marks = []
            if (app, variant) in BATCH_A_ROUNDED_INPUTS:
                marks = [pytest.mark.xfail(strict=True, reason="published times are rounded too coarsely")]
            yield pytest.param(t1, t4, sp, id=f"batch-A-{app}-{variant}", marks=marks)


@pytest.mark.criterion(2)
@pytest.mark.parametrize("t1,t4,published", list(_batch_a_cells()))
def test_c2_batch_class_a_speedup_cells(t1, t4, published):
    assert abs(rounded_speedup(t1, t4) - published) <= 0.1 + 1e-9


# --------------------------------------------------------------------------
# 3. array reduction lowerings equal the serial oracle


@needs_gcc
@pytest.mark.criterion(3)
def test_c3_reduction_lowering_matches_serial(tmp_path):
    start = time.perf_counter()
    rng = random.Random(20240603)
    instances = 0
    for batch in range(10):
        src, meta = reduction_program(rng, 10 * batch, 10)
        instances += len(meta)
        ast = parse(src)
        serial = run(build(src, tmp_path, f"serial{batch}"), 1)
        for strategy in ("atomic", "critical"):
            res = run_pipeline(ast, TransformPlan(passes=("parallelize", "reduction"), reduction_strategy=strategy))
            lowered = [e for e in res.log if e.pass_name == "reduction" and e.action.startswith("lowered")]
            assert len(lowered) == len(meta), res.log_text()
            exe = build(to_text(res.ast), tmp_path, f"{strategy}{batch}")
            for threads in (1, 2, 4):
                out = run(exe, threads)
                # integer lines compare exactly: their numbers carry no exponent or point
                assert outputs_close(out, serial, 1e-6), (strategy, threads)
                for got, want in zip(out.splitlines(), serial.splitlines()):
                    if "." not in want and "e" not in want.split()[-1]:
                        assert got == want
    assert instances == 100
    elapsed = time.perf_counter() - start
    assert elapsed < 120, f"took {elapsed:.1f} s"


# --------------------------------------------------------------------------
# 4. nowait is only emitted where no cross-thread conflict exists


def _region(text):
    return parse_statement(text)


@pytest.mark.criterion(4)
def test_c4_nowait_soundness_random_pairs():
    rng = random.Random(4)
    emitted = 0
    for _ in range(200):
        text, memory = pair_of_worksharing_loops(rng)
        region = _region(text)
        first, second = [x for x in region.items if isinstance(x, n.For)]
        insert_nowait(region)
        if first.omp.nowait:
            emitted += 1
            for threads in (2, 3, 4):
                assert cross_thread_conflicts(first, second, memory, threads) == [], (to_text(region), threads)
    # the oracle would be vacuous if the tool never emitted nowait
    assert emitted >= 20


@pytest.mark.criterion(4)
def test_c4_shifted_consumer_never_gets_nowait():
    region = _region(
        "#pragma omp parallel\n{\n"
        "#pragma omp for\nfor (i = 1; i < 16; i++) a[i] = b[i] + 1;\n"
        "#pragma omp for\nfor (i = 1; i < 16; i++) c[i] = a[i - 1];\n"
        "}"
    )
    first = region.items[0]
    insert_nowait(region)
    assert not first.omp.nowait


# --------------------------------------------------------------------------
# 5. serial elision

ELISION_PASSES = ("parallelize", "region", "schedule", "condpar", "nowait")


@pytest.mark.criterion(5)
@pytest.mark.parametrize("stem", list(FIXTURES))
def test_c5_stripped_output_equals_stripped_input(stem):
    ast = load_fixture(stem)
    serial = strip_directives(ast)
    for source in (ast, serial):
        res = run_pipeline(source, TransformPlan(passes=ELISION_PASSES))
        assert strip_directives(res.ast) == serial


@needs_gcc
@pytest.mark.criterion(5)
@pytest.mark.parametrize("stem", list(FIXTURES))
def test_c5_transformed_fixture_outputs_match_serial(stem, tmp_path):
    ast = load_fixture(stem)
    serial = strip_directives(ast)
    expected = run(build(to_text(serial), tmp_path, "serial"), 1)
    for label, source in (("manual", ast), ("serial", serial)):
        for strategy in ("atomic", "critical"):
            res = run_pipeline(source, TransformPlan(reduction_strategy=strategy))
            text = to_text(res.ast)
            reorders = "reduction(" in text or "atomic" in text or "critical" in text
            exe = build(text, tmp_path, f"{label}_{strategy}")
            for threads in (1, 4):
                out = run(exe, threads)
                assert outputs_close(out, expected, 1e-6 if reorders else 1e-10), (label, strategy, threads)


# --------------------------------------------------------------------------
# 6. dependence soundness


@pytest.mark.criterion(6)
def test_c6_no_reported_independence_is_refuted():
    rng = random.Random(6)
    independent = 0
    for _ in range(500):
        text, memory = random_affine_loop(rng)
        loop = parse_statement(text)
        edges = dependence_test(loop)
        if any(e.carried for e in edges):
            continue
        independent += 1
        assert carried_conflicts(loop, memory, ignore={"k"}) == [], text
    assert independent >= 50


# --------------------------------------------------------------------------
# 7. round trip


@pytest.mark.criterion(7)
@pytest.mark.parametrize("stem", list(FIXTURES))
def test_c7_round_trip(stem):
    ast = load_fixture(stem)
    text = to_text(ast)
    again = parse(text)
    assert again == ast
    assert to_text(again) == text


# --------------------------------------------------------------------------
# 8. conditional parallelization


@pytest.mark.criterion(8)
@pytest.mark.parametrize("threshold", [1, 2, 10000, 12345])
def test_c8_boundaries(threshold):
    kinds = [is_profitable(WorkloadEstimate(Poly.const(v)), threshold).kind for v in (threshold - 1, threshold, threshold + 1)]
    assert kinds == ["serial", "parallel", "parallel"]


@pytest.mark.criterion(8)
def test_c8_boundaries_on_real_loops():
    threshold = 10000
    kinds = []
    for trips in (threshold - 1, threshold, threshold + 1):
        loop = parse_statement(f"#pragma omp parallel for\nfor (i = 0; i < {trips}; i++) a[i] = 0;")
        assert workload(loop).value == trips
        kinds.append(conditional_parallelize(loop, workload(loop), threshold).kind)
        assert (loop.omp is None) == (kinds[-1] == "serial")
    assert kinds == ["serial", "parallel", "parallel"]


@pytest.mark.criterion(8)
@pytest.mark.parametrize(
    "body,product",
    [
        ("for (i = 0; i < n; i++) { a[i] = 0; b[i] = 1; c[i] = 2; d[i] = 3; e[i] = 4; }", "5 * n"),
        ("for (i = 0; i < n; i++) for (j = 0; j < m; j++) { a[i][j] = 0; b[i][j] = 1; c[i][j] = 2; }", "3 * m * n"),
        ("for (i = 1; i <= n; i += 2) a[i] = 0;", None),
    ],
)
def test_c8_symbolic_workload_gives_if_clause(body, product):
    loop = parse_statement("#pragma omp parallel for\n" + body)
    est = workload(loop)
    assert not est.evaluable
    decision = conditional_parallelize(loop, est, 10000)
    assert decision.kind == "conditional"
    pragma = next(line for line in to_text(loop).splitlines() if "#pragma omp parallel for" in line)
    assert f"if({est.to_c()} > 10000)" in pragma
    if product is not None:
        assert est.to_c() == product

