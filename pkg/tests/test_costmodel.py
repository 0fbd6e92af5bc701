import pytest
from hypothesis import given
from hypothesis import strategies as st

from omppat.costmodel import Poly, WorkloadEstimate, imbalance_score, is_profitable, workload
from omppat.frontend import nodes as n
from omppat.frontend import parse, parse_statement as L

RANK = {"serial": 0, "conditional": 1, "parallel": 2}


def test_five_statements_hundred_iterations():
    est = workload(L("for (i = 0; i < 100; i++) { a[i] = 1; b[i] = 2; c[i] = 3; d[i] = 4; e[i] = 5; }"))
    assert est.evaluable and est.value == 500


def test_symbolic_two_level_nest():
    est = workload(L("for (i = 0; i < n; i++) for (j = 0; j < m; j++) { a[i][j] = 1; b[i][j] = 2; c[i][j] = 3; }"))
    assert not est.evaluable
    assert est.expr.to_c() == "3 * m * n"


def test_empty_body():
    est = workload(L("for (i = 0; i < n; i++) ;"))
    assert est.evaluable and est.value == 0


def test_calls_count_as_one_statement():
    assert workload(L("for (i = 0; i < 10; i++) { f(i, g(i)); x = i; }")).value == 20


def test_strided_and_descending_trip_counts():
    assert workload(L("for (i = 0; i < 10; i += 3) a[i] = 0;")).value == 4
    assert workload(L("for (i = 9; i >= 0; i--) a[i] = 0;")).value == 10


@pytest.mark.parametrize("value, threshold, kind", [(500, 10000, "serial"), (10000, 10000, "parallel"), (10001, 10000, "parallel"), (9999, 10000, "serial")])
def test_profitability_boundary(value, threshold, kind):
    assert is_profitable(WorkloadEstimate(Poly.const(value)), threshold).kind == kind


def test_symbolic_estimate_is_conditional():
    est = workload(L("for (i = 0; i < n; i++) for (j = 0; j < m; j++) { a[i][j] = 1; b[i][j] = 2; c[i][j] = 3; }"))
    d = is_profitable(est, 10000)
    assert d.kind == "conditional" and d.condition == "3 * m * n > 10000"


def test_threshold_must_be_positive():
    with pytest.raises(ValueError):
        is_profitable(WorkloadEstimate(Poly.const(5)), 0)


def test_triangular_inner_loop():
    assert imbalance_score(L("for (i = 0; i < n; i++) for (j = 0; j < i; j++) a[i][j] = 0;")).reasons == {"triangular_inner"}


def test_data_dependent_branch():
    assert imbalance_score(L("for (i = 0; i < n; i++) { if (key[i] > t) { a[i] = 0; } }")).reasons == {"conditional_body"}


def test_rectangular_nest_has_no_signal():
    sig = imbalance_score(L("for (i = 0; i < n; i++) for (j = 0; j < m; j++) a[i][j] = 0;"))
    assert not sig.reasons


def test_iteration_dependent_call():
    unit = parse("void work(int k);\nvoid f(int n) { int i; for (i = 0; i < n; i++) work(i); }")
    loop = next(x for x in unit.walk() if isinstance(x, n.For))
    assert imbalance_score(loop, unit).reasons == {"iteration_dependent_call"}


# --- properties


@given(st.integers(1, 500), st.integers(1, 6), st.integers(1, 20))
def test_doubling_trip_count_doubles_workload(trips, stmts, inner):
    body = " ".join(f"a{k}[i] = {k};" for k in range(stmts))
    one = workload(L(f"for (i = 0; i < {trips}; i++) for (j = 0; j < {inner}; j++) {{ {body} }}"))
    two = workload(L(f"for (i = 0; i < {2 * trips}; i++) for (j = 0; j < {inner}; j++) {{ {body} }}"))
    assert two.value == 2 * one.value == 2 * trips * inner * stmts


@given(st.integers(0, 10**7), st.integers(1, 10**6), st.integers(1, 10**6))
def test_raising_threshold_never_moves_toward_parallel(value, t1, t2):
    lo, hi = sorted((t1, t2))
    est = WorkloadEstimate(Poly.const(value))
    assert RANK[is_profitable(est, hi).kind] <= RANK[is_profitable(est, lo).kind]


_STMTS = ["a[i] = b[i];", "if (key[i] > 3) c[i] = 1;", "d[i] = d[i] + 1;", "for (j = 0; j < i; j++) e[i][j] = 0;", "s = s + 1;"]


@given(st.permutations(_STMTS))
def test_signal_ignores_statement_order(order):
    base = imbalance_score(L(f"for (i = 0; i < n; i++) {{ {' '.join(_STMTS)} }}"))
    assert imbalance_score(L(f"for (i = 0; i < n; i++) {{ {' '.join(order)} }}")) == base
