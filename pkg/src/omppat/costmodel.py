"""Workload estimates, profitability decisions and load-imbalance signals."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .analysis.accesses import DEFAULT_PURE
from .frontend import nodes as n
from .frontend.loops import loop_header, loops_in, referenced_names, written_names
from .symbolic import Poly

DEFAULT_THRESHOLD = 10000
IMBALANCE_REASONS = ("triangular_inner", "conditional_body", "iteration_dependent_call")


@dataclass(frozen=True)
class WorkloadEstimate:
    expr: Poly

    @property
    def evaluable(self) -> bool:
        return self.expr.constant() is not None

    @property
    def value(self) -> Optional[int]:
        return self.expr.constant()

    def to_c(self) -> str:
        return self.expr.to_c()

    def __str__(self):
        return self.to_c()


def _statement_cost(s, bounds) -> Poly:
    """Executable statements in ``s``; nested loops are multiplied out."""
    if s is None or isinstance(s, (n.Empty, n.OmpStmt)):
        return Poly.const(0)
    if isinstance(s, n.Compound):
        total = Poly.const(0)
        for item in s.items:
            total = total + _statement_cost(item, bounds)
        return total
    if isinstance(s, n.DeclStmt):
        return Poly.const(sum(1 for d in s.decls if d.init is not None))
    if isinstance(s, n.If):
        return _statement_cost(s.then, bounds) + _statement_cost(s.orelse, bounds)
    if isinstance(s, n.While):
        return _statement_cost(s.body, bounds)
    if isinstance(s, n.For):
        return _loop_cost(s, bounds)
    return Poly.const(1)


def _loop_cost(loop, bounds):
    h = loop_header(loop)
    if h is None:
        return _statement_cost(loop.body, bounds)
    trips = h.trip_count()
    # inner bounds that depend on an enclosing index take that index's extreme value
    for atom in list(trips.atoms()):
        if atom in bounds:
            trips = trips.substitute(atom, bounds[atom])
    if trips.constant() is not None and trips.constant() < 0:
        trips = Poly.const(0)
    extreme = h.upper_poly - Poly.const(1) if h.stride_value > 0 else h.lower_poly
    inner = dict(bounds)
    inner[h.index] = extreme
    return trips * _statement_cost(loop.body, inner)


def workload(nest: n.For) -> WorkloadEstimate:
    """Statements times iterations, multiplied through the nest levels."""
    if loop_header(nest) is None:
        raise ValueError("workload needs a canonical loop")
    return WorkloadEstimate(_loop_cost(nest, {}))


def statement_workload(stmt: n.Stmt) -> WorkloadEstimate:
    """Workload of an arbitrary statement, such as a whole parallel region."""
    if isinstance(stmt, n.For) and loop_header(stmt) is not None:
        return workload(stmt)
    return WorkloadEstimate(_statement_cost(stmt, {}))


@dataclass(frozen=True)
class Decision:
    kind: str  # serial | parallel | conditional
    condition: Optional[str] = None

    def __str__(self):
        return f"conditional({self.condition})" if self.kind == "conditional" else self.kind


def is_profitable(est: WorkloadEstimate, threshold: int = DEFAULT_THRESHOLD) -> Decision:
    if threshold <= 0:
        raise ValueError("threshold must be positive")
    if est.evaluable:
        return Decision("serial" if est.value < threshold else "parallel")
    return Decision("conditional", f"{est.to_c()} > {threshold}")


@dataclass(frozen=True)
class ImbalanceSignal:
    reasons: frozenset = field(default_factory=frozenset)

    def __bool__(self):
        return bool(self.reasons)

    def __contains__(self, reason):
        return reason in self.reasons


def _function_workload_known(fn: Optional[n.FunctionDef]) -> bool:
    if fn is None:
        return False
    for x in fn.body.walk():
        if isinstance(x, n.While):
            return False
        if isinstance(x, n.For):
            h = loop_header(x)
            if h is None or h.trip_count().constant() is None:
                return False
    return True


def imbalance_score(nest: n.For, unit: Optional[n.TranslationUnit] = None, pure_functions=DEFAULT_PURE) -> ImbalanceSignal:
    """Reasons why iterations of ``nest`` may carry uneven work."""
    h = loop_header(nest)
    if h is None:
        return ImbalanceSignal()
    varying = {h.index} | written_names(nest.body)
    reasons = set()
    for inner in loops_in(nest.body):
        ih = loop_header(inner)
        bound_names = (
            referenced_names(ih.lower) | referenced_names(ih.upper)
            if ih is not None
            else referenced_names(inner.cond) if inner.cond is not None else set()
        )
        if h.index in bound_names:
            reasons.add("triangular_inner")
    for x in nest.body.walk():
        cond = None
        if isinstance(x, (n.If, n.While)):
            cond = x.cond
        elif isinstance(x, n.Cond):
            cond = x.test
        if cond is not None and referenced_names(cond) & varying:
            reasons.add("conditional_body")
        if isinstance(x, n.Call) and x.func not in pure_functions:
            if any(referenced_names(a) & varying for a in x.args):
                callee = unit.function(x.func) if unit is not None else None
                if not _function_workload_known(callee):
                    reasons.add("iteration_dependent_call")
    return ImbalanceSignal(frozenset(reasons))

