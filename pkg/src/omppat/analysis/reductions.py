"""Scalar and array reduction recognition."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from ..frontend import nodes as n
from ..frontend.loops import loop_header, referenced_names
from .accesses import AffineForm, Opaque, collect_accesses


@dataclass
class ReductionCandidate:
    variable: str
    op: str  # + * min max
    element_pattern: Optional[tuple] = None  # subscript forms; present for arrays
    stmts: list = field(default_factory=list, repr=False)

    @property
    def is_array(self):
        return self.element_pattern is not None

    @property
    def statements(self):
        return [s.span for s in self.stmts]


def _same_target(a, b):
    return a == b


def _mentions(e, target):
    """True when ``e`` reads the reduction variable (any element for arrays)."""
    base = target.name if isinstance(target, n.Id) else target.base
    return base in referenced_names(e)


def match_update(s):
    """Recognize one reduction statement: returns (target, op, expr) or None."""
    if isinstance(s, n.ExprStmt):
        e = s.expr
        if isinstance(e, (n.Unary, n.Postfix)) and e.op in ("++", "--"):
            if isinstance(e.operand, (n.Id, n.ArrayRef)):
                return e.operand, "+", n.Const("1")
            return None
        if not isinstance(e, n.Assign) or not isinstance(e.target, (n.Id, n.ArrayRef)):
            return None
        t = e.target
        if e.op in ("+=", "-="):
            return (t, "+", e.value) if not _mentions(e.value, t) else None
        if e.op == "*=":
            return (t, "*", e.value) if not _mentions(e.value, t) else None
        if e.op != "=":
            return None
        v = e.value
        if isinstance(v, n.Binary) and v.op in ("+", "*", "-"):
            if _same_target(v.left, t) and not _mentions(v.right, t):
                return t, "+" if v.op == "-" else v.op, v.right
            if v.op != "-" and _same_target(v.right, t) and not _mentions(v.left, t):
                return t, v.op, v.left
            return None
        if isinstance(v, n.Call) and v.func in ("fmax", "fmin", "max", "min") and len(v.args) == 2:
            op = "max" if "max" in v.func else "min"
            a, b = v.args
            if _same_target(a, t) and not _mentions(b, t):
                return t, op, b
            if _same_target(b, t) and not _mentions(a, t):
                return t, op, a
            return None
        if isinstance(v, n.Cond) and isinstance(v.test, n.Binary) and v.test.op in ("<", ">", "<=", ">="):
            return _minmax(v.test, t, v.then, v.orelse)
        return None
    if isinstance(s, n.If) and s.orelse is None and isinstance(s.cond, n.Binary):
        body = s.then
        if isinstance(body, n.Compound) and len(body.items) == 1:
            body = body.items[0]
        if (
            isinstance(body, n.ExprStmt)
            and isinstance(body.expr, n.Assign)
            and body.expr.op == "="
            and isinstance(body.expr.target, (n.Id, n.ArrayRef))
        ):
            t, val = body.expr.target, body.expr.value
            if s.cond.op in ("<", ">", "<=", ">="):
                return _minmax(s.cond, t, val, t)
    return None


def _minmax(test, t, then, orelse):
    """``test ? then : orelse`` selecting between ``t`` and an expression."""
    a, b, op = test.left, test.right, test.op
    if op in ("<", "<="):
        a, b = b, a  # normalize to a > b
    # now the test reads "a > b"
    if _same_target(orelse, t) and not _mentions(then, t):
        e = then
        if _same_target(b, t) and a == e:
            return t, "max", e
        if _same_target(a, t) and b == e:
            return t, "min", e
    if _same_target(then, t) and not _mentions(orelse, t):
        e = orelse
        if _same_target(a, t) and b == e:
            return t, "max", e
        if _same_target(b, t) and a == e:
            return t, "min", e
    return None


def _reduction_statements(stmt, found, other):
    """Split statements under ``stmt`` into reduction updates and everything else."""
    m = match_update(stmt)
    if m is not None:
        found.append((stmt, m))
        return
    if isinstance(stmt, n.Compound):
        for item in stmt.items:
            _reduction_statements(item, found, other)
    elif isinstance(stmt, n.If):
        other.append(stmt.cond)
        _reduction_statements(stmt.then, found, other)
        if stmt.orelse is not None:
            _reduction_statements(stmt.orelse, found, other)
    elif isinstance(stmt, n.For):
        for part in (stmt.init, stmt.cond, stmt.step):
            if part is not None:
                other.append(part)
        _reduction_statements(stmt.body, found, other)
    elif isinstance(stmt, n.While):
        other.append(stmt.cond)
        _reduction_statements(stmt.body, found, other)
    else:
        other.append(stmt)


def recognize_reductions(loop: n.For) -> list:
    """Reduction candidates of ``loop``: each variable updated only by reduction
    statements of a single operator and not otherwise touched in the loop."""
    h = loop_header(loop)
    if h is None:
        return []
    found, other = [], []
    _reduction_statements(loop.body, found, other)
    by_var = {}
    for stmt, (target, op, expr) in found:
        base = target.name if isinstance(target, n.Id) else target.base
        by_var.setdefault(base, []).append((stmt, target, op, expr))
    accesses = {id(a.node): a for a in collect_accesses(loop)}
    declared_inside = {d.name for x in loop.body.walk() if isinstance(x, n.DeclStmt) for d in x.decls}
    out = []
    for var, uses in by_var.items():
        if var == h.index or var in declared_inside:
            continue
        ops = {op for _, _, op, _ in uses}
        if len(ops) != 1:
            continue
        # the variable may appear nowhere else in the loop
        if any(var in referenced_names(o) for o in other):
            continue
        if any(var in referenced_names(expr) for _, _, _, expr in uses):
            continue
        if any(var in _subscript_names(t) for _, t, _, _ in uses):
            continue
        kinds = {isinstance(t, n.Id) for _, t, _, _ in uses}
        if len(kinds) != 1:
            continue
        op = ops.pop()
        if isinstance(uses[0][1], n.Id):
            out.append(ReductionCandidate(var, op, None, [u[0] for u in uses]))
            continue
        pattern = _element_pattern(uses, accesses, h.index)
        if pattern is None:
            continue
        out.append(ReductionCandidate(var, op, pattern, [u[0] for u in uses]))
    return out


def _subscript_names(t):
    if isinstance(t, n.ArrayRef):
        names = set()
        for s in t.subscripts:
            names |= referenced_names(s)
        return names
    return set()


def _element_pattern(uses, accesses, index):
    """Subscript forms of an array update, or None when each iteration owns its
    element (then no cross-iteration reduction exists)."""
    patterns = []
    for _, target, _, _ in uses:
        acc = accesses.get(id(target))
        if acc is None:
            return None
        forms = tuple(acc.subscripts)
        if any(isinstance(f, AffineForm) and f.coeff(index) != 0 for f in forms):
            return None
        patterns.append(forms)
    return patterns[0] if all(p == patterns[0] for p in patterns) else tuple(
        Opaque("mixed", "non-affine") for _ in patterns[0]
    )
