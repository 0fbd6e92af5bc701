"""Loop headers, section naming and small AST queries shared by every pass."""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Optional

from . import nodes as n
from ..symbolic import Poly, to_poly


# --------------------------------------------------------------------------
# generic queries


def written_names(node) -> set:
    """Names of variables (scalars or array bases) possibly written under ``node``."""
    out = set()
    for x in node.walk():
        if isinstance(x, n.Assign):
            out.add(_lvalue_base(x.target))
        elif isinstance(x, (n.Unary, n.Postfix)) and x.op in ("++", "--"):
            out.add(_lvalue_base(x.operand))
        elif isinstance(x, n.Unary) and x.op == "&":
            out.add(_lvalue_base(x.operand))
        elif isinstance(x, n.DeclStmt):
            out.update(d.name for d in x.decls)
    out.discard(None)
    return out


def _lvalue_base(e):
    if isinstance(e, n.Id):
        return e.name
    if isinstance(e, n.ArrayRef):
        return e.base
    if isinstance(e, n.Unary) and e.op == "*":
        return _lvalue_base(e.operand)
    return None


def referenced_names(node) -> set:
    out = set()
    for x in node.walk():
        if isinstance(x, n.Id):
            out.add(x.name)
        elif isinstance(x, n.ArrayRef):
            out.add(x.base)
    return out


def calls_in(node) -> list:
    return [x for x in node.walk() if isinstance(x, n.Call)]


def loops_in(node) -> list:
    return [x for x in node.walk() if isinstance(x, n.For)]


def child_loops(stmt) -> list:
    """Loops directly nested in ``stmt``'s body, not inside another loop."""
    out = []

    def visit(s):
        if isinstance(s, n.For):
            out.append(s)
            return
        for c in s.children():
            if isinstance(c, n.Stmt):
                visit(c)

    body = stmt.body if isinstance(stmt, (n.For, n.While)) else stmt
    if isinstance(stmt, (n.For, n.While)):
        visit(body)
    else:
        for c in stmt.children():
            if isinstance(c, n.Stmt):
                visit(c)
    return out


# --------------------------------------------------------------------------
# loop headers


@dataclass
class LoopHeader:
    index: str
    lower: n.Expr
    upper: n.Expr  # exclusive end in the direction of travel
    stride: n.Expr
    direction: str  # ascending | descending
    canonical: bool

    def __post_init__(self):
        if self.stride_value == 0:
            raise ValueError("loop stride must be nonzero")

    @property
    def stride_value(self) -> int:
        return to_poly(self.stride).constant()

    @property
    def lower_poly(self) -> Poly:
        return to_poly(self.lower)

    @property
    def upper_poly(self) -> Poly:
        return to_poly(self.upper)

    def trip_count(self) -> Poly:
        """Iteration count as a Poly; an atom when it cannot be expressed exactly."""
        s = self.stride_value
        span = self.upper_poly - self.lower_poly
        if abs(s) == 1:
            count = span if s == 1 else -span
        else:
            adjusted = span + (s - 1 if s > 0 else s + 1)
            c = adjusted.constant()
            if c is not None:
                count = Poly.const(int(c / s))
            else:
                q = adjusted.exact_div(s)
                count = q if q is not None else Poly.atom(f"(({adjusted.to_c()}) / {s})")
        c = count.constant()
        if c is not None and c < 0:
            return Poly.const(0)
        return count

    def same_space(self, other: "LoopHeader") -> bool:
        return (
            self.lower_poly == other.lower_poly
            and self.upper_poly == other.upper_poly
            and self.stride_value == other.stride_value
        )

    def values(self):
        """Concrete index values; only valid when bounds fold to integers."""
        lo, hi, s = self.lower_poly.constant(), self.upper_poly.constant(), self.stride_value
        if lo is None or hi is None:
            raise ValueError("loop bounds are symbolic")
        return list(range(lo, hi, s))


def _step_of(step, index):
    if isinstance(step, (n.Postfix, n.Unary)) and step.op in ("++", "--"):
        if isinstance(step.operand, n.Id) and step.operand.name == index:
            return 1 if step.op == "++" else -1
        return None
    if isinstance(step, n.Assign) and isinstance(step.target, n.Id) and step.target.name == index:
        if step.op in ("+=", "-="):
            c = to_poly(step.value).constant()
            if c is None:
                return None
            return c if step.op == "+=" else -c
        if step.op == "=" and isinstance(step.value, n.Binary) and step.value.op in ("+", "-"):
            v = step.value
            if isinstance(v.left, n.Id) and v.left.name == index:
                c = to_poly(v.right).constant()
                if c is None:
                    return None
                return c if v.op == "+" else -c
            if v.op == "+" and isinstance(v.right, n.Id) and v.right.name == index:
                return to_poly(v.left).constant()
    return None


def _escapes(body) -> bool:
    """True when ``body`` can leave the loop early (break at this level or return)."""

    def visit(s, nested):
        if isinstance(s, n.Return):
            return True
        if isinstance(s, n.Break) and not nested:
            return True
        for c in s.children():
            if isinstance(c, n.Stmt):
                if visit(c, nested or isinstance(s, (n.For, n.While))):
                    return True
        return False

    return visit(body, False)


def loop_header(loop: n.For) -> Optional[LoopHeader]:
    """Recognize ``for (i = lo; i < hi; i += s)`` style headers, or return None."""
    init = loop.init
    if isinstance(init, n.DeclStmt) and len(init.decls) == 1 and init.decls[0].init is not None:
        index, lower = init.decls[0].name, init.decls[0].init
    elif isinstance(init, n.Assign) and init.op == "=" and isinstance(init.target, n.Id):
        index, lower = init.target.name, init.value
    else:
        return None
    cond = loop.cond
    if not isinstance(cond, n.Binary) or cond.op not in ("<", "<=", ">", ">="):
        return None
    op, bound = cond.op, cond.right
    if not (isinstance(cond.left, n.Id) and cond.left.name == index):
        if isinstance(cond.right, n.Id) and cond.right.name == index:
            op = {"<": ">", "<=": ">=", ">": "<", ">=": "<="}[op]
            bound = cond.left
        else:
            return None
    if loop.step is None:
        return None
    stride = _step_of(loop.step, index)
    if not stride:
        return None
    ascending = op in ("<", "<=")
    if ascending != (stride > 0):
        return None
    if op == "<=":
        upper = (to_poly(bound) + 1).to_expr()
    elif op == ">=":
        upper = (to_poly(bound) - 1).to_expr()
    else:
        upper = bound
    body_writes = written_names(loop.body)
    bound_names = referenced_names(lower) | referenced_names(bound)
    canonical = (
        index not in body_writes
        and not (bound_names & body_writes)
        and index not in bound_names
        and not calls_in(lower)
        and not calls_in(bound)
        and not _escapes(loop.body)
    )
    return LoopHeader(
        index, lower, upper, n.Const(str(stride)), "ascending" if ascending else "descending", canonical
    )


# --------------------------------------------------------------------------
# sections


_SECTION_RE = re.compile(r"^(?P<func>[A-Za-z_]\w*)#(?P<first>\d+)(?:-#(?P<last>\d+))?$")


@dataclass(frozen=True, order=True)
class SectionId:
    function: str
    first: int
    last: int = -1

    def __post_init__(self):
        if self.last == -1:
            object.__setattr__(self, "last", self.first)
        if self.first < 0 or self.last < self.first:
            raise ValueError(f"bad section range {self.first}..{self.last}")

    def __str__(self):
        if self.first == self.last:
            return f"{self.function}#{self.first}"
        return f"{self.function}#{self.first}-#{self.last}"

    @classmethod
    def parse(cls, text: str) -> "SectionId":
        m = _SECTION_RE.match(text.strip())
        if not m:
            raise ValueError(f"malformed section id {text!r}")
        first = int(m["first"])
        last = int(m["last"]) if m["last"] is not None else first
        return cls(m["func"], first, last)

    def ordinals(self):
        return range(self.first, self.last + 1)

    def contains(self, other: "SectionId") -> bool:
        return self.function == other.function and self.first <= other.first and other.last <= self.last

    def overlaps(self, other: "SectionId") -> bool:
        return self.function == other.function and self.first <= other.last and other.first <= self.last


def top_level_loops(fn: n.FunctionDef):
    """Top-level loop nests of ``fn`` in source order, with their ancestor chains."""
    out = []

    def visit(s, ancestors):
        if isinstance(s, n.For):
            out.append((s, ancestors))
            return
        for c in s.children():
            if isinstance(c, n.Stmt):
                visit(c, ancestors + [s])

    if fn.body is not None:
        visit(fn.body, [])
    return out


def enumerate_sections(ast: n.TranslationUnit) -> list:
    sections = []
    for fn in ast.functions():
        for i, _ in enumerate(top_level_loops(fn)):
            sections.append(SectionId(fn.name, i))
    return sections


def section_loops(ast: n.TranslationUnit, section: SectionId) -> list:
    """Loop nests covered by ``section``; raises KeyError when it does not exist."""
    fn = ast.function(section.function)
    if fn is None:
        raise KeyError(str(section))
    loops = top_level_loops(fn)
    if section.last >= len(loops):
        raise KeyError(str(section))
    return [loops[i][0] for i in section.ordinals()]


def region_sections(ast: n.TranslationUnit) -> list:
    """Sections grouped so nests sharing one enclosing parallel region form one range."""
    out = []
    for fn in ast.functions():
        group_key, start = None, None
        loops = top_level_loops(fn)
        for i, (loop, ancestors) in enumerate(loops):
            region = next(
                (a for a in reversed(ancestors) if a.omp is not None and a.omp.kind == "parallel"), None
            )
            key = id(region) if region is not None else None
            if key is not None and key == group_key:
                continue
            if start is not None:
                out.append(SectionId(fn.name, start, i - 1))
            start, group_key = i, key
        if start is not None:
            out.append(SectionId(fn.name, start, len(loops) - 1))
    return out
