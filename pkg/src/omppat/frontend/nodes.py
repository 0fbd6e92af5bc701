"""AST node classes for the supported C subset.

Every node carries a source ``span`` that is excluded from equality, so two
trees compare equal when they are structurally identical regardless of where
they came from.  Statements additionally carry an optional ``omp`` slot holding
the OpenMP directive attached to them.
"""

from __future__ import annotations

from dataclasses import dataclass, field, fields, replace
from typing import Iterator, Optional, Union


@dataclass(frozen=True)
class Span:
    line: int
    col: int
    end_line: int = 0
    end_col: int = 0
    file: str = "<input>"

    def __str__(self):
        return f"{self.file}:{self.line}:{self.col}"


def _span():
    return field(default=None, compare=False, repr=False, kw_only=True)


@dataclass
class Node:
    span: Optional[Span] = _span()

    def children(self) -> Iterator["Node"]:
        for f in fields(self):
            if f.name in ("span",):
                continue
            value = getattr(self, f.name)
            if isinstance(value, Node):
                yield value
            elif isinstance(value, (list, tuple)):
                for v in value:
                    if isinstance(v, Node):
                        yield v

    def walk(self) -> Iterator["Node"]:
        """Pre-order traversal of this node and all its descendants."""
        stack = [self]
        while stack:
            node = stack.pop()
            yield node
            stack.extend(reversed(list(node.children())))


# --------------------------------------------------------------------------
# expressions


@dataclass
class Expr(Node):
    pass


@dataclass
class Id(Expr):
    name: str


@dataclass
class Const(Expr):
    text: str
    kind: str = "int"  # int | float | char | str

    @property
    def value(self):
        if self.kind == "int":
            t = self.text.rstrip("uUlL")
            return int(t, 0) if not (len(t) > 1 and t[0] == "0" and t[1:].isdigit()) else int(t, 8)
        if self.kind == "float":
            return float(self.text.rstrip("fFlL"))
        return None


@dataclass
class Unary(Expr):
    op: str  # - + ! ~ * & ++ -- (prefix)
    operand: Expr


@dataclass
class Postfix(Expr):
    op: str  # ++ --
    operand: Expr


@dataclass
class Binary(Expr):
    op: str
    left: Expr
    right: Expr


@dataclass
class Assign(Expr):
    op: str  # = += -= ...
    target: Expr
    value: Expr


@dataclass
class Cond(Expr):
    test: Expr
    then: Expr
    orelse: Expr


@dataclass
class Call(Expr):
    func: str
    args: list = field(default_factory=list)


@dataclass
class ArrayRef(Expr):
    base: str
    subscripts: list = field(default_factory=list)


@dataclass
class TypeName(Node):
    base: str
    pointer: int = 0
    dims: list = field(default_factory=list)

    def text(self):
        return self.base + (" " + "*" * self.pointer if self.pointer else "")


@dataclass
class Cast(Expr):
    type: TypeName
    operand: Expr


@dataclass
class SizeOf(Expr):
    arg: Union[TypeName, Expr]


@dataclass
class InitList(Expr):
    items: list = field(default_factory=list)


# --------------------------------------------------------------------------
# OpenMP


@dataclass
class OmpDirective(Node):
    kind: str  # parallel | for | parallel_for | single | critical | atomic | barrier | threadprivate
    name: Optional[str] = None  # critical section name
    private: list = field(default_factory=list)
    firstprivate: list = field(default_factory=list)
    lastprivate: list = field(default_factory=list)
    shared: list = field(default_factory=list)
    reductions: list = field(default_factory=list)  # list of (op, [vars])
    schedule: Optional[tuple] = None  # (kind, chunk expr or None)
    nowait: bool = False
    if_condition: Optional[Expr] = None
    default: Optional[str] = None
    variables: list = field(default_factory=list)  # threadprivate list

    WORKSHARING = ("for", "single")
    LOOP_KINDS = ("for", "parallel_for")
    PARALLEL_KINDS = ("parallel", "parallel_for")

    @property
    def is_loop(self):
        return self.kind in self.LOOP_KINDS

    @property
    def spawns_team(self):
        return self.kind in self.PARALLEL_KINDS

    def reduction_vars(self):
        return [v for _, vs in self.reductions for v in vs]

    def sharing_of(self, var):
        """Data-sharing clause naming ``var`` or None."""
        for clause in ("private", "firstprivate", "lastprivate", "shared"):
            if var in getattr(self, clause):
                return clause
        if var in self.reduction_vars():
            return "reduction"
        return None

    def private_vars(self):
        return set(self.private) | set(self.firstprivate) | set(self.lastprivate)

    def copy(self, **changes):
        new = replace(
            self,
            private=list(self.private),
            firstprivate=list(self.firstprivate),
            lastprivate=list(self.lastprivate),
            shared=list(self.shared),
            reductions=[(op, list(vs)) for op, vs in self.reductions],
            variables=list(self.variables),
        )
        for k, v in changes.items():
            setattr(new, k, v)
        return new


# --------------------------------------------------------------------------
# declarations


@dataclass
class VarDecl(Node):
    name: str
    type: str  # base type text, e.g. "double", "unsigned int", "const int"
    storage: str = "local"  # local | static | global | param | extern
    pointer: int = 0
    dims: list = field(default_factory=list)  # Expr or None per array dimension
    init: Optional[Expr] = None

    @property
    def is_array(self):
        return bool(self.dims) or self.pointer > 0

    @property
    def is_scalar(self):
        return not self.is_array


@dataclass
class Stmt(Node):
    omp: Optional[OmpDirective] = field(default=None, kw_only=True)


@dataclass
class DeclStmt(Stmt):
    decls: list = field(default_factory=list)


@dataclass
class Compound(Stmt):
    items: list = field(default_factory=list)


@dataclass
class ExprStmt(Stmt):
    expr: Expr


@dataclass
class For(Stmt):
    init: Optional[Union[Expr, DeclStmt]]
    cond: Optional[Expr]
    step: Optional[Expr]
    body: Stmt


@dataclass
class If(Stmt):
    cond: Expr
    then: Stmt
    orelse: Optional[Stmt] = None


@dataclass
class While(Stmt):
    cond: Expr
    body: Stmt


@dataclass
class Return(Stmt):
    value: Optional[Expr] = None


@dataclass
class Break(Stmt):
    pass


@dataclass
class Continue(Stmt):
    pass


@dataclass
class Empty(Stmt):
    pass


@dataclass
class OmpStmt(Stmt):
    """A standalone directive (barrier, threadprivate) stored in ``omp``."""


@dataclass
class FunctionDef(Node):
    name: str
    ret_type: str
    params: list = field(default_factory=list)
    body: Optional[Compound] = None  # None for a prototype
    storage: str = "global"
    variadic: bool = False


@dataclass
class Typedef(Node):
    name: str
    type: str


@dataclass
class PPLine(Node):
    """A preprocessor line kept verbatim (``#include`` and friends)."""

    text: str


@dataclass
class TranslationUnit(Node):
    items: list = field(default_factory=list)
    path: str = field(default="<input>", compare=False)
    origin: str = field(default="serial", compare=False)

    def functions(self):
        return [f for f in self.items if isinstance(f, FunctionDef) and f.body is not None]

    def function(self, name):
        for f in self.functions():
            if f.name == name:
                return f
        return None

    def global_decls(self):
        out = {}
        for item in self.items:
            if isinstance(item, DeclStmt):
                for d in item.decls:
                    out[d.name] = d
        return out


Ast = TranslationUnit
