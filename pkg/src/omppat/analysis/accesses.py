"""Access collection: every array/scalar reference in a loop body, with
subscripts classified as affine forms over loop indices or as opaque."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union

from ..frontend import nodes as n
from ..frontend.loops import loop_header, written_names
from ..frontend.printer import format_expr
from ..symbolic import Poly, to_poly

# functions assumed side-effect free unless configured otherwise
DEFAULT_PURE = frozenset(
    """sqrt sqrtf pow powf exp expf log logf log10 log2 sin cos tan asin acos atan atan2
    sinh cosh tanh fabs fabsf abs labs fmax fmin fmaxf fminf floor ceil round trunc fmod
    cbrt hypot erf copysign omp_get_thread_num omp_get_num_threads omp_get_max_threads
    omp_get_wtime""".split()
)


@dataclass(frozen=True)
class AffineForm:
    """sum(coeffs[i] * i) + const, with ``const`` loop-invariant."""

    coeffs: tuple  # sorted ((index, coefficient), ...) with nonzero coefficients
    const: Poly

    @classmethod
    def from_poly(cls, p: Poly, indices) -> "AffineForm":
        coeffs = tuple(sorted((i, p.coeff(i)) for i in indices if p.coeff(i)))
        return cls(coeffs, p.without(indices))

    def coeff(self, index) -> int:
        return dict(self.coeffs).get(index, 0)

    def indices(self):
        return {i for i, _ in self.coeffs}

    def to_poly(self) -> Poly:
        p = self.const
        for i, c in self.coeffs:
            p = p + Poly.atom(i) * c
        return p

    def rename(self, old, new) -> "AffineForm":
        return AffineForm(tuple(sorted((new if i == old else i, c) for i, c in self.coeffs)), self.const)

    def __str__(self):
        parts = [f"{c}*{i}" for i, c in self.coeffs]
        parts.append(self.const.to_c())
        return " + ".join(parts)


@dataclass(frozen=True)
class Opaque:
    text: str
    reason: str = "non-affine"  # non-affine | indirect | call

    def __str__(self):
        return f"?{self.text}"


Subscript = Union[AffineForm, Opaque]


@dataclass(eq=False)
class AccessDescriptor:
    base: str
    subscripts: list
    mode: str  # read | write
    site: Optional[n.Span] = None
    node: Optional[n.Node] = field(default=None, repr=False)
    stmt: Optional[n.Stmt] = field(default=None, repr=False)
    loops: tuple = field(default=(), repr=False)  # inner For nodes enclosing the access
    conditional: bool = False
    via_call: Optional[str] = None
    unknown: bool = False  # stands for an unanalyzable call

    @property
    def is_scalar(self):
        return not self.subscripts and self.via_call is None

    @property
    def has_opaque(self):
        return self.unknown or any(isinstance(s, Opaque) for s in self.subscripts)

    @property
    def indirect(self):
        return any(isinstance(s, Opaque) and s.reason == "indirect" for s in self.subscripts)

    def __str__(self):
        subs = "".join(f"[{s}]" for s in self.subscripts)
        return f"{self.mode} {self.base}{subs}"


class _Collector:
    def __init__(self, loop, summaries, pure, arrays):
        self.out = []
        self.arrays = set(arrays or ()) | {
            x.base for x in loop.walk() if isinstance(x, n.ArrayRef)
        }
        self.summaries = summaries
        self.pure = pure
        h = loop_header(loop)
        self.index = h.index if h else None
        self.variant = written_names(loop.body)
        self.loop = loop

    def classify(self, sub, indices):
        if any(isinstance(x, (n.ArrayRef, n.Call)) for x in sub.walk()):
            reason = "indirect" if any(isinstance(x, n.ArrayRef) for x in sub.walk()) else "call"
            return Opaque(format_expr(sub), reason)
        if any(isinstance(x, n.Unary) and x.op == "*" for x in sub.walk()):
            return Opaque(format_expr(sub), "indirect")
        p = to_poly(sub)
        for mono in p.terms:
            idx = [a for a in mono if a in indices]
            if idx and len(mono) > 1:
                return Opaque(format_expr(sub))
            if not idx and any(a in self.variant or not _is_name(a) for a in mono):
                return Opaque(format_expr(sub))
        return AffineForm.from_poly(p, indices)

    def add(self, base, subs, mode, node, ctx, **kw):
        indices, loops, stmt, cond = ctx
        forms = [self.classify(s, indices) for s in subs]
        self.out.append(
            AccessDescriptor(base, forms, mode, node.span, node, stmt, loops, cond, **kw)
        )

    # expressions ----------------------------------------------------------

    def expr(self, e, ctx):
        if e is None:
            return
        if isinstance(e, n.Id):
            self.add(e.name, [], "read", e, ctx)
        elif isinstance(e, n.ArrayRef):
            self.add(e.base, e.subscripts, "read", e, ctx)
            for s in e.subscripts:
                self.expr(s, ctx)
        elif isinstance(e, n.Assign):
            self.lvalue(e.target, "write", ctx)
            self.lvalue_subscripts(e.target, ctx)
            if e.op != "=":
                self.lvalue(e.target, "read", ctx)
            self.expr(e.value, ctx)
        elif isinstance(e, (n.Unary, n.Postfix)) and e.op in ("++", "--"):
            self.lvalue(e.operand, "write", ctx)
            self.lvalue_subscripts(e.operand, ctx)
            self.lvalue(e.operand, "read", ctx)
        elif isinstance(e, n.Unary) and e.op == "*":
            self.lvalue(e, "read", ctx)
            self.lvalue_subscripts(e, ctx)
        elif isinstance(e, n.Unary) and e.op == "&":
            self.lvalue_subscripts(e.operand, ctx)
        elif isinstance(e, n.Call):
            self.call(e, ctx)
        elif isinstance(e, n.SizeOf):
            return
        else:
            for c in e.children():
                if isinstance(c, n.Expr):
                    self.expr(c, ctx)

    def lvalue(self, t, mode, ctx):
        if isinstance(t, n.Id):
            self.add(t.name, [], mode, t, ctx)
        elif isinstance(t, n.ArrayRef):
            self.add(t.base, t.subscripts, mode, t, ctx)
        elif isinstance(t, n.Unary) and t.op == "*":
            base = _pointer_base(t.operand)
            if base is None:
                self.out.append(AccessDescriptor("<deref>", [], mode, t.span, t, ctx[2], ctx[1], ctx[3], unknown=True))
            elif isinstance(t.operand, n.Id):
                self.add(base, [n.Const("0")], mode, t, ctx)
            else:
                self.add(base, [_offset_of(t.operand)], mode, t, ctx)

    def lvalue_subscripts(self, t, ctx):
        if isinstance(t, n.ArrayRef):
            for s in t.subscripts:
                self.expr(s, ctx)
        elif isinstance(t, n.Unary) and t.op == "*" and not isinstance(t.operand, n.Id):
            for c in t.operand.walk():
                if isinstance(c, n.ArrayRef):
                    self.expr(c, ctx)
                elif isinstance(c, n.Id) and c.name != _pointer_base(t.operand):
                    self.add(c.name, [], "read", c, ctx)

    def call(self, e, ctx):
        for a in e.args:
            if not (isinstance(a, n.Id) and a.name in self.arrays):
                self.expr(a, ctx)
        summary = self.summaries.get(e.func) if self.summaries else None
        if summary is None:
            if e.func in self.pure:
                return
            self._unknown_call(e, ctx)
            return
        if summary.classification in ("io", "unknown"):
            self._unknown_call(e, ctx)
            return
        for k, a in enumerate(e.args):
            base = _array_arg_base(a)
            if base is None:
                continue
            whole = [Opaque(format_expr(a), "call")]
            self.out.append(
                AccessDescriptor(base, whole, "read", e.span, e, ctx[2], ctx[1], ctx[3], via_call=e.func)
            )
            if k in summary.params:
                self.out.append(
                    AccessDescriptor(base, whole, "write", e.span, e, ctx[2], ctx[1], ctx[3], via_call=e.func)
                )
        for g in sorted(summary.global_reads):
            self.out.append(
                AccessDescriptor(g, [Opaque(g, "call")], "read", e.span, e, ctx[2], ctx[1], ctx[3], via_call=e.func)
            )
        for g in sorted(summary.globals):
            self.out.append(
                AccessDescriptor(g, [Opaque(g, "call")], "write", e.span, e, ctx[2], ctx[1], ctx[3], via_call=e.func)
            )

    def _unknown_call(self, e, ctx):
        self.out.append(
            AccessDescriptor(f"{e.func}()", [], "write", e.span, e, ctx[2], ctx[1], ctx[3], via_call=e.func, unknown=True)
        )

    # statements -----------------------------------------------------------

    def stmt(self, s, indices, loops, cond):
        ctx = (indices, loops, s, cond)
        if isinstance(s, n.ExprStmt):
            self.expr(s.expr, ctx)
        elif isinstance(s, n.DeclStmt):
            for d in s.decls:
                if d.init is not None:
                    self.expr(d.init, ctx)
                    self.add(d.name, [], "write", d, ctx)
        elif isinstance(s, n.Compound):
            for item in s.items:
                self.stmt(item, indices, loops, cond)
        elif isinstance(s, n.If):
            self.expr(s.cond, ctx)
            self.stmt(s.then, indices, loops, True)
            if s.orelse is not None:
                self.stmt(s.orelse, indices, loops, True)
        elif isinstance(s, n.While):
            self.expr(s.cond, ctx)
            self.stmt(s.body, indices, loops, True)
        elif isinstance(s, n.For):
            h = loop_header(s)
            inner = indices | {h.index} if h is not None and h.canonical else indices
            if isinstance(s.init, n.DeclStmt):
                self.stmt(s.init, indices, loops, cond)
            else:
                self.expr(s.init, ctx)
            ictx = (inner, loops + (s,), s, cond)
            self.expr(s.cond, ictx)
            self.stmt(s.body, inner, loops + (s,), cond)
            self.expr(s.step, ictx)
        elif isinstance(s, n.Return):
            self.expr(s.value, ctx)


def _is_name(atom):
    return atom.isidentifier()


def _pointer_base(e):
    if isinstance(e, n.Id):
        return e.name
    if isinstance(e, n.Binary) and e.op in ("+", "-"):
        left = _pointer_base(e.left)
        if left is not None:
            return left
        if e.op == "+":
            return _pointer_base(e.right)
    return None


def _offset_of(e):
    """Offset expression of ``p + k`` style pointer arithmetic relative to its base."""
    if isinstance(e, n.Binary) and e.op in ("+", "-") and isinstance(e.left, n.Id):
        return e.right if e.op == "+" else n.Unary("-", e.right)
    if isinstance(e, n.Binary) and e.op == "+" and isinstance(e.right, n.Id):
        return e.left
    return n.Call("__offset", [e])


def _array_arg_base(a):
    """Base variable of an argument that passes storage by address."""
    if isinstance(a, n.Id):
        return a.name
    if isinstance(a, n.Unary) and a.op == "&":
        t = a.operand
        if isinstance(t, n.Id):
            return t.name
        if isinstance(t, n.ArrayRef):
            return t.base
        return None
    if isinstance(a, n.ArrayRef):
        return a.base
    if isinstance(a, n.Binary) and a.op in ("+", "-"):
        return _pointer_base(a)
    return None


def collect_accesses(loop: n.For, summaries=None, pure_functions=DEFAULT_PURE, arrays=None) -> list:
    """One descriptor per syntactic access in ``loop``'s body.

    ``summaries`` maps callee names to side-effect summaries; calls without one
    are modeled as unknown unless the callee is in ``pure_functions``.
    ``arrays`` names array-typed variables, so that passing one to a call is not
    mistaken for a scalar read.
    """
    c = _Collector(loop, summaries, set(pure_functions), arrays)
    indices = {c.index} if c.index else set()
    c.stmt(loop.body, indices, (), False)
    return c.out


def array_arg_base(a):
    return _array_arg_base(a)
