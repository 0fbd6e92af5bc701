"""Pretty-printer turning an AST back into compilable C text."""

from __future__ import annotations

from . import nodes as n
from .parser import BINARY_PREC, SourceUnit

_UNARY_PREC = 11
_POSTFIX_PREC = 12
_COND_PREC = 0.5

INDENT = "  "


def expr_prec(e):
    if isinstance(e, n.Assign):
        return 0
    if isinstance(e, n.Cond):
        return _COND_PREC
    if isinstance(e, n.Binary):
        return BINARY_PREC[e.op]
    if isinstance(e, (n.Unary, n.Cast, n.SizeOf)):
        return _UNARY_PREC
    if isinstance(e, (n.Postfix, n.Call, n.ArrayRef)):
        return _POSTFIX_PREC
    return 13


def format_expr(e, min_prec=0) -> str:
    text = _expr(e)
    if expr_prec(e) < min_prec:
        return f"({text})"
    return text


def _expr(e) -> str:
    if isinstance(e, n.Id):
        return e.name
    if isinstance(e, n.Const):
        return e.text
    if isinstance(e, n.ArrayRef):
        return e.base + "".join(f"[{format_expr(s)}]" for s in e.subscripts)
    if isinstance(e, n.Call):
        return f"{e.func}({', '.join(format_expr(a) for a in e.args)})"
    if isinstance(e, n.Binary):
        p = BINARY_PREC[e.op]
        return f"{format_expr(e.left, p)} {e.op} {format_expr(e.right, p + 1)}"
    if isinstance(e, n.Unary):
        inner = format_expr(e.operand, _UNARY_PREC)
        if inner[:1] in ("-", "+", "&", "*") and e.op[-1:] == inner[:1]:
            inner = " " + inner
        return e.op + inner
    if isinstance(e, n.Postfix):
        return format_expr(e.operand, _POSTFIX_PREC) + e.op
    if isinstance(e, n.Assign):
        return f"{format_expr(e.target, _POSTFIX_PREC)} {e.op} {format_expr(e.value, 0)}"
    if isinstance(e, n.Cond):
        return (
            f"{format_expr(e.test, 1)} ? {format_expr(e.then, 0)} : {format_expr(e.orelse, _COND_PREC)}"
        )
    if isinstance(e, n.Cast):
        return f"({format_type_name(e.type)}) {format_expr(e.operand, _UNARY_PREC)}"
    if isinstance(e, n.SizeOf):
        if isinstance(e.arg, n.TypeName):
            return f"sizeof({format_type_name(e.arg)})"
        return f"sizeof({format_expr(e.arg)})"
    if isinstance(e, n.InitList):
        return "{" + ", ".join(format_expr(i) for i in e.items) + "}"
    raise TypeError(f"cannot print expression {type(e).__name__}")


def format_type_name(t: n.TypeName) -> str:
    s = t.base
    if t.pointer:
        s += " " + "*" * t.pointer
    for d in t.dims:
        s += "[]" if d is None else f"[{format_expr(d)}]"
    return s


def format_directive(d: n.OmpDirective) -> str:
    head = {"parallel_for": "parallel for"}.get(d.kind, d.kind)
    parts = [f"#pragma omp {head}"]
    if d.kind == "critical" and d.name:
        parts[0] += f"({d.name})"
    if d.kind == "threadprivate":
        parts[0] += f"({', '.join(d.variables)})"
    if d.default:
        parts.append(f"default({d.default})")
    for clause in ("private", "firstprivate", "lastprivate", "shared"):
        vs = getattr(d, clause)
        if vs:
            parts.append(f"{clause}({', '.join(vs)})")
    for op, vs in d.reductions:
        parts.append(f"reduction({op}:{', '.join(vs)})")
    if d.schedule:
        kind, chunk = d.schedule
        parts.append(f"schedule({kind}" + (f", {format_expr(chunk)})" if chunk is not None else ")"))
    if d.if_condition is not None:
        parts.append(f"if({format_expr(d.if_condition)})")
    if d.nowait:
        parts.append("nowait")
    return " ".join(parts)


def _declarator(d: n.VarDecl) -> str:
    s = "*" * d.pointer + d.name
    for dim in d.dims:
        s += "[]" if dim is None else f"[{format_expr(dim)}]"
    if d.init is not None:
        s += " = " + format_expr(d.init)
    return s


def format_decls(decls, with_semicolon=True) -> str:
    first = decls[0]
    prefix = f"{first.storage} " if first.storage in ("static", "extern") else ""
    text = prefix + first.type + " " + ", ".join(_declarator(d) for d in decls)
    return text + (";" if with_semicolon else "")


def format_param(d: n.VarDecl) -> str:
    return d.type + " " + _declarator(d)


class _Printer:
    def __init__(self):
        self.lines = []

    def emit(self, level, text):
        self.lines.append(INDENT * level + text)

    def stmt(self, s, level):
        if s.omp is not None and not isinstance(s, n.OmpStmt):
            self.emit(level, format_directive(s.omp))
        if isinstance(s, n.Compound):
            self.emit(level, "{")
            for item in s.items:
                self.stmt(item, level + 1)
            self.emit(level, "}")
        elif isinstance(s, n.ExprStmt):
            self.emit(level, format_expr(s.expr) + ";")
        elif isinstance(s, n.DeclStmt):
            self.emit(level, format_decls(s.decls))
        elif isinstance(s, n.For):
            init = ""
            if isinstance(s.init, n.DeclStmt):
                init = format_decls(s.init.decls, with_semicolon=False)
            elif s.init is not None:
                init = format_expr(s.init)
            cond = format_expr(s.cond) if s.cond is not None else ""
            step = format_expr(s.step) if s.step is not None else ""
            self.emit(level, f"for ({init}; {cond}; {step})")
            self.body(s.body, level)
        elif isinstance(s, n.If):
            self.emit(level, f"if ({format_expr(s.cond)})")
            self.body(s.then, level)
            if s.orelse is not None:
                self.emit(level, "else")
                self.body(s.orelse, level)
        elif isinstance(s, n.While):
            self.emit(level, f"while ({format_expr(s.cond)})")
            self.body(s.body, level)
        elif isinstance(s, n.Return):
            self.emit(level, "return;" if s.value is None else f"return {format_expr(s.value)};")
        elif isinstance(s, n.Break):
            self.emit(level, "break;")
        elif isinstance(s, n.Continue):
            self.emit(level, "continue;")
        elif isinstance(s, n.Empty):
            self.emit(level, ";")
        elif isinstance(s, n.OmpStmt):
            self.emit(level, format_directive(s.omp))
        else:
            raise TypeError(f"cannot print statement {type(s).__name__}")

    def body(self, s, level):
        if isinstance(s, n.Compound) and s.omp is None:
            self.stmt(s, level)
        else:
            self.stmt(s, level + 1)

    def external(self, item):
        if isinstance(item, n.PPLine):
            self.lines.append(item.text)
        elif isinstance(item, n.Typedef):
            self.lines.append(f"typedef {item.type} {item.name};")
        elif isinstance(item, n.DeclStmt):
            self.lines.append(format_decls(item.decls))
        elif isinstance(item, n.OmpStmt):
            self.lines.append(format_directive(item.omp))
        elif isinstance(item, n.FunctionDef):
            params = ", ".join(format_param(p) for p in item.params)
            if item.variadic:
                params = params + ", ..." if params else "..."
            head = ("static " if item.storage == "static" else "") + f"{item.ret_type} {item.name}({params or 'void'})"
            if item.body is None:
                self.lines.append(head + ";")
            else:
                self.lines.append(head)
                self.stmt(item.body, 0)
                self.lines.append("")
        else:
            raise TypeError(f"cannot print {type(item).__name__}")


def to_text(node) -> str:
    p = _Printer()
    if isinstance(node, n.TranslationUnit):
        for item in node.items:
            p.external(item)
    elif isinstance(node, n.Stmt):
        p.stmt(node, 0)
    elif isinstance(node, n.Expr):
        return format_expr(node)
    else:
        p.external(node)
    return "\n".join(p.lines).rstrip() + "\n"


def print_unit(ast: n.TranslationUnit) -> SourceUnit:
    """Render ``ast`` as a :class:`SourceUnit` preserving path and origin."""
    return SourceUnit(ast.path, to_text(ast), ast.origin)
