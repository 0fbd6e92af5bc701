"""Recursive-descent parser for the C subset plus ``#pragma omp`` directives."""

from __future__ import annotations

from dataclasses import dataclass

from . import nodes as n
from .lexer import CSyntaxError, Token, UnsupportedConstruct, tokenize

ORIGINS = ("serial", "auto-parallelized", "manual")

_BASE_TYPE_WORDS = {"int", "double", "float", "char", "long", "short", "unsigned", "signed", "void"}
_QUALIFIERS = {"const", "volatile", "restrict", "register", "inline"}
_STORAGE = {"static", "extern"}
_UNSUPPORTED_KW = {
    "goto": "goto",
    "switch": "switch",
    "case": "switch",
    "struct": "struct",
    "union": "union",
    "enum": "enum",
    "do": "do-while",
}

ASSIGN_OPS = {"=", "+=", "-=", "*=", "/=", "%=", "<<=", ">>=", "&=", "|=", "^="}

BINARY_PREC = {
    "||": 1,
    "&&": 2,
    "|": 3,
    "^": 4,
    "&": 5,
    "==": 6, "!=": 6,
    "<": 7, ">": 7, "<=": 7, ">=": 7,
    "<<": 8, ">>": 8,
    "+": 9, "-": 9,
    "*": 10, "/": 10, "%": 10,
}

REDUCTION_OPS = ("+", "*", "min", "max")


@dataclass
class SourceUnit:
    path: str
    text: str
    origin: str = "serial"

    def __post_init__(self):
        if not self.text:
            raise ValueError("source text must be non-empty")
        if self.origin not in ORIGINS:
            raise ValueError(f"origin must be one of {ORIGINS}, got {self.origin!r}")


class Parser:
    def __init__(self, text, path="<input>"):
        self.path = path
        self.toks = tokenize(text, path)
        self.i = 0
        self.typedefs = set()
        self.depth = 0  # function nesting; 0 at file scope

    # -- token helpers ------------------------------------------------------

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def peek(self, k=1) -> Token:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def next(self) -> Token:
        t = self.toks[self.i]
        self.i += 1
        return t

    def at(self, text, kind=None):
        t = self.tok
        return t.text == text and t.kind in ((kind,) if kind else ("op", "kw", "id"))

    def accept(self, text):
        if self.at(text):
            return self.next()
        return None

    def expect(self, text):
        if not self.at(text):
            self.error(f"expected {text!r}, found {self.tok.text or 'end of input'!r}")
        return self.next()

    def error(self, message, tok=None):
        raise CSyntaxError((tok or self.tok).span, message)

    def unsupported(self, construct, tok=None):
        raise UnsupportedConstruct((tok or self.tok).span, construct)

    def check_unsupported(self):
        t = self.tok
        if t.kind == "kw" and t.text in _UNSUPPORTED_KW:
            self.unsupported(_UNSUPPORTED_KW[t.text])

    # -- types --------------------------------------------------------------

    def is_type_start(self, tok=None):
        t = tok or self.tok
        if t.kind == "kw":
            return t.text in _BASE_TYPE_WORDS or t.text in _QUALIFIERS or t.text in _STORAGE
        return t.kind == "id" and t.text in self.typedefs

    def parse_specifiers(self):
        storage = None
        words = []
        start = self.tok
        while True:
            t = self.tok
            if t.kind == "kw" and t.text in _STORAGE:
                storage = t.text
                self.next()
            elif t.kind == "kw" and t.text in ("struct", "union", "enum"):
                self.unsupported(t.text)
            elif t.kind == "kw" and (t.text in _BASE_TYPE_WORDS or t.text in _QUALIFIERS):
                if t.text not in ("register", "inline", "restrict", "volatile"):
                    words.append(t.text)
                self.next()
            elif t.kind == "id" and t.text in self.typedefs and not any(
                w in _BASE_TYPE_WORDS for w in words
            ):
                words.append(t.text)
                self.next()
            else:
                break
        if not [w for w in words if w != "const"]:
            self.error("expected a type name", start)
        return storage, " ".join(words)

    def parse_declarator(self, allow_abstract=False):
        pointer = 0
        while self.accept("*"):
            pointer += 1
            while self.tok.kind == "kw" and self.tok.text in ("const", "restrict", "volatile"):
                self.next()
        if self.at("("):
            self.unsupported("function pointer")
        name = None
        if self.tok.kind == "id":
            name = self.next().text
        elif not allow_abstract:
            self.error("expected a declarator name")
        dims = []
        while self.accept("["):
            if self.accept("]"):
                dims.append(None)
            else:
                dims.append(self.parse_expr())
                self.expect("]")
        return name, pointer, dims

    def parse_type_name(self):
        start = self.tok
        _, base = self.parse_specifiers()
        _, pointer, dims = self.parse_declarator(allow_abstract=True)
        return n.TypeName(base, pointer, dims, span=start.span)

    # -- top level ----------------------------------------------------------

    def parse_unit(self):
        items = []
        while self.tok.kind != "eof":
            items.extend(self.parse_external())
        return items

    def parse_external(self):
        t = self.tok
        if t.kind == "pp":
            self.next()
            return [n.PPLine(t.text, span=t.span)]
        if t.kind == "pragma":
            stmt = self.parse_pragma_statement()
            return [stmt]
        if self.at(";"):
            self.next()
            return []
        if self.at("typedef", "kw"):
            self.next()
            _, base = self.parse_specifiers()
            name, pointer, dims = self.parse_declarator()
            if dims:
                self.unsupported("array typedef", t)
            self.expect(";")
            self.typedefs.add(name)
            return [n.Typedef(name, base + " *" * pointer if pointer else base, span=t.span)]
        self.check_unsupported()
        storage, base = self.parse_specifiers()
        name, pointer, dims = self.parse_declarator()
        if self.at("("):
            return [self.parse_function(t, storage, base, pointer, name)]
        decls = self.parse_init_declarators(t, storage or "global", base, name, pointer, dims)
        return [n.DeclStmt(decls, span=t.span)]

    def parse_function(self, start, storage, base, pointer, name):
        self.expect("(")
        params = []
        variadic = False
        if self.at("void") and self.peek().text == ")":
            self.next()
        while not self.at(")"):
            if self.accept("..."):
                variadic = True
                break
            pt = self.tok
            _, pbase = self.parse_specifiers()
            pname, ppointer, pdims = self.parse_declarator(allow_abstract=True)
            params.append(
                n.VarDecl(pname or f"_arg{len(params)}", pbase, "param", ppointer, pdims, span=pt.span)
            )
            if not self.accept(","):
                break
        self.expect(")")
        ret = base + (" " + "*" * pointer if pointer else "")
        fstorage = "static" if storage == "static" else "global"
        if self.accept(";"):
            return n.FunctionDef(name, ret, params, None, fstorage, variadic, span=start.span)
        self.depth += 1
        body = self.parse_compound()
        self.depth -= 1
        return n.FunctionDef(name, ret, params, body, fstorage, variadic, span=start.span)

    def parse_init_declarators(self, start, storage, base, name, pointer, dims):
        decls = []
        while True:
            init = None
            if self.accept("="):
                init = self.parse_initializer()
            decls.append(n.VarDecl(name, base, storage, pointer, dims, init, span=start.span))
            if not self.accept(","):
                break
            name, pointer, dims = self.parse_declarator()
        self.expect(";")
        return decls

    def parse_initializer(self):
        if self.at("{"):
            t = self.next()
            items = []
            while not self.at("}"):
                items.append(self.parse_initializer())
                if not self.accept(","):
                    break
            self.expect("}")
            return n.InitList(items, span=t.span)
        return self.parse_assign()

    # -- statements ---------------------------------------------------------

    def parse_compound(self):
        t = self.expect("{")
        items = []
        while not self.at("}"):
            if self.tok.kind == "eof":
                self.error("unexpected end of input inside block")
            items.append(self.parse_statement())
        self.expect("}")
        return n.Compound(items, span=t.span)

    def parse_statement(self):
        t = self.tok
        if t.kind == "pragma":
            return self.parse_pragma_statement()
        if t.kind == "pp":
            self.unsupported("preprocessor directive inside a function")
        self.check_unsupported()
        if self.at("{"):
            return self.parse_compound()
        if self.at(";"):
            self.next()
            return n.Empty(span=t.span)
        if t.kind == "kw":
            if t.text == "for":
                return self.parse_for()
            if t.text == "if":
                self.next()
                self.expect("(")
                cond = self.parse_expr()
                self.expect(")")
                then = self.parse_statement()
                orelse = None
                if self.accept("else"):
                    orelse = self.parse_statement()
                return n.If(cond, then, orelse, span=t.span)
            if t.text == "while":
                self.next()
                self.expect("(")
                cond = self.parse_expr()
                self.expect(")")
                return n.While(cond, self.parse_statement(), span=t.span)
            if t.text == "return":
                self.next()
                value = None if self.at(";") else self.parse_expr()
                self.expect(";")
                return n.Return(value, span=t.span)
            if t.text == "break":
                self.next()
                self.expect(";")
                return n.Break(span=t.span)
            if t.text == "continue":
                self.next()
                self.expect(";")
                return n.Continue(span=t.span)
            if t.text == "typedef":
                self.unsupported("local typedef")
        if self.is_type_start():
            return self.parse_local_decl()
        expr = self.parse_expr()
        self.expect(";")
        return n.ExprStmt(expr, span=t.span)

    def parse_local_decl(self):
        t = self.tok
        storage, base = self.parse_specifiers()
        name, pointer, dims = self.parse_declarator()
        if self.at("("):
            self.unsupported("nested function declaration")
        decls = self.parse_init_declarators(t, storage or "local", base, name, pointer, dims)
        return n.DeclStmt(decls, span=t.span)

    def parse_for(self):
        t = self.expect("for")
        self.expect("(")
        init = None
        if self.is_type_start():
            s = self.tok
            storage, base = self.parse_specifiers()
            name, pointer, dims = self.parse_declarator()
            init = n.DeclStmt(
                self.parse_init_declarators(s, storage or "local", base, name, pointer, dims), span=s.span
            )
        else:
            if not self.at(";"):
                init = self.parse_expr()
            self.expect(";")
        cond = None if self.at(";") else self.parse_expr()
        self.expect(";")
        step = None if self.at(")") else self.parse_expr()
        self.expect(")")
        body = self.parse_statement()
        return n.For(init, cond, step, body, span=t.span)

    # -- pragmas ------------------------------------------------------------

    def parse_pragma_statement(self):
        t = self.next()
        directive = parse_directive(t.text, t.span, self.typedefs)
        if directive.kind in ("barrier", "threadprivate"):
            return n.OmpStmt(omp=directive, span=t.span)
        if self.depth == 0:
            raise CSyntaxError(t.span, f"'omp {directive.kind}' is not allowed at file scope")
        stmt = self.parse_statement()
        if stmt.omp is not None or isinstance(stmt, n.OmpStmt):
            stmt = n.Compound([stmt], span=stmt.span)
        if directive.kind in n.OmpDirective.LOOP_KINDS and not isinstance(stmt, n.For):
            raise CSyntaxError(t.span, f"'omp {directive.kind.replace('_', ' ')}' must precede a for loop")
        stmt.omp = directive
        return stmt

    # -- expressions --------------------------------------------------------

    def parse_expr(self):
        e = self.parse_assign()
        if self.at(","):
            self.unsupported("comma operator")
        return e

    def parse_assign(self):
        t = self.tok
        lhs = self.parse_conditional()
        if self.tok.kind == "op" and self.tok.text in ASSIGN_OPS:
            op = self.next().text
            if not isinstance(lhs, (n.Id, n.ArrayRef)) and not (
                isinstance(lhs, n.Unary) and lhs.op == "*"
            ):
                self.error("left-hand side of assignment is not assignable", t)
            rhs = self.parse_assign()
            return n.Assign(op, lhs, rhs, span=t.span)
        return lhs

    def parse_conditional(self):
        t = self.tok
        test = self.parse_binary(1)
        if self.accept("?"):
            then = self.parse_expr()
            self.expect(":")
            orelse = self.parse_conditional()
            return n.Cond(test, then, orelse, span=t.span)
        return test

    def parse_binary(self, min_prec):
        t = self.tok
        left = self.parse_unary()
        while True:
            op = self.tok
            prec = BINARY_PREC.get(op.text) if op.kind == "op" else None
            if prec is None or prec < min_prec:
                return left
            self.next()
            right = self.parse_binary(prec + 1)
            left = n.Binary(op.text, left, right, span=t.span)

    def parse_unary(self):
        t = self.tok
        if t.kind == "op" and t.text in ("-", "+", "!", "~", "*", "&", "++", "--"):
            self.next()
            return n.Unary(t.text, self.parse_unary(), span=t.span)
        if self.at("sizeof", "kw"):
            self.next()
            if self.at("(") and self.is_type_start(self.peek()):
                self.next()
                tn = self.parse_type_name()
                self.expect(")")
                return n.SizeOf(tn, span=t.span)
            return n.SizeOf(self.parse_unary(), span=t.span)
        if self.at("(") and self.is_type_start(self.peek()):
            self.next()
            tn = self.parse_type_name()
            self.expect(")")
            return n.Cast(tn, self.parse_unary(), span=t.span)
        return self.parse_postfix()

    def parse_postfix(self):
        t = self.tok
        e = self.parse_primary()
        while True:
            if self.at("["):
                self.next()
                sub = self.parse_expr()
                self.expect("]")
                if isinstance(e, n.Id):
                    e = n.ArrayRef(e.name, [sub], span=e.span)
                elif isinstance(e, n.ArrayRef):
                    e = n.ArrayRef(e.base, e.subscripts + [sub], span=e.span)
                else:
                    self.unsupported("subscript of a non-name expression", t)
            elif self.at("("):
                if not isinstance(e, n.Id):
                    self.unsupported("call through an expression", t)
                self.next()
                args = []
                while not self.at(")"):
                    args.append(self.parse_assign())
                    if not self.accept(","):
                        break
                self.expect(")")
                e = n.Call(e.name, args, span=e.span)
            elif self.tok.kind == "op" and self.tok.text in ("++", "--"):
                e = n.Postfix(self.next().text, e, span=t.span)
            elif self.tok.kind == "op" and self.tok.text in (".", "->"):
                self.unsupported("struct member access")
            else:
                return e

    def parse_primary(self):
        t = self.tok
        if t.kind == "id":
            self.next()
            return n.Id(t.text, span=t.span)
        if t.kind in ("int", "float", "char"):
            self.next()
            return n.Const(t.text, t.kind, span=t.span)
        if t.kind == "str":
            self.next()
            text = t.text
            while self.tok.kind == "str":  # adjacent literal concatenation
                text = text[:-1] + self.next().text[1:]
            return n.Const(text, "str", span=t.span)
        if self.accept("("):
            e = self.parse_expr()
            self.expect(")")
            return e
        self.check_unsupported()
        self.error(f"unexpected token {t.text or 'end of input'!r}")


# --------------------------------------------------------------------------
# directive parsing


def parse_directive(text, span=None, typedefs=()):
    """Parse the text following ``#pragma`` into an :class:`OmpDirective`."""
    toks = tokenize(text, span.file if span else "<pragma>")
    # relocate token spans onto the pragma line
    p = Parser.__new__(Parser)
    p.path = span.file if span else "<pragma>"
    p.toks = toks
    p.i = 0
    p.typedefs = set(typedefs)
    p.depth = 1

    def err(msg):
        raise CSyntaxError(span, msg)

    if not p.at("omp"):
        raise UnsupportedConstruct(span, f"non-OpenMP pragma '{text}'")
    p.next()
    word = p.tok.text
    name = None
    variables = []
    if word == "parallel":
        p.next()
        kind = "parallel"
        if p.at("for", "kw"):
            p.next()
            kind = "parallel_for"
    elif word == "for":
        p.next()
        kind = "for"
    elif word in ("single", "atomic", "barrier"):
        p.next()
        kind = word
        if kind == "atomic" and p.tok.kind == "id" and p.tok.text == "update":
            p.next()
    elif word == "critical":
        p.next()
        kind = "critical"
        if p.accept("("):
            name = p.next().text
            p.expect(")")
    elif word == "threadprivate":
        p.next()
        kind = "threadprivate"
        p.expect("(")
        variables = _name_list(p)
    else:
        raise UnsupportedConstruct(span, f"omp {word}")

    d = n.OmpDirective(kind, name, variables=variables, span=span)
    while p.tok.kind != "eof":
        p.accept(",")
        if p.tok.kind == "eof":
            break
        clause = p.next().text
        if clause in ("private", "firstprivate", "lastprivate", "shared"):
            p.expect("(")
            getattr(d, clause).extend(_name_list(p))
        elif clause == "reduction":
            p.expect("(")
            op = p.next().text
            if op not in REDUCTION_OPS:
                raise UnsupportedConstruct(span, f"reduction operator '{op}'")
            p.expect(":")
            d.reductions.append((op, _name_list(p)))
        elif clause == "schedule":
            p.expect("(")
            skind = p.next().text
            if skind not in ("static", "dynamic", "guided"):
                raise UnsupportedConstruct(span, f"schedule kind '{skind}'")
            chunk = None
            if p.accept(","):
                chunk = p.parse_assign()
            p.expect(")")
            d.schedule = (skind, chunk)
        elif clause == "nowait":
            d.nowait = True
        elif clause == "if":
            p.expect("(")
            d.if_condition = p.parse_expr()
            p.expect(")")
        elif clause == "default":
            p.expect("(")
            d.default = p.next().text
            p.expect(")")
        else:
            raise UnsupportedConstruct(span, f"omp clause '{clause}'")
    validate_directive(d, err)
    return d


def _name_list(p):
    names = []
    while True:
        if p.tok.kind != "id":
            raise CSyntaxError(p.tok.span, "expected a variable name in clause")
        names.append(p.next().text)
        if not p.accept(","):
            break
    p.expect(")")
    return names


def validate_directive(d, err=None):
    def fail(msg):
        if err:
            err(msg)
        raise CSyntaxError(d.span, msg)

    if d.nowait and d.kind not in n.OmpDirective.WORKSHARING:
        fail(f"nowait is not allowed on 'omp {d.kind}'")
    seen = {}
    for clause in ("private", "firstprivate", "lastprivate", "shared"):
        for v in getattr(d, clause):
            if v in seen:
                fail(f"variable '{v}' appears in both {seen[v]} and {clause}")
            seen[v] = clause
    for op, vs in d.reductions:
        if op not in REDUCTION_OPS:
            fail(f"reduction operator '{op}' not supported")
        for v in vs:
            if v in seen:
                fail(f"variable '{v}' appears in both {seen[v]} and reduction")
            seen[v] = "reduction"


def _check_threadprivate(unit):
    globals_ = {}
    for item in unit.items:
        if isinstance(item, n.DeclStmt):
            for dcl in item.decls:
                globals_[dcl.name] = dcl
        elif isinstance(item, n.OmpStmt) and item.omp.kind == "threadprivate":
            for v in item.omp.variables:
                if v not in globals_:
                    raise CSyntaxError(item.span, f"threadprivate variable '{v}' must be static or global")
    for fn in unit.functions():
        statics = {
            d.name
            for node in fn.body.walk()
            if isinstance(node, n.DeclStmt)
            for d in node.decls
            if d.storage == "static"
        }
        for node in fn.body.walk():
            if isinstance(node, n.OmpStmt) and node.omp.kind == "threadprivate":
                for v in node.omp.variables:
                    if v not in statics and v not in globals_:
                        raise CSyntaxError(node.span, f"threadprivate variable '{v}' must be static or global")


def parse(unit, path=None) -> n.TranslationUnit:
    """Parse a :class:`SourceUnit` (or raw text) into a translation unit."""
    if isinstance(unit, str):
        unit = SourceUnit(path or "<input>", unit)
    p = Parser(unit.text, unit.path)
    tu = n.TranslationUnit(p.parse_unit(), path=unit.path, origin=unit.origin, span=n.Span(1, 1, file=unit.path))
    _check_threadprivate(tu)
    return tu


def parse_expression(text):
    p = Parser(text)
    p.depth = 1
    e = p.parse_expr()
    if p.tok.kind != "eof":
        p.error("trailing input after expression")
    return e


def parse_statement(text, typedefs=()):
    p = Parser(text)
    p.depth = 1
    p.typedefs = set(typedefs)
    s = p.parse_statement()
    if p.tok.kind != "eof":
        p.error("trailing input after statement")
    return s
