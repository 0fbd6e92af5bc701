"""Lowering of array reductions into partial buffers plus a combine step."""

from __future__ import annotations

import copy

from ..analysis.interp import is_int_type
from ..analysis.reductions import ReductionCandidate
from ..frontend import nodes as n
from ..frontend.parser import parse_statement
from ..frontend.printer import format_expr
from .common import Context, NotAnArrayReduction, TransformError, names_in, replace_node

STRATEGIES = ("atomic", "critical")
_PLACEHOLDER = "__omppat_reduction_loop__"


def _identity(op, ctype):
    integral = is_int_type(ctype)
    if op == "+":
        return "0" if integral else "0.0", None
    if op == "*":
        return "1" if integral else "1.0", None
    long_ = "long" in ctype.split()
    if integral:
        limit = ("LONG_" if long_ else "INT_") + ("MIN" if op == "max" else "MAX")
        return limit, "limits.h"
    limit = ("-" if op == "max" else "") + ("FLT_MAX" if "float" in ctype.split() else "DBL_MAX")
    return limit, "float.h"


def _combine(op, dst, src):
    if op == "+":
        return f"{dst} += {src};"
    if op == "*":
        return f"{dst} *= {src};"
    cmp = ">" if op == "max" else "<"
    return f"if ({src} {cmp} {dst}) {dst} = {src};"


def _nest(indices, dims, body):
    text = body
    for idx, dim in reversed(list(zip(indices, dims))):
        text = f"for ({idx} = 0; {idx} < {dim}; {idx}++) {{ {text} }}"
    return text


class _Fresh:
    def __init__(self, taken):
        self.taken = set(taken)

    def __call__(self, base):
        name, k = base, 1
        while name in self.taken:
            name = f"{base}{k}"
            k += 1
        self.taken.add(name)
        return name


def _retarget(loop, var, new, flat_dims=None):
    """Point every access of ``var`` in ``loop`` at ``new``; with ``flat_dims``
    multi-dimensional subscripts are linearized for a flat buffer."""
    for x in loop.body.walk():
        if isinstance(x, n.ArrayRef) and x.base == var:
            x.base = new
            if flat_dims is not None and len(x.subscripts) > 1:
                text = format_expr(x.subscripts[0])
                for s, d in zip(x.subscripts[1:], flat_dims[1:]):
                    text = f"({text}) * {d} + ({format_expr(s)})"
                x.subscripts = [parse_statement(f"{text};").expr]


def lower_array_reduction(loop: n.For, candidate: ReductionCandidate, strategy: str = "atomic", ctx: Context = None, decl: n.VarDecl = None) -> n.Stmt:
    """Replace ``loop`` (carrying ``parallel for`` or ``for``) by a partial-buffer
    reduction on ``candidate.variable``.

    ``atomic`` keeps a thread-local array, runs the loop with ``nowait`` and
    folds each element back under ``omp atomic``.  ``critical`` allocates a
    per-thread buffer with malloc and folds the whole array in one critical
    section.  Returns the replacement statement (also spliced into ``ctx.unit``
    when a context is given).
    """
    if strategy not in STRATEGIES:
        raise ValueError(f"unknown reduction strategy {strategy!r}")
    if candidate is None or not candidate.is_array:
        raise NotAnArrayReduction(getattr(candidate, "variable", ""))
    if loop.omp is None or not loop.omp.is_loop:
        raise NotAnArrayReduction("loop is not parallelized")
    var, op = candidate.variable, candidate.op
    if strategy == "atomic" and op in ("min", "max"):
        raise TransformError(f"atomic cannot combine {op} reductions")
    fn = ctx.function_of(loop) if ctx is not None else None
    if decl is None and ctx is not None:
        decl = ctx.declaration(var, fn)
    if decl is None or not decl.dims or any(d is None for d in decl.dims) or decl.pointer:
        raise NotAnArrayReduction(f"{var} has no known extent")
    ctype = decl.type.replace("const ", "")
    dims = [format_expr(d) for d in decl.dims]
    fresh = _Fresh(names_in(ctx.unit) if ctx is not None else names_in(loop))
    indices = [fresh(f"{var}_r{k}") for k in range(len(dims))]
    ident, header = _identity(op, ctype)
    typedefs = {x.name for x in ctx.unit.items if isinstance(x, n.Typedef)} if ctx is not None else set()
    in_region = loop.omp.kind == "for"
    new_loop = copy.deepcopy(loop)
    d = new_loop.omp
    d.reductions = [(o, [v for v in vs if v != var]) for o, vs in d.reductions]
    d.reductions = [(o, vs) for o, vs in d.reductions if vs]
    region_clauses = None
    if not in_region:
        region_clauses = n.OmpDirective("parallel", if_condition=d.if_condition)
        d.if_condition = None
        d.kind = "for"
    idx_decl = f"int {', '.join(indices)};"
    elem = "".join(f"[{i}]" for i in indices)
    if strategy == "atomic":
        local = fresh(f"{var}_local")
        _retarget(new_loop, var, local)
        d.nowait = True
        combine = f"#pragma omp atomic\n{_combine(op, var + elem, local + elem)}"
        text = (
            f"{{ {ctype} {local}{''.join(f'[{x}]' for x in dims)}; {idx_decl} "
            f"{_nest(indices, dims, f'{local}{elem} = {ident};')} "
            f"{_PLACEHOLDER}(); "
            f"{_nest(indices, dims, chr(10) + combine + chr(10))} }}"
        )
    else:
        buf = fresh(f"{var}_reduce")
        _retarget(new_loop, var, buf, dims)
        size = " * ".join(f"({x})" for x in dims)
        flat = indices[0]
        for i, dd in zip(indices[1:], dims[1:]):
            flat = f"({flat}) * {dd} + {i}"
        d.nowait = False
        text = (
            f"{{ {ctype} *{buf} = ({ctype} *) malloc({size} * sizeof({ctype})); {idx_decl} "
            f"{_nest(indices, dims, f'{buf}[{flat}] = {ident};')} "
            f"{_PLACEHOLDER}(); "
            f"\n#pragma omp critical\n{{ {_nest(indices, dims, _combine(op, var + elem, f'{buf}[{flat}]'))} }} "
            f"free({buf}); }}"
        )
    block = parse_statement(text, typedefs)
    for k, it in enumerate(block.items):
        if isinstance(it, n.ExprStmt) and isinstance(it.expr, n.Call) and it.expr.func == _PLACEHOLDER:
            block.items[k] = new_loop
    if in_region:
        # the original loop ended in a barrier unless it had nowait
        if not loop.omp.nowait:
            block.items.append(n.OmpStmt(omp=n.OmpDirective("barrier")))
    else:
        block.omp = region_clauses
    if ctx is not None:
        replace_node(ctx.unit, loop, block)
        if strategy == "critical":
            ctx.ensure_include("stdlib.h")
        if header:
            ctx.ensure_include(header)
    return block


def array_reduction_targets(loop: n.For, ctx: Context) -> list:
    """Array variables named in the reduction clauses of ``loop``."""
    if loop.omp is None or not loop.omp.is_loop:
        return []
    fn = ctx.function_of(loop)
    arrays = ctx.arrays(fn)
    return [v for v in loop.omp.reduction_vars() if v in arrays]

