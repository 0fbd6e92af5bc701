"""A small interpreter for the C subset, used by the brute-force oracles.

Statements execute as generators that yield after every simple statement, so
several simulated threads can be interleaved step by step.  Every scalar and
array-element access can be reported to a trace callback.
"""

from __future__ import annotations

import math

from ..frontend import nodes as n
from ..frontend.loops import loop_header


class Uninitialized(Exception):
    """Raised when a simulated private copy is read before being written."""


class ReturnSignal(Exception):
    def __init__(self, value):
        self.value = value


class BreakSignal(Exception):
    pass


class ContinueSignal(Exception):
    pass


UNINIT = object()

_INT_TYPES = ("int", "long", "short", "char", "unsigned", "signed", "size_t")


def is_int_type(t: str) -> bool:
    words = t.replace("const", "").split()
    return bool(words) and all(w in _INT_TYPES for w in words)


class CArray:
    """Row-major array storage; ``offset`` supports ``p + k`` pointer views."""

    def __init__(self, shape, integer=False, data=None, offset=0):
        self.shape = tuple(shape)
        self.integer = integer
        size = 1
        for d in self.shape:
            size *= d
        self.data = data if data is not None else [0 if integer else 0.0] * size
        self.offset = offset

    def flat(self, idx):
        if len(idx) > len(self.shape):
            raise IndexError(f"too many subscripts for shape {self.shape}")
        pos = 0
        stride = 1
        strides = []
        for d in reversed(self.shape):
            strides.append(stride)
            stride *= d
        strides.reverse()
        for k, i in enumerate(idx):
            pos += i * strides[k]
        pos += self.offset
        if not 0 <= pos < len(self.data):
            raise IndexError(f"index {idx} out of bounds")
        return pos

    def row(self, idx):
        """Sub-array view for a partial subscript list."""
        pos = self.flat(tuple(idx) + (0,) * (len(self.shape) - len(idx)))
        return CArray(self.shape[len(idx):], self.integer, self.data, pos)

    def shifted(self, k):
        return CArray(self.shape, self.integer, self.data, self.offset + k)

    def copy(self):
        return CArray(self.shape, self.integer, list(self.data), self.offset)

    def tolist(self):
        return list(self.data)

    def __eq__(self, other):
        return isinstance(other, CArray) and self.data == other.data and self.shape == other.shape

    def __repr__(self):
        return f"CArray({self.shape}, {self.data})"


_MATH = {
    "sqrt": math.sqrt, "fabs": abs, "abs": abs, "labs": abs, "exp": math.exp, "log": math.log,
    "sin": math.sin, "cos": math.cos, "tan": math.tan, "pow": math.pow, "floor": math.floor,
    "ceil": math.ceil, "fmax": max, "fmin": min, "atan": math.atan, "log10": math.log10,
}


class Frame:
    def __init__(self, values=None, types=None):
        self.values = dict(values or {})
        self.types = dict(types or {})


class Machine:
    """Executes statements against a chain of frames (innermost first)."""

    def __init__(self, frames, functions=None, trace=None, output=None):
        self.frames = frames
        self.functions = functions or {}
        self.trace = trace
        self.output = output if output is not None else []

    # storage --------------------------------------------------------------

    def _frame_of(self, name):
        for f in self.frames:
            if name in f.values:
                return f
        raise NameError(f"undefined variable {name!r}")

    def load(self, name):
        f = self._frame_of(name)
        v = f.values[name]
        if v is UNINIT:
            raise Uninitialized(name)
        if self.trace and not isinstance(v, CArray):
            self.trace(name, (), "read")
        return v

    def store(self, name, value):
        f = self._frame_of(name)
        t = f.types.get(name, "double")
        f.values[name] = _convert(value, t)
        if self.trace:
            self.trace(name, (), "write")

    def declare(self, d: n.VarDecl, value=UNINIT):
        f = self.frames[0]
        if d.dims:
            shape = [self.eval(x) for x in d.dims]
            arr = CArray(shape, is_int_type(d.type))
            if isinstance(d.init, n.InitList):
                for k, item in enumerate(_flatten(d.init)):
                    arr.data[k] = _convert(self.eval(item), d.type)
            f.values[d.name] = arr
        else:
            f.values[d.name] = value
        f.types[d.name] = d.type if not d.pointer else "pointer"

    # expressions ----------------------------------------------------------

    def element(self, e):
        arr = self.eval(n.Id(e.base)) if not isinstance(e, CArray) else e
        idx = tuple(int(self.eval(s)) for s in e.subscripts)
        if not isinstance(arr, CArray):
            raise TypeError(f"{e.base} is not an array")
        if len(idx) < len(arr.shape) and len(arr.shape) > 1:
            return arr, idx, True
        return arr, idx, False

    def eval(self, e):
        if isinstance(e, n.Const):
            if e.kind in ("int", "float"):
                return e.value
            if e.kind == "char":
                return ord(e.text[1:-1].encode().decode("unicode_escape"))
            return e.text
        if isinstance(e, n.Id):
            f = self._frame_of(e.name)
            v = f.values[e.name]
            if isinstance(v, CArray):
                return v
            return self.load(e.name)
        if isinstance(e, n.ArrayRef):
            arr, idx, partial = self.element(e)
            if partial:
                return arr.row(idx)
            pos = arr.flat(idx)
            if self.trace:
                self.trace(e.base, (pos,), "read")
            v = arr.data[pos]
            if v is UNINIT:
                raise Uninitialized(e.base)
            return v
        if isinstance(e, n.Binary):
            if e.op == "&&":
                return int(bool(self.eval(e.left)) and bool(self.eval(e.right)))
            if e.op == "||":
                return int(bool(self.eval(e.left)) or bool(self.eval(e.right)))
            return _binop(e.op, self.eval(e.left), self.eval(e.right))
        if isinstance(e, n.Unary):
            if e.op in ("++", "--"):
                old = self.eval(e.operand)
                new = old + (1 if e.op == "++" else -1)
                self.assign(e.operand, new)
                return self.eval(e.operand)
            if e.op == "*":
                ptr = self.eval(e.operand)
                return self._deref_load(ptr, e.operand)
            if e.op == "&":
                return self._address(e.operand)
            v = self.eval(e.operand)
            if e.op == "-":
                return -v
            if e.op == "+":
                return v
            if e.op == "!":
                return int(not v)
            if e.op == "~":
                return ~v
        if isinstance(e, n.Postfix):
            old = self.eval(e.operand)
            self.assign(e.operand, old + (1 if e.op == "++" else -1))
            return old
        if isinstance(e, n.Assign):
            if e.op == "=":
                value = self.eval(e.value)
            else:
                value = _binop(e.op[:-1], self.eval(e.target), self.eval(e.value))
            self.assign(e.target, value)
            return value
        if isinstance(e, n.Cond):
            return self.eval(e.then) if self.eval(e.test) else self.eval(e.orelse)
        if isinstance(e, n.Cast):
            v = self.eval(e.operand)
            if e.type.pointer:
                return v
            return _convert(v, e.type.base)
        if isinstance(e, n.Call):
            return self.call(e)
        if isinstance(e, n.SizeOf):
            return 8
        raise TypeError(f"cannot evaluate {type(e).__name__}")

    def _address(self, t):
        if isinstance(t, n.ArrayRef):
            arr, idx, _ = self.element(t)
            return CArray((len(arr.data),), arr.integer, arr.data, arr.flat(idx))
        if isinstance(t, n.Id):
            return _ScalarRef(self, t.name)
        raise TypeError("unsupported address-of operand")

    def _deref_load(self, ptr, node):
        if isinstance(ptr, _ScalarRef):
            return ptr.get()
        if isinstance(ptr, CArray):
            if self.trace:
                self.trace(_base_name(node), (ptr.offset,), "read")
            return ptr.data[ptr.flat((0,))]
        raise TypeError("dereference of a non-pointer")

    def assign(self, target, value):
        if isinstance(target, n.Id):
            self.store(target.name, value)
        elif isinstance(target, n.ArrayRef):
            arr, idx, _ = self.element(target)
            pos = arr.flat(idx)
            arr.data[pos] = int(value) if arr.integer else float(value)
            if self.trace:
                self.trace(target.base, (pos,), "write")
        elif isinstance(target, n.Unary) and target.op == "*":
            ptr = self.eval(target.operand)
            if isinstance(ptr, _ScalarRef):
                ptr.set(value)
            else:
                pos = ptr.flat((0,))
                ptr.data[pos] = int(value) if ptr.integer else float(value)
                if self.trace:
                    self.trace(_base_name(target.operand), (pos,), "write")
        else:
            raise TypeError("unsupported assignment target")

    def call(self, e):
        if e.func in _MATH:
            args = [self.eval(a) for a in e.args]
            return float(_MATH[e.func](*args)) if e.func not in ("abs", "labs") else _MATH[e.func](*args)
        if e.func == "printf":
            args = [self.eval(a) for a in e.args]
            self.output.append(_c_format(args[0], args[1:]))
            return 0
        fn = self.functions.get(e.func)
        if fn is None:
            raise NameError(f"call to unknown function {e.func!r}")
        frame = Frame()
        for p, a in zip(fn.params, e.args):
            v = self.eval(a)
            frame.values[p.name] = v
            frame.types[p.name] = "pointer" if p.is_array else p.type
        inner = Machine([frame] + self.frames[-1:], self.functions, self.trace, self.output)
        try:
            for _ in inner.run(fn.body):
                pass
        except ReturnSignal as r:
            return _convert(r.value, fn.ret_type) if r.value is not None else None
        return None

    # statements -----------------------------------------------------------

    def run(self, s):
        """Generator executing ``s``; yields after each simple statement."""
        if isinstance(s, n.ExprStmt):
            self.eval(s.expr)
            yield
        elif isinstance(s, n.DeclStmt):
            for d in s.decls:
                if d.init is not None and not isinstance(d.init, n.InitList):
                    v = self.eval(d.init)
                    self.declare(d, UNINIT)
                    self.store(d.name, v) if not d.dims else None
                else:
                    self.declare(d)
            yield
        elif isinstance(s, n.Compound):
            self.frames.insert(0, Frame())
            try:
                for item in s.items:
                    yield from self.run(item)
            finally:
                self.frames.pop(0)
        elif isinstance(s, n.If):
            c = self.eval(s.cond)
            yield
            if c:
                yield from self.run(s.then)
            elif s.orelse is not None:
                yield from self.run(s.orelse)
        elif isinstance(s, n.For):
            self.frames.insert(0, Frame())
            try:
                if isinstance(s.init, n.DeclStmt):
                    yield from self.run(s.init)
                elif s.init is not None:
                    self.eval(s.init)
                while s.cond is None or self.eval(s.cond):
                    try:
                        yield from self.run(s.body)
                    except BreakSignal:
                        break
                    except ContinueSignal:
                        pass
                    if s.step is not None:
                        self.eval(s.step)
                    yield
            finally:
                self.frames.pop(0)
        elif isinstance(s, n.While):
            while self.eval(s.cond):
                try:
                    yield from self.run(s.body)
                except BreakSignal:
                    break
                except ContinueSignal:
                    pass
                yield
        elif isinstance(s, n.Return):
            raise ReturnSignal(self.eval(s.value) if s.value is not None else None)
        elif isinstance(s, n.Break):
            raise BreakSignal()
        elif isinstance(s, n.Continue):
            raise ContinueSignal()
        elif isinstance(s, (n.Empty, n.OmpStmt)):
            return
        else:
            raise TypeError(f"cannot execute {type(s).__name__}")

    def execute(self, s):
        for _ in self.run(s):
            pass


class _ScalarRef:
    def __init__(self, machine, name):
        self.frame = machine._frame_of(name)
        self.name = name
        self.machine = machine

    def get(self):
        v = self.frame.values[self.name]
        if v is UNINIT:
            raise Uninitialized(self.name)
        return v

    def set(self, value):
        self.frame.values[self.name] = _convert(value, self.frame.types.get(self.name, "double"))


def _base_name(e):
    if isinstance(e, n.Id):
        return e.name
    if isinstance(e, n.Binary):
        return _base_name(e.left) or _base_name(e.right)
    return None


def _flatten(init):
    for item in init.items:
        if isinstance(item, n.InitList):
            yield from _flatten(item)
        else:
            yield item


def _convert(v, t):
    if isinstance(v, (CArray, _ScalarRef)) or t == "pointer":
        return v
    if is_int_type(t):
        return int(v)
    if t.replace("const", "").strip() in ("double", "float"):
        return float(v)
    return v


def _binop(op, a, b):
    if op == "+":
        return a + b
    if op == "-":
        return a - b
    if op == "*":
        return a * b
    if op == "/":
        if isinstance(a, int) and isinstance(b, int):
            q = abs(a) // abs(b)
            return q if (a >= 0) == (b >= 0) else -q
        return a / b
    if op == "%":
        r = abs(a) % abs(b)
        return r if a >= 0 else -r
    if op == "<":
        return int(a < b)
    if op == ">":
        return int(a > b)
    if op == "<=":
        return int(a <= b)
    if op == ">=":
        return int(a >= b)
    if op == "==":
        return int(a == b)
    if op == "!=":
        return int(a != b)
    if op == "&":
        return a & b
    if op == "|":
        return a | b
    if op == "^":
        return a ^ b
    if op == "<<":
        return a << b
    if op == ">>":
        return a >> b
    raise ValueError(f"unknown operator {op}")


def _c_format(fmt, args):
    text = fmt[1:-1].encode().decode("unicode_escape") if fmt.startswith('"') else fmt
    py = text.replace("%lf", "%f").replace("%ld", "%d")
    try:
        return py % tuple(args)
    except (TypeError, ValueError):
        return text


def loop_values(loop: n.For, machine: Machine):
    """Concrete index values of a canonical loop under ``machine``'s state."""
    h = loop_header(loop)
    lo, hi = machine.eval(h.lower), machine.eval(h.upper)
    return h.index, list(range(int(lo), int(hi), h.stride_value))


def run_iteration(loop: n.For, machine: Machine, index, value):
    """Generator running one iteration of ``loop``'s body with the index bound."""
    machine.frames.insert(0, Frame({index: value}, {index: "int"}))
    try:
        try:
            yield from machine.run(loop.body)
        except ContinueSignal:
            pass
    finally:
        machine.frames.pop(0)
