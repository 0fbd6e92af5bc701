"""Interprocedural side-effect summaries over the unit's call graph."""

from __future__ import annotations

from dataclasses import dataclass, field

from ..frontend import nodes as n
from .accesses import DEFAULT_PURE, array_arg_base

IO_FUNCTIONS = frozenset(
    """printf fprintf sprintf snprintf puts fputs putchar fputc scanf fscanf sscanf getchar
    fopen fclose fread fwrite fflush perror exit abort system""".split()
)

# externals with known effects: name -> indices of pointer params written
KNOWN_EXTERNALS = {
    "memset": (0,),
    "memcpy": (0,),
    "malloc": (),
    "calloc": (),
    "free": (),
}

_RANK = {"pure": 0, "writes_params": 1, "writes_globals": 2, "io": 3, "unknown": 4}


@dataclass(frozen=True)
class SideEffectSummary:
    function: str
    classification: str  # pure | writes_params | writes_globals | io | unknown
    params: frozenset = frozenset()  # indices of written pointer/array params
    globals: frozenset = frozenset()  # names of written globals/statics
    global_reads: frozenset = frozenset()

    @property
    def blocks_parallelization(self):
        return self.classification in ("io", "unknown")


def parse_config(text: str) -> dict:
    """Parse ``key = value`` lines; ``#`` starts a comment."""
    out = {}
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"malformed config line: {raw!r}")
        key, value = line.split("=", 1)
        out[key.strip()] = value.strip()
    return out


def pure_functions_from_config(text: str, base=DEFAULT_PURE) -> frozenset:
    cfg = parse_config(text)
    extra = [x.strip() for x in cfg.get("pure_functions", "").split(",") if x.strip()]
    return frozenset(base) | frozenset(extra)


@dataclass
class CallGraph:
    unit: n.TranslationUnit
    pure_functions: frozenset = DEFAULT_PURE
    defs: dict = field(default_factory=dict)
    edges: dict = field(default_factory=dict)

    def __post_init__(self):
        for fn in self.unit.functions():
            self.defs[fn.name] = fn
            self.edges[fn.name] = sorted({c.func for c in fn.body.walk() if isinstance(c, n.Call)})
        self._memo = {}

    def callees(self, name):
        return self.edges.get(name, [])

    def reachable(self, name):
        seen, stack = set(), list(self.callees(name))
        while stack:
            f = stack.pop()
            if f in seen:
                continue
            seen.add(f)
            stack.extend(self.callees(f))
        return seen

    def recursive(self, name):
        return name in self.reachable(name)

    def summary(self, name) -> SideEffectSummary:
        if name in self._memo:
            return self._memo[name]
        s = self._summarize(name, ())
        self._memo[name] = s
        return s

    def summaries(self):
        out = {}
        names = set(self.defs)
        for fn in self.defs.values():
            names.update(self.callees(fn.name))
        for f in sorted(names):
            out[f] = self.summary(f)
        return out

    def _summarize(self, name, stack):
        if name in stack:
            return SideEffectSummary(name, "unknown")
        if name in self._memo:
            return self._memo[name]
        fn = self.defs.get(name)
        if fn is None:
            if name in IO_FUNCTIONS:
                return SideEffectSummary(name, "io")
            if name in self.pure_functions:
                return SideEffectSummary(name, "pure")
            if name in KNOWN_EXTERNALS:
                ps = frozenset(KNOWN_EXTERNALS[name])
                return SideEffectSummary(name, "writes_params" if ps else "pure", ps)
            return SideEffectSummary(name, "unknown")
        return _analyze(fn, self, stack + (name,))


def build_callgraph(unit: n.TranslationUnit, pure_functions=DEFAULT_PURE) -> CallGraph:
    return CallGraph(unit, frozenset(pure_functions))


def _analyze(fn, cg, stack):
    params = {p.name: k for k, p in enumerate(fn.params)}
    array_params = {p.name for p in fn.params if p.is_array}
    local = set()
    statics = set()
    for x in fn.body.walk():
        if isinstance(x, n.DeclStmt):
            for d in x.decls:
                (statics if d.storage == "static" else local).add(d.name)
    scalar_params = set(params) - array_params
    written_params, written_globals, reads = set(), set(), set()
    rank = 0

    def nonlocal_name(name):
        return name not in local and name not in params

    def note_write(base):
        nonlocal rank
        if base is None:
            rank = max(rank, _RANK["unknown"])
        elif base in array_params:
            written_params.add(params[base])
        elif base in scalar_params or (base in local and base not in statics):
            pass
        else:
            written_globals.add(base)

    def target_base(t):
        if isinstance(t, n.Id):
            return t.name
        if isinstance(t, n.ArrayRef):
            return t.base
        if isinstance(t, n.Unary) and t.op == "*":
            b = array_arg_base(t.operand)
            if b is not None and b in local:
                return None  # write through a local pointer: alias unknown
            return b
        return None

    for x in fn.body.walk():
        if isinstance(x, n.Id) and nonlocal_name(x.name):
            reads.add(x.name)
        elif isinstance(x, n.ArrayRef) and nonlocal_name(x.base):
            reads.add(x.base)
        if isinstance(x, n.Assign):
            note_write(target_base(x.target))
        elif isinstance(x, (n.Unary, n.Postfix)) and x.op in ("++", "--"):
            note_write(target_base(x.operand))
        elif isinstance(x, n.Call):
            callee = cg._summarize(x.func, stack)
            rank = max(rank, _RANK[callee.classification] if callee.classification in ("io", "unknown") else 0)
            for k in callee.params:
                if k < len(x.args):
                    b = array_arg_base(x.args[k])
                    if b is None or (b in local and _is_local_pointer(fn, b)):
                        rank = max(rank, _RANK["unknown"])
                    else:
                        note_write(b)
            for g in callee.globals:
                written_globals.add(g)
            reads.update(callee.global_reads)
    # static locals are persistent state, reported under a qualified name
    written_globals = {f"{fn.name}.{g}" if g in statics else g for g in written_globals}
    reads -= {f for f in cg.defs}
    reads = {r for r in reads if r not in statics}
    if rank >= _RANK["io"]:
        cls = "unknown" if rank == _RANK["unknown"] else "io"
    elif written_globals:
        cls = "writes_globals"
    elif written_params:
        cls = "writes_params"
    else:
        cls = "pure"
    return SideEffectSummary(fn.name, cls, frozenset(written_params), frozenset(written_globals), frozenset(reads))


def _is_local_pointer(fn, name):
    for x in fn.body.walk():
        if isinstance(x, n.DeclStmt):
            for d in x.decls:
                if d.name == name:
                    return d.pointer > 0 and not d.dims
    return False


def side_effects(fn: n.FunctionDef, callgraph: CallGraph) -> SideEffectSummary:
    """Transitive side-effect classification of ``fn``."""
    return callgraph.summary(fn.name if isinstance(fn, n.FunctionDef) else fn)
