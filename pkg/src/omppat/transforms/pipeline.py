"""Pass plans and the fixed-order rewrite driver."""

from __future__ import annotations

import copy
from dataclasses import dataclass, field
from typing import Optional

from ..analysis.accesses import DEFAULT_PURE
from ..analysis.inline import InlineRefused, inline_expand
from ..analysis.reductions import recognize_reductions
from ..costmodel import DEFAULT_THRESHOLD, imbalance_score, statement_workload
from ..frontend import nodes as n
from ..frontend.loops import top_level_loops
from .clauses import apply_schedule, conditional_parallelize
from .common import Context, NoParallelLoop, TransformError, in_region, parallel_constructs
from .parallelize import parallelize_loop
from .reduction import STRATEGIES, array_reduction_targets, lower_array_reduction
from .region import adjacent_runs, form_parallel_region, insert_nowait
from .threadprivate import DIRECTIONS, candidates, convert_threadprivate

PASS_ORDER = ("inline", "parallelize", "region", "reduction", "schedule", "condpar", "nowait", "threadprivate")
DEFAULT_PASSES = ("parallelize", "region", "reduction", "schedule", "condpar", "nowait")


class PlanError(ValueError):
    pass


@dataclass
class TransformPlan:
    passes: tuple = DEFAULT_PASSES
    reduction_strategy: str = "atomic"
    threshold: int = DEFAULT_THRESHOLD
    threadprivate_direction: str = "to_loop_private"
    schedule_kind: str = "dynamic"

    def __post_init__(self):
        unknown = [p for p in self.passes if p not in PASS_ORDER]
        if unknown:
            raise PlanError(f"unknown pass(es): {', '.join(unknown)}")
        # execution order is fixed whatever order the caller listed
        self.passes = tuple(p for p in PASS_ORDER if p in self.passes)
        if self.reduction_strategy not in STRATEGIES:
            raise PlanError(f"reduction strategy must be one of {STRATEGIES}")
        if self.threadprivate_direction not in DIRECTIONS:
            raise PlanError(f"threadprivate direction must be one of {DIRECTIONS}")
        if not isinstance(self.threshold, int) or self.threshold <= 0:
            raise PlanError("threshold must be a positive integer")

    @classmethod
    def parse(cls, spec: str, threshold: int = DEFAULT_THRESHOLD, **kw) -> "TransformPlan":
        """Plan from ``inline,parallelize,reduction=critical,...``."""
        passes, opts = [], dict(kw)
        for item in filter(None, (s.strip() for s in spec.split(","))):
            name, _, value = item.partition("=")
            if name == "reduction" and value:
                opts["reduction_strategy"] = value
            elif name == "threadprivate" and value:
                opts["threadprivate_direction"] = value
            elif name == "schedule" and value:
                opts["schedule_kind"] = value
            elif value:
                raise PlanError(f"pass {name} takes no parameter")
            passes.append(name)
        return cls(tuple(passes), threshold=threshold, **opts)


@dataclass
class LogEntry:
    pass_name: str
    section: str
    action: str
    reason: str = ""

    def __str__(self):
        return f"{self.pass_name}\t{self.section}\t{self.action}\t{self.reason}"


@dataclass
class RewriteResult:
    ast: n.TranslationUnit
    log: list = field(default_factory=list)

    @property
    def refusals(self):
        return [e for e in self.log if e.action == "refused"]

    @property
    def changes(self):
        return [e for e in self.log if e.action != "refused"]

    def log_text(self) -> str:
        return "".join(f"{e}\n" for e in self.log)


class _Run:
    def __init__(self, unit, plan, pure_functions):
        self.ctx = Context(unit, frozenset(pure_functions))
        self.plan = plan
        self.log = []

    def note(self, name, node, action, reason=""):
        section = self.ctx.section_of(node) if isinstance(node, n.Node) else str(node)
        self.log.append(LogEntry(name, section, action, reason))

    @property
    def unit(self):
        return self.ctx.unit

    # --- passes in execution order

    def inline(self):
        attempts = 0
        refused, logged = set(), set()
        while attempts < 200:
            attempts += 1
            target = None
            for fn in self.unit.functions():
                for nest, _ in top_level_loops(fn):
                    if nest.omp is not None or in_region(self.unit, nest):
                        continue
                    for call in (x for x in nest.walk() if isinstance(x, n.Call)):
                        if self.unit.function(call.func) is None or (fn.name, id(call)) in refused:
                            continue
                        target = (fn, nest, call)
                        break
                    if target:
                        break
                if target:
                    break
            if target is None:
                return
            fn, nest, call = target
            section = self.ctx.section_of(nest)
            try:
                self.ctx.unit = inline_expand(self.unit, call, self.ctx.pure_functions)
            except InlineRefused as exc:
                refused.add((fn.name, id(call)))
                entry = LogEntry("inline", section, "refused", f"{call.func}: {exc}")
                if str(entry) not in logged:
                    logged.add(str(entry))
                    self.log.append(entry)
                continue
            self.ctx.refresh()
            refused = set()
            self.log.append(LogEntry("inline", section, "inlined", call.func))

    def parallelize(self):
        for fn in self.unit.functions():
            for nest, ancestors in top_level_loops(fn):
                if any(a.omp is not None for a in ancestors) or any(
                    isinstance(x, n.Stmt) and x.omp is not None for x in nest.walk()
                ):
                    continue
                try:
                    placements = parallelize_loop(nest, self.ctx)
                except NoParallelLoop as exc:
                    self.note("parallelize", nest, "refused", str(exc.detail))
                    continue
                for p in placements:
                    clauses = []
                    for clause in ("private", "lastprivate"):
                        if getattr(p.directive, clause):
                            clauses.append(f"{clause}({','.join(getattr(p.directive, clause))})")
                    for op, vs in p.directive.reductions:
                        clauses.append(f"reduction({op}:{','.join(vs)})")
                    self.note("parallelize", p.loop, f"parallel for ({p.placement})", " ".join(clauses))

    def region(self):
        for block in [x for x in self.unit.walk() if isinstance(x, n.Compound)]:
            if in_region(self.unit, block):
                continue
            for run in adjacent_runs(block):
                if len(run) < 2:
                    continue
                stmt = form_parallel_region(block, run)
                self.note("region", stmt, "formed", f"{len(run)} loops")
            # serial statements between parallel loops keep them apart
            par = [k for k, it in enumerate(block.items) if isinstance(it, n.For) and it.omp is not None and it.omp.kind == "parallel_for"]
            for a, b in zip(par, par[1:]):
                if b - a > 1:
                    self.note("region", block.items[a], "refused", "NotAdjacent: serial statements between parallel loops")

    def reduction(self):
        strategy = self.plan.reduction_strategy
        loops = [x for x in self.unit.walk() if isinstance(x, n.For) and x.omp is not None and x.omp.is_loop]
        for loop in loops:
            for var in array_reduction_targets(loop, self.ctx):
                cand = next((c for c in recognize_reductions(loop) if c.variable == var), None)
                section = self.ctx.section_of(loop)
                try:
                    lower_array_reduction(loop, cand, strategy, self.ctx)
                except TransformError as exc:
                    self.log.append(LogEntry("reduction", section, "refused", str(exc)))
                    continue
                self.log.append(LogEntry("reduction", section, f"lowered ({strategy})", var))
                break

    def schedule(self):
        for loop in [x for x in self.unit.walk() if isinstance(x, n.For) and x.omp is not None and x.omp.is_loop]:
            signal = imbalance_score(loop, self.unit, self.ctx.pure_functions)
            if apply_schedule(loop, signal, self.plan.schedule_kind, self.ctx):
                self.note("schedule", loop, f"schedule({self.plan.schedule_kind})", ",".join(sorted(signal.reasons)))

    def condpar(self):
        for construct in parallel_constructs(self.unit):
            section = self.ctx.section_of(construct)
            est = statement_workload(construct)
            decision = conditional_parallelize(construct, est, self.plan.threshold, self.ctx)
            action = {"serial": "removed", "parallel": "unconditional", "conditional": "if clause"}[decision.kind]
            self.log.append(LogEntry("condpar", section, action, f"workload {est.to_c()}"))

    def nowait(self):
        regions = [x for x in self.unit.walk() if isinstance(x, n.Compound) and x.omp is not None and x.omp.kind == "parallel"]
        for region in regions:
            for loop in insert_nowait(region, self.ctx):
                self.note("nowait", loop, "nowait", "no cross-thread conflict before the next barrier")

    def threadprivate(self):
        direction = self.plan.threadprivate_direction
        for var in candidates(self.unit, direction):
            try:
                convert_threadprivate(self.unit, [var], direction)
            except TransformError as exc:
                self.log.append(LogEntry("threadprivate", var, "refused", str(exc)))
                continue
            self.log.append(LogEntry("threadprivate", var, direction, ""))


def run_pipeline(ast: n.TranslationUnit, plan: Optional[TransformPlan] = None, pure_functions=DEFAULT_PURE) -> RewriteResult:
    """Apply ``plan`` to a copy of ``ast`` in the fixed pass order."""
    plan = plan or TransformPlan()
    run = _Run(copy.deepcopy(ast), plan, pure_functions)
    for name in plan.passes:
        getattr(run, name)()
        run.ctx.refresh()
    return RewriteResult(run.unit, run.log)
