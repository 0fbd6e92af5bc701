"""Program analyses: accesses, dependences, privatization, reductions,
side effects, inline expansion, cross-loop conflicts and region liveness."""

from .accesses import DEFAULT_PURE, AccessDescriptor, AffineForm, Opaque, collect_accesses
from .conflicts import ConflictReport, cross_loop_conflicts
from .dependence import LOOP_INDEPENDENT, DependenceEdge, dependence_test
from .inline import InlineRefused, inline_expand
from .liveness import live_across_regions, parallel_regions
from .privatization import PrivatizationResult, find_private
from .reductions import ReductionCandidate, recognize_reductions
from .sideeffects import CallGraph, SideEffectSummary, build_callgraph, side_effects

__all__ = [
    "DEFAULT_PURE",
    "AccessDescriptor",
    "AffineForm",
    "Opaque",
    "collect_accesses",
    "ConflictReport",
    "cross_loop_conflicts",
    "LOOP_INDEPENDENT",
    "DependenceEdge",
    "dependence_test",
    "InlineRefused",
    "inline_expand",
    "live_across_regions",
    "parallel_regions",
    "PrivatizationResult",
    "find_private",
    "ReductionCandidate",
    "recognize_reductions",
    "CallGraph",
    "SideEffectSummary",
    "build_callgraph",
    "side_effects",
]
