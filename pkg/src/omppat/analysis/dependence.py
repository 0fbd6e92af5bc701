"""Data dependence testing limited to the ZIV and strong SIV tests."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from ..frontend import nodes as n
from ..frontend.loops import loop_header
from .accesses import AffineForm, Opaque, collect_accesses

LOOP_INDEPENDENT = None

_INDEPENDENT = "independent"
_ANY = "any"
_UNKNOWN = "unknown"


@dataclass
class DependenceEdge:
    src: object
    dst: object
    kind: str  # flow | anti | output
    carrier: Optional[int]  # 0 for the tested loop, None when loop-independent
    status: str  # proven | assumed
    distance: Optional[int] = None  # iteration distance when known

    @property
    def carried(self):
        return self.carrier is not None

    def __str__(self):
        where = "loop-independent" if self.carrier is None else f"carried by level {self.carrier}"
        d = f" distance {self.distance}" if self.distance is not None else ""
        return f"{self.kind} {self.src} -> {self.dst} ({where}{d}, {self.status})"


def _kind(src_mode, dst_mode):
    if src_mode == "write":
        return "flow" if dst_mode == "read" else "output"
    return "anti"


def _inner_info(acc, index):
    """Stride and trip count of inner loop ``index`` enclosing ``acc``."""
    for loop in acc.loops:
        h = loop_header(loop)
        if h is not None and h.index == index:
            return h.stride_value, h.trip_count().constant()
    return None, None


def _dimension(fa, fb, index, stride, trip, a_acc, b_acc):
    """Compare one subscript dimension; returns independent/any/unknown or ('dist', k)."""
    if isinstance(fa, Opaque) or isinstance(fb, Opaque):
        return _UNKNOWN
    ia, ib = fa.indices(), fb.indices()
    if not ia and not ib:
        c = (fa.const - fb.const).constant()
        if c is None:
            return _UNKNOWN
        return _INDEPENDENT if c != 0 else _ANY
    if ia == ib and len(ia) == 1:
        (j,) = ia
        a = fa.coeff(j)
        if a != fb.coeff(j):
            return _UNKNOWN
        c = (fb.const - fa.const).constant()
        if c is None:
            return _UNKNOWN
        if c % a:
            return _INDEPENDENT
        delta = c // a  # j_A - j_B
        if j == index:
            s, t = stride, trip
        else:
            s, t = _inner_info(a_acc, j)
            if s is None or _inner_info(b_acc, j)[0] != s:
                return _ANY
        if delta % s:
            return _INDEPENDENT
        k = delta // s
        if t is not None and abs(k) >= t:
            return _INDEPENDENT
        return ("dist", k) if j == index else _ANY
    return _UNKNOWN


def test_pair(a, b, index, stride, trip):
    """Classify the pair: None (independent) or (distance or None, proven flag)."""
    if a.unknown or b.unknown:
        return (None, False)
    if len(a.subscripts) != len(b.subscripts):
        return (None, False)
    dist = None
    proven = True
    for fa, fb in zip(a.subscripts, b.subscripts):
        r = _dimension(fa, fb, index, stride, trip, a, b)
        if r == _INDEPENDENT:
            return None
        if r == _UNKNOWN:
            proven = False
        elif isinstance(r, tuple):
            if dist is not None and dist != r[1]:
                return None
            dist = r[1]
    return (dist, proven)


def _order_same_iteration(a, b, ia, ib):
    """Execution order of two accesses in the same iteration."""
    if a.stmt is b.stmt and a.mode != b.mode:
        return (a, b) if a.mode == "read" else (b, a)
    return (a, b) if ia <= ib else (b, a)


def dependence_test(loop: n.For, accesses=None) -> list:
    """Dependence edges between same-base access pairs of ``loop``.

    Level 0 is ``loop`` itself; dependences carried only by inner loops are
    reported as loop-independent with respect to it.
    """
    if accesses is None:
        accesses = collect_accesses(loop)
    h = loop_header(loop)
    if h is None or not h.canonical:
        index, stride, trip = None, 1, None
    else:
        index, stride, trip = h.index, h.stride_value, h.trip_count().constant()
    edges = []
    for i, a in enumerate(accesses):
        if a.unknown:
            edges.append(DependenceEdge(a, a, "output", 0, "assumed"))
            continue
        for j in range(i, len(accesses)):
            b = accesses[j]
            if b.unknown or a.base != b.base or (a.mode == "read" and b.mode == "read"):
                continue
            r = test_pair(a, b, index, stride, trip)
            if r is None:
                continue
            dist, proven = r
            status = "proven" if proven and index is not None else "assumed"
            if dist == 0:
                if a is not b:
                    s, d = _order_same_iteration(a, b, i, j)
                    edges.append(DependenceEdge(s, d, _kind(s.mode, d.mode), LOOP_INDEPENDENT, status, 0))
                continue
            if trip is not None and trip <= 1:
                continue
            if dist is not None:
                # dist = k_A - k_B: the access from the earlier iteration is the source
                s, d = (a, b) if dist < 0 else (b, a)
                edges.append(DependenceEdge(s, d, _kind(s.mode, d.mode), 0, status, abs(dist)))
            else:
                edges.append(DependenceEdge(a, b, _kind(a.mode, b.mode), 0, status))
                if a is not b and a.mode != b.mode:
                    edges.append(DependenceEdge(b, a, _kind(b.mode, a.mode), 0, status))
    return edges


def carried_edges(edges):
    return [e for e in edges if e.carried]
