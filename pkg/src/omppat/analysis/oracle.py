"""Brute-force oracles: iteration-pair enumeration, static-partition
cross-thread conflicts, and simulated two-thread execution of privatized loops.

They execute loops concretely with :mod:`interp`, so callers supply a memory
(a :class:`interp.Frame` holding scalars and arrays) that fixes every bound.
"""

from __future__ import annotations

import copy
import itertools
import random
from dataclasses import dataclass

from ..frontend import nodes as n
from .interp import Frame, Machine, Uninitialized, loop_values, run_iteration


def _clone(frame: Frame) -> Frame:
    return Frame(copy.deepcopy(frame.values), dict(frame.types))


def trace_iterations(loop: n.For, memory: Frame, functions=None):
    """Run ``loop`` serially on a copy of ``memory``; return the index values and
    the per-iteration access sets {(base, element, mode)}."""
    mem = _clone(memory)
    current = set()
    m = Machine([mem], functions, trace=lambda b, k, mode: current.add((b, k, mode)))
    index, values = loop_values(loop, m)
    per_iter = []
    for v in values:
        current = set()
        m.trace = lambda b, k, mode, cur=current: cur.add((b, k, mode))
        for _ in run_iteration(loop, m, index, v):
            pass
        per_iter.append(current)
    return index, values, per_iter


@dataclass(frozen=True)
class Conflict:
    base: str
    element: tuple
    first: int  # iteration value (or thread) of the first access
    second: int
    kinds: tuple


def carried_conflicts(loop: n.For, memory: Frame, ignore=(), functions=None) -> list:
    """All pairs of distinct iterations touching one location with a write."""
    index, values, per_iter = trace_iterations(loop, memory, functions)
    ignore = set(ignore) | {index}
    owners = {}
    for pos, accesses in enumerate(per_iter):
        for base, elem, mode in accesses:
            if base in ignore:
                continue
            owners.setdefault((base, elem), []).append((pos, mode))
    out = []
    for (base, elem), uses in owners.items():
        for (p1, m1), (p2, m2) in itertools.combinations(uses, 2):
            if p1 != p2 and "write" in (m1, m2):
                out.append(Conflict(base, elem, values[p1], values[p2], (m1, m2)))
    return out


def static_partitions(count: int, threads: int):
    """Every contiguous split of ``count`` iterations into ``threads`` chunks whose
    sizes are floor or ceil of count/threads (the shapes a static schedule
    without chunk may take)."""
    q, r = divmod(count, threads)
    seen = set()
    for big in itertools.combinations(range(threads), r):
        sizes = [q + 1 if t in big else q for t in range(threads)]
        key = tuple(sizes)
        if key in seen:
            continue
        seen.add(key)
        owner = []
        for t, size in enumerate(sizes):
            owner.extend([t] * size)
        yield owner


def cross_thread_conflicts(first: n.For, second: n.For, memory: Frame, threads: int, ignore=(), functions=None):
    """Write/access pairs that land on different threads for some pair of static
    partitions of the two loops (the loops run back to back without a barrier)."""
    mem = _clone(memory)
    i1, v1, acc1 = trace_iterations(first, mem, functions)
    # run the first loop for real so the second sees its results
    m = Machine([mem], functions)
    for v in v1:
        for _ in run_iteration(first, m, i1, v):
            pass
    i2, v2, acc2 = trace_iterations(second, mem, functions)
    ignore = set(ignore) | {i1, i2}
    out = []
    parts1 = list(static_partitions(len(v1), threads))
    if len(v1) == len(v2):
        # equal trip counts are split identically by a static schedule
        pairs = [(p, p) for p in parts1]
    else:
        pairs = list(itertools.product(parts1, static_partitions(len(v2), threads)))
    for p1, p2 in pairs:
        touched = {}
        for pos, accesses in enumerate(acc1):
            for base, elem, mode in accesses:
                if base not in ignore:
                    touched.setdefault((base, elem), []).append((p1[pos], mode))
        for pos, accesses in enumerate(acc2):
            for base, elem, mode in accesses:
                if base in ignore:
                    continue
                for t, m1 in touched.get((base, elem), ()):
                    if t != p2[pos] and "write" in (m1, mode):
                        out.append(Conflict(base, elem, t, p2[pos], (m1, mode)))
        if out:
            return out
    return out


# --------------------------------------------------------------------------
# simulated parallel execution


@dataclass
class SimResult:
    ok: bool
    detail: str = ""


def serial_run(loop: n.For, memory: Frame, functions=None) -> Frame:
    mem = _clone(memory)
    m = Machine([mem], functions)
    index, values = loop_values(loop, m)
    for v in values:
        for _ in run_iteration(loop, m, index, v):
            pass
    return mem


def _thread_program(loop, mem, iterations, index, private, firstprivate, reductions, functions, states, tid=0):
    priv = Frame()
    for v in private:
        priv.values[v] = _uninit_like(mem.values.get(v))
        priv.types[v] = mem.types.get(v, "double")
    for v in firstprivate:
        priv.values[v] = copy.deepcopy(mem.values[v])
        priv.types[v] = mem.types.get(v, "double")
    for v, op in reductions.items():
        priv.values[v] = _identity(op, mem.types.get(v, "double"))
        priv.types[v] = mem.types.get(v, "double")
    states[tid] = priv
    m = Machine([priv, mem], functions)
    for value in iterations:
        yield from run_iteration(loop, m, index, value)


def _uninit_like(value):
    from .interp import UNINIT, CArray

    if isinstance(value, CArray):
        arr = value.copy()
        arr.data = [UNINIT] * len(arr.data)
        return arr
    return UNINIT


def _identity(op, t):
    from .interp import is_int_type

    integer = is_int_type(t)
    if op == "+":
        return 0 if integer else 0.0
    if op == "*":
        return 1 if integer else 1.0
    if op == "max":
        return -(2**62) if integer else -float("inf")
    return 2**62 if integer else float("inf")


def _combine(op, a, b):
    if op == "+":
        return a + b
    if op == "*":
        return a * b
    return max(a, b) if op == "max" else min(a, b)


def _schedules(lengths, limit, rng):
    """Interleavings of step sequences given by ``lengths`` (thread ids in order)."""
    total = sum(lengths)
    count = 1
    rem = total
    for L in lengths:
        count *= _comb(rem, L)
        rem -= L
    if count <= limit:
        def rec(remaining, prefix):
            if not any(remaining):
                yield list(prefix)
                return
            for t, r in enumerate(remaining):
                if r:
                    remaining[t] -= 1
                    prefix.append(t)
                    yield from rec(remaining, prefix)
                    prefix.pop()
                    remaining[t] += 1

        yield from rec(list(lengths), [])
        return
    base = [t for t, L in enumerate(lengths) for _ in range(L)]
    yield base
    yield [t for t, L in reversed(list(enumerate(lengths))) for _ in range(L)]
    for _ in range(limit):
        s = list(base)
        rng.shuffle(s)
        yield s


def _comb(a, b):
    from math import comb

    return comb(a, b)


def simulate_parallel(
    loop: n.For,
    memory: Frame,
    private=(),
    lastprivate=(),
    firstprivate=(),
    reductions=None,
    threads=2,
    compare=None,
    functions=None,
    limit=400,
    seed=0,
    rel_tol=1e-9,
):
    """Run ``loop`` with the given data-sharing on ``threads`` simulated threads
    under many statement-level interleavings of every static partition, and
    check each final state against the serial one.

    ``compare`` lists the variables whose final values must agree (default:
    everything in ``memory`` except plain private variables).
    """
    reductions = dict(reductions or {})
    expected = serial_run(loop, memory, functions)
    m0 = Machine([_clone(memory)], functions)
    index, values = loop_values(loop, m0)
    privates = set(private) | set(lastprivate)
    if compare is None:
        compare = [v for v in memory.values if v not in set(private) - set(lastprivate) and v != index]
    rng = random.Random(seed)
    for owner in static_partitions(len(values), threads):
        chunks = [[values[k] for k in range(len(values)) if owner[k] == t] for t in range(threads)]
        # step counts per thread from a dry run of each chunk in isolation
        lengths = []
        for t in range(threads):
            mem = _clone(memory)
            states = {}
            try:
                steps = sum(1 for _ in _thread_program(loop, mem, chunks[t], index, privates, firstprivate, reductions, functions, states, t))
            except Uninitialized as u:
                return SimResult(False, f"private copy of {u} read before written")
            lengths.append(steps)
        for order in _schedules(lengths, limit, rng):
            mem = _clone(memory)
            states = {}
            progs = [
                _thread_program(loop, mem, chunks[t], index, privates, firstprivate, reductions, functions, states, t)
                for t in range(threads)
            ]
            try:
                for t in order:
                    next(progs[t], None)
                for p in progs:
                    for _ in p:
                        pass
            except Uninitialized as u:
                return SimResult(False, f"private copy of {u} read before written")
            for v, op in reductions.items():
                acc = mem.values[v]
                for st in states.values():
                    acc = _combine(op, acc, st.values[v])
                mem.values[v] = acc
            last_thread = owner[-1] if values else None
            for v in lastprivate:
                if last_thread is not None:
                    mem.values[v] = states[last_thread].values[v]
            for v in compare:
                if not _close(mem.values.get(v), expected.values.get(v), rel_tol):
                    return SimResult(False, f"{v} differs: {mem.values.get(v)!r} != {expected.values.get(v)!r}")
    return SimResult(True)


def _close(a, b, rel_tol):
    from .interp import CArray

    if isinstance(a, CArray) and isinstance(b, CArray):
        return len(a.data) == len(b.data) and all(_close(x, y, rel_tol) for x, y in zip(a.data, b.data))
    if isinstance(a, float) or isinstance(b, float):
        if not isinstance(a, (int, float)) or not isinstance(b, (int, float)):
            return False
        return abs(a - b) <= rel_tol * max(1.0, abs(a), abs(b))
    return a == b
