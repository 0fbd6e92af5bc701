"""Shared helpers for the test suite: C builds, output comparison, and random
program generators used by the oracle tests."""

from __future__ import annotations

import os
import re
import shutil
import subprocess
from importlib import resources
from pathlib import Path

from omppat.analysis.interp import CArray, Frame
from omppat.frontend import parse

DATA = Path(str(resources.files("omppat") / "data"))

FIXTURES = {
    "bt_compute_rhs": "compute_rhs#0-#10",
    "bt_initialize": "initialize#0-#7",
    "is_rank": "rank#1-#7",
    "cg_conj_grad": "conj_grad#0-#4",
    "ep_main": "main#3",
    "mg_zran3": "zran3#1-#3",
}

# P1..P9 for the fixture sections, as published
SECTION_ROWS = {
    "compute_rhs#0-#10": (0, 0, 11, 0, 0, 0, 0, 7, 0),
    "initialize#0-#7": (8, 7, 8, 0, 0, 0, 0, 6, 0),
    "rank#1-#7": (1, 0, 3, 1, 1, 1, 0, 0, 1),
    "conj_grad#0-#4": (0, 0, 5, 0, 0, 0, 0, 1, 1),
    "main#3": (1, 1, 1, 0, 0, 1, 1, 0, 1),
    "zran3#1-#3": (1, 1, 3, 0, 0, 0, 0, 0, 1),
}

HAVE_GCC = shutil.which("gcc") is not None


def fixture_path(stem: str) -> Path:
    return DATA / f"{stem}.c"


def annotations_path(stem: str) -> Path:
    return DATA / f"{stem}.annotations.txt"


def load_fixture(stem: str):
    return parse(fixture_path(stem).read_text(), path=str(fixture_path(stem)))


def build(source: str, workdir, name: str) -> Path:
    src = Path(workdir) / f"{name}.c"
    exe = Path(workdir) / name
    src.write_text(source)
    proc = subprocess.run(
        ["gcc", "-O2", "-fopenmp", str(src), "-o", str(exe), "-lm"], capture_output=True, text=True
    )
    if proc.returncode != 0:
        raise AssertionError(f"gcc failed for {name}:\n{proc.stderr}\n--- source ---\n{source}")
    return exe


def run(exe, threads: int) -> str:
    env = dict(os.environ, OMP_NUM_THREADS=str(threads))
    proc = subprocess.run([str(exe)], capture_output=True, text=True, env=env, timeout=60)
    if proc.returncode != 0:
        raise AssertionError(f"{exe} exited with {proc.returncode}: {proc.stderr}")
    return proc.stdout


_NUM = re.compile(r"[-+]?(?:\d+\.\d*|\.\d+|\d+)(?:[eE][-+]?\d+)?")


def outputs_close(a: str, b: str, rel: float) -> bool:
    """Same text once numbers are masked, and every number within ``rel``."""
    if _NUM.sub("#", a) != _NUM.sub("#", b):
        return False
    for x, y in zip(_NUM.findall(a), _NUM.findall(b)):
        fx, fy = float(x), float(y)
        if abs(fx - fy) > rel * max(abs(fx), abs(fy), 1e-300) and fx != fy:
            return False
    return True


# ---------------------------------------------------------------------------
# random loops over affine subscripts

BASE = 60  # keeps every generated subscript non-negative


def _affine_sub(rng, index, sym):
    coeff = rng.choice([0, 1, 1, 1, 2, -1, 3])
    off = BASE + rng.randint(-3, 3)
    parts = []
    if coeff:
        parts.append(index if coeff == 1 else f"-{index}" if coeff == -1 else f"{coeff} * {index}")
    if sym and rng.random() < 0.3:
        parts.append("k")
    parts.append(str(off))
    return " + ".join(parts).replace("+ -", "- ")


def random_affine_loop(rng):
    """One loop over 1-D and 2-D integer arrays with affine subscripts.

    Returns (loop source, memory Frame).  Bounds, strides and direction vary;
    the scalar ``k`` is a loop-invariant symbolic offset.
    """
    n = rng.randint(1, 16)
    lo = rng.randint(0, 4)
    stride = rng.choice([1, 1, 1, 2, 3])
    descending = rng.random() < 0.25
    if descending:
        header = f"for (i = {lo + n * stride}; i > {lo}; i -= {stride})" if stride > 1 else f"for (i = {lo + n}; i > {lo}; i--)"
    else:
        header = f"for (i = {lo}; i < {lo + n * stride}; i += {stride})" if stride > 1 else f"for (i = {lo}; i < {lo + n}; i++)"
    arrays = ["a", "b", "m"][: rng.randint(1, 3)]

    def ref():
        name = rng.choice(arrays)
        if name == "m":
            return f"m[{_affine_sub(rng, 'i', True)}][{rng.randint(0, 2)}]"
        return f"{name}[{_affine_sub(rng, 'i', True)}]"

    stmts = []
    for _ in range(rng.randint(1, 3)):
        rhs = " + ".join(ref() for _ in range(rng.randint(1, 2)))
        if rng.random() < 0.2:
            stmts.append(f"if (i % 2 == 0) {{ {ref()} = {rhs} + 1; }}")
        else:
            stmts.append(f"{ref()} = {rhs} + 1;")
    text = f"{header} {{ {' '.join(stmts)} }}"
    top = lo + (n + 1) * stride + 1
    size = BASE + 3 * top + 8 + 5
    values = {
        "a": CArray((size,), True, list(range(size))),
        "b": CArray((size,), True, [3 * x for x in range(size)]),
        "m": CArray((size, 3), True, list(range(size * 3))),
        "i": 0,
        "k": rng.randint(0, 4),
    }
    types = {"i": "int", "k": "int"}
    return text, Frame(values, types)


def pair_of_worksharing_loops(rng):
    """Two adjacent ``omp for`` loops inside a region, affine subscripts, n <= 16.

    Returns (region statement source, memory Frame).
    """
    n = rng.randint(1, 16)
    lo = rng.randint(0, 2)
    n2 = n if rng.random() < 0.75 else rng.randint(1, 16)
    lo2 = lo if rng.random() < 0.75 else rng.randint(0, 2)
    arrays = ["a", "b", "c"]
    # aligned pairs touch element i only, so the tool should often say nowait
    aligned = rng.random() < 0.5

    def sub(index):
        c = rng.choice([1, 1, 1, 1, 0, 2, -1])
        off = rng.choice([0, 0, 0, 0, 1, -1, 2])
        if aligned and rng.random() < 0.9:
            c, off = 1, 0
        if c == 0:
            return str(BASE + rng.randint(0, 3))
        t = index if c == 1 else f"-{index}" if c == -1 else f"{c} * {index}"
        return f"{t} + {BASE + off}"

    def body():
        out = []
        for _ in range(rng.randint(1, 2)):
            rhs = " + ".join(f"{rng.choice(arrays)}[{sub('i')}]" for _ in range(rng.randint(1, 2)))
            out.append(f"{rng.choice(arrays)}[{sub('i')}] = {rhs} + 1;")
        return " ".join(out)

    sched = "" if rng.random() < 0.85 else rng.choice([" schedule(dynamic)", " schedule(static, 2)"])
    text = (
        "#pragma omp parallel\n{\n"
        f"#pragma omp for\nfor (i = {lo}; i < {lo + n}; i++) {{ {body()} }}\n"
        f"#pragma omp for{sched}\nfor (i = {lo2}; i < {lo2 + n2}; i++) {{ {body()} }}\n"
        "}"
    )
    size = BASE + 2 * 20 + 8
    values = {a: CArray((size,), True, [(7 * x + len(a)) % 23 for x in range(size)]) for a in arrays}
    values["i"] = 0
    return text, Frame(values, {"i": "int"})


# ---------------------------------------------------------------------------
# random array reductions

REDUCTION_SHAPES = ("inner_index", "histogram", "fixed", "two_dim")


def random_reduction(rng, k: int):
    """One array reduction instance as a self-contained C function ``red<k>``
    plus the globals it uses.  Returns (globals, function, call, print)."""
    real = rng.random() < 0.5
    ctype = "double" if real else "int"
    shape = rng.choice(REDUCTION_SHAPES)
    n = rng.randint(1, 64)
    m = rng.randint(1, 64)
    r, x, key = f"r{k}", f"x{k}", f"key{k}"
    init_x = f"{x}[i] = {'0.25 * ((i * 7 + %d) %% 11) - 1.0' % k if real else '(i * 5 + %d) %% 9 - 4' % k};"
    glob = [f"{ctype} {r}[{m}];", f"{ctype} {x}[{n}];"]
    body_init = [f"for (i = 0; i < {n}; i++) {init_x}"]
    if shape == "inner_index":
        glob.append(f"{ctype} w{k}[{m}];")
        body_init.append(f"for (i = 0; i < {m}; i++) w{k}[i] = {'0.5 + 0.125 * (i % 5)' if real else 'i % 3 + 1'};")
        if real and rng.random() < 0.3:
            body_init.append(f"for (i = 0; i < {m}; i++) {r}[i] = 1.0;")
            update = f"{r}[j] = {r}[j] * (1.0 + 0.001 * {x}[i] * w{k}[j]);"
        else:
            update = f"{r}[j] = {r}[j] + {x}[i] * w{k}[j];"
        loop = f"for (i = 0; i < {n}; i++) {{ for (j = 0; j < {m}; j++) {{ {update} }} }}"
    elif shape == "histogram":
        glob.append(f"int {key}[{n}];")
        body_init.append(f"for (i = 0; i < {n}; i++) {key}[i] = (i * 13 + {k}) % {m};")
        loop = f"for (i = 0; i < {n}; i++) {{ {r}[{key}[i]] += {x}[i]; }}"
    elif shape == "fixed":
        e = rng.randint(0, m - 1)
        loop = f"for (i = 0; i < {n}; i++) {{ {r}[{e}] = {r}[{e}] + {x}[i]; {r}[0] += 1; }}"
    else:
        cols = rng.randint(1, 4)
        m = max(1, m // cols)
        glob[0] = f"{ctype} {r}[{m}][{cols}];"
        loop = (
            f"for (i = 0; i < {n}; i++) {{ for (j = 0; j < {m}; j++) {{ for (c = 0; c < {cols}; c++) {{ "
            f"{r}[j][c] += {x}[i] * (c + 1); }} }} }}"
        )
    fn = (
        f"void red{k}(void)\n{{\n  int i, j, c;\n  " + "\n  ".join(body_init) + f"\n  {loop}\n}}\n"
    )
    fmt = "%.17g" if real else "%d"
    if shape == "two_dim":
        show = (
            f"for (i = 0; i < {m}; i++) for (j = 0; j < {cols}; j++) "
            f"printf(\"{r} %d %d {fmt}\\n\", i, j, {r}[i][j]);"
        )
    else:
        show = f"for (i = 0; i < {m}; i++) printf(\"{r} %d {fmt}\\n\", i, {r}[i]);"
    return "\n".join(glob), fn, f"red{k}();", show, shape, ctype


def reduction_program(rng, first: int, count: int):
    parts, fns, calls, shows, meta = [], [], [], [], []
    for k in range(first, first + count):
        g, fn, call, show, shape, ctype = random_reduction(rng, k)
        parts.append(g)
        fns.append(fn)
        calls.append(call)
        shows.append(show)
        meta.append((shape, ctype))
    src = (
        "#include <stdio.h>\n\n"
        + "\n".join(parts)
        + "\n\n"
        + "\n".join(fns)
        + "\nint main(void)\n{\n  int i, j;\n  "
        + "\n  ".join(calls + shows)
        + "\n  return 0;\n}\n"
    )
    return src, meta
