"""Parallelize a serial kernel automatically and set it against the hand version.

We strip every directive from the hand-parallelized MG zran3 fixture to get
the serial program, run the default pass pipeline on it, and compare the
result section by section with the original.  With gcc on the path, the
three variants are then compiled and timed at one and two threads.

Run with an optional fixture stem, e.g. ``python demos/02_auto_versus_manual.py cg_conj_grad``.
"""

import shutil
import sys
import tempfile
from importlib import resources
from pathlib import Path

from omppat.frontend import parse, to_text
from omppat.harness import BenchConfig, diff_table, run_bench, timing_table
from omppat.patterns import compare_versions, load_annotations
from omppat.transforms import TransformPlan, run_pipeline, strip_directives

DATA = Path(str(resources.files("omppat") / "data"))


def main(stem="mg_zran3"):
    manual_text = (DATA / f"{stem}.c").read_text()
    notes = load_annotations(DATA / f"{stem}.annotations.txt")
    serial = strip_directives(parse(manual_text))
    serial_text = to_text(serial)

    result = run_pipeline(parse(serial_text), TransformPlan())
    print("Pass log (pass, section, action, reason):")
    print(result.log_text())

    auto_text = to_text(result.ast)
    report = compare_versions(result.ast, parse(manual_text), notes)
    print("Pattern differences, manual minus auto:")
    print(diff_table(report, app=stem).to_markdown())

    # serial elision: the automatic version is the same program once its
    # directives are gone
    print("auto version elides to the serial program:", strip_directives(parse(auto_text)) == serial)

    if shutil.which("gcc") is None:
        print("gcc not found; skipping the timing run")
        return
    with tempfile.TemporaryDirectory() as tmp:
        variants = []
        for label, text in (("serial", serial_text), ("auto", auto_text), ("manual", manual_text)):
            path = Path(tmp) / f"{label}.c"
            path.write_text(text)
            variants.append((label, str(path)))
        records = run_bench(BenchConfig(variants, thread_counts=[1, 2], runs=3), workdir=tmp)
    print()
    print(timing_table(records).to_markdown())


if __name__ == "__main__":
    main(*sys.argv[1:])
