"""Profile the bundled hand-parallelized kernels.

Each fixture is a reduced C reconstruction of one NPB routine, written the
way the hand-parallelized OpenMP versions are.  For every fixture we print the
P1-P9 row of its annotated section and the whole-program row, then show how
the profile reacts when the nowait clauses are taken out of BT compute_rhs.
"""

from importlib import resources
from pathlib import Path

from omppat.frontend import SectionId, parse
from omppat.harness import diff_table, profile_table
from omppat.patterns import DESCRIPTIONS, compare_versions, load_annotations, profile_program, profile_section

DATA = Path(str(resources.files("omppat") / "data"))

FIXTURES = {
    "bt_compute_rhs": "compute_rhs#0-#10",
    "bt_initialize": "initialize#0-#7",
    "is_rank": "rank#1-#7",
    "cg_conj_grad": "conj_grad#0-#4",
    "ep_main": "main#3",
    "mg_zran3": "zran3#1-#3",
}


def main():
    print("What the pattern columns count:")
    for key, text in DESCRIPTIONS.items():
        print(f"  {key.upper()}: {text}")

    rows = []
    for stem, section in FIXTURES.items():
        unit = parse((DATA / f"{stem}.c").read_text())
        notes = load_annotations(DATA / f"{stem}.annotations.txt")
        rows.append((section, profile_section(unit, SectionId.parse(section), notes)))
        rows.append((f"{stem} program", profile_program(unit, notes)))
    print()
    print(profile_table(rows, app="NPB").to_markdown())

    # Removing every nowait from compute_rhs is what an automatic tool that
    # never proves cross-loop ownership would emit.  The diff isolates P8.
    text = (DATA / "bt_compute_rhs.c").read_text()
    notes = load_annotations(DATA / "bt_compute_rhs.annotations.txt")
    report = compare_versions(parse(text.replace(" nowait", "")), parse(text), notes)
    print("Manual minus nowait-free version of compute_rhs:")
    print(diff_table(report, app="BT").to_markdown())


if __name__ == "__main__":
    main()
