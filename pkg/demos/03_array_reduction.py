"""Lower an rms-style array reduction with both strategies.

The loop below accumulates squared values into a five-element array indexed
by an inner loop.  The parallelize pass recognizes it and attaches an array
reduction clause; the reduction pass then lowers that clause either with a
shared buffer combined under a critical section, or with a per-thread local
array combined element by element with atomic updates.  With gcc available
both lowerings are run at 1, 2 and 4 threads and checked against serial.
"""

import shutil
import tempfile
from pathlib import Path

from omppat.frontend import parse, to_text
from omppat.harness import compile_source, run_binary
from omppat.transforms import TransformPlan, run_pipeline

KERNEL = """#include <stdio.h>

double u[24][24][24][5];
double rms[5];

void error_norm(void)
{
  int i, j, k, m;
  double add;
  for (k = 0; k < 24; k++)
    for (j = 0; j < 24; j++)
      for (i = 0; i < 24; i++)
        for (m = 0; m < 5; m++)
        {
          add = u[k][j][i][m] - 0.5;
          rms[m] = rms[m] + add * add;
        }
}

int main(void)
{
  int i, j, k, m;
  for (k = 0; k < 24; k++)
    for (j = 0; j < 24; j++)
      for (i = 0; i < 24; i++)
        for (m = 0; m < 5; m++)
          u[k][j][i][m] = 0.001 * ((k * 31 + j * 17 + i * 7 + m) % 1000);
  error_norm();
  for (m = 0; m < 5; m++)
    printf("rms[%d] = %.15e\\n", m, rms[m]);
  return 0;
}
"""


def lowered(strategy):
    plan = TransformPlan(("parallelize", "reduction"), reduction_strategy=strategy)
    result = run_pipeline(parse(KERNEL), plan)
    for entry in result.log:
        print("  ", entry)
    return to_text(result.ast)


def main():
    versions = {"serial": KERNEL}
    for strategy in ("critical", "atomic"):
        print(f"--- {strategy} strategy")
        versions[strategy] = lowered(strategy)
        print(to_text(parse(versions[strategy]).function("error_norm")))

    if shutil.which("gcc") is None:
        print("gcc not found; skipping execution")
        return
    with tempfile.TemporaryDirectory() as tmp:
        outputs = {}
        for label, text in versions.items():
            src = Path(tmp) / f"{label}.c"
            src.write_text(text)
            exe = compile_source(src, Path(tmp) / label, flags="-O2 -fopenmp")
            for threads in (1, 2, 4):
                outputs[label, threads] = run_binary(exe, threads)[0]
    want = [float(line.split("=")[1]) for line in outputs["serial", 1].splitlines()]
    for (label, threads), out in outputs.items():
        got = [float(line.split("=")[1]) for line in out.splitlines()]
        worst = max(abs(g - w) / abs(w) for g, w in zip(got, want))
        print(f"{label:8s} {threads} thread(s): max relative difference from serial {worst:.1e}")


if __name__ == "__main__":
    main()
