"""CSV and Markdown rendering of pattern and timing tables."""

from __future__ import annotations

import csv
import io
from collections import defaultdict
from dataclasses import dataclass, field
from pathlib import Path
from statistics import fmean

from ..patterns.profile import PATTERNS
from .bench import IoError
from .metrics import overhead, overhead_raw, rounded_speedup, speedup

PATTERN_COLUMNS = ("App", "Loop Name", "Auto", "Manual") + tuple(p.upper() for p in PATTERNS)


@dataclass
class ReportTable:
    columns: tuple
    rows: list = field(default_factory=list)

    def add(self, *values):
        if len(values) != len(self.columns):
            raise ValueError(f"expected {len(self.columns)} values, got {len(values)}")
        self.rows.append(tuple("" if v is None else v for v in values))

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.columns)
        for r in self.rows:
            w.writerow([repr(v) if isinstance(v, float) else v for v in r])
        return buf.getvalue()

    def to_markdown(self) -> str:
        cells = [list(self.columns)] + [[_fmt(v) for v in r] for r in self.rows]
        widths = [max(len(row[k]) for row in cells) for k in range(len(self.columns))]
        lines = []
        for k, row in enumerate(cells):
            lines.append("| " + " | ".join(c.ljust(w) for c, w in zip(row, widths)) + " |")
            if k == 0:
                lines.append("|" + "|".join("-" * (w + 2) for w in widths) + "|")
        return "\n".join(lines) + "\n"

    def render(self, fmt: str) -> str:
        if fmt == "csv":
            return self.to_csv()
        if fmt == "md":
            return self.to_markdown()
        raise ValueError(f"unknown report format {fmt!r}")


def _fmt(v):
    if isinstance(v, float):
        return f"{v:.6g}"
    return str(v)


def profile_table(rows, app="") -> ReportTable:
    """``rows`` holds PatternProfile objects or (label, profile[, (auto, manual)]) tuples."""
    table = ReportTable(PATTERN_COLUMNS)
    for item in rows:
        if isinstance(item, tuple):
            label, prof = item[0], item[1]
            timing = item[2] if len(item) > 2 and item[2] else (None, None)
        else:
            label, prof, timing = str(item.section) if item.section else "Program", item, (None, None)
        table.add(app, label, timing[0], timing[1], *prof.values())
    return table


def diff_table(report, app="") -> ReportTable:
    """Per-section deltas (manual minus auto) in the pattern column layout."""
    table = ReportTable(PATTERN_COLUMNS)
    for row in report.rows:
        label = str(row.section)
        if row.presence != "both":
            label += f" ({row.presence})"
        auto_t, manual_t = row.timing if row.timing else (None, None)
        table.add(app, label, auto_t, manual_t, *row.deltas)
    return table


def timing_means(records) -> dict:
    groups = defaultdict(list)
    for r in records:
        groups[(r.variant, r.threads)].append(r.seconds)
    return {k: fmean(v) for k, v in groups.items()}


def timing_table(records, serial_label="serial") -> ReportTable:
    """One mean row per (variant, threads); the speedup sits on the row of the
    largest thread count and the overhead on the one-thread row."""
    means = timing_means(records)
    variants = list(dict.fromkeys(r.variant for r in records))
    threads = sorted({r.threads for r in records})
    lo, hi = (threads[0], threads[-1]) if threads else (None, None)
    serial = means.get((serial_label, 1)) or means.get((serial_label, lo))
    table = ReportTable(("Variant", "Threads", "Mean (s)", "Speedup", "Speedup (raw)", "Overhead %", "Overhead (raw)"))
    for v in variants:
        for t in threads:
            if (v, t) not in means:
                continue
            sp = sp_raw = ov = ov_raw = None
            if t == hi and lo != hi and (v, lo) in means:
                sp = rounded_speedup(means[(v, lo)], means[(v, hi)])
                sp_raw = speedup(means[(v, lo)], means[(v, hi)])
            if t == 1 and serial and v != serial_label:
                ov = overhead(serial, means[(v, 1)])
                ov_raw = overhead_raw(serial, means[(v, 1)])
            table.add(v, t, means[(v, t)], sp, sp_raw, ov, ov_raw)
    return table


def records_table(records) -> ReportTable:
    table = ReportTable(("variant", "threads", "run", "seconds"))
    for r in records:
        table.add(r.variant, r.threads, r.run, r.seconds)
    return table


def emit_report(profiles=None, diffs=None, timings=None, out=None, fmt="csv", app="") -> dict:
    """Render the requested tables; writes ``<out>.<part>.<ext>`` files when
    ``out`` is given.  Returns ``{part: text}``."""
    parts = {}
    if profiles is not None:
        parts["patterns"] = profile_table(profiles, app).render(fmt)
    if diffs is not None:
        parts["diff"] = diff_table(diffs, app).render(fmt)
    if timings is not None:
        parts["timings"] = timing_table(timings).render(fmt)
    if out is not None:
        base = Path(out)
        try:
            for name, text in parts.items():
                target = base if len(parts) == 1 else base.with_name(f"{base.stem}.{name}{base.suffix}")
                target.write_text(text)
        except OSError as exc:
            raise IoError(str(exc)) from exc
    return parts
