"""Compile and time program variants with an external compiler."""

from __future__ import annotations

import os
import re
import shlex
import subprocess
import tempfile
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

DEFAULT_COMPILER = "gcc {flags} {input} -o {output} -lm"
DEFAULT_FLAGS = "-O3 -fopenmp"
DEFAULT_TIMER = r"Time in seconds\s*=\s*([0-9.eE+-]+)"


class CompileError(RuntimeError):
    def __init__(self, source, log):
        self.source = source
        self.log = log
        super().__init__(f"compilation of {source} failed:\n{log}")


class RunError(RuntimeError):
    def __init__(self, binary, status, stderr=""):
        self.binary = binary
        self.status = status
        self.stderr = stderr
        super().__init__(f"{binary} exited with status {status}")


class IoError(OSError):
    pass


class ConfigError(ValueError):
    pass


@dataclass
class BenchConfig:
    variants: list = field(default_factory=list)  # (label, source path)
    thread_counts: list = field(default_factory=lambda: [1, 4])
    runs: int = 3
    compiler_command: str = DEFAULT_COMPILER
    flags: str = DEFAULT_FLAGS
    self_timed: bool = False
    timer_regex: str = DEFAULT_TIMER
    timeout: Optional[float] = None

    def __post_init__(self):
        if self.runs < 1:
            raise ConfigError("runs must be at least 1")
        if not self.thread_counts or any(t < 1 for t in self.thread_counts):
            raise ConfigError("thread counts must be a non-empty list of positive integers")


def _int_list(text):
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise ConfigError(f"expected comma-separated integers, got {text!r}") from None


def parse_config(text: str, base_dir=".") -> BenchConfig:
    """``key = value`` lines; ``variant.<label> = <path>`` declares variants."""
    kw = {"variants": []}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ConfigError(f"line {lineno}: expected key = value")
        key, value = key.strip(), value.strip()
        if key.startswith("variant."):
            path = Path(value)
            if not path.is_absolute():
                path = Path(base_dir) / path
            kw["variants"].append((key[len("variant."):], str(path)))
        elif key == "threads":
            kw["thread_counts"] = _int_list(value)
        elif key == "runs":
            kw["runs"] = int(value)
        elif key in ("compiler", "compiler_command"):
            kw["compiler_command"] = value
        elif key == "flags":
            kw["flags"] = value
        elif key == "self_timed":
            kw["self_timed"] = value.lower() in ("1", "true", "yes", "on")
        elif key == "timer_regex":
            kw["timer_regex"] = value
        elif key == "timeout":
            kw["timeout"] = float(value)
        else:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
    return BenchConfig(**kw)


def load_config(path) -> BenchConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise IoError(str(exc)) from exc
    return parse_config(text, Path(path).parent)


@dataclass(frozen=True)
class TimingRecord:
    variant: str
    threads: int
    run: int
    seconds: float

    def __post_init__(self):
        if not self.seconds > 0:
            raise ValueError("seconds must be positive")


def compile_source(source, output, compiler_command=DEFAULT_COMPILER, flags=DEFAULT_FLAGS):
    cmd = compiler_command.format(input=shlex.quote(str(source)), output=shlex.quote(str(output)), flags=flags)
    try:
        proc = subprocess.run(shlex.split(cmd), capture_output=True, text=True)
    except OSError as exc:
        raise CompileError(source, str(exc)) from exc
    if proc.returncode != 0:
        raise CompileError(source, proc.stdout + proc.stderr)
    return output


def run_binary(binary, threads: int, timeout=None):
    """Run once with ``threads`` OpenMP threads; returns (stdout, wall seconds)."""
    env = dict(os.environ, OMP_NUM_THREADS=str(threads))
    start = time.perf_counter()
    try:
        proc = subprocess.run([str(binary)], capture_output=True, text=True, env=env, timeout=timeout)
    except subprocess.TimeoutExpired as exc:
        raise RunError(binary, "timeout") from exc
    elapsed = time.perf_counter() - start
    if proc.returncode != 0:
        raise RunError(binary, proc.returncode, proc.stderr)
    return proc.stdout, elapsed


def run_bench(cfg: BenchConfig, workdir=None) -> list:
    """Compile every variant, then run each (variant, threads) ``cfg.runs`` times
    strictly one after another."""
    records = []
    with tempfile.TemporaryDirectory(dir=workdir) as tmp:
        binaries = {}
        for label, source in cfg.variants:
            if not Path(source).exists():
                raise IoError(f"no such source file: {source}")
            binaries[label] = compile_source(source, Path(tmp) / f"{label}.bin", cfg.compiler_command, cfg.flags)
        timer = re.compile(cfg.timer_regex)
        for label, _ in cfg.variants:
            for threads in cfg.thread_counts:
                for k in range(cfg.runs):
                    out, wall = run_binary(binaries[label], threads, cfg.timeout)
                    seconds = wall
                    if cfg.self_timed:
                        m = timer.search(out)
                        if m and float(m.group(1)) > 0:
                            seconds = float(m.group(1))
                    records.append(TimingRecord(label, threads, k, seconds))
    return records
