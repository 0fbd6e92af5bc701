"""Speedup and overhead arithmetic."""

from __future__ import annotations

from decimal import ROUND_HALF_UP, Decimal


def _check(*values):
    for v in values:
        if not v > 0:
            raise ValueError(f"times must be positive, got {v!r}")


def round_half_up(x: float, digits: int = 0) -> float:
    q = Decimal(1).scaleb(-digits)
    return float(Decimal(repr(x)).quantize(q, rounding=ROUND_HALF_UP))


def speedup(t_1core: float, t_ncore: float) -> float:
    """Raw ratio of the one-core time to the n-core time."""
    _check(t_1core, t_ncore)
    return t_1core / t_ncore


def rounded_speedup(t_1core: float, t_ncore: float) -> float:
    return round_half_up(speedup(t_1core, t_ncore), 1)


def overhead_raw(t_serial: float, t_par1: float) -> float:
    _check(t_serial, t_par1)
    return 100.0 * (t_par1 - t_serial) / t_serial


def overhead(t_serial: float, t_par1: float) -> int:
    """Percent slowdown of the one-thread parallel build, as an integer."""
    return int(round_half_up(overhead_raw(t_serial, t_par1)))
