"""VCD export of one-bit signals with an exact rational-to-tick mapping."""

from __future__ import annotations

import io
import math
from fractions import Fraction
from typing import Sequence

from vcd import VCDWriter

from .timeline import Signal, format_time


class TickMap:
    """Maps times to integer ticks: ``tick = (t - origin) * lcm + 1``.

    Tick 0 carries the initial values (the interval before the first event);
    ``lcm`` is the least common multiple of every time denominator, so the
    mapping is exact and invertible.
    """

    def __init__(self, times: Sequence[Fraction]):
        self.lcm = math.lcm(*(t.denominator for t in times)) if times else 1
        self.origin = min([Fraction(0), *times])

    def tick(self, t: Fraction) -> int:
        scaled = (t - self.origin) * self.lcm
        assert scaled.denominator == 1
        return int(scaled) + 1

    def time(self, tick: int) -> Fraction:
        return Fraction(tick - 1, self.lcm) + self.origin


def write_vcd(named: Sequence[tuple[str, str, Signal]], stream) -> TickMap:
    """Write ``(scope, name, signal)`` triples of one-bit signals as a VCD."""
    times = sorted({t for _, _, s in named for t in s.times})
    ticks = TickMap(times)
    comment = (
        f"1 tick = 1/{ticks.lcm} time unit; tick = (t - {format_time(ticks.origin)}) * {ticks.lcm} + 1; "
        "tick 0 holds the initial values"
    )
    with VCDWriter(stream, timescale="1 s", date="", comment=comment) as writer:
        handles = []
        for scope, name, s in named:
            if s.width != 1:
                raise ValueError(f"{scope}.{name}: VCD export takes one-bit signals")
            handles.append((writer.register_var(scope, name, "wire", size=1, init=s.initial[0]), s))
        changes = sorted(
            ((ticks.tick(t), i, v[0]) for i, (_, s) in enumerate(handles) for t, v in s.events)
        )
        for tick, i, value in changes:
            writer.change(handles[i][0], tick, value)
    return ticks


def vcd_text(named: Sequence[tuple[str, str, Signal]]) -> str:
    buf = io.StringIO()
    write_vcd(named, buf)
    return buf.getvalue()
