"""Piecewise-constant Boolean vector signals over exact rational time.

A :class:`Signal` is an initial value followed by a finite, strictly
increasing list of switch events.  The value at a switch instant belongs to
the new interval (right-continuity); :meth:`Signal.left` gives the value just
before an instant.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Sequence, Union

Time = Fraction
Bits = tuple[int, ...]
TimeLike = Union[int, str, Fraction]

#: Open right end of an interval, e.g. the last pulse of an input.
INF = math.inf


class SignalError(ValueError):
    """Raised for malformed signals (width mismatch, bad interval, ambiguous events)."""


def to_time(value: TimeLike) -> Time:
    """Convert *value* to an exact :class:`~fractions.Fraction`.

    Strings may be decimals (``"0.25"``) or ratios (``"1/3"``).  Floats are
    refused because their binary expansion would leak into switch instants.
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not times")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise SignalError(f"not an exact time: {value!r}") from exc
    raise TypeError(f"unsupported time type {type(value).__name__}; use int, str or Fraction")


def to_end(value) -> Union[Time, float]:
    """Like :func:`to_time` but also accepts ``INF`` / ``"inf"`` / ``None`` as infinity."""
    if value is None or value == INF or (isinstance(value, str) and value.strip().lower() in ("inf", "infinity")):
        return INF
    return to_time(value)


def _bits(value: Iterable[int], width: int) -> Bits:
    bits = tuple(int(b) for b in value)
    if len(bits) != width:
        raise SignalError(f"expected {width} bits, got {len(bits)}")
    if any(b not in (0, 1) for b in bits):
        raise SignalError(f"non-Boolean value {bits}")
    return bits


@dataclass(frozen=True)
class Signal:
    """Eventually constant function from time to ``{0,1}**width``.

    Build instances with :func:`normalize` or :func:`constant`; the raw
    constructor checks but does not repair the invariants.
    """

    width: int
    initial: Bits
    events: tuple[tuple[Time, Bits], ...] = ()

    def __post_init__(self):
        if self.width < 1:
            raise SignalError("width must be positive")
        object.__setattr__(self, "initial", _bits(self.initial, self.width))
        events = tuple((to_time(t), _bits(v, self.width)) for t, v in self.events)
        prev_t, prev_v = None, self.initial
        for t, v in events:
            if prev_t is not None and t <= prev_t:
                raise SignalError(f"event times not strictly increasing at {t}")
            if v == prev_v:
                raise SignalError(f"no-op event at {t}")
            prev_t, prev_v = t, v
        object.__setattr__(self, "events", events)
        object.__setattr__(self, "_times", tuple(t for t, _ in events))

    @property
    def times(self) -> tuple[Time, ...]:
        return self._times

    @property
    def final(self) -> Bits:
        """Value on ``[t_last, oo)``."""
        return self.events[-1][1] if self.events else self.initial

    def __call__(self, t: TimeLike) -> Bits:
        return self.at(t)

    def at(self, t: TimeLike) -> Bits:
        i = bisect.bisect_right(self._times, to_time(t))
        return self.events[i - 1][1] if i else self.initial

    def left(self, t: TimeLike) -> Bits:
        """Left limit ``x(t-0)``: the pre-switch value at an event time."""
        i = bisect.bisect_left(self._times, to_time(t))
        return self.events[i - 1][1] if i else self.initial

    def shift(self, d: TimeLike) -> "Signal":
        """The signal ``t -> self(t - d)``."""
        d = to_time(d)
        if d == 0:
            return self
        return Signal(self.width, self.initial, tuple((t + d, v) for t, v in self.events))

    def channel(self, i: int) -> "Signal":
        return self.project([i])

    def project(self, indices: Sequence[int]) -> "Signal":
        """Signal of the selected coordinates, in the given order."""
        pick = lambda v: tuple(v[i] for i in indices)  # noqa: E731
        return normalize(pick(self.initial), [(t, pick(v)) for t, v in self.events])

    def truncate(self, t: TimeLike) -> "Signal":
        """Keep only events at or before *t* (the value then holds forever)."""
        t = to_time(t)
        return Signal(self.width, self.initial, tuple(e for e in self.events if e[0] <= t))

    def agrees_until(self, other: "Signal", t: TimeLike) -> bool:
        """True iff both signals coincide on ``(-oo, t]``."""
        return self.width == other.width and self.truncate(t) == other.truncate(t)

    def intervals(self):
        """Yield ``(start, end, value)`` with ``start=-INF`` for the initial piece."""
        start, value = -INF, self.initial
        for t, v in self.events:
            yield start, t, value
            start, value = t, v
        yield start, INF, value


def normalize(initial: Iterable[int], events: Iterable[tuple[TimeLike, Iterable[int]]]) -> Signal:
    """Sort *events*, drop switches to the value already in force.

    Two events at the same instant are ambiguous and rejected.
    """
    initial = tuple(int(b) for b in initial)
    width = len(initial)
    raw = sorted(((to_time(t), _bits(v, width)) for t, v in events), key=lambda e: e[0])
    for (t0, _), (t1, _) in zip(raw, raw[1:]):
        if t0 == t1:
            raise SignalError(f"two events at time {t0}")
    kept = []
    current = _bits(initial, width)
    for t, v in raw:
        if v != current:
            kept.append((t, v))
            current = v
    return Signal(width, initial, tuple(kept))


def constant(value: Iterable[int]) -> Signal:
    value = tuple(value)
    return Signal(len(value), value)


def characteristic(a: TimeLike, b=INF) -> Signal:
    """Indicator of ``[a, b)`` as a one-bit signal; ``b`` may be ``INF``."""
    a, b = to_time(a), to_end(b)
    if not a < b:
        raise SignalError(f"empty interval [{a}, {b})")
    events = [(a, (1,))]
    if b != INF:
        events.append((b, (0,)))
    return Signal(1, (0,), tuple(events))


def stack(*signals: Signal) -> Signal:
    """Concatenate the coordinates of several signals into one."""
    if not signals:
        raise SignalError("nothing to stack")
    times = sorted({t for s in signals for t in s.times})
    initial = sum((s.initial for s in signals), ())
    return normalize(initial, [(t, sum((s.at(t) for s in signals), ())) for t in times])


def format_time(t) -> str:
    """Exact text form: decimal when the denominator is ``2**a * 5**b``, else ``num/den``."""
    if t == INF:
        return "inf"
    t = to_time(t)
    den = t.denominator
    twos = fives = 0
    while den % 2 == 0:
        den //= 2
        twos += 1
    while den % 5 == 0:
        den //= 5
        fives += 1
    if den != 1:
        return f"{t.numerator}/{t.denominator}"
    if t.denominator == 1:
        return str(t.numerator)
    places = max(twos, fives)
    scaled = abs(t.numerator) * (10**places // t.denominator)
    digits = str(scaled).rjust(places + 1, "0")
    sign = "-" if t < 0 else ""
    return f"{sign}{digits[:-places]}.{digits[-places:]}"


def eval_at(s: Signal, t: TimeLike) -> Bits:
    return s.at(t)


def eval_left(s: Signal, t: TimeLike) -> Bits:
    return s.left(t)


def initial_value(s: Signal) -> Bits:
    return s.initial


def shift(s: Signal, d: TimeLike) -> Signal:
    return s.shift(d)
