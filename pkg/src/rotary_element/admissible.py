"""Admissible RE inputs: one-hot pulses separated by all-zero gaps."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .timeline import INF, Bits, Signal, SignalError, TimeLike, format_time, to_end, to_time

ZERO: Bits = (0, 0, 0, 0)
ONE_HOT: tuple[Bits, ...] = ((1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1))
#: The letters an RE input may carry: no bullet, or one bullet on one channel.
LETTERS: tuple[Bits, ...] = (ZERO,) + ONE_HOT


class AdmissibilityError(ValueError):
    """An input (or pulse list) outside the admissible set.

    ``condition`` is one of ``"initial"``, ``"fm1"``, ``"fm2"``, ``"gap"``,
    ``"domain"`` or ``"format"``; ``time`` is the witness instant if any.
    """

    def __init__(self, condition: str, time=None, message: str = ""):
        self.condition = condition
        self.time = time
        where = f" at t={format_time(time)}" if time is not None else ""
        super().__init__(f"[{condition}]{where} {message}".rstrip())


def letter(value: Iterable[int]) -> Bits:
    bits = tuple(int(b) for b in value)
    if bits not in LETTERS:
        raise AdmissibilityError("domain", message=f"{bits} carries more than one bullet or is not 4 bits wide")
    return bits


def channel_letter(channel: int) -> Bits:
    """The one-hot letter for input channel 1..4."""
    if channel not in (1, 2, 3, 4):
        raise AdmissibilityError("domain", message=f"channel {channel} not in 1..4")
    return ONE_HOT[channel - 1]


def letter_channel(value: Bits) -> int:
    """Inverse of :func:`channel_letter`; 0 for the zero letter."""
    return value.index(1) + 1 if any(value) else 0


@dataclass(frozen=True)
class Pulse:
    letter: Bits
    start: object
    end: object = INF

    @property
    def bounded(self) -> bool:
        return self.end != INF


@dataclass(frozen=True)
class AdmissibleInput:
    """Canonical member of the admissible input set.

    Never holds zero-letter pulses; consecutive pulses are separated by a
    nonempty gap; only the last pulse may run to infinity.
    """

    pulses: tuple[Pulse, ...] = ()

    def __len__(self):
        return len(self.pulses)

    @property
    def letters(self) -> tuple[Bits, ...]:
        return tuple(p.letter for p in self.pulses)

    def signal(self) -> Signal:
        events = []
        for p in self.pulses:
            events.append((p.start, p.letter))
            if p.bounded:
                events.append((p.end, ZERO))
        return Signal(4, ZERO, tuple(events))

    def __call__(self, t: TimeLike) -> Bits:
        return self.signal().at(t)

    def shift(self, d: TimeLike) -> "AdmissibleInput":
        return shift_input(self, d)


def build_input(pulses: Iterable[Sequence]) -> AdmissibleInput:
    """Validate ``(letter, start, end)`` triples and return the canonical input.

    ``end`` may be ``INF`` (or ``"inf"``) for the final pulse only.  Zero
    letters contribute nothing and are dropped, but still take part in the
    ordering checks.
    """
    items = []
    for raw in pulses:
        if isinstance(raw, Pulse):
            lam, start, end = raw.letter, raw.start, raw.end
        else:
            lam, start, end = raw
        try:
            items.append((letter(lam), to_time(start), to_end(end)))
        except SignalError as exc:
            raise AdmissibilityError("format", message=str(exc)) from exc
    for i, (lam, start, end) in enumerate(items):
        if not start < end:
            raise AdmissibilityError("format", start, f"pulse {i} has start >= end")
        if end == INF and i != len(items) - 1:
            raise AdmissibilityError("format", start, f"pulse {i} runs to infinity but is not the last")
    for i in range(1, len(items)):
        prev_end, start = items[i - 1][2], items[i][1]
        if start < prev_end:
            raise AdmissibilityError("fm1", start, f"pulse {i} overlaps pulse {i - 1}")
        if start == prev_end:
            raise AdmissibilityError("gap", start, f"pulse {i} touches pulse {i - 1} with no zero gap")
    return AdmissibleInput(tuple(Pulse(lam, s, e) for lam, s, e in items if lam != ZERO))


def letters_of(u: AdmissibleInput) -> list[tuple[Bits, object, object]]:
    """The pulse decomposition ``[(letter, start, end), ...]`` in time order."""
    return [(p.letter, p.start, p.end) for p in u.pulses]


def shift_input(u: AdmissibleInput, d: TimeLike) -> AdmissibleInput:
    d = to_time(d)
    return AdmissibleInput(tuple(Pulse(p.letter, p.start + d, p.end + d if p.bounded else INF) for p in u.pulses))


def first_violation(s: Signal) -> Optional[AdmissibilityError]:
    """Return the first broken admissibility condition of a 4-bit signal, or ``None``.

    Conditions are checked in time order; at one instant ``fm1`` (two channels
    high) precedes ``fm2`` (one channel falls as another rises).  On a signal
    a missing gap between different channels always shows up as ``fm2``; the
    ``gap`` tag is raised by :func:`build_input` for touching pulse lists.
    """
    if s.width != 4:
        return AdmissibilityError("format", message=f"input signals have 4 channels, got {s.width}")
    if s.initial != ZERO:
        return AdmissibilityError("initial", None, f"initial value {s.initial} is not zero")
    for t, now in s.events:
        before = s.left(t)
        if sum(now) > 1:
            return AdmissibilityError("fm1", t, f"channels {[i + 1 for i in range(4) if now[i]]} high together")
        rises = [i for i in range(4) if not before[i] and now[i]]
        falls = [i for i in range(4) if before[i] and not now[i]]
        if rises and falls:
            return AdmissibilityError(
                "fm2", t, f"channel {falls[0] + 1} falls while channel {rises[0] + 1} rises"
            )
    return None


def validate_membership(s: Signal) -> AdmissibleInput:
    """Recover the pulse form of *s* or raise :class:`AdmissibilityError`."""
    err = first_violation(s)
    if err is not None:
        raise err
    pulses = []
    events = list(s.events)
    i = 0
    while i < len(events):
        t, v = events[i]
        # after validation every event alternates: rise to a one-hot letter, fall to zero
        if i + 1 < len(events):
            pulses.append(Pulse(v, t, events[i + 1][0]))
        else:
            pulses.append(Pulse(v, t, INF))
        i += 2
    return AdmissibleInput(tuple(pulses))


def is_admissible(s: Signal) -> bool:
    return first_violation(s) is None
