"""Networks of ideal rotary elements joined by wires with positive delay.

Each RE reacts instantly; a wire delivers every switch of its source
``delay`` time units later.  Because every delay is positive, events can be
processed in strictly increasing time order and the result is unique.
"""

from __future__ import annotations

import heapq
import itertools
from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

from .admissible import ZERO, AdmissibilityError, validate_membership
from .rotary import INITIAL_STATES, STATE_NAMES, ReTrace, step_equations
from .timeline import INF, Bits, Signal, TimeLike, format_time, normalize, to_end, to_time


class NetlistError(ValueError):
    """Structurally invalid netlist (unknown RE, double driver, non-positive delay, ...)."""


class CollisionError(ValueError):
    """Bullets met at an RE's inputs, so its input left the admissible set."""

    def __init__(self, re_id: str, time, condition: str, message: str):
        self.re_id = re_id
        self.time = time
        self.condition = condition
        super().__init__(f"RE {re_id!r} at t={format_time(time)} [{condition}]: {message}")


@dataclass(frozen=True)
class Port:
    re: str
    channel: int


@dataclass(frozen=True)
class Wire:
    source: Port
    target: Union[Port, str]  # a str names an external output
    delay: object


@dataclass(frozen=True)
class ExternalInput:
    name: str
    target: Port
    pulses: tuple  # (start, end) pairs; end may be INF


@dataclass
class Netlist:
    res: dict = field(default_factory=dict)  # id -> initial state
    inputs: list = field(default_factory=list)
    wires: list = field(default_factory=list)

    def validate(self, horizon=None) -> None:
        for re_id, mu in self.res.items():
            if tuple(mu) not in INITIAL_STATES:
                raise NetlistError(f"RE {re_id!r}: illegal initial state {mu}")
        drivers, consumers, outputs = {}, {}, set()

        def port_ok(p: Port, what: str):
            if p.re not in self.res:
                raise NetlistError(f"{what} refers to unknown RE {p.re!r}")
            if p.channel not in (1, 2, 3, 4):
                raise NetlistError(f"{what}: channel {p.channel} not in 1..4")

        names = set()
        for ext in self.inputs:
            if ext.name in names:
                raise NetlistError(f"duplicate external input {ext.name!r}")
            names.add(ext.name)
            port_ok(ext.target, f"input {ext.name!r}")
            if ext.target in drivers:
                raise NetlistError(f"{ext.target} has two drivers")
            drivers[ext.target] = ext.name
            last_end = None
            for i, (start, end) in enumerate(ext.pulses):
                if not start < end:
                    raise NetlistError(f"input {ext.name!r} pulse {i}: start >= end")
                if last_end is not None and not last_end < start:
                    raise NetlistError(f"input {ext.name!r} pulse {i} overlaps or touches the previous one")
                if last_end == INF:
                    raise NetlistError(f"input {ext.name!r}: only the last pulse may be unbounded")
                if horizon is not None and (start > horizon or (end != INF and end > horizon)):
                    raise NetlistError(f"input {ext.name!r} pulse {i} extends beyond the horizon")
                last_end = end
        for w in self.wires:
            port_ok(w.source, "wire source")
            if not w.delay > 0:
                raise NetlistError(f"wire from {w.source}: delay must be positive, got {format_time(w.delay)}")
            if w.source in consumers:
                raise NetlistError(f"{w.source} has two consumers")
            consumers[w.source] = w
            if isinstance(w.target, Port):
                port_ok(w.target, "wire target")
                if w.target in drivers:
                    raise NetlistError(f"{w.target} has two drivers")
                drivers[w.target] = w
            else:
                if w.target in outputs:
                    raise NetlistError(f"external output {w.target!r} has two drivers")
                outputs.add(w.target)


@dataclass
class CircuitResult:
    traces: dict  # re id -> ReTrace
    outputs: dict  # external output name -> Signal (1 bit)


def _set(bits: Bits, channel: int, value: int) -> Bits:
    out = list(bits)
    out[channel - 1] = value
    return tuple(out)


def simulate(net: Netlist, horizon: TimeLike, order: Optional[Sequence[str]] = None) -> CircuitResult:
    """Event-driven simulation on ``(-oo, horizon]``.

    ``order`` fixes the processing order of REs that switch at the same
    instant (default: sorted ids); the result does not depend on it.
    Raises :class:`CollisionError` as soon as an RE sees an inadmissible input.
    """
    horizon = to_time(horizon)
    net.validate(horizon)
    rank = {re_id: i for i, re_id in enumerate(order if order is not None else sorted(net.res))}
    if set(rank) != set(net.res):
        raise NetlistError("processing order must list every RE exactly once")

    x = {re_id: tuple(mu) for re_id, mu in net.res.items()}
    u = {re_id: ZERO for re_id in net.res}
    x_events = {re_id: [] for re_id in net.res}
    u_events = {re_id: [] for re_id in net.res}
    out_names = sorted({w.target for w in net.wires if not isinstance(w.target, Port)})
    out_events = {name: [] for name in out_names}
    consumer = {w.source: w for w in net.wires}

    seq = itertools.count()
    queue = []
    for ext in net.inputs:
        for start, end in ext.pulses:
            heapq.heappush(queue, (start, next(seq), ext.target, 1))
            if end != INF:
                heapq.heappush(queue, (end, next(seq), ext.target, 0))

    while queue and queue[0][0] <= horizon:
        t = queue[0][0]
        pending = {}
        while queue and queue[0][0] == t:
            _, _, port, value = heapq.heappop(queue)
            pending.setdefault(port.re, []).append((port.channel, value))
        for re_id in sorted(pending, key=rank.__getitem__):
            u_prev = u[re_id]
            u_now = u_prev
            for channel, value in pending[re_id]:
                u_now = _set(u_now, channel, value)
            if u_now == u_prev:
                continue
            if sum(u_now) > 1:
                raise CollisionError(re_id, t, "fm1", f"two bullets at once, inputs {u_now}")
            rises = [i + 1 for i in range(4) if u_now[i] and not u_prev[i]]
            falls = [i + 1 for i in range(4) if u_prev[i] and not u_now[i]]
            if rises and falls:
                raise CollisionError(
                    re_id, t, "fm2", f"input {falls[0]} falls while input {rises[0]} rises (no zero gap)"
                )
            x_prev = x[re_id]
            x_now = step_equations(x_prev, u_prev, u_now)
            u[re_id], x[re_id] = u_now, x_now
            u_events[re_id].append((t, u_now))
            if x_now != x_prev:
                x_events[re_id].append((t, x_now))
            for ch in range(1, 5):
                if x_now[ch] == x_prev[ch]:
                    continue
                w = consumer.get(Port(re_id, ch))
                if w is None:
                    continue
                if isinstance(w.target, Port):
                    heapq.heappush(queue, (t + w.delay, next(seq), w.target, x_now[ch]))
                elif t + w.delay <= horizon:
                    out_events[w.target].append((t + w.delay, (x_now[ch],)))

    traces = {}
    for re_id, mu in net.res.items():
        u_signal = Signal(4, ZERO, tuple(u_events[re_id]))
        try:
            applied = validate_membership(u_signal)
        except AdmissibilityError as exc:  # pragma: no cover - the per-event checks above come first
            raise CollisionError(re_id, exc.time, exc.condition, str(exc)) from exc
        traces[re_id] = ReTrace(applied, tuple(mu), normalize(mu, x_events[re_id]))
    outputs = {name: normalize((0,), ev) for name, ev in out_events.items()}
    return CircuitResult(traces, outputs)


def netlist_from_json(doc: dict) -> tuple[Netlist, Optional[object]]:
    """Build a :class:`Netlist` from a schema-checked document; returns it with the document's horizon."""
    def port(p):
        return Port(p["re"], p["channel"])

    net = Netlist()
    for r in doc.get("res", []):
        if r["id"] in net.res:
            raise NetlistError(f"duplicate RE id {r['id']!r}")
        net.res[r["id"]] = STATE_NAMES[r["initial_state"]]
    for ext in doc.get("inputs", []):
        pulses = tuple((to_time(p["start"]), to_end(p["end"])) for p in ext["pulses"])
        net.inputs.append(ExternalInput(ext["name"], port(ext["target"]), pulses))
    for w in doc.get("wires", []):
        target = w["to"]["output"] if "output" in w["to"] else port(w["to"])
        net.wires.append(Wire(port(w["from"]), target, to_time(w["delay"])))
    horizon = to_time(doc["horizon"]) if "horizon" in doc else None
    return net, horizon
