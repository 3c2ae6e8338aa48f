"""Command-line front end.

Exit codes: 0 ok, 1 malformed document or netlist, 2 inadmissible input or
bullet collision, 3 a checked property was falsified.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import circuit, formats, verify
from .admissible import AdmissibilityError
from .rotary import STATE_NAMES, f_inv_mu, f_mu_closed
from .timeline import SignalError, format_time, to_time
from .waveform import vcd_text

EXIT_OK, EXIT_SCHEMA, EXIT_ADMISSIBILITY, EXIT_FALSIFIED = 0, 1, 2, 3


def _load_json(path: str):
    text = sys.stdin.read() if path == "-" else Path(path).read_text()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise formats.SchemaError("$", f"invalid JSON: {exc}") from exc


def _emit(text: str, out) -> None:
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def _fail(code: int, message: str) -> int:
    print(f"error: {message}", file=sys.stderr)
    return code


def _re_signals(scope: str, u_signal, state):
    named = [(scope, f"u{i + 1}", u_signal.channel(i)) for i in range(4)]
    named += [(scope, f"x{i}", state.channel(i)) for i in range(5)]
    return named


def cmd_simulate(args) -> int:
    try:
        doc = _load_json(args.input)
        state_name, u = formats.read_trace_document(doc)
    except formats.SchemaError as exc:
        return _fail(EXIT_SCHEMA, f"schema violation at {exc}")
    except AdmissibilityError as exc:
        if exc.condition in ("format", "domain"):
            return _fail(EXIT_SCHEMA, f"schema violation: {exc}")
        return _fail(EXIT_ADMISSIBILITY, f"input is not admissible (The62 {exc.condition}): {exc}")
    mu = STATE_NAMES[state_name]
    trace = f_inv_mu(mu, u) if args.inverse else f_mu_closed(mu, u)
    if args.format == "vcd":
        text = vcd_text(_re_signals("re", u.signal(), trace.state))
    else:
        mode = "inverse" if args.inverse else "forward"
        text = formats.dumps(formats.trace_output(mode, state_name, u, trace.state))
    _emit(text, args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    if args.depth < 1 or args.samples < 0:
        return _fail(EXIT_SCHEMA, "--depth must be >= 1 and --samples >= 0")
    step = verify.MUTATIONS[args.mutation] if args.mutation else verify.phi
    verdicts = verify.run_suite(args.depth, args.samples, args.seed, step)
    doc = verify.report(verdicts, args.depth, args.samples, args.seed, args.mutation)
    if args.no_timings:
        del doc["timings"]
    _emit(formats.dumps(doc), args.out)
    for v in verdicts:
        print(f"{v.id:24s} {v.status:20s} {v.cases:7d} {v.detail}".rstrip(), file=sys.stderr)
    return EXIT_FALSIFIED if verify.falsified(verdicts) else EXIT_OK


def circuit_output(result: circuit.CircuitResult, horizon) -> dict:
    res = {}
    for re_id in sorted(result.traces):
        trace = result.traces[re_id]
        res[re_id] = {
            "initial_state": formats.STATE_OF[trace.initial],
            "input": formats.pulses_to_json(trace.input),
            "signals": {f"x{i}": formats.signal_to_json(trace.state.channel(i)) for i in range(5)},
        }
    outputs = {name: formats.signal_to_json(s) for name, s in sorted(result.outputs.items())}
    return {"version": 1, "kind": "circuit", "horizon": format_time(horizon), "res": res, "outputs": outputs}


def cmd_circuit(args) -> int:
    try:
        doc = _load_json(args.netlist)
        formats.check(doc, "netlist")
        net, horizon = circuit.netlist_from_json(doc)
        if args.horizon is not None:
            horizon = to_time(args.horizon)
        if horizon is None:
            raise circuit.NetlistError("no horizon: pass --horizon or set it in the netlist")
        result = circuit.simulate(net, horizon)
    except (formats.SchemaError, circuit.NetlistError, SignalError) as exc:
        return _fail(EXIT_SCHEMA, str(exc))
    except circuit.CollisionError as exc:
        return _fail(EXIT_ADMISSIBILITY, f"bullet collision: {exc}")
    if args.format == "vcd":
        named = []
        for re_id in sorted(result.traces):
            trace = result.traces[re_id]
            named += _re_signals(re_id, trace.input.signal(), trace.state)
        named += [("outputs", name, s) for name, s in sorted(result.outputs.items())]
        text = vcd_text(named)
    else:
        text = formats.dumps(circuit_output(result, horizon))
    _emit(text, args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rotary-element", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="simulate one RE on an input document")
    p.add_argument("input", help="input document (JSON), or - for stdin")
    p.add_argument("--inverse", action="store_true", help="run the backward system instead")
    p.add_argument("--format", choices=("json", "vcd"), default="json")
    p.add_argument("--out", help="output path (default stdout)")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("verify", help="run the property suite")
    p.add_argument("--depth", type=int, default=3, help="longest pulse word enumerated")
    p.add_argument("--samples", type=int, default=0, help="random inputs per randomized check")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="report path (default stdout)")
    p.add_argument("--mutation", choices=sorted(verify.MUTATIONS), help="replace the transition map by a mutant")
    p.add_argument("--no-timings", action="store_true", help="omit wall times so reports diff cleanly")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("circuit", help="simulate a network of REs")
    p.add_argument("netlist", help="netlist document (JSON), or - for stdin")
    p.add_argument("--horizon", help="simulate up to this time (overrides the netlist)")
    p.add_argument("--format", choices=("json", "vcd"), default="json")
    p.add_argument("--out", help="output path (default stdout)")
    p.set_defaults(func=cmd_circuit)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
