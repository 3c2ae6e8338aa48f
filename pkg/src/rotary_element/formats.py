"""JSON documents: trace inputs, simulation traces, netlists and verify reports.

Schemas live in the ``schemas`` package directory and are versioned by the
``version`` field of each document.
"""

from __future__ import annotations

import json
from functools import lru_cache
from importlib import resources
from typing import Any

import jsonschema

from .admissible import AdmissibleInput, build_input, channel_letter, letter_channel
from .timeline import Signal, format_time, to_end, to_time
from .rotary import STATE_NAMES

VERSION = 1
STATE_OF = {v: k for k, v in STATE_NAMES.items()}


class SchemaError(ValueError):
    """A document does not match its schema; ``field`` is a JSON path."""

    def __init__(self, field: str, message: str):
        self.field = field
        super().__init__(f"{field}: {message}")


@lru_cache(maxsize=None)
def schema(name: str) -> dict:
    text = resources.files("rotary_element").joinpath("schemas", f"{name}.schema.json").read_text()
    return json.loads(text)


def check(doc: Any, name: str) -> None:
    validator = jsonschema.Draft202012Validator(schema(name))
    errors = sorted(validator.iter_errors(doc), key=lambda e: list(e.absolute_path))
    if errors:
        err = errors[0]
        path = "$" + "".join(f"[{p}]" if isinstance(p, int) else f".{p}" for p in err.absolute_path)
        raise SchemaError(path, err.message)


def dumps(doc: Any) -> str:
    return json.dumps(doc, indent=2) + "\n"


def signal_to_json(s: Signal) -> dict:
    """Single-bit signals serialize values as ints, wider ones as bit strings."""
    enc = (lambda v: v[0]) if s.width == 1 else (lambda v: "".join(map(str, v)))
    return {"initial": enc(s.initial), "events": [[format_time(t), enc(v)] for t, v in s.events]}


def pulses_to_json(u: AdmissibleInput) -> list[dict]:
    return [
        {"channel": letter_channel(p.letter), "start": format_time(p.start), "end": format_time(p.end)}
        for p in u.pulses
    ]


def input_from_json(pulses: list[dict], where: str = "$.pulses") -> AdmissibleInput:
    triples = []
    for i, p in enumerate(pulses):
        try:
            triples.append((channel_letter(p["channel"]), to_time(p["start"]), to_end(p["end"])))
        except ValueError as exc:
            raise SchemaError(f"{where}[{i}]", str(exc)) from exc
    return build_input(triples)


def trace_document(initial_state: str, u: AdmissibleInput) -> dict:
    return {"version": VERSION, "initial_state": initial_state, "pulses": pulses_to_json(u)}


def read_trace_document(doc: Any) -> tuple[str, AdmissibleInput]:
    """Parse an input document, or the ``input`` echoed inside a trace output."""
    if isinstance(doc, dict) and doc.get("kind") == "trace":
        doc = doc.get("input")
        check(doc, "trace-input")
    else:
        check(doc, "trace-input")
    return doc["initial_state"], input_from_json(doc["pulses"])


def trace_output(mode: str, initial_state: str, u: AdmissibleInput, state: Signal) -> dict:
    signals = {f"x{i}": signal_to_json(state.channel(i)) for i in range(5)}
    return {
        "version": VERSION,
        "kind": "trace",
        "mode": mode,
        "initial_state": initial_state,
        "signals": signals,
        "input": trace_document(initial_state, u),
    }

