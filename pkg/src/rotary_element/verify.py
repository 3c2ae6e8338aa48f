"""Executable checks of the ideal RE's stated properties.

:func:`run_suite` runs every check over an exhaustive family of pulse words
and, optionally, seeded random inputs, and returns one
:class:`TheoremVerdict` per property.  Failures are verdicts, never
exceptions.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from typing import Callable, Iterator, Optional

from .admissible import (
    LETTERS,
    ONE_HOT,
    ZERO,
    AdmissibleInput,
    Pulse,
    build_input,
    first_violation,
    letter_channel,
    shift_input,
    validate_membership,
)
from .formats import STATE_OF, pulses_to_json, signal_to_json
from .rotary import (
    INITIAL_STATES,
    ModelError,
    Step,
    compose_inv_f,
    eval_equations,
    f_mu_closed,
    letter_table,
    output_part,
    phi,
    phi_inv,
    phi_iter,
)
from .timeline import INF, Signal

VERIFIED = "verified-exhaustive"
SAMPLED = "verified-sampled"
WITNESS = "witness-found"
FALSIFIED = "FALSIFIED"

THEOREM_IDS = (
    "The62a",
    "The62b",
    "The62c",
    "The64",
    "The65",
    "The71a",
    "The71b",
    "The71c",
    "RemarkIdle",
    "RemarkNonSurjective",
    "RemarkComposeMismatch",
    "TimeInvariance",
    "NonAnticipation",
    "BulletConservation",
    "LetterInverse",
)

SHIFTS = (Fraction(-3), Fraction(1, 2), Fraction(7, 3), Fraction(10))


@dataclass
class TheoremVerdict:
    id: str
    status: str
    cases: int
    witness: Optional[dict] = None
    detail: str = ""
    wall_time: float = field(default=0.0, compare=False)

    def __post_init__(self):
        if self.status in (FALSIFIED, WITNESS) and self.witness is None:
            raise ValueError(f"{self.id}: status {self.status} needs a witness")

    def to_json(self) -> dict:
        doc = {"id": self.id, "status": self.status, "cases": self.cases}
        if self.detail:
            doc["detail"] = self.detail
        doc["witness"] = self.witness
        return doc


# --- input families ---------------------------------------------------------


def grid_input(channels, unbounded_last: bool = False) -> AdmissibleInput:
    """Pulses on the canonical grid: the k-th letter occupies ``[2k, 2k+1)``."""
    pulses = [(ONE_HOT[c - 1], 2 * k, 2 * k + 1) for k, c in enumerate(channels)]
    if unbounded_last and pulses:
        pulses[-1] = (pulses[-1][0], pulses[-1][1], INF)
    return build_input(pulses)


def family(depth: int) -> list[AdmissibleInput]:
    """All one-hot words of length 1..depth, each bounded and with an unbounded last pulse."""
    out = []
    for length in range(1, depth + 1):
        for word in product((1, 2, 3, 4), repeat=length):
            for unbounded in (False, True):
                out.append(grid_input(word, unbounded))
    return out


def _rand_time(rng: random.Random) -> Fraction:
    return Fraction(rng.randint(1, 12), rng.choice((1, 2, 3, 4, 5, 10)))


def random_input(rng: random.Random, max_pulses: int = 5) -> AdmissibleInput:
    n = rng.randint(0, max_pulses)
    t = Fraction(rng.randint(-10, 10), rng.choice((1, 2, 4, 5)))
    pulses = []
    for i in range(n):
        start = t
        end = start + _rand_time(rng)
        if i == n - 1 and rng.random() < 0.5:
            end = INF
        pulses.append((rng.choice(ONE_HOT), start, end))
        if end != INF:
            t = end + _rand_time(rng)
    return build_input(pulses)


def perturb(u: AdmissibleInput, rng: random.Random) -> AdmissibleInput:
    """A nearby input: one letter changed, one boundary moved, or one pulse dropped/added."""
    pulses = list(u.pulses)
    choice = rng.randrange(4) if pulses else 3
    if choice == 0:
        i = rng.randrange(len(pulses))
        others = [lam for lam in ONE_HOT if lam != pulses[i].letter]
        pulses[i] = Pulse(rng.choice(others), pulses[i].start, pulses[i].end)
    elif choice == 1:
        i = rng.randrange(len(pulses))
        p = pulses[i]
        if p.bounded:
            pulses[i] = Pulse(p.letter, p.start, p.start + (p.end - p.start) / 2)
        else:
            pulses[i] = Pulse(p.letter, p.start, p.start + 1)
    elif choice == 2:
        pulses.pop(rng.randrange(len(pulses)))
    else:
        tail = pulses[-1].end if pulses else Fraction(0)
        if tail == INF:
            p = pulses[-1]
            pulses[-1] = Pulse(p.letter, p.start, p.start + 1)
            tail = p.start + 1
        pulses.append(Pulse(rng.choice(ONE_HOT), tail + 1, tail + 2))
    return build_input(pulses)


def diverge_after(u: AdmissibleInput, t: Fraction) -> AdmissibleInput:
    """An input equal to *u* on ``(-oo, t]`` and different afterwards."""
    kept = []
    later = [p.letter for p in u.pulses if p.start > t]
    for p in u.pulses:
        if p.start > t:
            break
        if p.end > t:
            # the pulse holding at t: keep it through t, end it elsewhere
            end = p.start + 1 if not p.bounded else t + (p.end - t) / 2
            if end <= t:
                end = t + 1
            p = Pulse(p.letter, p.start, end)
        kept.append(p)
    tail = max([t] + [p.end for p in kept])
    avoid = {kept[-1].letter} if kept else set()
    avoid.update(later[:1])
    others = [lam for lam in ONE_HOT if lam not in avoid]
    kept.append(Pulse(others[0], tail + 1, tail + 2))
    return build_input(kept)


# --- mutation hook ----------------------------------------------------------


def _mutant(index: int, formula: Callable) -> Step:
    def step(mu, lam):
        out = list(phi(mu, lam))
        out[index] = formula(mu[0], *lam)
        return tuple(out)

    return step


#: Single-formula mutations of the forward transition map.
MUTATIONS: dict[str, Step] = {
    "bar-hold-drops-u3": _mutant(0, lambda m, l1, l2, l3, l4: ((1 - m) & (l2 | l4)) | (m & (1 - l1))),
    "bar-turn-u1-for-u2": _mutant(0, lambda m, l1, l2, l3, l4: ((1 - m) & (l1 | l4)) | (m & (1 - l1) & (1 - l3))),
    "out1-ignores-bar": _mutant(1, lambda m, l1, l2, l3, l4: l1 | l2),
    "out1-u3-for-u2": _mutant(1, lambda m, l1, l2, l3, l4: (1 - m) & (l1 | l3)),
    "out2-ignores-bar": _mutant(2, lambda m, l1, l2, l3, l4: l2 | l3),
    "out2-u4-for-u3": _mutant(2, lambda m, l1, l2, l3, l4: m & (l2 | l4)),
    "out3-bar-inverted": _mutant(3, lambda m, l1, l2, l3, l4: m & (l3 | l4)),
    "out3-drops-u4": _mutant(3, lambda m, l1, l2, l3, l4: (1 - m) & l3),
    "out4-bar-inverted": _mutant(4, lambda m, l1, l2, l3, l4: (1 - m) & (l4 | l1)),
    "out4-stuck-at-0": _mutant(4, lambda m, l1, l2, l3, l4: 0),
}


# --- counterexample searches -----------------------------------------------


def search_compose_mismatch(max_length: int = 2, step: Step = phi) -> Optional[dict]:
    """Smallest grid word whose backward-after-forward composition misses the input.

    Words are tried by length, then lexicographically by channel.  Returns
    ``None`` if no word up to *max_length* is a witness.
    """
    if max_length < 1:
        raise ValueError("max_length must be >= 1")
    for length in range(1, max_length + 1):
        for word in product((1, 2, 3, 4), repeat=length):
            u = grid_input(word)
            for c in compose_inv_f(u, step):
                if not c.recovers(u):
                    return {
                        "word": list(word),
                        "input": pulses_to_json(u),
                        "forward_initial": STATE_OF[c.forward.initial],
                        "backward_initial": STATE_OF[c.backward.initial],
                        "recovered": pulses_to_json(validate_membership(c.backward.outputs)),
                        "trace": signal_to_json(c.signal),
                    }
    return None


def _candidates(max_events: int, grid) -> Iterator[Signal]:
    """Signals in bar x admissible-outputs, ordered by event count, initial bar, times, values."""
    values = [(b,) + lam for lam in LETTERS for b in (0, 1)]
    values.sort()
    for n in range(0, max_events + 1):
        for bar in (0, 1):
            initial = (bar, 0, 0, 0, 0)
            for times in combinations(sorted(grid), n):
                for seq in product(values, repeat=n):
                    prev, ok = initial, True
                    for v in seq:
                        if v == prev:
                            ok = False
                            break
                        prev = v
                    if not ok:
                        continue
                    x = Signal(5, initial, tuple(zip(times, seq)))
                    if first_violation(x.project([1, 2, 3, 4])) is None:
                        yield x


def preimage_report(x: Signal, step: Step = phi) -> list[dict]:
    """Try both initial states against *x*; empty ``matches`` means no preimage.

    A preimage input must carry a bullet exactly when some output does, so
    only inputs with the output pulses' intervals and any one-hot letters
    are tried.
    """
    shape = validate_membership(x.project([1, 2, 3, 4]))
    report = []
    for mu in INITIAL_STATES:
        entry = {"initial_state": STATE_OF[mu], "tried": 0, "matches": []}
        if x.initial != mu:
            entry["reason"] = "initial value differs"
            report.append(entry)
            continue
        for letters in product(ONE_HOT, repeat=len(shape.pulses)):
            u = AdmissibleInput(tuple(Pulse(lam, p.start, p.end) for lam, p in zip(letters, shape.pulses)))
            entry["tried"] += 1
            if f_mu_closed(mu, u, step).state == x:
                entry["matches"].append(pulses_to_json(u))
        if not entry["matches"]:
            entry["reason"] = "no compatible input reproduces the trace"
        report.append(entry)
    return report


def search_non_surjective(max_events: int = 2, grid=(0, 1, 2), step: Step = phi) -> Optional[dict]:
    """Smallest bar-plus-admissible-outputs signal that no (initial state, input) pair produces."""
    if max_events < 1 or not grid:
        raise ValueError("bounds must be >= 1")
    grid = tuple(Fraction(g) for g in grid)
    for x in _candidates(max_events, grid):
        report = preimage_report(x, step)
        if not any(entry["matches"] for entry in report):
            return {"events": len(x.events), "trace": signal_to_json(x), "rejected": report}
    return None


# --- the suite --------------------------------------------------------------


def _witness(u: AdmissibleInput, mu=None, **extra) -> dict:
    doc = {"input": pulses_to_json(u)}
    if mu is not None:
        doc["initial_state"] = STATE_OF.get(tuple(mu), str(mu))
    doc.update(extra)
    return doc


class _Check:
    def __init__(self, tid: str):
        self.id = tid
        self.cases = 0
        self.sampled = False
        self.witness = None
        self.detail = ""

    def fail(self, witness: dict, detail: str) -> None:
        if self.witness is None:
            self.witness, self.detail = witness, detail

    def verdict(self) -> TheoremVerdict:
        if self.witness is not None:
            return TheoremVerdict(self.id, FALSIFIED, self.cases, self.witness, self.detail)
        return TheoremVerdict(self.id, SAMPLED if self.sampled else VERIFIED, self.cases)


def _fm_pointwise(s: Signal) -> Optional[tuple]:
    """Check both pointwise admissibility identities directly at every event and interior point."""
    points = []
    for (a, b, _) in s.intervals():
        if a != -INF:
            points.append(a)
    for t in points:
        now, before = s.at(t), s.left(t)
        for i in range(4):
            for j in range(4):
                if i == j:
                    continue
                if now[i] & now[j]:
                    return ("fm1", t)
                if (1 - before[i]) & now[i] & before[j] & (1 - now[j]):
                    return ("fm2", t)
    return None


def run_suite(depth: int = 3, samples: int = 0, seed: int = 0, step: Step = phi) -> list[TheoremVerdict]:
    """Run every check; deterministic for a given configuration."""
    if depth < 1 or samples < 0:
        raise ValueError("depth must be >= 1 and samples >= 0")
    inputs = family(depth)
    rng = random.Random(seed)
    randoms = [random_input(rng) for _ in range(samples)]
    verdicts = []

    def timed(fn):
        start = time.perf_counter()
        v = fn()
        v.wall_time = time.perf_counter() - start
        verdicts.append(v)

    def closed(mu, u):
        return f_mu_closed(mu, u, step)

    # admissible set
    def the62a():
        c = _Check("The62a")
        for u in inputs + randoms:
            c.cases += 1
            if u.signal().initial != ZERO:
                c.fail(_witness(u), "nonzero initial value")
        c.sampled = bool(randoms)
        return c.verdict()

    def the62b():
        c = _Check("The62b")
        for u in inputs + randoms:
            c.cases += 1
            hit = _fm_pointwise(u.signal())
            if hit:
                c.fail(_witness(u, time=str(hit[1])), f"{hit[0]} violated")
        c.sampled = bool(randoms)
        return c.verdict()

    def the62c():
        c = _Check("The62c")
        local = random.Random(seed + 1)
        for u in inputs + randoms:
            shifts = list(SHIFTS) + ([_rand_time(local) - 6] if randoms else [])
            for d in shifts:
                c.cases += 1
                moved = u.signal().shift(d)
                err = first_violation(moved)
                if err is not None or validate_membership(moved) != shift_input(u, d):
                    c.fail(_witness(u, shift=str(d)), "shifted input is not admissible")
        c.sampled = bool(randoms)
        return c.verdict()

    traces = {}

    def the64():
        c = _Check("The64")
        for u in inputs:
            for mu in INITIAL_STATES:
                c.cases += 1
                x = closed(mu, u)
                traces[(u, mu)] = x
                try:
                    ref = eval_equations(mu, u)
                except ModelError as exc:
                    c.fail(_witness(u, mu), str(exc))
                    continue
                if x.state != ref.state:
                    c.fail(
                        _witness(u, mu, closed=signal_to_json(x.state), equations=signal_to_json(ref.state)),
                        "closed form differs from the equations",
                    )
        return c.verdict()

    def the65():
        c = _Check("The65")
        for u in inputs + randoms:
            for mu in INITIAL_STATES:
                c.cases += 1
                x = traces.get((u, mu)) or closed(mu, u)
                try:
                    output_part(x)
                except ModelError as exc:
                    c.fail(_witness(u, mu, trace=signal_to_json(x.state)), str(exc))
        c.sampled = bool(randoms)
        return c.verdict()

    def the71a():
        c = _Check("The71a")
        for u in inputs:
            c.cases += 1
            a, b = (traces.get((u, mu)) or closed(mu, u) for mu in INITIAL_STATES)
            if a.state == b.state:
                c.fail(_witness(u), "both initial states give the same trace")
        return c.verdict()

    def the71b():
        c = _Check("The71b")
        for mu in INITIAL_STATES:
            seen = {}
            for u in inputs:
                x = traces.get((u, mu)) or closed(mu, u)
                c.cases += len(seen)
                other = seen.setdefault(x.state, u)
                if other != u:
                    c.fail(_witness(u, mu, other=pulses_to_json(other)), "two inputs give one trace")
        local = random.Random(seed + 2)
        for u in randoms:
            v = perturb(u, local)
            if v == u:
                continue
            for mu in INITIAL_STATES:
                c.cases += 1
                if closed(mu, u).state == closed(mu, v).state:
                    c.fail(_witness(u, mu, other=pulses_to_json(v)), "two inputs give one trace")
        c.sampled = bool(randoms)
        return c.verdict()

    def the71c():
        c = _Check("The71c")
        owner = {}
        for u in inputs:
            for mu in INITIAL_STATES:
                x = traces.get((u, mu)) or closed(mu, u)
                c.cases += 1
                other = owner.setdefault(x.state, u)
                if other != u:
                    c.fail(_witness(u, other=pulses_to_json(other)), "possible-state sets intersect")
        return c.verdict()

    def idle():
        c = _Check("RemarkIdle")
        for mu in INITIAL_STATES:
            c.cases += 1
            if phi_iter(mu, [ZERO], step) != mu:
                c.fail({"initial_state": STATE_OF[mu], "word": [0]}, "zero letter moves the state")
            for lam, lam2 in product(LETTERS, repeat=2):
                c.cases += 1
                if phi_iter(mu, [lam, ZERO, lam2], step) != phi_iter(mu, [lam, lam2], step):
                    word = [letter_channel(lam), 0, letter_channel(lam2)]
                    c.fail({"initial_state": STATE_OF[mu], "word": word}, "idle letter is not neutral")
        return c.verdict()

    def non_surjective():
        try:
            found = search_non_surjective(2, (0, 1, 2), step)
        except ModelError as exc:
            return TheoremVerdict("RemarkNonSurjective", FALSIFIED, 0, {"error": str(exc)}, "search broke down")
        if found is None:
            return TheoremVerdict(
                "RemarkNonSurjective", FALSIFIED, 0, {"searched": "<= 2 events on grid 0,1,2"},
                "every candidate has a preimage",
            )
        return TheoremVerdict("RemarkNonSurjective", WITNESS, 1, found)

    def compose():
        try:
            found = search_compose_mismatch(2, step)
        except ModelError as exc:
            return TheoremVerdict("RemarkComposeMismatch", FALSIFIED, 0, {"error": str(exc)}, "search broke down")
        if found is None:
            return TheoremVerdict(
                "RemarkComposeMismatch", FALSIFIED, 0, {"searched": "words of length <= 2"},
                "every composition recovers its input",
            )
        return TheoremVerdict("RemarkComposeMismatch", WITNESS, 1, found)

    def time_invariance():
        c = _Check("TimeInvariance")
        local = random.Random(seed + 3)
        cases = [(u, d) for u in inputs for d in SHIFTS]
        cases += [(u, _rand_time(local) - 6) for u in randoms]
        for u, d in cases:
            for mu in INITIAL_STATES:
                c.cases += 1
                if closed(mu, shift_input(u, d)).state != closed(mu, u).state.shift(d):
                    c.fail(_witness(u, mu, shift=str(d)), "shifting the input does not shift the state")
        c.sampled = bool(randoms)
        return c.verdict()

    def non_anticipation():
        c = _Check("NonAnticipation")
        local = random.Random(seed + 4)
        cases = [(u, t) for u in inputs for t in u.signal().times]
        for u in randoms:
            times = u.signal().times
            if times and local.random() < 0.5:
                cases.append((u, local.choice(times)))
            else:
                cases.append((u, _rand_time(local) - 6))
        for u, t in cases:
            v = diverge_after(u, t)
            if not u.signal().agrees_until(v.signal(), t):  # pragma: no cover - construction guarantees it
                raise AssertionError("diverge_after broke agreement")
            for mu in INITIAL_STATES:
                c.cases += 1
                if not closed(mu, u).state.agrees_until(closed(mu, v).state, t):
                    c.fail(_witness(u, mu, other=pulses_to_json(v), time=str(t)), "state depends on future input")
        c.sampled = bool(randoms)
        return c.verdict()

    def conservation():
        c = _Check("BulletConservation")
        for m, lam in letter_table():
            c.cases += 1
            out = step((m, 0, 0, 0, 0), lam)[1:]
            if sum(out) > 1 or max(out) != max(lam):
                c.fail({"bar": m, "letter": letter_channel(lam)}, f"outputs {out} for letter {lam}")
        return c.verdict()

    def letter_inverse():
        c = _Check("LetterInverse")
        for m, lam in letter_table():
            if lam == ZERO:
                continue
            c.cases += 1
            nu = step((m, 0, 0, 0, 0), lam)
            back = phi_inv((nu[0], 0, 0, 0, 0), nu[1:])
            if back != (m,) + lam:
                c.fail({"bar": m, "letter": letter_channel(lam)}, f"backward step gives {back}")
        return c.verdict()

    for check in (
        the62a, the62b, the62c, the64, the65, the71a, the71b, the71c, idle,
        non_surjective, compose, time_invariance, non_anticipation, conservation, letter_inverse,
    ):
        timed(check)
    order = {tid: i for i, tid in enumerate(THEOREM_IDS)}
    verdicts.sort(key=lambda v: order[v.id])
    return verdicts


def report(verdicts: list[TheoremVerdict], depth: int, samples: int, seed: int, mutation=None) -> dict:
    return {
        "version": 1,
        "kind": "verify-report",
        "config": {"depth": depth, "samples": samples, "seed": seed, "mutation": mutation},
        "verdicts": [v.to_json() for v in verdicts],
        "timings": {v.id: round(v.wall_time, 6) for v in verdicts},
    }


def falsified(verdicts: list[TheoremVerdict]) -> list[TheoremVerdict]:
    return [v for v in verdicts if v.status == FALSIFIED]
