"""Exit criteria; ``pytest`` prints one PASS/FAIL line per criterion at the end."""

import io
import itertools
import json
import random
import time
from fractions import Fraction as F
from pathlib import Path

import pytest
from vcd.reader import TokenKind, tokenize

from rotary_element import verify
from rotary_element.admissible import ONE_HOT, ZERO, AdmissibilityError, build_input, first_violation, shift_input
from rotary_element.circuit import netlist_from_json, simulate
from rotary_element.cli import main
from rotary_element.rotary import (
    HORIZONTAL,
    INITIAL_STATES,
    eval_equations,
    f_mu_closed,
    letter_table,
    output_part,
    phi,
    phi_inv,
)
from rotary_element.timeline import format_time, normalize
from rotary_element.waveform import TickMap, vcd_text

DEMOS = Path(__file__).resolve().parent.parent / "demos"
U1, U2, U3, U4 = ONE_HOT


def criterion(n, text):
    return pytest.mark.criterion(n, text)


@pytest.fixture(scope="module")
def family_traces():
    inputs = verify.family(3)
    return {(u, mu): f_mu_closed(mu, u) for u in inputs for mu in INITIAL_STATES}


def _cli_json(argv, capsys):
    code = main([str(a) for a in argv])
    return code, capsys.readouterr().out


@criterion(1, "figure fidelity")
def test_figures(capsys):
    start = time.perf_counter()
    code, out = _cli_json(["simulate", DEMOS / "fig1.json"], capsys)
    sig = json.loads(out)["signals"]
    assert code == 0
    assert sig["x0"] == {"initial": 0, "events": []}
    assert sig["x1"] == {"initial": 0, "events": [["0", 1], ["1", 0]]}
    assert all(sig[k]["events"] == [] for k in ("x2", "x3", "x4"))
    code, out = _cli_json(["simulate", DEMOS / "fig2.json"], capsys)
    sig = json.loads(out)["signals"]
    assert code == 0
    assert sig["x0"] == {"initial": 1, "events": [["0", 0]]}
    assert sig["x4"] == {"initial": 0, "events": [["0", 1], ["1", 0]]}
    assert all(sig[k]["events"] == [] for k in ("x1", "x2", "x3"))
    assert time.perf_counter() - start < 1


@criterion(2, "closed form equals the RE equations on 336 cases")
def test_oracle_equivalence(family_traces):
    start = time.perf_counter()
    assert len(family_traces) == (4 + 4**2 + 4**3) * 2 * 2 == 336
    for (u, mu), x in family_traces.items():
        assert x.state == eval_equations(mu, u).state
    assert time.perf_counter() - start < 10


@criterion(3, "truth tables: bullet conservation (10) and letter round trip (8)")
def test_truth_tables():
    start = time.perf_counter()
    rows = letter_table()
    assert len(rows) == 10
    for m, lam in rows:
        out = phi((m, 0, 0, 0, 0), lam)[1:]
        assert max(out) == max(lam) and sum(out) <= 1
    one_hot = [(m, lam) for m, lam in rows if lam != ZERO]
    assert len(one_hot) == 8
    for m, lam in one_hot:
        nu = phi((m, 0, 0, 0, 0), lam)
        assert phi_inv((nu[0], 0, 0, 0, 0), nu[1:]) == (m,) + lam
    assert time.perf_counter() - start < 1


def _violations():
    """20 hand-built inadmissible cases, 5 per condition."""
    cases = []
    for i, (a, b) in enumerate([(U1, U2), (U1, U3), (U2, U4), (U3, U4), (U4, U1)]):
        s = normalize(ZERO, [(0, a), (F(i + 1, 2), tuple(x | y for x, y in zip(a, b))), (3, ZERO)])
        cases.append(("fm1", s, F(i + 1, 2)))
    for i, (a, b) in enumerate([(U1, U2), (U2, U1), (U3, U4), (U4, U2), (U2, U3)]):
        s = normalize(ZERO, [(0, a), (i + 1, b), (i + 2, ZERO)])
        cases.append(("fm2", s, F(i + 1)))
    for lam in ONE_HOT + ((1, 1, 0, 0),):
        if len(cases) == 15:
            break
        cases.append(("initial", normalize(lam, [(1, ZERO)]), None))
    for i, (a, b) in enumerate([(U1, U1), (U1, U2), (U3, U3), (U4, U2), (U2, U4)]):
        cases.append(("gap", [(a, 0, i + 1), (b, i + 1, i + 3)], F(i + 1)))
    return cases


@criterion(4, "admissible set: family + 1000 random accepted, 20 violations tagged")
def test_admissible_set():
    rng = random.Random(2024)
    for u in verify.family(3) + [verify.random_input(rng) for _ in range(1000)]:
        assert first_violation(u.signal()) is None
    cases = _violations()
    assert len(cases) == 20
    for tag, case, t in cases:
        if tag == "gap":
            with pytest.raises(AdmissibilityError) as info:
                build_input(case)
            err = info.value
        else:
            err = first_violation(case)
        assert err is not None and err.condition == tag and err.time == t


@criterion(5, "outputs of every family trace are admissible")
def test_output_closure(family_traces):
    for x in family_traces.values():
        output_part(x)


@criterion(6, "injectivity and disjointness over the 336-case family")
def test_injectivity(family_traces):
    start = time.perf_counter()
    items = list(family_traces.items())
    for u in verify.family(3):
        assert family_traces[(u, INITIAL_STATES[0])].state != family_traces[(u, INITIAL_STATES[1])].state
    comparisons = 0
    for ((u, mu), x), ((v, nu), y) in itertools.combinations(items, 2):
        comparisons += 1
        if u != v:
            assert x.state != y.state
    assert comparisons <= 336**2
    assert time.perf_counter() - start < 60


@criterion(7, "time invariance and non-anticipation, 1000 random cases each")
def test_time_invariance_and_non_anticipation():
    rng = random.Random(7)
    for _ in range(1000):
        u = verify.random_input(rng)
        d = F(rng.randint(-100, 100), rng.choice((1, 2, 3, 4, 5, 7, 10)))
        for mu in INITIAL_STATES:
            assert f_mu_closed(mu, shift_input(u, d)).state == f_mu_closed(mu, u).state.shift(d)
    for _ in range(1000):
        u = verify.random_input(rng)
        times = u.signal().times
        t = rng.choice(times) if times and rng.random() < 0.7 else F(rng.randint(-20, 60), 4)
        v = verify.diverge_after(u, t)
        assert u.signal().agrees_until(v.signal(), t)
        for mu in INITIAL_STATES:
            assert f_mu_closed(mu, u).state.agrees_until(f_mu_closed(mu, v).state, t)


@criterion(8, "counterexample searches produce witnesses in the report")
def test_counterexamples(capsys, tmp_path):
    start = time.perf_counter()
    out = tmp_path / "report.json"
    code = main(["verify", "--depth", "3", "--samples", "0", "--out", str(out)])
    capsys.readouterr()
    verdicts = {v["id"]: v for v in json.loads(out.read_text())["verdicts"]}
    assert code == 0
    for tid in ("RemarkComposeMismatch", "RemarkNonSurjective"):
        assert verdicts[tid]["status"] == "witness-found"
        assert verdicts[tid]["witness"]["trace"]
    assert verdicts["RemarkComposeMismatch"]["witness"]["input"] != verdicts["RemarkComposeMismatch"]["witness"]["recovered"]
    assert time.perf_counter() - start < 60


@criterion(9, "each of the 10 mutations makes verify exit 3")
@pytest.mark.parametrize("name", sorted(verify.MUTATIONS))
def test_mutation_sensitivity(name, capsys, tmp_path):
    code = main(["verify", "--mutation", name, "--out", str(tmp_path / "r.json")])
    capsys.readouterr()
    assert code == 3


def test_mutation_catalog_size():
    assert len(verify.MUTATIONS) == 10


@criterion(10, "circuit demo and collision witness")
def test_circuit_demo(capsys):
    net, horizon = netlist_from_json(json.loads((DEMOS / "chain.json").read_text()))
    base = simulate(net, horizon)
    assert base.traces["A"].state == normalize(HORIZONTAL, [(0, (0, 1, 0, 0, 0)), (1, HORIZONTAL)])
    assert base.traces["B"].input == build_input([(U1, 1, 2)])
    assert base.traces["B"].state == normalize(HORIZONTAL, [(1, (0, 1, 0, 0, 0)), (2, HORIZONTAL)])
    for order in itertools.permutations(sorted(net.res)):
        again = simulate(net, horizon, order=order)
        assert again.traces == base.traces and again.outputs == base.outputs
    code = main(["circuit", str(DEMOS / "collision.json")])
    err = capsys.readouterr().err
    assert code == 2 and "'A'" in err and "t=1 " in err


@criterion(11, "JSON round trip and exact VCD ticks")
@pytest.mark.parametrize("den", [1, 2, 4, 5, 10])
def test_io(den, capsys, tmp_path):
    doc = {
        "version": 1,
        "initial_state": "vertical",
        "pulses": [
            {"channel": 2, "start": format_time(F(-3, den)), "end": "0"},
            {"channel": 3, "start": format_time(1 + F(1, den)), "end": "inf"},
        ],
    }
    p = tmp_path / "in.json"
    p.write_text(json.dumps(doc))
    assert main(["simulate", str(p)]) == 0
    first = capsys.readouterr().out
    p.write_text(first)
    assert main(["simulate", str(p)]) == 0
    assert capsys.readouterr().out == first

    u = build_input([(U2, F(-3, den), 0), (U3, 1 + F(1, den), "inf")])
    x = f_mu_closed((1, 0, 0, 0, 0), u)
    named = [("re", f"x{i}", x.state.channel(i)) for i in range(5)]
    text = vcd_text(named)
    ticks = TickMap(sorted({t for _, _, s in named for t in s.times}))
    assert ticks.lcm == den

    ids, seen, tick = {}, [], None
    for tok in tokenize(io.BytesIO(text.encode())):
        if tok.kind is TokenKind.VAR:
            ids[tok.data.id_code] = tok.data.reference
        elif tok.kind is TokenKind.CHANGE_TIME:
            tick = tok.data
        elif tok.kind is TokenKind.CHANGE_SCALAR and tick > 0:
            seen.append((ids[tok.data.id_code], ticks.time(tick), int(tok.data.value)))
    expected = [(name, t, v[0]) for _, name, s in named for t, v in s.events]
    assert sorted(seen, key=lambda e: (e[1], e[0])) == sorted(expected, key=lambda e: (e[1], e[0]))
