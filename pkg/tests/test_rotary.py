from fractions import Fraction as F
from itertools import product

import pytest

from rotary_element.admissible import LETTERS, ONE_HOT, ZERO, build_input
from rotary_element.rotary import (
    HORIZONTAL,
    INITIAL_STATES,
    VERTICAL,
    compose_inv_f,
    eval_equations,
    f,
    f_inv_mu,
    f_mu_closed,
    output_part,
    phi,
    phi_inv,
    phi_iter,
    step_equations,
)
from rotary_element.timeline import INF, normalize

U1, U2, U3, U4 = ONE_HOT

# Frozen by evaluating the five component formulas by hand, one row per (bar, letter).
PHI_TABLE = {
    (0, ZERO): (0, 0, 0, 0, 0),
    (0, U1): (0, 1, 0, 0, 0),
    (0, U2): (1, 1, 0, 0, 0),
    (0, U3): (0, 0, 0, 1, 0),
    (0, U4): (1, 0, 0, 1, 0),
    (1, ZERO): (1, 0, 0, 0, 0),
    (1, U1): (0, 0, 0, 0, 1),
    (1, U2): (1, 0, 1, 0, 0),
    (1, U3): (0, 0, 1, 0, 0),
    (1, U4): (1, 0, 0, 0, 1),
}
PHI_INV_TABLE = {
    (0, ZERO): (0, 0, 0, 0, 0),
    (0, U1): (0, 1, 0, 0, 0),
    (0, U2): (1, 0, 0, 1, 0),
    (0, U3): (0, 0, 0, 1, 0),
    (0, U4): (1, 1, 0, 0, 0),
    (1, ZERO): (1, 0, 0, 0, 0),
    (1, U1): (0, 0, 1, 0, 0),
    (1, U2): (1, 0, 1, 0, 0),
    (1, U3): (0, 0, 0, 0, 1),
    (1, U4): (1, 0, 0, 0, 1),
}


@pytest.mark.parametrize("key", sorted(PHI_TABLE))
def test_phi_table(key):
    m, lam = key
    assert phi((m, 0, 0, 0, 0), lam) == PHI_TABLE[key]
    # only the bar of the previous state matters
    assert phi((m, 1, 1, 1, 1), lam) == PHI_TABLE[key]


@pytest.mark.parametrize("key", sorted(PHI_INV_TABLE))
def test_phi_inv_table(key):
    m, lam = key
    assert phi_inv((m, 0, 0, 0, 0), lam) == PHI_INV_TABLE[key]


def test_figure_captions():
    assert phi(HORIZONTAL, U1) == (0, 1, 0, 0, 0)
    assert phi(VERTICAL, U1) == (0, 0, 0, 0, 1)


@pytest.mark.parametrize("mu", [(m, a, b, c, d) for m, a, b, c, d in product((0, 1), repeat=5)])
def test_phi_of_zero_keeps_bar(mu):
    assert phi(mu, ZERO) == (mu[0], 0, 0, 0, 0)
    assert phi_inv(mu, ZERO) == (mu[0], 0, 0, 0, 0)


def test_phi_iter():
    for mu in INITIAL_STATES:
        assert phi_iter(mu, []) == mu
        assert phi_iter(mu, [ZERO]) == mu
        for lam, lam2 in product(LETTERS, repeat=2):
            assert phi_iter(mu, [lam, ZERO, lam2]) == phi_iter(mu, [lam, lam2])
    assert phi_iter(HORIZONTAL, [U2, U2]) == (1, 0, 1, 0, 0)


def test_bullet_conservation_and_letter_inverse():
    for (m, lam), out in PHI_TABLE.items():
        assert sum(out[1:]) == sum(lam) <= 1
        if lam != ZERO:
            assert phi_inv((out[0], 0, 0, 0, 0), out[1:]) == (m,) + lam


def test_f_mu_closed_examples():
    x = f_mu_closed(HORIZONTAL, build_input([(U1, 0, 1)]))
    assert x.state == normalize(HORIZONTAL, [(0, (0, 1, 0, 0, 0)), (1, HORIZONTAL)])
    assert f_mu_closed(VERTICAL, build_input([])).state == normalize(VERTICAL, [])
    x = f_mu_closed(HORIZONTAL, build_input([(U2, 0, 1)]))
    assert x.state == normalize(HORIZONTAL, [(0, (1, 1, 0, 0, 0)), (1, (1, 0, 0, 0, 0))])


def test_initial_state_restricted():
    with pytest.raises(ValueError):
        f_mu_closed((0, 1, 0, 0, 0), build_input([]))


def test_eval_equations_examples():
    assert eval_equations(VERTICAL, build_input([])).state == normalize(VERTICAL, [])
    u = build_input([(U1, 0, 1)])
    x = eval_equations(HORIZONTAL, u)
    assert x.state.channel(1).times == (0, 1)
    assert x.state.channel(0).events == ()


def test_step_equations_hold_without_input_change():
    for x0 in (0, 1):
        for lam in LETTERS:
            x = phi((x0, 0, 0, 0, 0), lam)
            assert step_equations(x, lam, lam) == x


def family():
    for n in (1, 2, 3):
        for word in product(ONE_HOT, repeat=n):
            for unbounded in (False, True):
                pulses = [(lam, 2 * k, 2 * k + 1) for k, lam in enumerate(word)]
                if unbounded:
                    pulses[-1] = (pulses[-1][0], pulses[-1][1], INF)
                yield build_input(pulses)


def test_closed_form_matches_equations_on_family():
    n = 0
    for u in family():
        for mu in INITIAL_STATES:
            assert f_mu_closed(mu, u).state == eval_equations(mu, u).state
            n += 1
    assert n == 336


def test_closed_form_matches_equations_off_grid():
    u = build_input([(U4, F(-7, 3), F(-2, 3)), (U3, F(1, 7), F(2, 7)), (U2, 5, 6), (U1, 9, INF)])
    for mu in INITIAL_STATES:
        assert f_mu_closed(mu, u).state == eval_equations(mu, u).state


def test_f_two_traces():
    u = build_input([(U1, 0, 1)])
    x, y = f(u)
    assert x.initial == HORIZONTAL and y.initial == VERTICAL
    assert x.state != y.state
    assert output_part(x) == build_input([(U1, 0, 1)])
    assert output_part(y) == build_input([(U4, 0, 1)])
    assert all(t.state.events == () for t in f(build_input([])))
    assert output_part(f(build_input([]))[0]) == build_input([])


def test_f_inv_examples():
    assert f_inv_mu(HORIZONTAL, build_input([])).state == normalize(HORIZONTAL, [])
    v = f_inv_mu(HORIZONTAL, build_input([(U4, 0, 1)]))
    assert v.state.channel(1) == normalize((0,), [(0, (1,)), (1, (0,))])


@pytest.mark.parametrize("m, lam", [(m, lam) for m in (0, 1) for lam in ONE_HOT])
def test_single_pulse_inverse(m, lam):
    mu = (m, 0, 0, 0, 0)
    x = f_mu_closed(mu, build_input([(lam, 0, 1)]))
    # the bar after the pulse, then the forward outputs, run backwards
    nu = (x.state.final[0], 0, 0, 0, 0)
    v = f_inv_mu(nu, output_part(x))
    assert v.state.at(0)[1:] == lam
    assert v.state.at(0)[0] == m


def test_compose_examples():
    empty = compose_inv_f(build_input([]))
    assert len(empty) == 4 and all(c.signal.events == () for c in empty)
    u = build_input([(U1, 0, 1)])
    comp = compose_inv_f(u)
    assert len(comp) == 4
    assert all(c.signal.width == 6 for c in comp)
    assert any(not c.recovers(u) for c in comp)
