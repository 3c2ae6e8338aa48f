"""The ideal rotary element: letter transition maps and the systems built on them.

State vectors are 5-tuples ``(x0, x1, x2, x3, x4)``: ``x0`` is the bar
(0 horizontal, 1 vertical) and ``x1..x4`` the outputs.  Letters are 4-tuples
carrying at most one bullet.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Callable, Iterable

from .admissible import LETTERS, ZERO, AdmissibleInput, AdmissibilityError, validate_membership
from .timeline import Bits, Signal, normalize, stack

HORIZONTAL: Bits = (0, 0, 0, 0, 0)
VERTICAL: Bits = (1, 0, 0, 0, 0)
#: Legal initial states: bar horizontal or vertical, no bullet on any output.
INITIAL_STATES: tuple[Bits, ...] = (HORIZONTAL, VERTICAL)
STATE_NAMES = {"horizontal": HORIZONTAL, "vertical": VERTICAL}

Step = Callable[[Bits, Bits], Bits]


class ModelError(RuntimeError):
    """A property the model guarantees was found broken (e.g. an output left the admissible set)."""


def phi(mu: Bits, lam: Bits) -> Bits:
    """One-letter forward transition; depends on ``mu`` only through the bar ``mu[0]``."""
    m = mu[0]
    l1, l2, l3, l4 = lam
    n = 1 - m
    return (
        (n & (l2 | l4)) | (m & (1 - l1) & (1 - l3)),
        n & (l1 | l2),
        m & (l2 | l3),
        n & (l3 | l4),
        m & (l4 | l1),
    )


def phi_inv(nu: Bits, delta: Bits) -> Bits:
    """One-letter backward transition: outputs become inputs, the bar turns the other way."""
    m = nu[0]
    d1, d2, d3, d4 = delta
    n = 1 - m
    return (
        (n & (d2 | d4)) | (m & (1 - d1) & (1 - d3)),
        n & (d4 | d1),
        m & (d1 | d2),
        n & (d2 | d3),
        m & (d3 | d4),
    )


def phi_iter(mu: Bits, word: Iterable[Bits], step: Step = phi) -> Bits:
    state = tuple(mu)
    for lam in word:
        state = step(state, tuple(lam))
    return state


def step_equations(x_prev: Bits, u_prev: Bits, u_now: Bits) -> Bits:
    """Evaluate the five RE equations at one instant.

    Returns ``x(t)`` from the left limits ``x(t-0)``, ``u(t-0)`` and the
    current input ``u(t)``.
    """
    x0, x1, x2, x3, x4 = x_prev
    p1, p2, p3, p4 = u_prev
    u1, u2, u3, u4 = u_now
    nx0 = 1 - x0
    rise = [(1 - p) & c for p, c in zip(u_prev, u_now)]
    # "input i did not fall": u_i(t-0)' + u_i(t)
    kept = [(1 - p) | c for p, c in zip(u_prev, u_now)]
    r1, r2, r3, r4 = rise
    k1, k2, k3, k4 = kept
    return (
        (nx0 & (u2 | u4)) | (x0 & (1 - u1) & (1 - u3)),
        ((1 - x1) & nx0 & (r1 | r2)) | (x1 & (x0 | k1) & (nx0 | k2)),
        ((1 - x2) & x0 & (r2 | r3)) | (x2 & (nx0 | k2) & (x0 | k3)),
        ((1 - x3) & nx0 & (r3 | r4)) | (x3 & (x0 | k3) & (nx0 | k4)),
        ((1 - x4) & x0 & (r4 | r1)) | (x4 & (nx0 | k4) & (x0 | k1)),
    )


@dataclass(frozen=True)
class ReTrace:
    """A state signal together with the initial state and input that produced it."""

    input: AdmissibleInput
    initial: Bits
    state: Signal

    @property
    def bar(self) -> Signal:
        return self.state.channel(0)

    @property
    def outputs(self) -> Signal:
        return self.state.project([1, 2, 3, 4])


def _check_initial(mu: Bits) -> Bits:
    mu = tuple(mu)
    if mu not in INITIAL_STATES:
        raise ValueError(f"initial state {mu} is neither horizontal nor vertical")
    return mu


def closed_form(mu: Bits, u: AdmissibleInput, step: Step) -> Signal:
    """State signal given by iterating ``step`` over the pulse letters.

    On the k-th pulse the state is ``step``-iterated over letters 0..k; on
    the gap after it, one more zero letter is applied.
    """
    state = tuple(mu)
    events = []
    for p in u.pulses:
        state = step(state, p.letter)
        events.append((p.start, state))
        if p.bounded:
            state = step(state, ZERO)
            events.append((p.end, state))
    return normalize(mu, events)


def f_mu_closed(mu: Bits, u: AdmissibleInput, step: Step = phi) -> ReTrace:
    mu = _check_initial(mu)
    return ReTrace(u, mu, closed_form(mu, u, step))


def eval_equations(mu: Bits, u: AdmissibleInput) -> ReTrace:
    """Solve the RE equations event by event, independently of :func:`phi`.

    Between switch times the input is constant; the state must then be a
    fixed point of the equations, which is checked once per interval.
    """
    mu = _check_initial(mu)
    us = u.signal()
    x = mu
    events = []
    for t, u_now in us.events:
        x = step_equations(x, us.left(t), u_now)
        events.append((t, x))
    # one interior sample per interval, including (-oo, t0) and [t_last, oo)
    for (_, x_piece), (_, u_piece) in zip([(None, mu)] + events, [(None, us.initial)] + list(us.events)):
        if step_equations(x_piece, u_piece, u_piece) != x_piece:
            raise ModelError(f"state {x_piece} is not stationary under constant input {u_piece}")
    return ReTrace(u, mu, normalize(mu, events))


def f(u: AdmissibleInput, step: Step = phi) -> tuple[ReTrace, ReTrace]:
    """Both possible states, ordered horizontal then vertical."""
    return tuple(f_mu_closed(mu, u, step) for mu in INITIAL_STATES)


def f_inv_mu(mu: Bits, u: AdmissibleInput, step: Step = phi_inv) -> ReTrace:
    mu = _check_initial(mu)
    return ReTrace(u, mu, closed_form(mu, u, step))


def f_inv(u: AdmissibleInput) -> tuple[ReTrace, ReTrace]:
    return tuple(f_inv_mu(mu, u) for mu in INITIAL_STATES)


def output_part(x) -> AdmissibleInput:
    """Project the outputs ``x1..x4`` of a trace and read them back as an admissible input."""
    state = x.state if isinstance(x, ReTrace) else x
    try:
        return validate_membership(state.project([1, 2, 3, 4]))
    except AdmissibilityError as exc:
        raise ModelError(f"outputs are not an admissible input: {exc}") from exc


@dataclass(frozen=True)
class ComposedTrace:
    """One element of the backward-after-forward composition.

    ``signal`` has six coordinates: the forward bar followed by the five
    coordinates of the backward state.
    """

    forward: ReTrace
    backward: ReTrace
    signal: Signal

    def recovers(self, u: AdmissibleInput) -> bool:
        """True iff the backward outputs reproduce the forward input."""
        return self.backward.outputs == u.signal()


def compose_inv_f(u: AdmissibleInput, step: Step = phi, inv_step: Step = phi_inv) -> list[ComposedTrace]:
    result = []
    for x in f(u, step):
        v_in = output_part(x)
        for nu in INITIAL_STATES:
            v = f_inv_mu(nu, v_in, inv_step)
            result.append(ComposedTrace(x, v, stack(x.bar, v.state)))
    return result


def letter_table() -> list[tuple[int, Bits]]:
    """All ``(bar, letter)`` pairs the transition maps are exercised on."""
    return [(m, lam) for m, lam in product((0, 1), LETTERS)]

