"""Simulation and property checking for the ideal rotary element."""

from .admissible import AdmissibleInput, AdmissibilityError, build_input, letters_of, shift_input, validate_membership
from .rotary import (
    HORIZONTAL,
    INITIAL_STATES,
    VERTICAL,
    ReTrace,
    compose_inv_f,
    eval_equations,
    f,
    f_inv_mu,
    f_mu_closed,
    output_part,
    phi,
    phi_inv,
    phi_iter,
)
from .timeline import INF, Signal, characteristic, normalize

__version__ = "0.1.0"

__all__ = [
    "AdmissibleInput", "AdmissibilityError", "build_input", "letters_of", "shift_input", "validate_membership",
    "HORIZONTAL", "INITIAL_STATES", "VERTICAL", "ReTrace", "compose_inv_f", "eval_equations", "f", "f_inv_mu",
    "f_mu_closed", "output_part", "phi", "phi_inv", "phi_iter", "INF", "Signal", "characteristic", "normalize",
]
