"""Symplectic, force-gradient and extended force-gradient integrators."""

from ._core import (
    convergence,
    fli,
    initial_state,
    integrate,
    jacobian_determinant,
    method_names,
    parse_number,
    poincare,
    run_cli,
    scan,
    system,
    system_ids,
    zero_one,
)

__all__ = [
    "convergence",
    "fli",
    "initial_state",
    "integrate",
    "jacobian_determinant",
    "method_names",
    "parse_number",
    "poincare",
    "run_cli",
    "scan",
    "system",
    "system_ids",
    "zero_one",
]
