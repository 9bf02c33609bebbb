"""Orthogonality scoring of symmetry-parameter tuples and numerical
decoupling diagnostics for transformed profiles."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidInputError, InvalidParameterError
from .grid import Field, check_same_grid
from .norms import SpaceTimeField, evolution_stack, inner_product, spacetime_norm
from .spectral import SymmetryParams, apply_symmetry

DEFAULT_EQUALITY_TOL = 1e-9


@dataclass(frozen=True)
class SeparationScore:
    branch: str  # "scale_freq" | "space_time"
    value: float

    def __post_init__(self):
        if self.branch not in ("scale_freq", "space_time"):
            raise InvalidInputError(f"unknown separation branch {self.branch!r}")


def separation_score(a: SymmetryParams, b: SymmetryParams,
                     tol: float = DEFAULT_EQUALITY_TOL) -> SeparationScore:
    """Size of the parameter divergence expression.

    Distinct (h, xi) pairs score on the scale/frequency expression
    h_a/h_b + h_b/h_a + h_a|xi_a - xi_b|; shared pairs score on the
    space/time expression at the common (h, xi).
    """
    if tol <= 0:
        raise InvalidParameterError("equality tolerance must be positive")
    if a.h <= 0 or b.h <= 0:
        raise InvalidParameterError("scaling parameters must be positive")
    scale_differs = abs(a.h - b.h) / a.h > tol
    freq_differs = a.h * abs(a.xi - b.xi) > tol
    if scale_differs or freq_differs:
        value = a.h / b.h + b.h / a.h + a.h * abs(a.xi - b.xi)
        return SeparationScore("scale_freq", float(value))
    h, xi = a.h, a.xi
    dt = b.t0 - a.t0
    dx = a.x0 - b.x0
    value = (
        abs(dt) / h ** 3
        + 3.0 * abs(dt * xi) / h ** 2
        + abs(dx + 3.0 * (a.t0 - b.t0) * xi ** 2) / h
    )
    return SeparationScore("space_time", float(value))


def profile_inner_product(A, B) -> tuple[complex, tuple]:
    """L2 pairing of two symmetry-transformed profiles on the shared grid.

    A and B are (SymmetryParams, Field) pairs.  Aliasing during the symmetry
    application attaches warnings; the value is still returned.
    """
    params_a, phi_a = A
    params_b, phi_b = B
    check_same_grid(phi_a, phi_b)
    fa = apply_symmetry(phi_a, params_a)
    fb = apply_symmetry(phi_b, params_b)
    value = inner_product(fa, fb)
    return value, fa.warnings + fb.warnings


def l6_additivity_defect(profiles) -> float:
    """| ||sum of evolutions||_6^6 - sum of ||evolution||_6^6 | for the
    symmetric Airy functional applied to each transformed profile."""
    if len(profiles) < 2:
        raise InvalidInputError("additivity defect needs at least two profiles")
    grid = profiles[0][1].grid
    stacked = None
    individual = 0.0
    for params, phi in profiles:
        check_same_grid(profiles[0][1], phi)
        f = apply_symmetry(phi, params)
        U = evolution_stack(f, alpha=1.0 / 6.0, dispersion="airy")
        individual += spacetime_norm(U, 6.0, 6.0) ** 6
        stacked = U.values if stacked is None else stacked + U.values
    combined = spacetime_norm(SpaceTimeField(grid, stacked), 6.0, 6.0) ** 6
    return float(abs(combined - individual))
