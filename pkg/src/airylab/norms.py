"""L2 and mixed space-time Lebesgue norms, and the Airy Strichartz functional."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateInputError, InvalidExponentError, InvalidInputError
from .grid import Field, GridSpec
from .spectral import _SQRT_2PI, forward_fourier

ADMISSIBILITY_TOL = 1e-12


@dataclass(frozen=True)
class StrichartzExponents:
    """(alpha, q, r) triple for || D^alpha e^{-t d^3} u ||_{L^q_t L^r_x}."""

    alpha: float
    q: float
    r: float


def check_admissible(e: StrichartzExponents) -> bool:
    """Scaling identity -alpha + 3/q + 1/r = 1/2 with -1/2 <= alpha <= 1/q."""
    if e.q < 1 or e.r < 1:
        return False
    inv_q = 0.0 if math.isinf(e.q) else 1.0 / e.q
    inv_r = 0.0 if math.isinf(e.r) else 1.0 / e.r
    if abs(-e.alpha + 3.0 * inv_q + inv_r - 0.5) > ADMISSIBILITY_TOL:
        return False
    return -0.5 - ADMISSIBILITY_TOL <= e.alpha <= inv_q + ADMISSIBILITY_TOL


@dataclass
class SpaceTimeField:
    """Sampled space-time function: one spatial slice per time node."""

    grid: GridSpec
    values: np.ndarray  # shape (t_count, n_points)

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.complex128)
        if self.values.shape != (self.grid.t_count, self.grid.n_points):
            raise InvalidInputError("space-time values shape does not match grid")


def l2_norm(f: Field) -> float:
    if not np.all(np.isfinite(f.samples)):
        raise InvalidInputError("non-finite samples")
    return float(np.sqrt(f.grid.dx * np.sum(np.abs(f.samples) ** 2)))


def inner_product(f: Field, g: Field) -> complex:
    return complex(f.grid.dx * np.sum(f.samples * np.conj(g.samples)))


def _trapezoid_weights(grid: GridSpec) -> np.ndarray:
    if grid.t_count == 1:
        return np.array([2.0 * grid.t_span])
    dt = 2.0 * grid.t_span / (grid.t_count - 1)
    w = np.full(grid.t_count, dt)
    w[0] = w[-1] = dt / 2.0
    return w


def spacetime_norm(U: SpaceTimeField, q: float, r: float) -> float:
    """Riemann sum in x inside, trapezoid in t outside; infinity handled as max."""
    if q < 1 or r < 1:
        raise InvalidExponentError("space-time exponents must be >= 1")
    absu = np.abs(U.values)
    if math.isinf(r):
        spatial = absu.max(axis=1) if absu.size else np.zeros(U.grid.t_count)
    else:
        spatial = (U.grid.dx * np.sum(absu ** r, axis=1)) ** (1.0 / r)
    if math.isinf(q):
        return float(spatial.max())
    w = _trapezoid_weights(U.grid)
    return float(np.sum(w * spatial ** q) ** (1.0 / q))


def evolution_stack(f: Field, alpha: float = 0.0, dispersion: str = "airy") -> SpaceTimeField:
    """Sample D^alpha e^{-t d^3} f (or the Schrodinger analogue) on the time grid."""
    grid = f.grid
    xi = grid.frequencies
    F = forward_fourier(f)
    coeff = F.coefficients
    if alpha != 0.0:
        mult = np.zeros_like(xi)
        nz = xi != 0
        mult[nz] = np.abs(xi[nz]) ** alpha
        coeff = coeff * mult
    if dispersion == "airy":
        symbol = xi ** 3
    elif dispersion == "schrodinger":
        symbol = xi ** 2
    else:
        raise InvalidInputError(f"unknown dispersion {dispersion!r}")
    phases = np.exp(1j * np.outer(grid.t_nodes, symbol))
    slices = np.fft.ifft(phases * coeff[None, :], axis=1) * (_SQRT_2PI / grid.dx)
    return SpaceTimeField(grid, slices)


def strichartz_functional(f: Field, e: StrichartzExponents,
                          dispersion: str = "airy") -> float:
    if not check_admissible(e) and dispersion == "airy":
        raise InvalidExponentError(f"inadmissible Strichartz exponents {e}")
    U = evolution_stack(f, alpha=e.alpha, dispersion=dispersion)
    return spacetime_norm(U, e.q, e.r)


AIRY_SYMMETRIC = StrichartzExponents(alpha=1.0 / 6.0, q=6.0, r=6.0)


def symmetric_airy_norm(f: Field) -> float:
    """|| D^{1/6} e^{-t d^3} f ||_{L^6_{t,x}} on the grid's time window."""
    return strichartz_functional(f, AIRY_SYMMETRIC)


def schrodinger_l6_norm(f: Field) -> float:
    """|| e^{-i t d^2} f ||_{L^6_{t,x}} on the grid's time window."""
    U = evolution_stack(f, alpha=0.0, dispersion="schrodinger")
    return spacetime_norm(U, 6.0, 6.0)


def schrodinger_ratio(f: Field) -> float:
    n = l2_norm(f)
    if n == 0:
        raise DegenerateInputError("zero field")
    return schrodinger_l6_norm(f) / n
