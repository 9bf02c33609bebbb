"""Fourier transforms, dispersive propagators, fractional multipliers, and
the mass-preserving symmetry group.

The forward transform approximates the continuum unitary transform, so the
Airy multiplier exp(i t xi^3), the Schrodinger multiplier exp(i t xi^2),
and |xi|^alpha act on honest samples of u-hat.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    InvalidInputError,
    InvalidParameterError,
    SingularMultiplierError,
)
from .grid import Field, GridSpec, SpectralField, boundary_mass_fraction

ALIAS_MASS_TOL = 1e-8
BOUNDARY_MASS_TOL = 1e-6
DC_MASS_TOL = 1e-12

_SQRT_2PI = np.sqrt(2.0 * np.pi)


@dataclass(frozen=True)
class SymmetryParams:
    """Scaling / modulation / translation / time-shift / phase tuple."""

    h: float = 1.0
    xi: float = 0.0
    x0: float = 0.0
    t0: float = 0.0
    theta: float = 0.0

    def __post_init__(self):
        if self.h <= 0:
            raise InvalidParameterError("scaling parameter h must be positive")


def forward_fourier(f: Field) -> SpectralField:
    coeff = np.fft.fft(f.samples) * (f.grid.dx / _SQRT_2PI)
    return SpectralField(f.grid, coeff, f.warnings)


def inverse_fourier(F: SpectralField) -> Field:
    samples = np.fft.ifft(F.coefficients) * (_SQRT_2PI / F.grid.dx)
    return Field(F.grid, samples, F.warnings)


def out_of_band_fraction(F: SpectralField) -> float:
    xi = F.grid.frequencies
    power = np.abs(F.coefficients) ** 2
    total = power.sum()
    if total == 0:
        return 0.0
    return float(power[np.abs(xi) > F.grid.band_limit].sum() / total)


def _apply_multiplier(f: Field, multiplier: np.ndarray, check_band=True) -> Field:
    F = forward_fourier(f)
    warnings = f.warnings
    if check_band and out_of_band_fraction(F) > ALIAS_MASS_TOL:
        warnings = warnings + ("aliasing: spectral mass outside usable band",)
    out = np.fft.ifft(F.coefficients * multiplier) * (_SQRT_2PI / f.grid.dx)
    result = Field(f.grid, out, warnings)
    if boundary_mass_fraction(result) > BOUNDARY_MASS_TOL:
        result = result.with_warning("truncation: boundary-adjacent mass")
    return result


def airy_propagate(f: Field, t: float) -> Field:
    """Evolution under u_t + u_xxx = 0: multiplier exp(i t xi^3)."""
    xi = f.grid.frequencies
    return _apply_multiplier(f, np.exp(1j * t * xi ** 3))


def schrodinger_propagate(f: Field, t: float) -> Field:
    """Free Schrodinger evolution: multiplier exp(i t xi^2)."""
    xi = f.grid.frequencies
    return _apply_multiplier(f, np.exp(1j * t * xi ** 2))


def fractional_derivative(f: Field, alpha: float) -> Field:
    """|xi|^alpha multiplier; |0|^alpha := 0 for alpha > 0, identity at alpha = 0."""
    if alpha == 0:
        return f.copy()
    xi = f.grid.frequencies
    F = forward_fourier(f)
    if alpha < 0:
        total = np.sum(np.abs(F.coefficients) ** 2)
        if total > 0 and np.abs(F.coefficients[0]) ** 2 / total > DC_MASS_TOL:
            raise SingularMultiplierError(
                "negative-order multiplier on a field with DC mass"
            )
    mult = np.zeros_like(xi)
    nonzero = xi != 0
    mult[nonzero] = np.abs(xi[nonzero]) ** alpha
    out = np.fft.ifft(F.coefficients * mult) * (_SQRT_2PI / f.grid.dx)
    return Field(f.grid, out, f.warnings)


def evaluate_field(f: Field, points: np.ndarray, chunk: int = 256) -> np.ndarray:
    """Band-limited (trigonometric) interpolation of f at arbitrary points."""
    F = forward_fourier(f)
    xi = f.grid.frequencies
    scale = f.grid.dxi / _SQRT_2PI
    # the spatial grid starts at -L/2, so FFT bin k carries an extra (-1)^k
    # relative to the continuum transform sample at xi_k
    coeff = F.coefficients * (-1.0) ** np.arange(f.grid.n_points)
    points = np.asarray(points, dtype=float)
    out = np.empty(points.shape, dtype=np.complex128)
    for start in range(0, points.size, chunk):
        block = points[start:start + chunk]
        out[start:start + chunk] = (
            np.exp(1j * np.outer(block, xi)) @ coeff
        ) * scale
    return out


def apply_symmetry(f: Field, g: SymmetryParams) -> Field:
    """Composite exp(t0 d^3) g_{theta,x0,h}[exp(i (.) h xi) f].

    At the grid nodes the pre-propagation value is
    exp(i theta) h^{-1/2} exp(i (x - x0) xi) f((x - x0) / h).
    """
    grid = f.grid
    x = grid.x
    if g.h == 1.0 and g.x0 == 0.0:
        core = f.samples
    elif g.h == 1.0:
        # pure translation: exact periodic shift via the spectral phase
        F = forward_fourier(f)
        xi_freq = grid.frequencies
        core = np.fft.ifft(F.coefficients * np.exp(-1j * xi_freq * g.x0)) * (
            _SQRT_2PI / grid.dx
        )
    else:
        # emulate the whole-line dilation: points outside the box read zero
        # (periodic wrap would import spurious copies when h < 1)
        points = (x - g.x0) / g.h
        inside = np.abs(points) <= grid.domain_length / 2.0
        core = np.zeros(grid.n_points, dtype=np.complex128)
        if np.any(inside):
            core[inside] = evaluate_field(f, points[inside])
    samples = np.exp(1j * g.theta) * g.h ** (-0.5) * np.exp(1j * (x - g.x0) * g.xi) * core
    out = Field(grid, samples, f.warnings)
    # modulation / rescaling may have pushed mass outside the band
    if out_of_band_fraction(forward_fourier(out)) > ALIAS_MASS_TOL:
        out = out.with_warning("aliasing: symmetry pushed mass outside usable band")
    if g.t0 != 0.0:
        out = airy_propagate(out, -g.t0)
    return out


def spectral_centroid(f: Field) -> float:
    """Power-weighted mean frequency of the field's spectrum."""
    F = forward_fourier(f)
    power = np.abs(F.coefficients) ** 2
    total = power.sum()
    if total == 0:
        raise InvalidInputError("centroid of a zero field")
    return float(np.sum(power * f.grid.frequencies) / total)
