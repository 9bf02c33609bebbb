"""Periodic grid, complex field containers, and binary field I/O.

All physical-space data lives on a uniform periodic grid of ``n_points``
nodes covering ``[-L/2, L/2)``.  Spectral data is kept in FFT ordering with
a continuum-consistent unitary normalization, so discrete L2 norms of a
field and of its transform agree (Plancherel) to machine precision.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import InvalidInputError

_MAGIC = b"AIRYFLD1"

# fraction of the box (each side) treated as "boundary-adjacent" when
# monitoring truncation of the periodic approximation
BOUNDARY_FRACTION = 0.05


@dataclass(frozen=True)
class GridSpec:
    """Discretization of space, frequency, and the time window."""

    n_points: int
    domain_length: float
    t_count: int = 129
    t_span: float = 20.0
    band_fraction: float = 0.5

    def __post_init__(self):
        if self.n_points <= 0:
            raise InvalidInputError("n_points must be positive")
        if self.domain_length <= 0:
            raise InvalidInputError("domain_length must be positive")
        if self.t_count <= 0:
            raise InvalidInputError("t_count must be positive")
        if self.t_span <= 0:
            raise InvalidInputError("t_span must be positive")
        if not 0 < self.band_fraction <= 1:
            raise InvalidInputError("band_fraction must be in (0, 1]")

    @property
    def dx(self) -> float:
        return self.domain_length / self.n_points

    @property
    def dxi(self) -> float:
        return 2.0 * np.pi / self.domain_length

    @property
    def x(self) -> np.ndarray:
        """Spatial nodes, [-L/2, L/2)."""
        return (np.arange(self.n_points) - self.n_points // 2) * self.dx

    @property
    def frequencies(self) -> np.ndarray:
        """Angular frequencies in FFT ordering."""
        return 2.0 * np.pi * np.fft.fftfreq(self.n_points, d=self.dx)

    @property
    def band_limit(self) -> float:
        """Half-width of the usable frequency band."""
        return self.band_fraction * np.pi * self.n_points / self.domain_length

    @property
    def t_nodes(self) -> np.ndarray:
        return np.linspace(-self.t_span, self.t_span, self.t_count)

    def with_times(self, t_count=None, t_span=None) -> "GridSpec":
        return replace(
            self,
            t_count=self.t_count if t_count is None else t_count,
            t_span=self.t_span if t_span is None else t_span,
        )


@dataclass
class Field:
    """Physical-space samples of u at the grid nodes."""

    grid: GridSpec
    samples: np.ndarray
    warnings: tuple = field(default_factory=tuple)

    def __post_init__(self):
        self.samples = np.asarray(self.samples, dtype=np.complex128)
        if self.samples.shape != (self.grid.n_points,):
            raise InvalidInputError(
                f"samples length {self.samples.shape} does not match grid "
                f"n_points {self.grid.n_points}"
            )
        if not np.all(np.isfinite(self.samples)):
            raise InvalidInputError("field samples must be finite")

    def with_warning(self, message: str) -> "Field":
        if message in self.warnings:
            return self
        return Field(self.grid, self.samples, self.warnings + (message,))

    def copy(self) -> "Field":
        return Field(self.grid, self.samples.copy(), self.warnings)


@dataclass
class SpectralField:
    """Samples of the (unitary) Fourier transform at grid frequencies, FFT order."""

    grid: GridSpec
    coefficients: np.ndarray
    warnings: tuple = field(default_factory=tuple)

    def __post_init__(self):
        self.coefficients = np.asarray(self.coefficients, dtype=np.complex128)
        if self.coefficients.shape != (self.grid.n_points,):
            raise InvalidInputError("coefficient length does not match grid")
        if not np.all(np.isfinite(self.coefficients)):
            raise InvalidInputError("spectral coefficients must be finite")


def check_same_grid(a, b):
    if a.grid.n_points != b.grid.n_points or a.grid.domain_length != b.grid.domain_length:
        raise InvalidInputError("fields live on different grids")


def boundary_mass_fraction(f: Field) -> float:
    """Fraction of L2 mass in the outer BOUNDARY_FRACTION of the box, each side."""
    n = f.grid.n_points
    k = max(1, int(round(BOUNDARY_FRACTION * n)))
    power = np.abs(f.samples) ** 2
    total = power.sum()
    if total == 0:
        return 0.0
    return float((power[:k].sum() + power[-k:].sum()) / total)


def gaussian_field(grid: GridSpec, width: float = 1.0, center: float = 0.0,
                   modulation: float = 0.0, normalize: bool = True) -> Field:
    """Gaussian bump exp(-(x-c)^2 / (2 width^2)), optionally modulated and unit-L2."""
    x = grid.x
    samples = np.exp(-((x - center) ** 2) / (2.0 * width ** 2)).astype(np.complex128)
    if modulation:
        samples = samples * np.exp(1j * modulation * x)
    if normalize:
        norm = np.sqrt(grid.dx * np.sum(np.abs(samples) ** 2))
        samples = samples / norm
    return Field(grid, samples)


def random_band_limited_field(grid: GridSpec, rng, band: float | None = None,
                              normalize: bool = True) -> Field:
    """Complex Gaussian noise restricted to |xi| <= band (default: half the usable band)."""
    if band is None:
        band = 0.5 * grid.band_limit
    xi = grid.frequencies
    mask = np.abs(xi) <= band
    coeff = np.zeros(grid.n_points, dtype=np.complex128)
    m = int(mask.sum())
    coeff[mask] = rng.standard_normal(m) + 1j * rng.standard_normal(m)
    samples = np.fft.ifft(coeff) * grid.n_points
    if normalize:
        norm = np.sqrt(grid.dx * np.sum(np.abs(samples) ** 2))
        samples = samples / norm
    return Field(grid, samples)


def write_field(path, f: Field) -> None:
    """Binary field format: magic, u64 n_points, f64 domain_length, (re, im) pairs."""
    payload = np.empty(2 * f.grid.n_points, dtype="<f8")
    payload[0::2] = f.samples.real
    payload[1::2] = f.samples.imag
    with open(path, "wb") as fh:
        fh.write(_MAGIC)
        fh.write(struct.pack("<Qd", f.grid.n_points, f.grid.domain_length))
        fh.write(payload.tobytes())


def read_field(path, t_count: int = 129, t_span: float = 20.0,
               band_fraction: float = 0.5) -> Field:
    with open(path, "rb") as fh:
        magic = fh.read(8)
        if magic != _MAGIC:
            raise InvalidInputError(f"bad field file magic: {magic!r}")
        n_points, domain_length = struct.unpack("<Qd", fh.read(16))
        body = fh.read()
    expected = 16 * n_points
    if len(body) != expected:
        raise InvalidInputError("field file body has wrong length")
    raw = np.frombuffer(body, dtype="<f8")
    samples = raw[0::2] + 1j * raw[1::2]
    grid = GridSpec(int(n_points), float(domain_length), t_count=t_count,
                    t_span=t_span, band_fraction=band_fraction)
    return Field(grid, samples)
