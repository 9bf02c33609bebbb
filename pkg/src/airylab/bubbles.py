"""Iterative extraction of frequency-localized pieces ("bubbles") from a
field, in complex and real variants, with exact Parseval bookkeeping.

Each round finds the interval winning the concentration search, carves the
sub-threshold part of the spectrum inside it, and subtracts.  Carved bins
are retired, so the pieces have pairwise disjoint spectral supports and the
squared-mass ledger closes to rounding error.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dataclass_field

import numpy as np

from .errors import InvalidInputError, InvalidParameterError
from .grid import Field
from .norms import l2_norm, symmetric_airy_norm
from .refined import IntervalValue, concentration_functional
from .spectral import SymmetryParams, _SQRT_2PI, forward_fourier


@dataclass(frozen=True)
class ExtractionConfig:
    """Stopping threshold, carve exponent, and regrouping tolerances."""

    delta: float
    p: float = 4.0 / 3.0
    c_thresh: float = 4.0
    max_pieces: int = 64
    scale_ratio_max: float = 10.0
    freq_offset_max: float = 10.0

    def __post_init__(self):
        if self.delta <= 0:
            raise InvalidParameterError("stopping threshold delta must be positive")
        if self.max_pieces < 1:
            raise InvalidParameterError("max_pieces must be at least 1")
        if self.c_thresh <= 0:
            raise InvalidParameterError("c_thresh must be positive")

    @property
    def carve_ceiling(self) -> float:
        """Amplitude cap c_thresh * delta^-6 (before the rho^-1/2 factor)."""
        return self.c_thresh * self.delta ** -6


@dataclass
class Bubble:
    """One carved piece: its scale/frequency parameters, profile, and support."""

    params: SymmetryParams  # h = 1/rho, xi = interval center
    profile: Field
    support: IntervalValue

    @property
    def rho(self) -> float:
        return 1.0 / self.params.h

    @property
    def xi0(self) -> float:
        return self.params.xi

    @property
    def mass(self) -> float:
        return l2_norm(self.profile)


@dataclass
class ExtractionReport:
    pieces: list
    remainder: Field
    parseval_defect: float
    strichartz_of_remainder: float
    iterations: int
    termination: str  # "converged" | "budget" | "stalled"
    warnings: tuple = dataclass_field(default_factory=tuple)


def _field_from_spectrum(grid, coeff, warnings=()) -> Field:
    samples = np.fft.ifft(coeff) * (_SQRT_2PI / grid.dx)
    return Field(grid, samples, tuple(warnings))


def _ledger(u: Field, pieces, remainder: Field) -> float:
    total = l2_norm(u) ** 2
    parts = sum(l2_norm(p.profile) ** 2 for p in pieces) + l2_norm(remainder) ** 2
    return abs(total - parts)


def extract_bubbles(u: Field, cfg: ExtractionConfig) -> ExtractionReport:
    """Carve sub-threshold spectral mass from the winning concentration
    interval until the Strichartz norm of the residual drops below delta."""
    grid = u.grid
    warnings = list(u.warnings)
    norm = l2_norm(u)
    if norm > 1.0 + 1e-9:
        u = Field(grid, u.samples / norm, u.warnings)
        warnings.append("normalization: input mass exceeded 1, rescaled")
    xi = grid.frequencies
    residual_hat = forward_fourier(u).coefficients.copy()
    available = np.ones(grid.n_points, dtype=bool)
    pieces: list[Bubble] = []
    iterations = 0
    termination = "budget"
    while True:
        residual = _field_from_spectrum(grid, residual_hat)
        snorm = symmetric_airy_norm(residual)
        if snorm <= cfg.delta:
            termination = "converged"
            break
        if len(pieces) >= cfg.max_pieces:
            termination = "budget"
            break
        iterations += 1
        conc = concentration_functional(residual, cfg.p)
        rho = conc.length / 2.0
        ceiling = cfg.carve_ceiling * rho ** -0.5
        carve = (
            available
            & (xi >= conc.lo)
            & (xi <= conc.hi)
            & (np.abs(residual_hat) <= ceiling)
            & (np.abs(residual_hat) > 0)
        )
        if not np.any(carve):
            termination = "stalled"
            warnings.append("extraction: empty carve, no sub-threshold mass in winner")
            break
        piece_hat = np.where(carve, residual_hat, 0.0)
        residual_hat = residual_hat - piece_hat
        available &= ~carve
        profile = _field_from_spectrum(grid, piece_hat)
        params = SymmetryParams(h=1.0 / rho, xi=conc.center)
        pieces.append(Bubble(params, profile, conc))
    remainder = _field_from_spectrum(grid, residual_hat, warnings)
    return ExtractionReport(
        pieces=pieces,
        remainder=remainder,
        parseval_defect=_ledger(u, pieces, remainder),
        strichartz_of_remainder=symmetric_airy_norm(remainder),
        iterations=iterations,
        termination=termination,
        warnings=tuple(warnings),
    )


def _check_real(u: Field) -> None:
    power = np.abs(u.samples) ** 2
    total = power.sum()
    if total == 0:
        return
    imag = np.sum(u.samples.imag ** 2)
    if imag / total > 1e-12:
        raise InvalidInputError("real extraction requires a real-valued field")


def extract_bubbles_real(u: Field, cfg: ExtractionConfig) -> ExtractionReport:
    """Real variant: carve a positive-frequency interval, keep its half
    spectrum f+ as the piece, and subtract the full conjugate-symmetric pair
    2 Re f+ so the residual stays real.

    An interval straddling zero is symmetrized into a low band with xi0 = 0;
    its half spectrum takes the positive side plus half of the DC bin, so
    2 Re f+ still reproduces the carved mass exactly.
    """
    _check_real(u)
    grid = u.grid
    warnings = list(u.warnings)
    norm = l2_norm(u)
    if norm > 1.0 + 1e-9:
        u = Field(grid, u.samples / norm, u.warnings)
        warnings.append("normalization: input mass exceeded 1, rescaled")
    n = grid.n_points
    xi = grid.frequencies
    mirror = (-np.arange(n)) % n
    residual_hat = forward_fourier(u).coefficients.copy()
    available = np.ones(n, dtype=bool)
    pieces: list[Bubble] = []
    iterations = 0
    termination = "budget"
    while True:
        residual = _field_from_spectrum(grid, residual_hat)
        snorm = symmetric_airy_norm(residual)
        if snorm <= cfg.delta:
            termination = "converged"
            break
        if len(pieces) >= cfg.max_pieces:
            termination = "budget"
            break
        iterations += 1
        conc = concentration_functional(residual, cfg.p)
        if conc.lo < 0 < conc.hi or conc.lo == 0 or conc.hi == 0:
            # symmetric low band, xi0 = 0
            m = max(abs(conc.lo), abs(conc.hi))
            rho = m
            ceiling = cfg.carve_ceiling * rho ** -0.5
            in_band = np.abs(xi) <= m
            carve = (
                in_band & available
                & (np.abs(residual_hat) <= ceiling)
                & (np.abs(residual_hat) > 0)
            )
            # symmetry of the carve set: a bin is carved only with its mirror
            carve &= carve[mirror]
            if not np.any(carve):
                termination = "stalled"
                warnings.append("extraction: empty carve in the low band")
                break
            half = np.zeros(n, dtype=np.complex128)
            pos = carve & (xi > 0)
            half[pos] = residual_hat[pos]
            if carve[0]:
                half[0] = residual_hat[0] / 2.0
            support = IntervalValue(-m, m, conc.value)
            center = 0.0
        else:
            lo, hi = conc.lo, conc.hi
            if hi <= 0:
                lo, hi = -conc.hi, -conc.lo  # reflect the mirror winner
            rho = (hi - lo) / 2.0
            ceiling = cfg.carve_ceiling * rho ** -0.5
            carve_pos = (
                available & (xi >= lo) & (xi <= hi) & (xi > 0)
                & (np.abs(residual_hat) <= ceiling)
                & (np.abs(residual_hat) > 0)
            )
            # only carve bins whose mirrors are still available too
            carve_pos &= available[mirror]
            if not np.any(carve_pos):
                termination = "stalled"
                warnings.append("extraction: empty carve, no sub-threshold mass in winner")
                break
            half = np.where(carve_pos, residual_hat, 0.0)
            carve = carve_pos | carve_pos[mirror]
            support = IntervalValue(lo, hi, conc.value)
            center = (lo + hi) / 2.0
        full = half + np.conj(half[mirror])  # spectrum of 2 Re f+
        residual_hat = residual_hat - full
        available &= ~carve
        profile = _field_from_spectrum(grid, half)
        params = SymmetryParams(h=1.0 / rho, xi=center)
        pieces.append(Bubble(params, profile, support))
    # kill rounding-level imaginary residue so the remainder is exactly real
    remainder_samples = np.fft.ifft(residual_hat) * (_SQRT_2PI / grid.dx)
    remainder = Field(grid, remainder_samples.real.astype(np.complex128),
                      tuple(warnings))
    total = l2_norm(u) ** 2
    parts = sum(2.0 * l2_norm(p.profile) ** 2 for p in pieces) + l2_norm(remainder) ** 2
    # DC correction: the halved zero bin contributes twice its half-mass short
    for p in pieces:
        if p.xi0 == 0.0:
            F = forward_fourier(p.profile)
            parts += 2.0 * np.abs(F.coefficients[0]) ** 2 * grid.dxi
    return ExtractionReport(
        pieces=pieces,
        remainder=remainder,
        parseval_defect=abs(total - parts),
        strichartz_of_remainder=symmetric_airy_norm(remainder),
        iterations=iterations,
        termination=termination,
        warnings=tuple(warnings),
    )


def reconstruct_real(report: ExtractionReport) -> Field:
    """u = sum of 2 Re f+ over pieces, plus the remainder."""
    grid = report.remainder.grid
    acc = np.array(report.remainder.samples, dtype=np.complex128)
    for p in report.pieces:
        acc = acc + 2.0 * p.profile.samples.real
    return Field(grid, acc)


def group_by_scale_orthogonality(pieces, cfg: ExtractionConfig):
    """Cluster pieces whose (rho, xi) parameters fail the finite-resolution
    orthogonality surrogate, by transitive closure."""
    n = len(pieces)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    def union(i, j):
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[max(ri, rj)] = min(ri, rj)

    for i in range(n):
        for j in range(i + 1, n):
            ri, rj = pieces[i].rho, pieces[j].rho
            ratio = ri / rj + rj / ri
            offset = abs(pieces[i].xi0 - pieces[j].xi0) / max(ri, rj)
            if ratio <= cfg.scale_ratio_max and offset <= cfg.freq_offset_max:
                union(i, j)
    groups: dict[int, list] = {}
    order = []
    for i in range(n):
        root = find(i)
        if root not in groups:
            groups[root] = []
            order.append(root)
        groups[root].append(pieces[i])
    return [groups[r] for r in order]
