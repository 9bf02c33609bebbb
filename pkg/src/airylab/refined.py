"""Frequency-concentration functional, Whitney dyadic pairing, and the
localized restriction decay diagnostic.

The concentration search maximizes |tau|^{1/2 - 1/p} * ||u-hat||_{L^p(tau)}
over every grid-aligned interval inside the usable band.  The sweep is
exhaustive (vectorized per interval length), so it agrees with a
brute-force oracle exactly; ties resolve to the shortest, leftmost
interval.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateInputError, InvalidExponentError, InvalidInputError
from .grid import Field
from .norms import l2_norm, spacetime_norm, symmetric_airy_norm, evolution_stack
from .spectral import forward_fourier


@dataclass(frozen=True)
class IntervalValue:
    """A frequency interval and the functional value attained on it."""

    lo: float
    hi: float
    value: float

    def __post_init__(self):
        if not self.lo < self.hi:
            raise InvalidInputError("interval requires lo < hi")

    @property
    def length(self) -> float:
        return self.hi - self.lo

    @property
    def center(self) -> float:
        return 0.5 * (self.lo + self.hi)


def _band_spectrum(f: Field):
    """Sorted in-band frequencies and |u-hat| samples."""
    F = forward_fourier(f)
    xi = np.fft.fftshift(f.grid.frequencies)
    amp = np.abs(np.fft.fftshift(F.coefficients))
    mask = np.abs(xi) <= f.grid.band_limit
    return xi[mask], amp[mask]


def concentration_functional(f: Field, p: float) -> IntervalValue:
    if p <= 1:
        raise InvalidExponentError("concentration exponent p must exceed 1")
    xi, amp = _band_spectrum(f)
    dxi = f.grid.dxi
    if not np.any(amp > 0):
        return IntervalValue(xi[0] - dxi / 2, xi[0] + dxi / 2, 0.0)
    integrand = amp ** p * dxi
    prefix = np.concatenate(([0.0], np.cumsum(integrand)))
    exponent = 0.5 - 1.0 / p
    best_value = -1.0
    best = (0, 1)
    n = amp.size
    for m in range(1, n + 1):
        sums = prefix[m:] - prefix[:-m]
        j = int(np.argmax(sums))
        value = (m * dxi) ** exponent * sums[j] ** (1.0 / p)
        if value > best_value * (1.0 + 1e-15):
            best_value = value
            best = (j, m)
    start, length = best
    lo = xi[start] - dxi / 2
    hi = xi[start + length - 1] + dxi / 2
    return IntervalValue(float(lo), float(hi), float(best_value))


def level_set_split(f: Field, interval: IntervalValue) -> dict:
    """Mass of each dyadic amplitude layer {2^n |I|^{-1/2} <= |u-hat| < 2^{n+1}|I|^{-1/2}}.

    Returns {n: squared-L2 mass}; the masses sum to the total squared mass of
    the nonzero part of the spectrum exactly (the layers partition it).
    """
    F = forward_fourier(f)
    amp = np.abs(F.coefficients)
    dxi = f.grid.dxi
    scale = interval.length ** -0.5
    nonzero = amp > 0
    masses: dict[int, float] = {}
    if not np.any(nonzero):
        return masses
    levels = np.floor(np.log2(amp[nonzero] / scale)).astype(int)
    power = amp[nonzero] ** 2 * dxi
    for n in np.unique(levels):
        masses[int(n)] = float(power[levels == n].sum())
    return masses


def refined_ratio(f: Field, p: float, detail: bool = False):
    """Strichartz norm over the refined-inequality right-hand side.

    ratio = ||D^{1/6} e^{-t d^3} f||_6 / (concentration^{1/3} ||f||_2^{2/3})
    """
    norm = l2_norm(f)
    if norm == 0:
        raise DegenerateInputError("refined ratio of the zero field")
    conc = concentration_functional(f, p)
    if conc.value == 0:
        raise DegenerateInputError("zero concentration value")
    numerator = symmetric_airy_norm(f)
    ratio = numerator / (conc.value ** (1.0 / 3.0) * norm ** (2.0 / 3.0))
    if not detail:
        return ratio
    masses = level_set_split(f, conc)
    F = forward_fourier(f)
    nonzero_mass = float(
        np.sum(np.abs(F.coefficients[np.abs(F.coefficients) > 0]) ** 2) * f.grid.dxi
    )
    return {
        "ratio": ratio,
        "numerator": numerator,
        "concentration": conc,
        "l2": norm,
        "level_masses": masses,
        "level_mass_defect": abs(sum(masses.values()) - nonzero_mass),
    }


# ---------------------------------------------------------------------------
# Whitney pairing of dyadic intervals
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DyadicInterval:
    """[index * 2^scale, (index + 1) * 2^scale)."""

    scale: int
    index: int

    @property
    def length(self) -> float:
        return 2.0 ** self.scale

    @property
    def lo(self) -> float:
        return self.index * self.length

    @property
    def hi(self) -> float:
        return (self.index + 1) * self.length

    def contains(self, x: float) -> bool:
        return self.lo <= x < self.hi

    @property
    def parent(self) -> "DyadicInterval":
        return DyadicInterval(self.scale + 1, self.index >> 1)


@dataclass(frozen=True)
class WhitneyPair:
    I: DyadicInterval
    Iprime: DyadicInterval

    @property
    def separation(self) -> float:
        """Distance between the two intervals."""
        return (abs(self.Iprime.index - self.I.index) - 1) * self.I.length


def _is_whitney(k: int, kp: int) -> bool:
    """Membership of a same-scale index pair in the maximal Whitney family.

    The pair itself must be 4-separated; its dyadic parents must not be,
    which is exactly maximality.
    """
    d = abs(kp - k)
    if d < 5:
        return False
    return abs((kp >> 1) - (k >> 1)) <= 4


def whitney_pairs(region: DyadicInterval, min_scale: int) -> list[WhitneyPair]:
    """All maximal 4-separated same-length dyadic pairs inside region, scale >= min_scale."""
    if min_scale < region.scale - 40:
        raise InvalidInputError("min_scale too far below the region scale")
    pairs: list[WhitneyPair] = []
    for scale in range(min_scale, region.scale):
        width = region.scale - scale
        k_lo = region.index << width
        k_hi = (region.index + 1) << width  # exclusive
        for k in range(k_lo, k_hi):
            for d in range(-9, 10):
                kp = k + d
                if kp < k_lo or kp >= k_hi:
                    continue
                if _is_whitney(k, kp):
                    pairs.append(
                        WhitneyPair(DyadicInterval(scale, k), DyadicInterval(scale, kp))
                    )
    return pairs


def whitney_pair_for(xi: float, xi_prime: float, min_scale: int,
                     max_scale: int = 60) -> WhitneyPair:
    """Point location: the unique maximal pair covering (xi, xi_prime).

    Once the 4-separation condition fails at some scale it fails at every
    coarser scale, so the covering pair lives at the finest scale where the
    condition still holds at the parent level -- i.e. the largest admissible
    scale.
    """
    if xi == xi_prime:
        raise InvalidInputError("Whitney pairing requires distinct points")
    best = None
    for scale in range(min_scale, max_scale + 1):
        k = int(np.floor(xi / 2.0 ** scale))
        kp = int(np.floor(xi_prime / 2.0 ** scale))
        if abs(kp - k) >= 5:
            best = WhitneyPair(DyadicInterval(scale, k), DyadicInterval(scale, kp))
        else:
            break
    if best is None:
        raise InvalidInputError("points are not separated above min_scale")
    return best


# ---------------------------------------------------------------------------
# Localized restriction decay
# ---------------------------------------------------------------------------


def restriction_decay_check(G: Field, xi0: float, q: float,
                            support_radius: float) -> float:
    """Ratio ||e^{-t d^3}(e^{i x xi0} G)||_{L^q} |xi0|^{1/q} / ||G-hat||_inf.

    Requires G-hat supported in B(0, support_radius), 4 <= q < 6, and
    |xi0| >= 10 * support_radius.
    """
    if not 4.0 <= q < 6.0:
        raise InvalidExponentError("restriction decay requires 4 <= q < 6")
    F = forward_fourier(G)
    xi = G.grid.frequencies
    power = np.abs(F.coefficients) ** 2
    total = power.sum()
    if total == 0:
        return 0.0
    outside = power[np.abs(xi) > support_radius].sum()
    if outside / total > 1e-12:
        raise InvalidInputError("G-hat carries mass outside the stated support ball")
    if abs(xi0) < 10.0 * support_radius:
        raise InvalidInputError("|xi0| must be at least 10x the support radius")
    sup_hat = float(np.abs(F.coefficients).max())
    modulated = Field(G.grid, G.samples * np.exp(1j * xi0 * G.grid.x))
    U = evolution_stack(modulated, alpha=0.0, dispersion="airy")
    norm = spacetime_norm(U, q, q)
    return norm * abs(xi0) ** (1.0 / q) / sup_hat
