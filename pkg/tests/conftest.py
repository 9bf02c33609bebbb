"""Shared fixtures and helpers for the test suite."""

import numpy as np
import pytest

from airylab import Field, GridSpec, random_band_limited_field


def localized_noise(grid, rng, band_frac=0.1, envelope_width=2.0):
    """Band-limited noise under a Gaussian envelope, unit L2 mass.

    Keeps both the spectrum and the spatial support well inside the box so
    that dilations and periodic shifts do not touch the boundary.
    """
    noise = random_band_limited_field(grid, rng, band=band_frac * grid.band_limit)
    samples = noise.samples * np.exp(-grid.x ** 2 / (2.0 * envelope_width ** 2))
    samples = samples / np.sqrt(grid.dx * np.sum(np.abs(samples) ** 2))
    return Field(grid, samples)


def rel_l2_err(a: Field, b: Field) -> float:
    num = np.sqrt(a.grid.dx * np.sum(np.abs(a.samples - b.samples) ** 2))
    den = np.sqrt(a.grid.dx * np.sum(np.abs(a.samples) ** 2))
    return float(num / den)


@pytest.fixture
def small_grid():
    return GridSpec(512, 32.0, t_count=33, t_span=2.0)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
