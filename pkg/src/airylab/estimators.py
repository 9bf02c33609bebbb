"""Estimator-style wrappers around bubble extraction and maximizer search.

These follow the fit/transform/predict convention: configuration lives in
constructor parameters, fitted state in trailing-underscore attributes.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator

from .bubbles import ExtractionConfig, extract_bubbles, extract_bubbles_real
from .errors import InvalidInputError
from .extremal import AscentOptions, maximize
from .grid import Field, GridSpec


def _as_field(X, grid: GridSpec) -> Field:
    if isinstance(X, Field):
        return X
    samples = np.asarray(X)
    if samples.ndim != 1:
        raise InvalidInputError("expected a one-dimensional sample vector")
    return Field(grid, samples.astype(np.complex128))


class BubbleExtractor(BaseEstimator):
    """Decompose a field into frequency-localized pieces plus a remainder.

    Parameters mirror ExtractionConfig; ``real`` selects the conjugate
    symmetric variant for real-valued inputs.
    """

    def __init__(self, grid=None, delta=0.5, p=4.0 / 3.0, c_thresh=4.0,
                 max_pieces=64, scale_ratio_max=10.0, freq_offset_max=10.0,
                 real=False):
        self.grid = grid
        self.delta = delta
        self.p = p
        self.c_thresh = c_thresh
        self.max_pieces = max_pieces
        self.scale_ratio_max = scale_ratio_max
        self.freq_offset_max = freq_offset_max
        self.real = real

    def _config(self) -> ExtractionConfig:
        return ExtractionConfig(
            delta=self.delta, p=self.p, c_thresh=self.c_thresh,
            max_pieces=self.max_pieces, scale_ratio_max=self.scale_ratio_max,
            freq_offset_max=self.freq_offset_max,
        )

    def fit(self, X, y=None):
        f = _as_field(X, self.grid)
        extractor = extract_bubbles_real if self.real else extract_bubbles
        self.report_ = extractor(f, self._config())
        self.pieces_ = self.report_.pieces
        self.n_pieces_ = len(self.pieces_)
        self.remainder_ = self.report_.remainder
        return self

    def transform(self, X=None):
        """Matrix of piece profiles, one row per extracted piece."""
        if not hasattr(self, "report_"):
            raise InvalidInputError("call fit before transform")
        if not self.pieces_:
            n = self.remainder_.grid.n_points
            return np.empty((0, n), dtype=np.complex128)
        return np.stack([p.profile.samples for p in self.pieces_])

    def fit_transform(self, X, y=None):
        return self.fit(X).transform()


class StrichartzMaximizer(BaseEstimator):
    """Projected gradient ascent for the space-time ratio on the L2 sphere."""

    def __init__(self, grid=None, max_iters=200, initial_step=0.5,
                 gain_tol=1e-8, dispersion="airy"):
        self.grid = grid
        self.max_iters = max_iters
        self.initial_step = initial_step
        self.gain_tol = gain_tol
        self.dispersion = dispersion

    def fit(self, X, y=None):
        f = _as_field(X, self.grid)
        opts = AscentOptions(max_iters=self.max_iters,
                             initial_step=self.initial_step,
                             gain_tol=self.gain_tol,
                             dispersion=self.dispersion)
        self.trace_ = maximize(f, opts)
        self.best_objective_ = self.trace_.final_objective
        self.classification_ = self.trace_.classification
        self.maximizer_ = self.trace_.final_field
        return self

    def predict(self, X=None):
        """Best objective value found by the ascent."""
        if not hasattr(self, "trace_"):
            raise InvalidInputError("call fit before predict")
        return self.best_objective_
