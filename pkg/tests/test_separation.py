"""Separation scoring of parameter tuples and decoupling diagnostics."""

import numpy as np
import pytest

from airylab import (
    Field,
    GridSpec,
    InvalidInputError,
    InvalidParameterError,
    SeparationScore,
    SymmetryParams,
    gaussian_field,
    l6_additivity_defect,
    profile_inner_product,
    separation_score,
)
from airylab.norms import evolution_stack, spacetime_norm
from airylab.spectral import apply_symmetry


def independent_space_time_score(a: SymmetryParams, b: SymmetryParams) -> float:
    """Hand-transcribed evaluator of the shared-(h, xi) divergence expression,
    written separately from the production code."""
    h = a.h
    xi = a.xi
    dt = b.t0 - a.t0
    term1 = abs(dt) / h ** 3
    term2 = 3.0 * abs(dt * xi) / h ** 2
    term3 = abs((a.x0 - b.x0) + 3.0 * (a.t0 - b.t0) * xi ** 2) / h
    return term1 + term2 + term3


class TestSeparationScore:
    def test_identical_params_zero(self):
        a = SymmetryParams(h=1.5, xi=2.0, x0=0.3, t0=-1.0, theta=0.2)
        s = separation_score(a, a)
        assert s.branch == "space_time"
        assert s.value == 0.0

    def test_scale_branch_value(self):
        s = separation_score(SymmetryParams(h=1.0), SymmetryParams(h=4.0))
        assert s.branch == "scale_freq"
        assert s.value == pytest.approx(4.25)

    def test_space_time_hand_value(self):
        a = SymmetryParams(h=1.0, xi=2.0, t0=0.0, x0=0.0)
        b = SymmetryParams(h=1.0, xi=2.0, t0=1.0, x0=0.0)
        s = separation_score(a, b)
        assert s.branch == "space_time"
        # |dt|/h^3 + 3|dt xi|/h^2 + |dx + 3(t_a - t_b) xi^2|/h = 1 + 6 + 12
        assert s.value == pytest.approx(19.0)
        assert s.value == pytest.approx(independent_space_time_score(a, b))

    def test_independent_evaluator_random_pairs(self, rng):
        for _ in range(50):
            h, xi = rng.uniform(0.5, 3.0), rng.uniform(-5, 5)
            a = SymmetryParams(h=h, xi=xi, x0=rng.normal(), t0=rng.normal())
            b = SymmetryParams(h=h, xi=xi, x0=rng.normal(), t0=rng.normal())
            s = separation_score(a, b)
            assert s.branch == "space_time"
            assert s.value == pytest.approx(independent_space_time_score(a, b))

    def test_scale_branch_symmetric(self):
        a = SymmetryParams(h=1.0, xi=3.0)
        b = SymmetryParams(h=2.5, xi=-1.0)
        sa = separation_score(a, b)
        sb = separation_score(b, a)
        assert sa.branch == sb.branch == "scale_freq"
        # the h-ratio part is symmetric; the frequency part uses the first
        # tuple's scale, so only the branch decision is swap-invariant
        assert sa.value >= 2.0 and sb.value >= 2.0

    def test_decision_swap_invariant(self, rng):
        for _ in range(50):
            a = SymmetryParams(h=rng.uniform(0.5, 2.0), xi=rng.normal(),
                               x0=rng.normal(), t0=rng.normal())
            b = SymmetryParams(h=rng.uniform(0.5, 2.0), xi=rng.normal(),
                               x0=rng.normal(), t0=rng.normal())
            assert separation_score(a, b).branch == separation_score(b, a).branch

    def test_bad_tol_rejected(self):
        with pytest.raises(InvalidParameterError):
            separation_score(SymmetryParams(), SymmetryParams(), tol=0.0)

    def test_bad_branch_rejected(self):
        with pytest.raises(InvalidInputError):
            SeparationScore("diagonal", 1.0)


class TestProfileInnerProduct:
    def test_self_pairing_is_one(self):
        g = GridSpec(1024, 64.0, t_count=9, t_span=1.0)
        phi = gaussian_field(g, width=1.0)
        value, _ = profile_inner_product((SymmetryParams(), phi),
                                         (SymmetryParams(), phi))
        assert value == pytest.approx(1.0 + 0.0j, abs=1e-10)

    def test_disjoint_spectral_supports(self):
        g = GridSpec(1024, 64.0, t_count=9, t_span=1.0)
        phi = gaussian_field(g, width=4.0)
        a = (SymmetryParams(xi=64 * g.dxi), phi)
        b = (SymmetryParams(xi=-64 * g.dxi), phi)
        value, _ = profile_inner_product(a, b)
        assert abs(value) < 1e-12

    def test_time_separation_decay(self):
        g = GridSpec(2 ** 18, 24000.0, t_count=3, t_span=1.0)
        phi = gaussian_field(g, width=0.5)
        vals = []
        for dt in (0.625, 6.25, 62.5):
            a = (SymmetryParams(h=1.0, xi=5.0), phi)
            b = (SymmetryParams(h=1.0, xi=5.0, t0=dt), phi)
            value, _ = profile_inner_product(a, b)
            vals.append(abs(value))
        assert vals[0] > vals[1] > vals[2]
        assert vals[-1] < 1e-2

    def test_grid_mismatch_rejected(self):
        g1 = GridSpec(256, 32.0, t_count=9, t_span=1.0)
        g2 = GridSpec(512, 32.0, t_count=9, t_span=1.0)
        with pytest.raises(InvalidInputError):
            profile_inner_product((SymmetryParams(), gaussian_field(g1)),
                                  (SymmetryParams(), gaussian_field(g2)))


class TestL6AdditivityDefect:
    def test_needs_two_profiles(self):
        g = GridSpec(256, 32.0, t_count=9, t_span=1.0)
        with pytest.raises(InvalidInputError):
            l6_additivity_defect([(SymmetryParams(), gaussian_field(g))])

    def test_duplicate_profile_maximal_coherence(self):
        g = GridSpec(1024, 64.0, t_count=17, t_span=2.0)
        phi = gaussian_field(g, width=1.0)
        pair = [(SymmetryParams(), phi), (SymmetryParams(), phi)]
        defect = l6_additivity_defect(pair)
        U = evolution_stack(apply_symmetry(phi, SymmetryParams()),
                            alpha=1.0 / 6.0)
        single = spacetime_norm(U, 6.0, 6.0) ** 6
        assert defect == pytest.approx(62.0 * single, rel=1e-12)

    def test_disjoint_spatial_supports_small_defect(self):
        g = GridSpec(2 ** 18, 24000.0, t_count=9, t_span=1.0)
        phi = gaussian_field(g, width=1.0)
        pa = (SymmetryParams(x0=-50.0), phi)
        pb = (SymmetryParams(x0=50.0), phi)
        defect = l6_additivity_defect([pa, pb])
        U = evolution_stack(apply_symmetry(phi, SymmetryParams()),
                            alpha=1.0 / 6.0)
        total = 2.0 * spacetime_norm(U, 6.0, 6.0) ** 6
        assert defect / total < 0.02

    def test_monotone_decay_in_separation(self):
        g = GridSpec(2 ** 18, 24000.0, t_count=9, t_span=1.0)
        phi = gaussian_field(g, width=1.0)
        defects = []
        for sep in (100.0, 1000.0, 10000.0):
            pa = (SymmetryParams(x0=-sep / 2), phi)
            pb = (SymmetryParams(x0=sep / 2), phi)
            defects.append(l6_additivity_defect([pa, pb]))
        assert defects[0] > defects[1] > defects[2]
