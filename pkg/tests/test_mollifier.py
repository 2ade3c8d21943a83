import math

import numpy as np
import pytest

from circlereg import MollifierSpec, cutoff_radius, mollifier_eval, tail_mass, total_mass
from oracles import mollifier_oracle


class TestSpecValidation:
    def test_unknown_profile(self):
        with pytest.raises(ValueError):
            MollifierSpec("boxcar", 0.1, 1)

    def test_bad_epsilon(self):
        for eps in (0.0, -1.0, np.inf):
            with pytest.raises(ValueError):
                MollifierSpec("gaussian", eps, 1)

    def test_bad_dim(self):
        with pytest.raises(ValueError):
            MollifierSpec("gaussian", 0.1, 3)


class TestUnitMass:
    @pytest.mark.parametrize("profile", ["gaussian", "bump"])
    @pytest.mark.parametrize("dim", [1, 2])
    @pytest.mark.parametrize("eps", [1.0, 0.1, 0.01])
    def test_total_mass_is_one(self, profile, dim, eps):
        spec = MollifierSpec(profile, eps, dim)
        assert total_mass(spec) == pytest.approx(1.0, abs=1e-6)

    def test_gaussian_constants(self):
        # rho_hat(0) = c_N: 1/sqrt(pi) in 1D, 1/pi in 2D
        assert MollifierSpec("gaussian", 1.0, 1).shape(0.0) == pytest.approx(1 / math.sqrt(math.pi))
        assert MollifierSpec("gaussian", 1.0, 2).shape(0.0) == pytest.approx(1 / math.pi)


class TestEval:
    @pytest.mark.parametrize("profile", ["gaussian", "bump"])
    @pytest.mark.parametrize("dim", [1, 2])
    def test_matches_definition_oracle(self, profile, dim):
        spec = MollifierSpec(profile, 0.3, dim)
        for r in (0.0, 0.05, 0.2, 0.29):
            assert mollifier_eval(spec, r) == pytest.approx(
                mollifier_oracle(profile, 0.3, dim, r), rel=1e-5
            )

    def test_scaling(self):
        # rho_eps(r) = eps^{-N} rho_1(r / eps)
        one = MollifierSpec("gaussian", 1.0, 2)
        small = MollifierSpec("gaussian", 0.25, 2)
        assert mollifier_eval(small, 0.1) == pytest.approx(mollifier_eval(one, 0.4) / 0.25 ** 2)

    def test_bump_compact_support(self):
        spec = MollifierSpec("bump", 0.2, 1)
        assert mollifier_eval(spec, 0.2) == 0.0
        assert mollifier_eval(spec, 0.5) == 0.0
        assert mollifier_eval(spec, 0.19) > 0.0

    def test_negative_radius_rejected(self):
        with pytest.raises(ValueError):
            mollifier_eval(MollifierSpec("gaussian", 0.1, 1), -0.01)


class TestTailMass:
    @pytest.mark.parametrize("profile", ["gaussian", "bump"])
    @pytest.mark.parametrize("dim", [1, 2])
    def test_concentration(self, profile, dim):
        """Mass outside a fixed ball vanishes as eps decreases: the family
        concentrates at the origin."""
        tails = [tail_mass(MollifierSpec(profile, eps, dim), 0.5)
                 for eps in (1.0, 0.5, 0.25, 0.1)]
        assert all(b < a or a == 0 for a, b in zip(tails, tails[1:]))
        assert tails[-1] < 1e-6

    def test_consistent_with_total(self):
        spec = MollifierSpec("gaussian", 0.5, 1)
        assert tail_mass(spec, 1e-9) == pytest.approx(1.0, abs=1e-6)


class TestCutoff:
    def test_bump_cutoff_is_support(self):
        assert cutoff_radius(MollifierSpec("bump", 0.3, 2), 1e-12) == 0.3

    def test_gaussian_cutoff_bounds_dropped_values(self):
        spec = MollifierSpec("gaussian", 0.1, 1)
        rc = cutoff_radius(spec, 1e-12)
        assert mollifier_eval(spec, rc) <= 1e-12 * mollifier_eval(spec, 0.0) * (1 + 1e-9)

    def test_bad_tol(self):
        with pytest.raises(ValueError):
            cutoff_radius(MollifierSpec("gaussian", 0.1, 1), 0.0)
