import numpy as np
import pytest

from circlereg import (
    GEODESIC,
    AngleField,
    DescentConfig,
    FunctionalParams,
    GridSpec,
    Mask,
    MollifierSpec,
    alpha_rule_admissible,
    bbm_constant,
    bbm_limit_study,
    build_kernel,
    conjecture_study,
    convergence_study,
    poincare_ratio,
    poincare_ratio_study,
    roughness_test_signal,
)


class TestBbmConstant:
    def test_known_values(self):
        assert bbm_constant(2, 1) == 1.0
        assert bbm_constant(2, 2) == 0.5

    def test_other_p_rejected(self):
        with pytest.raises(ValueError):
            bbm_constant(1.5, 1)


class TestBbmLimitStudy:
    def test_constant_field_is_zero(self):
        g = GridSpec((512,))
        rows = bbm_limit_study(np.full(512, 1.0), g, p=2, eps_list=[0.1, 0.05])
        assert all(r["value"] == 0.0 for r in rows)

    def test_linear_function_ratio_one(self):
        """For u(x) = x the difference quotient is exactly the slope, so the
        interior ratio is 1 up to quadrature error at every eps."""
        g = GridSpec((1024,))
        u = 0.5 * g.coords()[:, 0]
        rows = bbm_limit_study(u, g, p=2, eps_list=[0.04, 0.02])
        for r in rows:
            assert r["ratio"] == pytest.approx(1.0, abs=0.01)

    def test_eps_list_must_decrease(self):
        g = GridSpec((512,))
        with pytest.raises(ValueError, match="strictly decreasing"):
            bbm_limit_study(np.zeros(512), g, p=2, eps_list=[0.05, 0.05])

    def test_resolution_precondition(self):
        g = GridSpec((64,))
        with pytest.raises(ValueError, match="eps/10"):
            bbm_limit_study(np.zeros(64), g, p=2, eps_list=[0.05])

    def test_2d_linear(self):
        g = GridSpec((128, 128))
        coords = g.coords()
        u = 0.7 * coords[:, 0] + 0.2 * coords[:, 1]
        rows = bbm_limit_study(u, g, p=2, eps_list=[0.08])
        assert rows[0]["ratio"] == pytest.approx(1.0, abs=0.02)


class TestConjectureStudy:
    def test_constant_flags_degenerate(self):
        g = GridSpec((256,))
        res = conjecture_study(np.zeros(256), g, p=2, s=0.5, eps_list=[0.1, 0.05])
        assert res["degenerate"]
        assert not res["stabilized"]

    def test_requires_s_below_one(self):
        g = GridSpec((256,))
        with pytest.raises(ValueError):
            conjecture_study(np.zeros(256), g, p=2, s=1.0, eps_list=[0.1])

    def test_ratio_changes_shrink_in_tail(self):
        n = 1024
        g = GridSpec((n,))
        u = roughness_test_signal(n, 0.5, seed=7)
        res = conjecture_study(u, g, p=2, s=0.5, eps_list=[0.08, 0.04, 0.02, 0.01])
        ratios = [r["ratio"] for r in res["rows"]]
        changes = [abs(b - a) / a for a, b in zip(ratios, ratios[1:])]
        assert changes[-1] < changes[0]


class TestRoughnessSignal:
    def test_deterministic(self):
        np.testing.assert_array_equal(
            roughness_test_signal(256, 0.5, 7), roughness_test_signal(256, 0.5, 7)
        )

    def test_seed_changes_signal(self):
        assert not np.array_equal(
            roughness_test_signal(256, 0.5, 7), roughness_test_signal(256, 0.5, 8)
        )


class TestAlphaRule:
    def test_admissible_rule(self):
        assert alpha_rule_admissible(lambda d: d, p=2)
        assert alpha_rule_admissible(lambda d: d ** 0.55, p=1.1)

    def test_violating_rule_detected(self):
        # alpha = delta^{2p} decays too fast: delta^p / alpha blows up
        assert not alpha_rule_admissible(lambda d: d ** 4, p=2)


class TestConvergenceStudy:
    def _clean(self, n=60):
        g = GridSpec((n,), (float(n),))
        x = g.coords()[:, 0]
        return AngleField(g, np.pi * (1.0 + 0.8 * np.sin(2 * np.pi * x / n)))

    def _params(self):
        return FunctionalParams(p=2, s=0.5, k=1, l=1, alpha=1.0, metric=GEODESIC,
                                mollifier=MollifierSpec("gaussian", 2.0, 1))

    def test_sigma_list_must_decrease(self):
        with pytest.raises(ValueError):
            convergence_study(self._clean(), [0.1, 0.1], lambda d: d,
                              self._params(), DescentConfig(10, 0.05))

    def test_error_decreases_with_noise(self):
        res = convergence_study(self._clean(), [0.2, 0.05], lambda d: d,
                                self._params(), DescentConfig(100, 0.1),
                                seeds=(0, 1, 2))
        rows = res["rows"]
        assert rows[1]["rmse_median"] < rows[0]["rmse_median"]
        assert res["alpha_rule_admissible"]

    def test_alpha_follows_rule(self):
        res = convergence_study(self._clean(), [0.1], lambda d: 3.0 * d,
                                self._params(), DescentConfig(10, 0.05), seeds=(0,))
        row = res["rows"][0]
        assert row["alpha_median"] == pytest.approx(3.0 * row["delta_median"])


class TestPoincareRatio:
    def _setup(self, n=40):
        g = GridSpec((n,))
        known = np.ones(n, bool)
        known[10:20] = False
        mask = Mask(g, known)
        params = FunctionalParams(p=2, s=0.5, k=1, l=1, alpha=1.0, metric=GEODESIC,
                                  mollifier=MollifierSpec("gaussian", 0.1, 1))
        kernel = build_kernel(g, params)
        return g, mask, params, kernel

    def test_zero_field_maps_to_zero(self):
        g, mask, params, kernel = self._setup()
        assert poincare_ratio(np.zeros(40), g, mask, params, kernel) == 0.0

    def test_constant_field_exact_volume_ratio(self):
        """For constant w the regularizer vanishes and the ratio is exactly
        |D| / |complement of D|."""
        g, mask, params, kernel = self._setup()
        got = poincare_ratio(np.full(40, 2.7), g, mask, params, kernel)
        assert got == pytest.approx(10 / 30, rel=1e-12)

    def test_study_stable_across_seeds(self):
        g, mask, params, kernel = self._setup()
        r1 = poincare_ratio_study(g, mask, params, n_samples=200, seed=0)
        r2 = poincare_ratio_study(g, mask, params, n_samples=200, seed=1)
        assert np.isfinite(r1["max_ratio"])
        assert abs(r1["max_ratio"] - r2["max_ratio"]) <= 0.5 * max(r1["max_ratio"],
                                                                   r2["max_ratio"])

    def test_requires_unknown_region(self):
        g = GridSpec((20,))
        params = FunctionalParams(p=2, s=0.5, k=1, l=0, alpha=1.0, metric=GEODESIC)
        with pytest.raises(ValueError):
            poincare_ratio_study(g, Mask.all_known(g), params)
