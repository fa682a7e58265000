import math

import numpy as np
import pytest

from src.core.criteria import CHI, WClassCriterionParams
from src.processors import figures
from src.utils.errors import InvalidParams


class TestFig2:
    def test_curves(self):
        df = figures.fig2a_curves(points=31)
        assert len(df) == 31
        assert df["f_lb"].iloc[-1] == pytest.approx(0.2)
        assert df["f_ub"].iloc[-1] == pytest.approx(0.2)
        assert df.loc[df["r2"] < 1 / 27, "f_ub_ent"].isna().all()
        assert (df["f_lb"] <= df["f_ub"] + 1e-15).all()

    def test_points(self):
        df = figures.fig2a_points().set_index("label")
        assert tuple(df.loc["B", ["r2", "r4"]]) == pytest.approx((1 / 9, 1 / 25))
        assert tuple(df.loc["C", ["r2", "r4"]]) == pytest.approx((1 / 3, 1 / 5))
        assert len(df) == 8

    def test_dicke_sweep(self):
        df = figures.fig2b_dicke(nmax=10)
        assert len(df) == sum(n // 2 for n in range(2, 11))
        detected = df.set_index(["n", "k"])["detected"]
        assert detected[(6, 2)] and not detected[(7, 2)]
        assert not detected[(5, 1)]

    def test_invalid(self):
        with pytest.raises(InvalidParams):
            figures.fig2a_curves(points=1)
        with pytest.raises(InvalidParams):
            figures.fig2b_dicke(nmax=1)


class TestFig3a:
    def test_anchors(self):
        df = figures.fig3a_anchors().set_index("label")
        assert df.loc["A", "r2"] == pytest.approx(0.0, abs=1e-15)
        assert tuple(df.loc["B", ["r2", "r4"]]) == pytest.approx((1 / 27, 1 / 125))
        assert tuple(df.loc["C", ["r2", "r4"]]) == pytest.approx((1 / 9, 1 / 25))
        assert df.loc["D", "r2"] == pytest.approx(11 / 81)
        assert df.loc["E", "r2"] == pytest.approx(4 / 27)

    def test_curves_endpoints(self):
        df = figures.fig3a_curves(points=5)
        ghz = df[df["curve"] == "noisyghz"]
        assert ghz["r2"].iloc[0] == pytest.approx(4 / 27)
        assert ghz["r2"].iloc[-1] == pytest.approx(0.0, abs=1e-15)
        theta = df[df["curve"] == "psitheta"]
        assert theta["parameter"].iloc[-1] == pytest.approx(math.pi / 2)
        assert theta["r2"].iloc[0] == pytest.approx(1 / 27)

    @pytest.mark.parametrize("state_class", figures.STATE_CLASSES)
    def test_scatter_classes(self, state_class):
        df = figures.fig3a_scatter(8, state_class, seed=1)
        assert list(df.columns) == ["class", "r2", "r4"]
        assert (df["r4"] <= df["r2"]).all()

    def test_fully_separable_bound(self):
        df = figures.fig3a_scatter(30, "fullysep", seed=2)
        assert (df["r2"] <= 1 / 27 + 1e-12).all()
        assert (df["r4"] <= 1 / 125 + 1e-12).all()

    def test_wclass_below_chi(self):
        df = figures.fig3a_scatter(20, "wclass", seed=3)
        assert (df["r2"] <= 11 / 81 + 1e-9).all()

    def test_invalid_class(self):
        with pytest.raises(InvalidParams):
            figures.fig3a_scatter(3, "ghz")


class TestFig3b:
    def test_three_qubits(self, monkeypatch):
        params = WClassCriterionParams(3, CHI[3], -1.0, 0.0)
        monkeypatch.setattr(figures, "wclass_params", lambda n, seed=0, threads=None: params)
        df = figures.fig3b_thresholds(nmax=3)
        assert list(df["criterion"]) == ["r2-only", "line"]
        r2_only = df.iloc[0]
        assert r2_only["p_star"] == pytest.approx(1 - math.sqrt(11 / 12), abs=1e-9)
        assert r2_only["theta_star"] == pytest.approx(0.5 * math.asin(math.sqrt(8 / 9)), abs=1e-9)

    def test_range(self):
        with pytest.raises(InvalidParams):
            figures.fig3b_thresholds(nmax=2)


class TestScanBD:
    def test_default_run_agrees_with_exact_rule(self):
        result = figures.scan_bd(seed=0)
        assert len(result.samples) == 10_000
        assert result.violations == 0
        assert result.r6_missed == 0
        summary = result.summary.set_index("criterion")
        assert summary.loc["criterion_f", "false_entangled"] == 0
        assert summary.loc["criterion_r6", "missed_outside_band"] == 0
        assert summary.loc["criterion_r6", "true_entangled"] > 0

    @pytest.mark.slow
    @pytest.mark.parametrize("seed", [1, 2, 3])
    def test_other_seeds(self, seed):
        result = figures.scan_bd(seed=seed)
        assert result.violations == 0
        assert result.r6_missed == 0

    def test_samples_uniform_in_tetrahedron(self):
        samples = figures.scan_bd(count=4000, seed=9).samples
        entangled = (samples["exact"] == "entangled").mean()
        assert 0.45 < entangled < 0.55
        assert samples["rank_deficient"].mean() < 0.01

    def test_exact_labels(self):
        samples = figures.scan_bd(count=200, seed=1).samples
        entangled = samples["exact"] == "entangled"
        assert (samples.loc[entangled, "l1_norm"] > 1.0).all()
        assert (samples["lambda_min"] >= -1e-12).all()
        assert np.isfinite(samples[["r2", "r4", "r6"]].to_numpy()).all()

    def test_invalid_count(self):
        with pytest.raises(InvalidParams):
            figures.scan_bd(count=0)
