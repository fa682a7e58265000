import logging
import math

import numpy as np
import pytest

import config
from src.core.criteria import BORDERS, CHI, WClassCriterionParams, wclass_line_criterion
from src.core.moments import state_moments
from src.core.qcore import DensityMatrix, random_wclass_ket
from src.processors.witness_opt import (
    amplitude_threshold,
    bd_boundary_bruteforce,
    border_violations,
    compute_line_params,
    maximize_moment_wclass,
    maximize_objective_wclass,
    noise_threshold,
    sample_bd_params,
    wclass_chi,
    wclass_mixed_border_estimate,
)
from src.utils.errors import InvalidParams, NotDetected, UnsupportedQubitNumber


class TestWClassOptimization:
    def test_chi3_recovered(self):
        result = maximize_moment_wclass(3, 2, restarts=8, seed=1)
        assert result.value == pytest.approx(11 / 81, abs=1e-8)
        assert sum(v * v for v in result.argmax.lambdas) == pytest.approx(1.0)

    @pytest.mark.slow
    @pytest.mark.parametrize("n", [4, 5])
    def test_chi_known_values(self, n):
        result = maximize_moment_wclass(n, 2, restarts=16, seed=2)
        assert result.value == pytest.approx(CHI[n], abs=1e-7)

    def test_deterministic_and_thread_independent(self):
        a = maximize_moment_wclass(3, 2, restarts=4, seed=11, threads=1)
        b = maximize_moment_wclass(3, 2, restarts=4, seed=11, threads=2)
        assert a.values == b.values
        assert a.argmax == b.argmax

    def test_spread_is_range_of_restarts(self):
        result = maximize_moment_wclass(3, 2, restarts=4, seed=5)
        assert result.spread == pytest.approx(max(result.values) - min(result.values))
        assert len(result.values) == result.restarts

    def test_unconverged_spread_doubles_once_and_warns(self, monkeypatch, caplog):
        monkeypatch.setattr(config, "OPT_SPREAD_WARN", -1.0)
        with caplog.at_level(logging.WARNING):
            result = maximize_moment_wclass(3, 2, restarts=2, seed=3)
        assert result.restarts == 4
        assert not result.converged
        assert "não convergiu" in caplog.text

    def test_invalid_arguments(self):
        with pytest.raises(UnsupportedQubitNumber):
            maximize_objective_wclass(2, lambda r2, r4: r2)
        with pytest.raises(UnsupportedQubitNumber):
            maximize_objective_wclass(9, lambda r2, r4: r2)
        with pytest.raises(InvalidParams):
            maximize_objective_wclass(3, lambda r2, r4: r2, restarts=0)
        with pytest.raises(InvalidParams):
            maximize_moment_wclass(3, 6)
        with pytest.raises(UnsupportedQubitNumber):
            compute_line_params(7)

    def test_chi_lookup(self):
        assert wclass_chi(3) == CHI[3]
        assert wclass_chi(5) == CHI[5]


class TestNoiseThreshold:
    def test_closed_form_n3(self):
        result = noise_threshold(3)
        assert result.threshold == pytest.approx(1 - math.sqrt(11 / 12), abs=1e-12)
        assert result.method == "closed-form"

    def test_bisection_agrees_with_closed_form(self):
        closed = noise_threshold(3, method="closed-form")
        bisected = noise_threshold(3, method="bisection")
        assert bisected.threshold == pytest.approx(closed.threshold, abs=1e-9)
        assert bisected.lower <= closed.threshold <= bisected.upper

    def test_increases_with_qubits_known_chi(self):
        p = [noise_threshold(n).threshold for n in (3, 4, 5)]
        assert p[0] < p[1] < p[2]

    @pytest.mark.slow
    def test_increases_up_to_six_qubits(self):
        p = [noise_threshold(n).threshold for n in range(3, 7)]
        assert all(a < b for a, b in zip(p, p[1:]))

    def test_not_detected(self):
        with pytest.raises(NotDetected):
            noise_threshold(3, params=WClassCriterionParams(3, 0.5, -1.0, 0.0))

    def test_unknown_criterion(self):
        with pytest.raises(InvalidParams):
            noise_threshold(3, criterion="cubic")


class TestAmplitudeThreshold:
    def test_r2_only_n3(self):
        result = amplitude_threshold(3)
        expected = 0.5 * math.asin(math.sqrt(8 / 9))
        assert result.threshold == pytest.approx(expected, abs=1e-9)
        assert result.bracket_width <= 1e-10

    def test_not_detected(self):
        with pytest.raises(NotDetected):
            amplitude_threshold(3, params=WClassCriterionParams(3, 0.5, -1.0, 0.0))

    def test_frozen_line_params(self):
        params = WClassCriterionParams(3, CHI[3], -1.0, 0.0)
        result = amplitude_threshold(3, "line", params)
        assert 0.0 <= result.threshold < math.pi / 4


@pytest.mark.slow
class TestLineParams:
    @pytest.fixture(scope="class")
    def line3(self):
        return compute_line_params(3, seed=0, restarts=16)

    def test_slope_negative(self, line3):
        assert line3.params.slope_m < 0
        assert line3.params.chi == CHI[3]
        assert len(line3.provenance["restarts"]) == 3
        assert all(isinstance(flag, bool) for flag in line3.provenance["converged"])

    def test_sound_on_random_wclass_states(self, line3):
        for seed in range(40):
            rho = DensityMatrix.from_ket(random_wclass_ket(3, seed=seed))
            m = state_moments(rho)
            margin = wclass_line_criterion(line3.params, m.r2, m.r4).margin
            assert margin >= -1e-6

    def test_line_beats_r2_only(self, line3):
        line = noise_threshold(3, "line", line3.params)
        r2_only = noise_threshold(3)
        assert line.threshold > r2_only.threshold


class TestBoundaryOracle:
    def test_separable_corner(self):
        df = bd_boundary_bruteforce([1 / 9], samples_per_cell=3000, mode="separable", seed=3)
        row = df.iloc[0]
        assert row["count"] > 0
        assert row["r4_min"] == pytest.approx(0.04, abs=2e-3)
        assert row["r4_max"] == pytest.approx(0.04, abs=2e-3)

    def test_bell_corner(self):
        df = bd_boundary_bruteforce([1 / 3], samples_per_cell=3000, mode="all", seed=4)
        row = df.iloc[0]
        assert row["count"] > 0
        assert row["r4_min"] == pytest.approx(0.2, abs=2e-3)

    @pytest.mark.parametrize(
        "mode, lower, upper",
        [
            ("all", "f_lb", "f_ub"),
            ("separable", "f_lb_sep", "f_ub_sep"),
            ("entangled", "f_lb_ent", "f_ub_ent"),
        ],
    )
    def test_extremes_follow_borders(self, mode, lower, upper):
        lo = max(BORDERS[lower][1], BORDERS[upper][1])
        hi = min(BORDERS[lower][2], BORDERS[upper][2])
        df = bd_boundary_bruteforce(np.linspace(lo, hi, 20), samples_per_cell=2000, mode=mode, seed=21)
        filled = df[df["count"] > 0]
        assert len(filled) >= 15
        for name, r2_col, r4_col in ((lower, "r2_at_min", "r4_min"), (upper, "r2_at_max", "r4_max")):
            fn, a, b = BORDERS[name]
            gaps = [abs(r4 - fn(min(max(r2, a), b))) for r2, r4 in zip(filled[r2_col], filled[r4_col])]
            assert max(gaps) < 5e-3, name

    def test_empty_cell(self):
        df = bd_boundary_bruteforce([0.3], samples_per_cell=50, mode="separable", seed=1)
        assert df.iloc[0]["count"] == 0
        assert np.isnan(df.iloc[0]["r4_min"])

    def test_grid_validation(self):
        with pytest.raises(InvalidParams):
            bd_boundary_bruteforce([0.5])
        with pytest.raises(InvalidParams):
            sample_bd_params(10, "weird")

    @pytest.mark.parametrize("mode", ["all", "separable", "entangled"])
    def test_no_border_violations(self, mode):
        samples = sample_bd_params(20_000, mode, seed=9)
        assert len(samples) > 0
        assert all(v == 0 for v in border_violations(samples, mode).values())

    def test_entangled_mode_filters(self):
        samples = sample_bd_params(5000, "entangled", seed=2)
        assert np.all(np.sum(np.abs(samples), axis=1) > 1.0)


class TestWClassMixedBorder:
    def test_estimate(self):
        grid = np.linspace(0.0, 11 / 81, 12)
        df = wclass_mixed_border_estimate(grid, samples=5000, seed=0)
        assert list(df.columns) == ["r2", "r4_min", "count"]
        filled = df[df["count"] > 0]
        assert len(filled) > 0
        assert (filled["r4_min"] >= 0).all()

    def test_seeded(self):
        grid = [0.02, 0.05]
        a = wclass_mixed_border_estimate(grid, samples=2000, seed=4)
        b = wclass_mixed_border_estimate(grid, samples=2000, seed=4)
        assert a.equals(b)
