"""Tests for the stochastic Heun integrator and trajectory handling."""

import math

import numpy as np
import pytest

from tipscan.models import ModelSpec, make_model
from tipscan.presets import preset_config
from tipscan.sde import (
    SimConfig,
    SimulationDiverged,
    integrate,
    read_trajectory_csv,
    subsample,
    wiener_increments,
    write_trajectory_csv,
)


def quiet_config(**kwargs):
    defaults = dict(
        r=0.0, dt=0.01, lambda0=0.3, alpha_x=0.0, alpha_y=0.0, tspan=10.0, seed=0, epsilon=0.1
    )
    defaults.update(kwargs)
    return SimConfig(**defaults)


class TestWienerIncrements:
    def test_moments(self):
        w = wiener_increments(10**6, 1.0, seed=123)
        assert abs(w.mean()) < 4e-3
        assert abs(w.var() - 1.0) < 0.01

    def test_scaling(self):
        w = wiener_increments(10**5, 0.04, seed=5)
        assert abs(w.std() - 0.2) < 0.005

    def test_rejects_bad_args(self):
        with pytest.raises(ValueError):
            wiener_increments(5, 0.0, seed=1)
        with pytest.raises(ValueError):
            wiener_increments(0, 0.01, seed=1)

    def test_deterministic(self):
        a = wiener_increments(3, 0.01, seed=42)
        b = wiener_increments(3, 0.01, seed=42)
        assert np.array_equal(a, b)


class TestIntegrate:
    def test_deterministic_bit_identical(self):
        model = make_model("fold", epsilon=0.1)
        cfg = quiet_config(alpha_x=0.01, alpha_y=0.01, r=0.001, tspan=5.0, seed=9)
        a = integrate(model, cfg)
        b = integrate(model, cfg)
        assert np.array_equal(a.x, b.x) and np.array_equal(a.y, b.y)
        assert np.array_equal(a.t, b.t) and np.array_equal(a.lam, b.lam)

    def test_length_and_lambda_ramp(self):
        model = make_model("fold", epsilon=0.1)
        cfg = quiet_config(r=0.01, tspan=2.0, dt=0.01)
        frame = integrate(model, cfg)
        assert len(frame) == 201
        assert np.allclose(frame.lam, cfg.lambda0 - cfg.r * frame.t)
        assert np.allclose(np.diff(frame.t), cfg.dt, atol=1e-12 * cfg.tspan)

    @pytest.mark.parametrize(
        "name,kwargs,lam0",
        [
            ("fold", {"epsilon": 0.1}, 0.3),
            ("subcritical_hopf", {"omega": 0.3}, 2.0),
            ("singular_hopf", {"epsilon": 0.01}, 0.4),
        ],
    )
    def test_equilibrium_is_fixed_point(self, name, kwargs, lam0):
        model = make_model(name, **kwargs)
        cfg = quiet_config(lambda0=lam0, epsilon=kwargs.get("epsilon", 1.0), dt=0.001, tspan=2.0)
        frame = integrate(model, cfg)
        x0, y0 = model.equilibrium(lam0)
        assert np.max(np.abs(frame.x - x0)) < 1e-6
        assert np.max(np.abs(frame.y - y0)) < 1e-6

    def test_deterministic_fold_tracks_critical_manifold(self):
        model = make_model("fold", epsilon=0.1)
        cfg = quiet_config(r=0.001, tspan=250.0, dt=0.002)
        frame = integrate(model, cfg)
        mask = frame.t > 5.0
        resid = np.abs(frame.y[mask] ** 2 * (1 + frame.y[mask]) - frame.x[mask])
        assert resid.max() < 1e-2

    def test_divergence_guard(self):
        # start on an unstable equilibrium; noise pushes into finite-time blowup
        model = ModelSpec(
            name="quadratic_blowup",
            drift=lambda x, y, lam: (x * x - 1.0, -y),
            jacobian=lambda x, y, lam: np.array([[2 * x, 0.0], [0.0, -1.0]]),
            eq_seed=lambda lam: (1.0, 0.0),
            has_timescale_split=False,
            state_box=(-1, 1),
        )
        cfg = quiet_config(epsilon=1.0, alpha_x=0.5, dt=0.01, tspan=200.0, seed=2)
        with pytest.raises(SimulationDiverged), np.errstate(over="ignore", invalid="ignore"):
            integrate(model, cfg)

    def test_strong_order_under_halving(self):
        # common Brownian paths at the fine level, pairwise-summed to
        # coarser grids; RMS endpoint error over many paths should drop
        # roughly linearly in dt (strong order one for additive noise)
        model = make_model("fold", epsilon=0.1)
        rng = np.random.default_rng(17)
        dt_fine = 0.0025
        n_fine = int(round(1.0 / dt_fine))
        n_paths = 200
        sq_err = np.zeros(3)
        for _ in range(n_paths):
            dw_fine = rng.standard_normal((n_fine, 2)) * math.sqrt(dt_fine)

            def endpoint(level):
                # level 0 is the coarsest grid (dt = 8 * dt_fine)
                factor = 2 ** (3 - level)
                dw = dw_fine.reshape(n_fine // factor, factor, 2).sum(axis=1)
                cfg = quiet_config(
                    alpha_x=0.02, alpha_y=0.02, dt=dt_fine * factor, tspan=1.0, seed=0
                )
                frame = integrate(model, cfg, dw=dw)
                return np.array([frame.x[-1], frame.y[-1]])

            ref = endpoint(3)
            for level in range(3):
                sq_err[level] += np.sum((endpoint(level) - ref) ** 2)
        rms = np.sqrt(sq_err / n_paths)
        assert 1.4 <= rms[0] / rms[1] <= 3.5
        assert 1.4 <= rms[1] / rms[2] <= 3.5

    def test_fold_preset_tips_near_bifurcation(self):
        cfg = preset_config("fold", seed=1).sim
        model = make_model("fold", epsilon=cfg.epsilon)
        frame = integrate(model, cfg)
        i250 = np.searchsorted(frame.t, 250.0)
        assert frame.y[i250] > 0.0  # still on the tracked branch
        drop = np.flatnonzero(frame.y < -0.5)
        assert len(drop) > 0
        t_tip = frame.t[drop[0]]
        assert 290.0 < t_tip < 340.0

    def test_singular_hopf_preset_tips_after_forcing_crosses_zero(self):
        cfg = preset_config("singular_hopf", seed=1).sim
        model = make_model("singular_hopf", epsilon=cfg.epsilon)
        frame = integrate(model, cfg)
        dev = np.abs(frame.x - frame.lam)
        assert dev[frame.t < 70.0].max() < 0.3
        assert dev[frame.t > 85.0].max() > 0.8  # relaxation oscillation reached


class TestSubsample:
    def make_frame(self, n=11):
        t = np.arange(n) * 0.5
        return integrate(
            make_model("fold", epsilon=0.1), quiet_config(tspan=(n - 1) * 0.5, dt=0.5)
        )

    def test_every_fifth(self):
        frame = self.make_frame(11)
        sub = subsample(frame, 5)
        assert len(sub) == 3
        assert np.array_equal(sub.t, frame.t[[0, 5, 10]])

    def test_identity(self):
        frame = self.make_frame()
        assert subsample(frame, 1) is frame

    def test_dt_sample_scales(self):
        cfg = preset_config("fold").sim
        model = make_model("fold", epsilon=cfg.epsilon)
        from dataclasses import replace

        frame = integrate(model, replace(cfg, tspan=1.0))
        assert subsample(frame, 10).dt_sample == pytest.approx(0.02)

    def test_rejects_zero(self):
        with pytest.raises(ValueError):
            subsample(self.make_frame(), 0)


class TestTrajectoryCsv:
    def test_round_trip(self, tmp_path):
        model = make_model("fold", epsilon=0.1)
        frame = integrate(model, quiet_config(alpha_x=0.01, tspan=1.0, seed=3))
        path = tmp_path / "traj.csv"
        write_trajectory_csv(frame, path)
        header = path.read_text().splitlines()[0]
        assert header == "t,x,y,lambda"
        back = read_trajectory_csv(path)
        assert np.array_equal(back.x, frame.x)
        assert np.array_equal(back.y, frame.y)

    def test_full_precision(self, tmp_path):
        model = make_model("fold", epsilon=0.1)
        frame = integrate(model, quiet_config(alpha_x=0.01, tspan=0.1, seed=3))
        path = tmp_path / "traj.csv"
        write_trajectory_csv(frame, path)
        line = path.read_text().splitlines()[2]
        assert float(line.split(",")[1]) == frame.x[1]


class TestSimConfigValidation:
    @pytest.mark.parametrize(
        "field,value",
        [("dt", 0.0), ("tspan", -1.0), ("epsilon", 0.0), ("r", -0.1), ("alpha_x", -1.0)],
    )
    def test_rejects(self, field, value):
        cfg = quiet_config(**{field: value})
        with pytest.raises(ValueError, match=field.split("_")[0]):
            cfg.validate()
