import numpy as np
import pandas as pd
import pytest

from sweepdecoder.decoder import CORRECTED, LOGICAL_FAILURE, DecoderConfig
from sweepdecoder.errors import ConfigError, CrossingNotFound
from sweepdecoder.experiment import (
    CSV_COLUMNS, ProtocolConfig, RateEstimate, decay_model, estimate_logical_rate, find_crossing,
    fit_sustainable, grid_points, run_batch, run_grid, run_point, run_trial, scan_alpha,
    tolerated_rate, wilson_interval,
)
from sweepdecoder.experiment.reference import (
    CUBIC_GAMMA, CUBIC_P_SUS, CUBIC_PERFECT_WITH_DIRECTION_CHANGE, RHOMBIC_GAMMA, RHOMBIC_P_SUS,
    RHOMBIC_P_TH1,
)
from sweepdecoder.lattice import logical_representatives
from sweepdecoder.noise import CORRELATED, NoiseModel


def small_config(**kwargs):
    defaults = dict(family="rhombic-open", L=3, noise=NoiseModel(p=0.05), cycles=2, trials=12, seed=7)
    defaults.update(kwargs)
    return ProtocolConfig(**defaults)


@pytest.mark.parametrize("kwargs", [
    {"family": "hexagonal"}, {"cycles": 0}, {"trials": 0}, {"seed": -1},
])
def test_invalid_protocol(kwargs):
    with pytest.raises(ConfigError):
        small_config(**kwargs)


def test_noiseless_trials_succeed():
    outcomes = run_batch(small_config(noise=NoiseModel(p=0.0), cycles=3), range(5))
    assert [o.trial for o in outcomes] == list(range(5))
    assert all(o.success and o.mode == CORRECTED and o.residual_weight == 0 for o in outcomes)


def test_planted_logical_fails():
    cfg = small_config(noise=NoiseModel(p=0.0), cycles=1)
    (z,), _ = logical_representatives(cfg.lattice)
    outcomes = run_batch(cfg, [0, 1], initial_error=z)
    assert all(o.mode == LOGICAL_FAILURE for o in outcomes)


def test_outcomes_do_not_depend_on_batching():
    cfg = small_config()
    together = run_batch(cfg, range(cfg.trials))
    alone = [run_trial(cfg, t) for t in range(cfg.trials)]
    assert [o.to_dict() for o in together] == [o.to_dict() for o in alone]


def test_outcomes_do_not_depend_on_workers():
    cfg = small_config(noise=NoiseModel(kind=CORRELATED, p=0.03))
    serial = run_point(cfg, workers=1, batch_size=5)
    parallel = run_point(cfg, workers=2, batch_size=3)
    assert [o.to_dict() for o in serial] == [o.to_dict() for o in parallel]


def test_points_get_independent_streams():
    a = run_point(small_config(point=0))
    b = run_point(small_config(point=1))
    assert [o.seed for o in a] != [o.seed for o in b]


def test_estimate_at_zero_noise():
    estimate = estimate_logical_rate(small_config(noise=NoiseModel(p=0.0), trials=20))
    assert (estimate.failures, estimate.p_L, estimate.ci_low) == (0, 0.0, 0.0)
    assert 0.0 < estimate.ci_high < 0.2


def test_wilson_interval():
    low, high = wilson_interval(0, 1000)
    assert low == 0.0
    assert 3e-3 < high < 4e-3
    low, high = wilson_interval(50, 100)
    assert low < 0.5 < high
    narrow = wilson_interval(200, 400)
    assert (high - low) / (narrow[1] - narrow[0]) == pytest.approx(2.0, rel=0.03)
    assert wilson_interval(0, 0) == (0.0, 1.0)


def test_wilson_interval_reaches_the_ends():
    assert wilson_interval(0, 37)[0] == 0.0
    assert wilson_interval(37, 37)[1] == 1.0
    low, high = wilson_interval(37, 37)
    assert 0.8 < low < 1.0
    with pytest.raises(ConfigError):
        wilson_interval(5, 4)


def test_rate_estimate_counts_modes(caplog):
    outcomes = run_batch(small_config(noise=NoiseModel(p=0.0), cycles=1), range(3))
    estimate = RateEstimate.from_outcomes(outcomes)
    assert estimate.modes == {}
    assert "unreliable" in caplog.text


def synthetic_curves(threshold=0.2):
    rows = [{"L": L, "p": p, "p_L": (p / threshold) ** L / 2}
            for L in (6, 8, 10) for p in (0.1, 0.15, 0.2, 0.25, 0.3)]
    return pd.DataFrame(rows)


def test_crossing_of_synthetic_curves():
    crossing = find_crossing(synthetic_curves())
    assert crossing.p_th == pytest.approx(0.2)
    assert crossing.spread == pytest.approx(0.0, abs=1e-12)
    assert [(a, b) for a, b, _ in crossing.pairs] == [(6, 8), (8, 10)]


def test_crossing_is_interpolated():
    frame = synthetic_curves(0.22)
    crossing = find_crossing(frame)
    assert 0.2 < crossing.p_th < 0.25


def test_no_crossing():
    with pytest.raises(CrossingNotFound):
        find_crossing(synthetic_curves(0.5))


def test_crossing_ignores_curves_stuck_at_zero():
    rows = []
    for L in (4, 6):
        for p in (0.02, 0.05, 0.1, 0.15, 0.25, 0.3):
            rate = 0.0 if p < 0.1 else round((p / 0.2) ** L / 2, 4)
            rows.append({"L": L, "p": p, "p_L": rate})
    crossing = find_crossing(pd.DataFrame(rows))
    assert 0.15 < crossing.p_th < 0.25
    assert crossing.pairs[0][2] == crossing.p_th


def test_touching_curves_do_not_cross():
    rows = [{"L": L, "p": p, "p_L": rate}
            for L, rates in ((4, (0.1, 0.2, 0.3, 0.4)), (6, (0.05, 0.2, 0.25, 0.3)))
            for p, rate in zip((0.1, 0.2, 0.3, 0.4), rates)]
    with pytest.raises(CrossingNotFound):
        find_crossing(pd.DataFrame(rows))


def test_crossing_needs_enough_data():
    frame = synthetic_curves()
    with pytest.raises(ConfigError):
        find_crossing(frame[frame["L"] == 6])
    with pytest.raises(ConfigError):
        find_crossing(frame[frame["p"] > 0.15])
    with pytest.raises(ConfigError):
        find_crossing(frame.drop(columns=["p_L"]))


CYCLES = np.array([1, 2, 4, 8, 16, 32, 64, 128, 256, 512, 1024], dtype=float)


@pytest.mark.parametrize("p_sus,gamma,p_th1", [
    (RHOMBIC_P_SUS, RHOMBIC_GAMMA, RHOMBIC_P_TH1),
    (CUBIC_P_SUS, CUBIC_GAMMA, CUBIC_PERFECT_WITH_DIRECTION_CHANGE),
])
def test_fit_recovers_decay(p_sus, gamma, p_th1):
    rng = np.random.default_rng(12)
    values = decay_model(CYCLES, p_sus, gamma, p_th1)
    values[1:] *= 1 + 0.005 * rng.standard_normal(len(CYCLES) - 1)
    fit = fit_sustainable(zip(CYCLES, values))
    assert fit.identifiable
    assert fit.p_th1 == pytest.approx(p_th1)
    assert fit.p_sus == pytest.approx(p_sus, rel=0.05)
    assert fit.gamma == pytest.approx(gamma, rel=0.05)
    assert fit.predict([1.0])[0] == pytest.approx(p_th1)


def test_fit_of_constant_data():
    fit = fit_sustainable([(n, 0.1) for n in (1, 2, 4, 8)])
    assert not fit.identifiable
    assert np.isnan(fit.gamma)
    assert fit.to_dict()["gamma"] is None


@pytest.mark.parametrize("points", [
    [(1, 0.2), (2, 0.1), (4, 0.05)],
    [(2, 0.2), (4, 0.1), (8, 0.05), (16, 0.03)],
    [(1, 0.2), (2, 0.1), (4, 0.05), (8, -0.01)],
])
def test_fit_rejects_bad_points(points):
    with pytest.raises(ConfigError):
        fit_sustainable(points)


def grid(trials=6):
    return grid_points("rhombic-open", [3], [0.02, 0.08], [1, 2], NoiseModel(), DecoderConfig(),
                       trials=trials, seed=3)


def test_grid_points_are_numbered():
    points = grid()
    assert [(c.cycles, c.L, c.noise.p) for c in points] == [(1, 3, 0.02), (1, 3, 0.08), (2, 3, 0.02), (2, 3, 0.08)]
    assert [c.point for c in points] == [0, 1, 2, 3]


def test_run_grid_output_is_reproducible(tmp_path):
    first, second = tmp_path / "a", tmp_path / "b"
    frame = run_grid(grid(), output_dir=str(first), progress=False)
    run_grid(grid(), output_dir=str(second), progress=False, batch_size=4)
    assert list(frame.columns) == CSV_COLUMNS
    assert len(frame) == 4
    for name in ("results.csv", "trials.jsonl"):
        assert (first / name).read_bytes() == (second / name).read_bytes()
    assert (first / "results.csv").read_text().splitlines()[0] == ",".join(CSV_COLUMNS)
    assert len((first / "trials.jsonl").read_text().splitlines()) == 4 * 6


def test_tolerated_rate():
    frame = pd.DataFrame([
        {"q": 0.01, "L": 4, "p_L": 0.1}, {"q": 0.01, "L": 6, "p_L": 0.05},
        {"q": 0.05, "L": 4, "p_L": 0.2}, {"q": 0.05, "L": 6, "p_L": 0.15},
        {"q": 0.1, "L": 4, "p_L": 0.3}, {"q": 0.1, "L": 6, "p_L": 0.4},
    ])
    assert tolerated_rate(frame) == 0.05
    assert np.isnan(tolerated_rate(frame[frame["q"] == 0.1]))


def test_scan_alpha():
    frame = scan_alpha("rhombic-open", [3], 0.01, [0.0, 0.02], cycles=1, decoder=DecoderConfig(),
                       trials=4, seed=1)
    assert frame["alpha"].tolist() == pytest.approx([0.0, 2.0])
    assert frame["q"].tolist() == [0.0, 0.02]
