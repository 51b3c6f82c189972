"""Statistical checks of the decoder against published thresholds.

Skipped by default: pass --run-acceptance (minutes to an hour) and
--run-extended (hours of CPU) to pytest.
"""
import math

import numpy as np
import pytest
from scipy.optimize import brentq
from scipy.stats import norm

from sweepdecoder.decoder import DecoderConfig
from sweepdecoder.experiment import (
    ProtocolConfig, estimate_logical_rate, find_crossing, fit_sustainable, grid_points, run_grid,
)
from sweepdecoder.experiment.reference import (
    CUBIC_PERFECT_TOLERANCE, CUBIC_PERFECT_WITH_DIRECTION_CHANGE, GAMMA_RANGE, P_SUS_TOLERANCE,
    RHOMBIC_P_SUS, RHOMBIC_P_TH1, RHOMBIC_P_TH1_TOLERANCE,
)
from sweepdecoder.lattice import boundary_map, gf2_in_span
from sweepdecoder.noise import CORRELATED, NoiseModel, effective_rate
from sweepdecoder.sweep import (
    SweepDirection, causal_diamond, local_error, support_vertices, sweep_context,
)

TRIALS = 1000
WORKERS = 4


def crossing(family, sizes, rates, cycles=1, noise=None, trials=TRIALS):
    points = grid_points(family, sizes, rates, [cycles], noise or NoiseModel(), DecoderConfig(),
                         trials=trials, seed=2024)
    return find_crossing(run_grid(points, workers=WORKERS, progress=False))


@pytest.mark.acceptance
def test_local_syndromes_have_a_correction_inside_their_diamond(rhombic_open_5):
    lattice = rhombic_open_5
    ctx = sweep_context(lattice, SweepDirection((1, 1, 1)))
    boundary = lattice.boundary.toarray().astype(np.uint8)
    rng = np.random.default_rng(2)
    for _ in range(1000):
        syndrome = boundary_map(lattice, local_error(lattice, rng, bulk_only=True))
        if not syndrome.any():
            continue
        diamond = causal_diamond(ctx, support_vertices(lattice, syndrome))
        inside = [f for f in range(lattice.n_faces)
                  if set(int(v) for v in lattice.face_vertex_list(f)) <= diamond]
        assert gf2_in_span(boundary[inside], syndrome.astype(np.uint8))


@pytest.mark.acceptance
def test_rhombic_threshold_with_one_noisy_cycle():
    rates = np.round(np.arange(0.17, 0.261, 0.01), 4)
    result = crossing("rhombic-periodic", [6, 8, 10], rates)
    assert abs(result.p_th - RHOMBIC_P_TH1) <= RHOMBIC_P_TH1_TOLERANCE


@pytest.mark.acceptance
def test_cubic_threshold_with_perfect_measurements():
    rates = np.round(np.arange(0.125, 0.186, 0.005), 4)
    result = crossing("cubic-periodic", [8, 10, 12], rates, noise=NoiseModel(q_override=0.0))
    assert abs(result.p_th - CUBIC_PERFECT_WITH_DIRECTION_CHANGE) <= CUBIC_PERFECT_TOLERANCE


@pytest.mark.acceptance
def test_cubic_threshold_drops_with_noisy_cycles():
    rates = np.round(np.geomspace(0.01, 0.25, 14), 5)
    one = crossing("cubic-periodic", [6, 8, 10], rates, cycles=1)
    many = crossing("cubic-periodic", [6, 8, 10], rates, cycles=32)
    assert many.p_th < 0.05
    assert many.p_th < one.p_th


@pytest.mark.acceptance
def test_rhombic_threshold_decays_with_noisy_cycles():
    rates = np.round(np.geomspace(0.012, 0.3, 18), 5)
    thresholds = [(n, crossing("rhombic-periodic", [6, 8, 10], rates, cycles=n).p_th)
                  for n in (1, 4, 16, 64)]
    values = [p for _, p in thresholds]
    assert all(a > b for a, b in zip(values, values[1:]))
    fit = fit_sustainable(thresholds)
    assert GAMMA_RANGE[0] <= fit.gamma <= GAMMA_RANGE[1]


@pytest.mark.extended
def test_rhombic_sustainable_threshold():
    rates = np.round(np.geomspace(0.012, 0.3, 18), 5)
    thresholds = [(n, crossing("rhombic-periodic", [6, 8, 10], rates, cycles=n).p_th)
                  for n in (1, 4, 16, 64, 256, 1024)]
    fit = fit_sustainable(thresholds)
    assert abs(fit.p_sus - RHOMBIC_P_SUS) <= P_SUS_TOLERANCE


def rate(family, L, noise, cycles, decoder=None, trials=TRIALS, seed=7):
    cfg = ProtocolConfig(family=family, L=L, noise=noise, cycles=cycles,
                         decoder=decoder or DecoderConfig(), trials=trials, seed=seed)
    return estimate_logical_rate(cfg, workers=WORKERS)


@pytest.mark.acceptance
@pytest.mark.parametrize("L", [6, 8, 10])
def test_measurement_errors_hurt_less_than_qubit_errors(L):
    measurement = rate("rhombic-periodic", L, NoiseModel(p=1e-4, q_override=0.05), cycles=64)
    qubit = rate("rhombic-periodic", L, NoiseModel(p=0.05, q_override=1e-4), cycles=64)
    assert 1 - measurement.p_L >= 0.99
    assert measurement.p_L < qubit.p_L


def one_sided_z(worse, better) -> float:
    pooled = (worse.failures + better.failures) / (worse.trials + better.trials)
    se = math.sqrt(pooled * (1 - pooled) * (1 / worse.trials + 1 / better.trials))
    return (worse.p_L - better.p_L) / se if se else 0.0


@pytest.mark.acceptance
def test_more_sweeps_per_measurement_help():
    noise = NoiseModel(p=0.025)
    one = rate("rhombic-open", 6, noise, 64, DecoderConfig(sweeps_per_measurement=1))
    three = rate("rhombic-open", 6, noise, 64, DecoderConfig(sweeps_per_measurement=3))
    assert one_sided_z(one, three) > norm.ppf(0.95)


@pytest.mark.acceptance
@pytest.mark.parametrize("L", [6, 8])
@pytest.mark.parametrize("cycles", [1, 16])
def test_correlated_noise_is_no_easier(L, cycles):
    p_face = 0.02 if cycles > 1 else 0.12
    p_pair = brentq(lambda p: effective_rate(p) - p_face, 0.0, 3.0 / 8.0)
    iid = rate("rhombic-open", L, NoiseModel(p=p_face), cycles)
    correlated = rate("rhombic-open", L, NoiseModel(kind=CORRELATED, p=p_pair, q_override=p_face), cycles)
    assert correlated.ci_high >= iid.p_L


@pytest.mark.acceptance
def test_results_do_not_depend_on_worker_count(tmp_path):
    points = grid_points("rhombic-open", [4, 6], [0.03, 0.06], [1, 8], NoiseModel(), DecoderConfig(),
                         trials=200, seed=99)
    run_grid(points, output_dir=str(tmp_path / "one"), workers=1, progress=False)
    run_grid(points, output_dir=str(tmp_path / "eight"), workers=8, batch_size=16, progress=False)
    for name in ("results.csv", "trials.jsonl"):
        assert (tmp_path / "one" / name).read_bytes() == (tmp_path / "eight" / name).read_bytes()

