import itertools

import numpy as np
import pytest

from sweepdecoder.decoder import (
    CORRECTED, LOGICAL_FAILURE, SYNDROME_REMAINS, DecoderConfig, DirectionSchedule,
    decoder_tables, default_tmax, is_logical_failure, run_schedule, sweep_decode,
)
from sweepdecoder.errors import ConfigError, LatticeError
from sweepdecoder.lattice import BULK, boundary_map, build_lattice, logical_representatives, qubit_set
from sweepdecoder.sweep import OMEGA, SweepState


@pytest.fixture(scope="module")
def config():
    return DecoderConfig()


def test_defaults(config):
    assert default_tmax(10) == 20
    assert config.tmax_for(10) == 20
    assert config.noisy_period_for(10) == 4
    assert config.noisy_period_for(2) == 1
    assert config.perfect_period_for(10) == 10
    assert config.directions == list(OMEGA)


def test_custom_order_is_parsed():
    order = ["---", "+++", "-++", "+--", "+-+", "-+-", "++-", "--+"]
    cfg = DecoderConfig(direction_order=",".join(order))
    assert [str(d) for d in cfg.directions] == order
    assert cfg.to_dict()["direction_order"] == order


@pytest.mark.parametrize("kwargs", [
    {"direction_order": ("+++", "---")},
    {"variant": "greedy"},
    {"t_max": 0},
    {"noisy_period": 0},
    {"repeats": 0},
])
def test_invalid_config(kwargs):
    with pytest.raises(ConfigError):
        DecoderConfig(**kwargs)


def test_direction_schedule():
    schedule = DirectionSchedule(OMEGA, 3)
    assert [schedule(t) for t in (0, 2, 3, 5, 6)] == [OMEGA[0], OMEGA[0], OMEGA[1], OMEGA[1], OMEGA[2]]
    assert schedule(24) == OMEGA[0]
    with pytest.raises(ConfigError):
        DirectionSchedule(OMEGA, 0)


def test_clear_syndrome_takes_no_steps(rhombic_open_3, config):
    tables = decoder_tables(rhombic_open_3, config)
    result = sweep_decode(rhombic_open_3, tables, np.zeros(rhombic_open_3.n_edges, dtype=bool), config)
    assert result.outcome == CORRECTED
    assert result.steps == 0
    assert not result.correction.any()


def test_single_face_decoded_in_one_step(rhombic_open_5, config):
    lattice = rhombic_open_5
    tables = decoder_tables(lattice, config)
    f = int(np.flatnonzero(lattice.face_label == BULK)[3])
    error = qubit_set(lattice, [f])
    result = sweep_decode(lattice, tables, boundary_map(lattice, error), config, error=error)
    assert result.outcome == CORRECTED
    assert result.steps == 1
    assert np.array_equal(result.correction, error)


def test_every_single_face_error_is_corrected(rhombic_open_3, config):
    lattice = rhombic_open_3
    tables = decoder_tables(lattice, config)
    errors = np.eye(lattice.n_faces, dtype=bool)
    state = SweepState.start(lattice, boundary_map(lattice, errors), seeds=np.arange(lattice.n_faces))
    run_schedule(state, tables, config)
    assert not state.syndrome.any()
    assert not is_logical_failure(lattice, errors ^ state.correction).any()


@pytest.mark.acceptance
@pytest.mark.parametrize("L", [3, 4, 5])
def test_every_two_face_error_is_corrected(L, config):
    lattice = build_lattice("rhombic-open", L)
    tables = decoder_tables(lattice, config)
    pairs = np.array(list(itertools.combinations(range(lattice.n_faces), 2)))
    for chunk in np.array_split(pairs, max(1, len(pairs) // 2000)):
        errors = np.zeros((len(chunk), lattice.n_faces), dtype=bool)
        errors[np.arange(len(chunk)), chunk[:, 0]] = True
        errors[np.arange(len(chunk)), chunk[:, 1]] = True
        state = SweepState.start(lattice, boundary_map(lattice, errors), seeds=chunk[:, 0])
        run_schedule(state, tables, config)
        assert not state.syndrome.any()
        assert not is_logical_failure(lattice, errors ^ state.correction).any()


@pytest.mark.acceptance
@pytest.mark.parametrize("L", [3, 4, 5])
def test_random_local_errors_are_corrected(L, config):
    lattice = build_lattice("rhombic-open", L)
    tables = decoder_tables(lattice, config)
    rng = np.random.default_rng(L)
    errors = np.zeros((10000, lattice.n_faces), dtype=bool)
    for row in errors:
        v = int(rng.integers(lattice.n_vertices))
        local = lattice.incident_faces(v)
        if len(local):
            row[rng.choice(local, size=min(len(local), int(rng.integers(1, 4))), replace=False)] = True
    state = SweepState.start(lattice, boundary_map(lattice, errors), seeds=np.arange(len(errors)))
    run_schedule(state, tables, config)
    assert not state.syndrome.any()
    assert not is_logical_failure(lattice, errors ^ state.correction).any()


def test_planted_logical_is_a_failure(rhombic_open_3, config):
    lattice = rhombic_open_3
    tables = decoder_tables(lattice, config)
    (z,), _ = logical_representatives(lattice)
    result = sweep_decode(lattice, tables, boundary_map(lattice, z), config, error=z)
    assert result.outcome == LOGICAL_FAILURE
    assert result.failed


def test_step_budget_is_respected(rhombic_open_5):
    lattice = rhombic_open_5
    config = DecoderConfig(t_max=1, perfect_period=1)
    tables = decoder_tables(lattice, config)
    rng = np.random.default_rng(2)
    errors = rng.random((20, lattice.n_faces)) < 0.2
    state = SweepState.start(lattice, boundary_map(lattice, errors), seeds=np.arange(20))
    steps = run_schedule(state, tables, config)
    assert (steps <= 8).all()
    assert (steps[state.syndrome.any(axis=1)] == 8).all()
    assert state.syndrome.any()
    result = sweep_decode(lattice, tables, boundary_map(lattice, errors[0]), config, error=errors[0])
    assert result.outcome in (SYNDROME_REMAINS, CORRECTED, LOGICAL_FAILURE)


@pytest.mark.parametrize("fixture", ["rhombic_open_3", "rhombic_open_5", "cubic_open_4"])
def test_logical_failure_needs_clear_syndrome(request, fixture):
    lattice = request.getfixturevalue(fixture)
    with pytest.raises(LatticeError):
        is_logical_failure(lattice, qubit_set(lattice, [0]))


def test_corner_pair_on_rough_top_is_corrected(rhombic_open_3, config):
    lattice = rhombic_open_3
    tables = decoder_tables(lattice, config)
    faces = [lattice.face_index[((6, 6, 4), 0)], lattice.face_index[((6, 6, 4), 1)]]
    error = qubit_set(lattice, faces)
    result = sweep_decode(lattice, tables, boundary_map(lattice, error), config, error=error)
    assert result.outcome == CORRECTED
    assert np.array_equal(result.correction, error)
