import logging

import numpy as np
import pytest

from sweepdecoder.errors import NoiseModelError
from sweepdecoder.lattice import build_lattice
from sweepdecoder.noise import (
    CORRELATED, EDGE, VERTEX, NeighborPairs, NoiseModel, effective_rate, marginal_rate,
    match_pair_rate, neighbor_pairs, sample_correlated, sample_errors, sample_measurement_flips,
    sample_phase_flips,
)


def test_q_follows_alpha():
    assert NoiseModel(p=0.02, alpha=2.0).q == pytest.approx(0.04)
    assert NoiseModel(p=0.02, q_override=0.1).q == 0.1


def test_q_is_clamped_with_warning(caplog):
    with caplog.at_level(logging.WARNING):
        model = NoiseModel(p=0.6, alpha=2.0)
    assert model.q == 1.0
    assert "clamped" in caplog.text


@pytest.mark.parametrize("kwargs", [
    {"p": -0.1}, {"p": 1.5}, {"alpha": -1.0}, {"kind": "biased"}, {"neighbours": "cell"},
    {"q_override": 2.0},
])
def test_invalid_models(kwargs):
    with pytest.raises(NoiseModelError):
        NoiseModel(**kwargs)


def test_phase_flip_extremes(rhombic_periodic_2):
    rng = np.random.default_rng(0)
    assert not sample_phase_flips(NoiseModel(p=0.0), rhombic_periodic_2, rng).any()
    assert sample_phase_flips(NoiseModel(p=1.0), rhombic_periodic_2, rng).all()


def test_phase_flip_mean_weight():
    lattice = build_lattice("rhombic-periodic", 4)
    flips = sample_phase_flips(NoiseModel(p=0.1), lattice, np.random.default_rng(1), batch=10000)
    assert flips.shape == (10000, lattice.n_faces)
    n = flips.size
    sigma = np.sqrt(n * 0.1 * 0.9)
    assert abs(flips.sum() - 0.1 * n) < 3 * sigma


def test_measurement_flip_extremes():
    syndrome = np.array([True, False, True, False])
    rng = np.random.default_rng(2)
    assert np.array_equal(sample_measurement_flips(syndrome, 0.0, rng), syndrome)
    assert np.array_equal(sample_measurement_flips(syndrome, 1.0, rng), ~syndrome)
    with pytest.raises(NoiseModelError):
        sample_measurement_flips(syndrome, 1.2, rng)


def test_single_pair_patterns_are_uniform(rhombic_periodic_2):
    pairs = NeighborPairs(rhombic_periodic_2)
    pairs.pairs = pairs.pairs[:1]
    a, b = pairs.pairs[0]
    flips = sample_correlated(NoiseModel(kind=CORRELATED, p=1.0), pairs, np.random.default_rng(3), batch=30000)
    assert flips.sum(axis=1).max() <= 2
    first, second = flips[:, a], flips[:, b]
    for observed in (first & ~second, ~first & second, first & second):
        assert observed.mean() == pytest.approx(1 / 3, abs=0.015)


@pytest.mark.parametrize("family,degree", [("rhombic-periodic", 8), ("cubic-periodic", 12)])
def test_edge_neighbour_degree(family, degree):
    lattice = build_lattice(family, 4)
    pairs = neighbor_pairs(lattice, EDGE)
    assert (pairs.degree == degree).all()
    assert len(np.unique(pairs.pairs, axis=0)) == len(pairs)
    assert (pairs.pairs[:, 0] < pairs.pairs[:, 1]).all()
    for f, g in pairs.pairs[::97]:
        shared = set(lattice.face_edge_list(f)) & set(lattice.face_edge_list(g))
        assert shared


def test_vertex_neighbours_include_edge_neighbours(rhombic_periodic_2):
    by_edge = {tuple(p) for p in neighbor_pairs(rhombic_periodic_2, EDGE).pairs}
    by_vertex = {tuple(p) for p in neighbor_pairs(rhombic_periodic_2, VERTEX).pairs}
    assert by_edge <= by_vertex


def test_effective_rate():
    assert effective_rate(0.01) == pytest.approx(0.0197333, rel=1e-5)
    assert effective_rate(0.0) == 0.0
    with pytest.raises(NoiseModelError):
        effective_rate(0.4)


@pytest.mark.parametrize("p", [0.001, 0.01, 0.05, 0.1, 0.3])
def test_marginal_rate_matches_second_order(p):
    assert abs(marginal_rate(p, 3) - effective_rate(p)) <= 2 * p ** 3


def test_marginal_rate_on_a_lattice():
    lattice = build_lattice("rhombic-periodic", 4)
    pairs = neighbor_pairs(lattice)
    model = NoiseModel(kind=CORRELATED, p=0.05)
    flips = sample_correlated(model, pairs, np.random.default_rng(4), batch=4000)
    assert flips.mean() == pytest.approx(marginal_rate(0.05, 8), rel=0.02)


def test_marginal_rate_on_three_pairs():
    # faces 0..3, face 0 sits in three pairs
    pairs = NeighborPairs.__new__(NeighborPairs)
    pairs.relation = EDGE
    pairs.n_faces = 4
    pairs.pairs = np.array([[0, 1], [0, 2], [0, 3]])
    p = 0.1
    flips = sample_correlated(NoiseModel(kind=CORRELATED, p=p), pairs, np.random.default_rng(5), batch=200000)
    expected = marginal_rate(p, 3)
    sigma = np.sqrt(expected * (1 - expected) / len(flips))
    assert abs(flips[:, 0].mean() - expected) < 4 * sigma


def test_match_pair_rate_inverts_marginal_rate():
    pairs = neighbor_pairs(build_lattice("rhombic-periodic", 4))
    p = match_pair_rate(0.03, pairs)
    assert marginal_rate(p, 8) == pytest.approx(0.03)
    with pytest.raises(NoiseModelError):
        match_pair_rate(0.6, pairs)


def test_sampling_is_reproducible(rhombic_open_3):
    for model in (NoiseModel(p=0.1), NoiseModel(kind=CORRELATED, p=0.1)):
        a = sample_errors(model, rhombic_open_3, np.random.default_rng(9), batch=5)
        b = sample_errors(model, rhombic_open_3, np.random.default_rng(9), batch=5)
        assert np.array_equal(a, b)
        assert sample_errors(model, rhombic_open_3, np.random.default_rng(9)).shape == (rhombic_open_3.n_faces,)
