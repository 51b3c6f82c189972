import numpy as np
import pytest

from sweepdecoder.errors import ConfigError, RuleTableError
from sweepdecoder.lattice import BULK, boundary_map, qubit_set
from sweepdecoder.sweep import (
    FIRST, OMEGA, REGULAR, SweepDirection, SweepState, bulk_trace_failures, corrupt_rule_table,
    rule_table, sweep_context, sweep_step, trace_syndrome, trailing_condition, verify_rule_table,
)

UP = SweepDirection((1, 1, 1))


@pytest.mark.parametrize("fixture", ["rhombic_open_3", "rhombic_periodic_4", "cubic_periodic_4"])
def test_rule_tables_verify(request, fixture):
    lattice = request.getfixturevalue(fixture)
    for direction in OMEGA:
        table = rule_table(lattice, direction)
        verify_rule_table(table)
        assert table.future_faces.shape[0] == lattice.n_vertices


def test_rule_table_is_cached(cubic_periodic_4):
    assert rule_table(cubic_periodic_4, UP) is rule_table(cubic_periodic_4, UP)


def test_rule_table_arrays_are_frozen(cubic_periodic_4):
    table = rule_table(cubic_periodic_4, UP)
    with pytest.raises(ValueError):
        table.candidates[0, 0, 0] = 1


def test_corrupted_table_fails_verification(rhombic_open_3):
    table = corrupt_rule_table(rule_table(rhombic_open_3, UP), seed=4)
    with pytest.raises(RuleTableError):
        verify_rule_table(table)


def test_lookup_returns_the_single_face(cubic_periodic_4):
    lattice = cubic_periodic_4
    table = rule_table(lattice, UP)
    ctx = sweep_context(lattice, UP)
    f = lattice.face_index[((2, 2, 2), 0)]
    v = int(ctx.face_infimum[f])
    future = list(table.future_edges[v])
    pattern = sum(1 << future.index(e) for e in lattice.face_edge_list(f) if e in future)
    assert table.lookup(v, pattern) == [[f]]


def test_empty_syndrome_is_left_alone(rhombic_open_3):
    state = SweepState.start(rhombic_open_3, np.zeros(rhombic_open_3.n_edges, dtype=bool))
    phi = sweep_step(state, rule_table(rhombic_open_3, UP))
    assert not phi.any()
    assert state.step == 1


@pytest.mark.parametrize("direction", OMEGA)
def test_single_bulk_face_removed_in_one_step(rhombic_open_5, direction):
    lattice = rhombic_open_5
    faces = np.flatnonzero(lattice.face_label == BULK)[::11]
    errors = np.zeros((len(faces), lattice.n_faces), dtype=bool)
    errors[np.arange(len(faces)), faces] = True
    state = SweepState.start(lattice, boundary_map(lattice, errors))
    sweep_step(state, rule_table(lattice, direction), FIRST)
    assert not state.syndrome.any()
    assert np.array_equal(state.correction, errors)


def test_syndrome_tracks_correction(rhombic_open_5):
    lattice = rhombic_open_5
    rng = np.random.default_rng(11)
    errors = rng.random((4, lattice.n_faces)) < 0.03
    syndrome = boundary_map(lattice, errors)
    state = SweepState.start(lattice, syndrome, seeds=[1, 2, 3, 4])
    for direction in OMEGA[:3]:
        sweep_step(state, rule_table(lattice, direction))
    assert np.array_equal(state.syndrome, syndrome ^ boundary_map(lattice, state.correction))


def test_rows_do_not_depend_on_batch(rhombic_open_5):
    lattice = rhombic_open_5
    rng = np.random.default_rng(5)
    errors = rng.random((3, lattice.n_faces)) < 0.05
    syndrome = boundary_map(lattice, errors)
    table = rule_table(lattice, UP)
    batch = SweepState.start(lattice, syndrome, seeds=[10, 20, 30])
    together = sweep_step(batch, table, REGULAR)
    for b, seed in enumerate([10, 20, 30]):
        alone = SweepState.start(lattice, syndrome[b], seeds=[seed])
        assert np.array_equal(sweep_step(alone, table, REGULAR)[0], together[b])


def test_inactive_rows_untouched(rhombic_open_5):
    lattice = rhombic_open_5
    f = int(np.flatnonzero(lattice.face_label == BULK)[0])
    syndrome = np.stack([boundary_map(lattice, qubit_set(lattice, [f]))] * 2)
    state = SweepState.start(lattice, syndrome)
    sweep_step(state, rule_table(lattice, UP), active=np.array([True, False]))
    assert state.syndrome[1].any()
    assert not state.correction[1].any()


def test_state_checks_widths(rhombic_open_3):
    with pytest.raises(ConfigError):
        SweepState.start(rhombic_open_3, np.zeros(3, dtype=bool))
    state = SweepState.start(rhombic_open_3, np.zeros(rhombic_open_3.n_edges, dtype=bool))
    with pytest.raises(ConfigError):
        sweep_step(state, rule_table(rhombic_open_3, UP), "random")


@pytest.mark.parametrize("fixture", ["rhombic_open_3", "rhombic_open_5"])
def test_blocked_restrictions_have_no_rule(request, fixture):
    lattice = request.getfixturevalue(fixture)
    found = 0
    for direction in OMEGA:
        ctx = sweep_context(lattice, direction)
        table = rule_table(lattice, direction)
        for v in range(lattice.n_vertices):
            report = trailing_condition(ctx, v)
            if lattice.vertex_label[v] == BULK:
                assert report.blocked == ()
            positions = ctx.future_positions[v]
            for mask in report.blocked:
                pattern = sum(((mask >> p) & 1) << i for i, p in enumerate(positions))
                assert table.lookup(v, pattern) == []
                found += 1
    assert found > 0


def test_tie_face_at_rough_top_is_blocked(rhombic_open_3):
    lattice = rhombic_open_3
    f = lattice.face_index[((6, 6, 4), 2)]
    assert lattice.face_size[f] == 2
    ties = 0
    for direction in OMEGA:
        ctx = sweep_context(lattice, direction)
        if ctx.face_infimum[f] >= 0:
            continue
        ties += 1
        blocked = [v for v in lattice.face_vertex_list(f) if trailing_condition(ctx, v).blocked]
        assert blocked, direction
        assert all(not trailing_condition(ctx, v).ok for v in blocked)
    assert ties > 0


def test_single_face_trace(rhombic_periodic_6):
    lattice = rhombic_periodic_6
    f = int(np.flatnonzero(lattice.face_label == BULK)[5])
    trace = trace_syndrome(lattice, UP, boundary_map(lattice, qubit_set(lattice, [f])))
    assert trace.ok
    assert trace.potentials[0] == trace.budget >= 1
    assert trace.potentials[-1] == 0


def test_local_bulk_syndromes_shrink_inside_their_diamond(rhombic_periodic_6):
    rng = np.random.default_rng(1)
    assert bulk_trace_failures(rhombic_periodic_6, 80, rng) == []
