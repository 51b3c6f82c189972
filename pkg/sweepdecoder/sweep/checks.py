"""Behavioural checks of the rule on small local syndromes.

Shared by the self-test command and the test suite.
"""
import logging
from dataclasses import dataclass, field
from typing import List, Sequence

import numpy as np

from sweepdecoder.lattice.geometry import BULK, LatticeGeometry, boundary_map
from sweepdecoder.sweep.automaton import FIRST, SweepState, sweep_step
from sweepdecoder.sweep.causal import (
    OMEGA, SweepDirection, causal_diamond, removal_potential, supremum, support_vertices,
    sweep_context, trailing_condition,
)
from sweepdecoder.sweep.rules import rule_table

logger = logging.getLogger(__name__)


def local_error(lattice: LatticeGeometry, rng, bulk_only: bool = False, max_faces: int = 3) -> np.ndarray:
    """Between one and ``max_faces`` faces through a random vertex."""
    error = np.zeros(lattice.n_faces, dtype=bool)
    while not error.any():
        v = int(rng.integers(lattice.n_vertices))
        faces = lattice.incident_faces(v)
        if bulk_only:
            faces = faces[lattice.face_label[faces] == BULK]
        if len(faces):
            size = min(len(faces), int(rng.integers(1, max_faces + 1)))
            error[rng.choice(faces, size=size, replace=False)] = True
    return error


@dataclass
class SyndromeTrace:
    """How one syndrome evolved under repeated steps in a fixed direction."""
    budget: int
    potentials: List[int] = field(default_factory=list)
    left_diamond: bool = False
    correction_outside: bool = False
    cleared: bool = False

    @property
    def decreasing(self) -> bool:
        return all(a > b for a, b in zip(self.potentials, self.potentials[1:]))

    @property
    def ok(self) -> bool:
        return self.cleared and self.decreasing and not self.left_diamond and not self.correction_outside


def trace_syndrome(lattice: LatticeGeometry, direction: SweepDirection, syndrome) -> SyndromeTrace:
    """Run the rule on ``syndrome`` for as many steps as its removal potential.

    In the bulk the syndrome never leaves the causal diamond of its
    support, the longest chain from the syndrome to the supremum of that
    support drops every step, and the syndrome is gone once the chain
    length is used up.
    """
    ctx = sweep_context(lattice, direction)
    table = rule_table(lattice, direction)
    support = support_vertices(lattice, syndrome)
    top = supremum(ctx, support)
    diamond = causal_diamond(ctx, support)
    state = SweepState.start(lattice, syndrome)
    trace = SyndromeTrace(removal_potential(ctx, state.syndrome[0], top))
    trace.potentials.append(trace.budget)
    for _ in range(trace.budget):
        sweep_step(state, table, FIRST)
        if not state.syndrome[0].any():
            trace.potentials.append(0)
            break
        if not set(support_vertices(lattice, state.syndrome[0]).tolist()) <= diamond:
            trace.left_diamond = True
            break
        trace.potentials.append(removal_potential(ctx, state.syndrome[0], top))
    trace.cleared = not state.syndrome[0].any()
    touched = {int(v) for f in np.flatnonzero(state.correction[0]) for v in lattice.face_vertex_list(f)}
    trace.correction_outside = not touched <= diamond
    return trace


def bulk_trace_failures(lattice: LatticeGeometry, samples: int, rng,
                        directions: Sequence[SweepDirection] = OMEGA) -> List[str]:
    """Local bulk syndromes whose trace breaks in some direction."""
    bad = []
    for i in range(samples):
        error = local_error(lattice, rng, bulk_only=True)
        syndrome = boundary_map(lattice, error)
        if not syndrome.any():
            continue
        direction = directions[i % len(directions)]
        trace = trace_syndrome(lattice, direction, syndrome)
        if not trace.ok:
            bad.append(f"{direction} faces {np.flatnonzero(error).tolist()}: {trace}")
    logger.debug("%r: %d of %d local bulk syndromes broke their trace", lattice, len(bad), samples)
    return bad


def witness_directions(lattice: LatticeGeometry, vertices) -> List[SweepDirection]:
    """Directions in which every vertex of the causal diamond of ``vertices`` is trailing-complete."""
    vertices = list(vertices)
    found = []
    for direction in OMEGA:
        ctx = sweep_context(lattice, direction)
        if all(trailing_condition(ctx, v).ok for v in causal_diamond(ctx, vertices)):
            found.append(direction)
    return found


def one_sided(lattice: LatticeGeometry, vertices) -> bool:
    """True if the diamonds of ``vertices`` in all directions meet at most one boundary side."""
    vertices = list(vertices)
    sides = 0
    for direction in OMEGA:
        region = list(causal_diamond(sweep_context(lattice, direction), vertices))
        labels = lattice.vertex_sides[region]
        if (labels & (labels - 1)).any():
            return False
        sides |= int(np.bitwise_or.reduce(labels)) if len(labels) else 0
    return sides & (sides - 1) == 0


def witness_failures(lattice: LatticeGeometry, samples: int, rng) -> List[str]:
    """Local syndromes touching one side for which no direction is a witness."""
    bad = []
    for _ in range(samples):
        syndrome = boundary_map(lattice, local_error(lattice, rng))
        if not syndrome.any():
            continue
        support = support_vertices(lattice, syndrome).tolist()
        if one_sided(lattice, support) and not witness_directions(lattice, support):
            bad.append(f"support {support}")
    return bad
