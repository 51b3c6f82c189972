"""Cubic lattices, periodic and with two rough and one smooth pair of boundaries."""
import itertools
import logging

import numpy as np

from sweepdecoder.errors import LatticeError
from sweepdecoder.lattice.geometry import (
    CORNER, CUBIC_OPEN, CUBIC_PERIODIC, SIDE_BITS, LatticeDraft, side_mask,
)
from sweepdecoder.metrics import metric_key, metrics

logger = logging.getLogger(__name__)

UNIT = np.eye(3, dtype=np.int64)


def plaquette_axes(normal: int):
    return [d for d in range(3) if d != normal]


def _add_plaquette(draft, v, normal, edge_kept):
    v = np.asarray(v, dtype=np.int64)
    a, b = plaquette_axes(normal)
    corners = [v, v + UNIT[a], v + UNIT[a] + UNIT[b], v + UNIT[b]]
    sides = [(v, a), (v + UNIT[a], b), (v + UNIT[b], a), (v, b)]
    keys = [draft.add_edge(2 * tail, 2 * UNIT[axis], axis)
            for tail, axis in sides if edge_kept(tail, axis)]
    if not keys:
        return None
    key = (draft.wrap(2 * v), normal)
    draft.add_face(key, [2 * c for c in corners], [2 * (c - v) for c in corners], keys)
    return key


def _cube_faces(draft, v):
    v = np.asarray(v, dtype=np.int64)
    return [(draft.wrap(2 * (v + shift * UNIT[n])), n) for n in range(3) for shift in (0, 1)]


def build_cubic_periodic(L: int):
    if L < 2:
        raise LatticeError(f"cubic lattices need L >= 2, got {L}")
    with metrics.timer(metric_key("lattice", "build", CUBIC_PERIODIC)):
        draft = LatticeDraft(CUBIC_PERIODIC, L, period=2 * L)
        cubes = list(itertools.product(range(L), repeat=3))
        for v in cubes:
            draft.add_vertex(2 * np.asarray(v), CORNER)
        for v in cubes:
            for normal in range(3):
                _add_plaquette(draft, v, normal, lambda tail, axis: True)
        for v in cubes:
            draft.add_cell(draft.wrap(2 * np.asarray(v)), _cube_faces(draft, v))
        lattice = draft.assemble()
    logger.info("built %r", lattice)
    return lattice


def build_cubic_open(L: int):
    """L x L x (L-1) block of the cubic lattice.

    Edges and faces lying in the planes x = 0, L or y = 0, L carry no
    checks or qubits, so the four sides normal to x and y are rough. The
    two sides normal to z are smooth. The vertical lines where two rough
    planes meet are left with degree-0 vertices; they are kept and
    flagged by the geometry.
    """
    if L < 2:
        raise LatticeError(f"cubic lattices need L >= 2, got {L}")
    with metrics.timer(metric_key("lattice", "build", CUBIC_OPEN)):
        draft = LatticeDraft(CUBIC_OPEN, L,
                             rough_sides=side_mask(("x-", "x+", "y-", "y+")),
                             smooth_sides=side_mask(("z-", "z+")))
        upper = (L, L, L - 1)

        def in_rough_plane(point, axes):
            return any(point[d] in (0, L) for d in (0, 1) if d in axes)

        def edge_kept(tail, axis):
            head = tail + UNIT[axis]
            if any(head[d] > upper[d] for d in range(3)):
                return False
            # an edge lies in a rough plane when it runs parallel to it
            return not in_rough_plane(tail, [d for d in (0, 1) if d != axis])

        def vertex_sides(v):
            bits = 0
            for d, (low, high) in enumerate((("x-", "x+"), ("y-", "y+"), ("z-", "z+"))):
                bits |= SIDE_BITS[low] if v[d] == 0 else 0
                bits |= SIDE_BITS[high] if v[d] == upper[d] else 0
            return bits

        box = list(itertools.product(range(L + 1), range(L + 1), range(L)))
        for v in box:
            draft.add_vertex(2 * np.asarray(v), CORNER, vertex_sides(v))
        for v in box:
            for normal in range(3):
                a, b = plaquette_axes(normal)
                if v[a] + 1 > upper[a] or v[b] + 1 > upper[b]:
                    continue
                if normal in (0, 1) and v[normal] in (0, L):
                    continue
                _add_plaquette(draft, v, normal, edge_kept)
        for v in itertools.product(range(L), range(L), range(L - 1)):
            draft.add_cell(draft.wrap(2 * np.asarray(v)), _cube_faces(draft, v))
        lattice = draft.assemble()
    logger.info("built %r", lattice)
    return lattice
