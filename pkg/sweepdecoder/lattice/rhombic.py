"""Rhombic dodecahedral lattices.

Start from the integer cubic lattice and mark every cube whose lower
corner (i, j, k) has i + j + k odd. Each marked cube contributes a vertex
at its center (doubled coordinate 2g + 1, all odd, summing to 1 mod 4)
joined to its eight corners. Corners end up with degree four and centers
with degree eight. Every cubic edge is the long diagonal of one rhombic
face whose other two vertices are the centers of the marked cubes around
it. Unmarked cubes become the rhombic dodecahedral cells.
"""
import itertools
import logging

import numpy as np

from sweepdecoder.errors import LatticeError
from sweepdecoder.lattice.geometry import (
    CENTER, CORNER, RHOMBIC_OPEN, RHOMBIC_PERIODIC, SIDE_BITS, LatticeDraft,
    side_mask,
)
from sweepdecoder.metrics import metric_key, metrics

logger = logging.getLogger(__name__)

UNIT = np.eye(3, dtype=np.int64)


def sign_class(vector) -> int:
    return sum(1 << i for i, v in enumerate(vector) if v > 0)


def _odd(cube) -> bool:
    return sum(cube) % 2 == 1


def _add_rhombus(draft, a, axis, corner_kept, cube_exists, wrap_cube):
    """Attach the rhombic face whose long diagonal is the cubic edge (a, a + axis)."""
    a = np.asarray(a, dtype=np.int64)
    b = a + UNIT[axis]
    others = [d for d in range(3) if d != axis]
    centers = []
    for d0, d1 in itertools.product((0, 1), repeat=2):
        cube = a.copy()
        cube[others[0]] -= d0
        cube[others[1]] -= d1
        if _odd(cube):
            centers.append(cube)
    keep_a, keep_b = corner_kept(a), corner_kept(b)

    cycle, offsets, edges = [], [], []
    tail_a, tail_b = 2 * a, 2 * b
    present = [c for c in centers if cube_exists(c)]
    if not present:
        return None
    for slot, cube in enumerate(centers):
        if slot == 0 and keep_a:
            cycle.append(tail_a)
            offsets.append((0, 0, 0))
        if slot == 1 and keep_b:
            cycle.append(tail_b)
            offsets.append(tuple(2 * UNIT[axis]))
        if not cube_exists(cube):
            continue
        center = 2 * np.asarray(wrap_cube(cube)) + 1
        to_a = 2 * cube + 1 - tail_a
        to_b = to_a - 2 * UNIT[axis]
        cycle.append(center)
        offsets.append(tuple(to_a))
        if slot == 0:
            if keep_a:
                edges.append((tail_a, to_a))
            if keep_b:
                edges.append((tail_b, to_b))
        else:
            if keep_b:
                edges.append((tail_b, to_b))
            if keep_a:
                edges.append((tail_a, to_a))
    if not edges:
        return None
    keys = [draft.add_edge(tail, vector, sign_class(vector)) for tail, vector in edges]
    key = (draft.wrap(tail_a), axis)
    draft.add_face(key, cycle, offsets, keys)
    return key


def _cell_faces(cube):
    """Face keys (lower corner, axis) of the twelve cubic edges of a cube."""
    cube = np.asarray(cube, dtype=np.int64)
    faces = []
    for axis in range(3):
        others = [d for d in range(3) if d != axis]
        for d0, d1 in itertools.product((0, 1), repeat=2):
            corner = cube.copy()
            corner[others[0]] += d0
            corner[others[1]] += d1
            faces.append((corner, axis))
    return faces


def build_rhombic_periodic(L: int):
    """Rhombic dodecahedral lattice on the 3-torus of linear size L (L even)."""
    if L < 2 or L % 2:
        raise LatticeError(f"periodic rhombic lattices need an even L >= 2, got {L}")
    with metrics.timer(metric_key("lattice", "build", RHOMBIC_PERIODIC)):
        draft = LatticeDraft(RHOMBIC_PERIODIC, L, period=2 * L)
        cubes = list(itertools.product(range(L), repeat=3))
        for cube in cubes:
            draft.add_vertex(2 * np.asarray(cube), CORNER)
            if _odd(cube):
                draft.add_vertex(2 * np.asarray(cube) + 1, CENTER)

        def wrap_cube(cube):
            return tuple(int(c) % L for c in cube)

        for cube in cubes:
            for axis in range(3):
                _add_rhombus(draft, cube, axis, lambda p: True, lambda g: True, wrap_cube)

        for cube in cubes:
            if _odd(cube):
                continue
            draft.add_cell(draft.wrap(2 * np.asarray(cube)),
                           [(draft.wrap(2 * corner), axis) for corner, axis in _cell_faces(cube)])

        lattice = draft.assemble()
    logger.info("built %r", lattice)
    return lattice


def build_rhombic_block(L: int, x_extent: int, boundary_plane_faces: bool):
    """Open rhombic lattice cut from a box of the cubic lattice.

    Corners are kept for x in [0, x_extent], y in [1, L] and z in [1, L-1];
    marked cubes of the box [0, x_extent] x [0, L+1] x [0, L] keep their
    centers. Faces are the rhombi of the box's cubic edges that keep at
    least one edge. With ``boundary_plane_faces`` False the rhombi whose
    long diagonal lies in x = 0 or x = x_extent are dropped.
    """
    if L < 2 or x_extent < 1:
        raise LatticeError(f"open rhombic blocks need L >= 2 and x_extent >= 1, got {L} and {x_extent}")
    draft = LatticeDraft(RHOMBIC_OPEN, L,
                         rough_sides=side_mask(("y-", "y+", "z-", "z+")),
                         smooth_sides=side_mask(("x-", "x+")))
    upper = (x_extent, L + 1, L)

    def corner_kept(p):
        return 0 <= p[0] <= x_extent and 1 <= p[1] <= L and 1 <= p[2] <= L - 1

    def cube_exists(g):
        return all(0 <= g[d] <= upper[d] - 1 for d in range(3))

    def corner_sides(p):
        bits = 0
        bits |= SIDE_BITS["x-"] if p[0] == 0 else 0
        bits |= SIDE_BITS["x+"] if p[0] == x_extent else 0
        bits |= SIDE_BITS["y-"] if p[1] == 1 else 0
        bits |= SIDE_BITS["y+"] if p[1] == L else 0
        bits |= SIDE_BITS["z-"] if p[2] == 1 else 0
        bits |= SIDE_BITS["z+"] if p[2] == L - 1 else 0
        return bits

    def cube_sides(g):
        bits = 0
        for d, (low, high) in enumerate((("x-", "x+"), ("y-", "y+"), ("z-", "z+"))):
            bits |= SIDE_BITS[low] if g[d] == 0 else 0
            bits |= SIDE_BITS[high] if g[d] == upper[d] - 1 else 0
        return bits

    box = list(itertools.product(*(range(n + 1) for n in upper)))
    for p in box:
        if corner_kept(p):
            draft.add_vertex(2 * np.asarray(p), CORNER, corner_sides(p))
        if cube_exists(p) and _odd(p):
            draft.add_vertex(2 * np.asarray(p) + 1, CENTER, cube_sides(p))

    for p in box:
        for axis in range(3):
            if p[axis] + 1 > upper[axis]:
                continue
            if not boundary_plane_faces and axis != 0 and p[0] in (0, x_extent):
                continue
            _add_rhombus(draft, p, axis, corner_kept, cube_exists, tuple)

    for g in box:
        if not cube_exists(g) or _odd(g):
            continue
        draft.add_cell(draft.wrap(2 * np.asarray(g)),
                       [(draft.wrap(2 * corner), axis) for corner, axis in _cell_faces(g)])
    return draft.assemble()


def build_rhombic_open(L: int):
    """Rhombic dodecahedral lattice with two smooth and four rough boundaries.

    Deleting the outer y and z corner planes leaves rough boundaries normal
    to y and z. Along x the block runs over corner planes 0 to L+1 and the
    rhombi lying in the two end planes are not qubits, so the sides normal
    to x are smooth and L planes separate them.

    Cutting x down to [0, L-1] and keeping the end-plane rhombi instead
    lets syndromes end on those sides and leaves more faces than edge and
    cell checks can fix: at L = 3 it has 63 faces, 48 edges and 12 cells,
    so at least three logical qubits.
    """
    if L < 2:
        raise LatticeError(f"open rhombic lattices need L >= 2, got {L}")
    with metrics.timer(metric_key("lattice", "build", RHOMBIC_OPEN)):
        lattice = build_rhombic_block(L, L + 1, boundary_plane_faces=False)
    logger.info("built %r", lattice)
    return lattice
