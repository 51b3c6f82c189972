"""Logical operator representatives and the logical qubit count."""
import itertools
import logging
from typing import List, Tuple

import numpy as np
from scipy import sparse

from sweepdecoder.errors import LatticeError
from sweepdecoder.lattice.geometry import (
    CUBIC_OPEN, CUBIC_PERIODIC, RHOMBIC_OPEN, RHOMBIC_PERIODIC, LatticeGeometry,
    boundary_map, qubit_set,
)
from sweepdecoder.lattice.gf2 import gf2_rank

logger = logging.getLogger(__name__)


def _lookup(lattice, keys):
    try:
        return [lattice.face_index[(lattice.wrap(tuple(2 * c for c in corner)), axis)]
                for corner, axis in keys]
    except KeyError as e:
        raise LatticeError(f"logical representative uses a missing face {e}") from e


def _rhombic_periodic(L):
    zs, xs = [], []
    for d in range(3):
        zs.append([(a, axis) for a in itertools.product(range(L), repeat=3) if a[d] == 0
                   for axis in range(3) if axis != d])
        e = (d + 2) % 3
        xs.append([(tuple(t if i == d else 0 for i in range(3)), e) for t in range(L)])
    return zs, xs


def _cubic_periodic(L):
    zs, xs = [], []
    for d in range(3):
        zs.append([(v, d) for v in itertools.product(range(L), repeat=3) if v[d] == 0])
        xs.append([(tuple(t if i == d else 0 for i in range(3)), d) for t in range(L)])
    return zs, xs


def _rhombic_open(L):
    m = (L + 1) // 2
    y0, z0 = (L + 1) // 2, L // 2
    z = [((m, y, zz), axis) for y in range(L + 2) for zz in range(L + 1) for axis in (1, 2)]
    x = [((t, y0, z0), 2) for t in range(1, L + 1)]
    return [z], [x]


def _cubic_open(L):
    z0 = (L - 1) // 2
    x0 = y0 = (L - 1) // 2
    z = [((x, y, z0), 2) for x in range(L) for y in range(L)]
    x = [((x0, y0, t), 2) for t in range(L)]
    return [z], [x]


def logical_representatives(lattice: LatticeGeometry) -> Tuple[List[np.ndarray], List[np.ndarray]]:
    """Paired logical-Z and logical-X face sets.

    Z representatives are closed membranes (trivial syndrome); X
    representatives are dual strings crossing them. Pair i overlaps
    oddly, different pairs evenly.
    """
    builders = {
        RHOMBIC_PERIODIC: _rhombic_periodic,
        CUBIC_PERIODIC: _cubic_periodic,
        RHOMBIC_OPEN: _rhombic_open,
        CUBIC_OPEN: _cubic_open,
    }
    zs, xs = builders[lattice.family](lattice.L)
    if lattice.periodic:
        z_faces = [_lookup(lattice, keys) for keys in zs]
    else:
        # membranes are cut by the rough boundaries, skip faces that do not exist
        z_faces = [[lattice.face_index[k] for k in
                    ((lattice.wrap(tuple(2 * c for c in corner)), axis) for corner, axis in keys)
                    if k in lattice.face_index] for keys in zs]
    x_faces = [_lookup(lattice, keys) for keys in xs]
    z_sets = [qubit_set(lattice, faces) for faces in z_faces]
    x_sets = [qubit_set(lattice, faces) for faces in x_faces]
    return z_sets, x_sets


def verify_logicals(lattice: LatticeGeometry, z_sets, x_sets):
    for i, z in enumerate(z_sets):
        if boundary_map(lattice, z).any():
            raise LatticeError(f"logical Z {i} of {lattice!r} has a nontrivial syndrome")
    overlaps = (np.asarray(z_sets, dtype=np.int64) @ np.asarray(x_sets, dtype=np.int64).T) & 1
    if not np.array_equal(overlaps, np.eye(len(z_sets), dtype=np.int64)):
        raise LatticeError(f"logical overlaps of {lattice!r} are not paired: {overlaps.tolist()}")


def stabilizer_cells(lattice: LatticeGeometry) -> List[List[int]]:
    cells = [[int(f) for f in row if f >= 0] for row in lattice.cells]
    return cells + [list(c) for c in lattice.truncated_cells]


def cell_matrix(lattice: LatticeGeometry):
    cells = stabilizer_cells(lattice)
    rows = [i for i, c in enumerate(cells) for _ in c]
    cols = [f for c in cells for f in c]
    return sparse.csr_matrix((np.ones(len(cols), dtype=np.uint8), (rows, cols)),
                             shape=(len(cells), lattice.n_faces))


def logical_qubit_count(lattice: LatticeGeometry) -> int:
    """|F| - rank(boundary) - rank(cells), the number of encoded qubits."""
    k = lattice.n_faces - gf2_rank(lattice.boundary) - gf2_rank(cell_matrix(lattice))
    logger.debug("%r encodes %d logical qubits", lattice, k)
    return k
