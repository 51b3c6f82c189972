"""Row reduction over GF(2) for the small dense matrices of lattice checks."""
import numpy as np
from scipy import sparse


def to_gf2(matrix) -> np.ndarray:
    if sparse.issparse(matrix):
        matrix = matrix.toarray()
    return np.array(matrix, dtype=np.uint8) % 2


def gf2_rank(matrix) -> int:
    """Rank over GF(2) using row reduction."""
    mat = to_gf2(matrix).copy()
    if mat.ndim != 2 or not mat.size:
        return 0
    m, n = mat.shape
    row = 0
    for col in range(n):
        hits = np.flatnonzero(mat[row:, col]) + row
        if not len(hits):
            continue
        pivot = hits[0]
        if pivot != row:
            mat[[row, pivot]] = mat[[pivot, row]]
        below = np.flatnonzero(mat[:, col])
        below = below[below != row]
        mat[below] ^= mat[row]
        row += 1
        if row == m:
            break
    return row


def gf2_in_span(basis, vector) -> bool:
    """True when ``vector`` is a GF(2) combination of the rows of ``basis``."""
    basis = to_gf2(basis)
    vector = to_gf2(vector).reshape(1, -1)
    if not basis.size:
        return not vector.any()
    return gf2_rank(np.vstack([basis, vector])) == gf2_rank(basis)
