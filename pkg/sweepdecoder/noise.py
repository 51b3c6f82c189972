"""Phase-flip, measurement and correlated pair noise."""
import itertools
import logging
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from sweepdecoder.errors import NoiseModelError
from sweepdecoder.lattice.geometry import LatticeGeometry

logger = logging.getLogger(__name__)

IID = "iid"
CORRELATED = "correlated"
EDGE = "edge"
VERTEX = "vertex"


@dataclass
class NoiseModel:
    kind: str = field(default=IID, metadata={"help": "iid single-face flips or correlated pair flips"})
    p: float = field(default=0.0, metadata={"help": "Flip probability per face (iid) or per pair (correlated)"})
    alpha: float = field(default=1.0, metadata={"help": "Measurement error rate as a multiple of p"})
    neighbours: str = field(default=EDGE, metadata={"help": "Pairs of faces sharing an edge or a vertex"})
    q_override: float = field(default=None, metadata={"help": "Measurement error rate, replacing alpha * p"})

    def __post_init__(self):
        if self.kind not in (IID, CORRELATED):
            raise NoiseModelError(f"unknown noise kind {self.kind!r}")
        if self.neighbours not in (EDGE, VERTEX):
            raise NoiseModelError(f"unknown neighbour relation {self.neighbours!r}")
        if not 0.0 <= self.p <= 1.0:
            raise NoiseModelError(f"p must lie in [0, 1], got {self.p}")
        if self.alpha < 0:
            raise NoiseModelError(f"alpha must be non-negative, got {self.alpha}")
        if self.q_override is not None and not 0.0 <= self.q_override <= 1.0:
            raise NoiseModelError(f"q must lie in [0, 1], got {self.q_override}")
        if self.q_override is None and self.alpha * self.p > 1.0:
            logger.warning("q = alpha * p = %g exceeds 1, clamped", self.alpha * self.p)

    @property
    def q(self) -> float:
        if self.q_override is not None:
            return self.q_override
        return min(self.alpha * self.p, 1.0)


class NeighborPairs(object):
    """Unordered pairs of distinct faces that share an edge (or a vertex)."""

    def __init__(self, lattice: LatticeGeometry, relation: str = EDGE):
        if relation == EDGE:
            owners, members = lattice.face_edges, lattice.n_edges
        elif relation == VERTEX:
            owners, members = lattice.face_vertices, lattice.n_vertices
        else:
            raise NoiseModelError(f"unknown neighbour relation {relation!r}")
        groups = [[] for _ in range(members)]
        for f, row in enumerate(owners):
            for m in row[row >= 0]:
                groups[m].append(f)
        pairs = {pair for group in groups for pair in itertools.combinations(sorted(set(group)), 2)}
        self.relation = relation
        self.n_faces = lattice.n_faces
        self.pairs = np.array(sorted(pairs), dtype=np.int64).reshape(-1, 2)

    def __len__(self):
        return len(self.pairs)

    @property
    def degree(self) -> np.ndarray:
        return np.bincount(self.pairs.ravel(), minlength=self.n_faces)


@lru_cache(maxsize=16)
def neighbor_pairs(lattice: LatticeGeometry, relation: str = EDGE) -> NeighborPairs:
    return NeighborPairs(lattice, relation)


def sample_phase_flips(model: NoiseModel, lattice: LatticeGeometry, rng, batch: int = None) -> np.ndarray:
    """Each face flipped independently with probability p; shape (F,) or (batch, F)."""
    shape = (lattice.n_faces,) if batch is None else (batch, lattice.n_faces)
    return rng.random(shape) < model.p


def sample_measurement_flips(syndrome: np.ndarray, q: float, rng) -> np.ndarray:
    """Observed syndrome: each bit of ``syndrome`` flipped with probability q."""
    if not 0.0 <= q <= 1.0:
        raise NoiseModelError(f"q must lie in [0, 1], got {q}")
    syndrome = np.asarray(syndrome, dtype=bool)
    return syndrome ^ (rng.random(syndrome.shape) < q)


def sample_correlated(model: NoiseModel, pairs: NeighborPairs, rng, batch: int = None) -> np.ndarray:
    """With probability p per pair apply ZI, IZ or ZZ, chosen uniformly."""
    rows = 1 if batch is None else batch
    hit = rng.random((rows, len(pairs))) < model.p
    pattern = rng.integers(0, 3, size=(rows, len(pairs)))
    first = hit & (pattern != 1)
    second = hit & (pattern != 0)
    flips = np.zeros((rows, pairs.n_faces), dtype=np.int64)
    row_index = np.broadcast_to(np.arange(rows)[:, None], hit.shape)
    np.add.at(flips, (row_index[first], np.broadcast_to(pairs.pairs[:, 0], hit.shape)[first]), 1)
    np.add.at(flips, (row_index[second], np.broadcast_to(pairs.pairs[:, 1], hit.shape)[second]), 1)
    out = (flips & 1).astype(bool)
    return out[0] if batch is None else out


def sample_errors(model: NoiseModel, lattice: LatticeGeometry, rng, batch: int = None) -> np.ndarray:
    if model.kind == IID:
        return sample_phase_flips(model, lattice, rng, batch)
    return sample_correlated(model, neighbor_pairs(lattice, model.neighbours), rng, batch)


def effective_rate(p: float) -> float:
    """Per-face flip rate of correlated pair noise to second order in p."""
    if not 0.0 <= p <= 3.0 / 8.0:
        raise NoiseModelError(f"effective rate is defined for p in [0, 3/8], got {p}")
    return 2.0 * p - 8.0 * p * p / 3.0


def marginal_rate(p: float, degree) -> float:
    """Exact flip rate of a face that belongs to ``degree`` pairs.

    Each pair flips the face with probability 2p/3, so the face ends up
    flipped when an odd number of its pairs fire.
    """
    if not 0.0 <= p <= 1.0:
        raise NoiseModelError(f"p must lie in [0, 1], got {p}")
    return (1.0 - (1.0 - 4.0 * p / 3.0) ** np.asarray(degree, dtype=float)) / 2.0


def match_pair_rate(p_face: float, pairs: NeighborPairs) -> float:
    """Pair probability whose mean per-face flip rate equals ``p_face``."""
    if not 0.0 <= p_face < 0.5:
        raise NoiseModelError(f"per-face rate must lie in [0, 1/2), got {p_face}")
    degree = float(pairs.degree.mean())
    if degree == 0:
        raise NoiseModelError("no neighbouring pairs to spread the noise over")
    p = 0.75 * (1.0 - (1.0 - 2.0 * p_face) ** (1.0 / degree))
    return min(p, 1.0)
