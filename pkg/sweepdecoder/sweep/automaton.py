"""Synchronous application of the sweep rule to a batch of syndromes."""
import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

from sweepdecoder.errors import ConfigError
from sweepdecoder.lattice.geometry import LatticeGeometry, boundary_map
from sweepdecoder.sweep.rules import RuleTable

logger = logging.getLogger(__name__)

REGULAR = "regular"
FIRST = "first"
VARIANTS = (REGULAR, FIRST)


@dataclass
class SweepState:
    """Syndromes and accumulated corrections of B independent trials.

    ``seeds`` holds one integer per trial; together with the step counter
    and the vertex index it fixes every random tie-break of the rule.
    """
    syndrome: np.ndarray
    correction: np.ndarray
    seeds: np.ndarray
    step: int = 0

    @classmethod
    def start(cls, lattice: LatticeGeometry, syndrome, seeds=None) -> "SweepState":
        syndrome = np.array(syndrome, dtype=bool, ndmin=2)
        if syndrome.shape[1] != lattice.n_edges:
            raise ConfigError(f"syndrome width {syndrome.shape[1]} does not match |E|={lattice.n_edges}")
        batch = syndrome.shape[0]
        seeds = np.zeros(batch, dtype=np.uint64) if seeds is None else \
            np.asarray(seeds, dtype=np.uint64).reshape(batch)
        return cls(syndrome, np.zeros((batch, lattice.n_faces), dtype=bool), seeds)

    @property
    def batch(self) -> int:
        return self.syndrome.shape[0]

    def clear(self) -> np.ndarray:
        return ~self.syndrome.any(axis=1)


def _choices(state: SweepState, counts: np.ndarray, variant: str) -> np.ndarray:
    choice = np.zeros_like(counts)
    if variant == FIRST:
        return choice
    tied = counts > 1
    for b in np.flatnonzero(tied.any(axis=1)):
        draws = np.random.default_rng([int(state.seeds[b]), state.step]).random(counts.shape[1])
        choice[b, tied[b]] = (draws[tied[b]] * counts[b, tied[b]]).astype(np.int64)
    return choice


def sweep_step(state: SweepState, table: RuleTable, variant: str = REGULAR,
               active: Optional[np.ndarray] = None) -> np.ndarray:
    """Apply the rule at every vertex at once and return the faces flipped.

    All vertices read the syndrome as it was before the step; the
    returned faces are added to the correction and their boundary to the
    syndrome. Rows where ``active`` is False are left untouched.
    """
    if variant not in VARIANTS:
        raise ConfigError(f"unknown rule variant {variant!r}, expected one of {VARIANTS}")
    lattice = table.lattice
    batch = state.batch
    padded = np.zeros((batch, lattice.n_edges + 1), dtype=bool)
    padded[:, :-1] = state.syndrome
    if active is not None:
        padded[~active] = False

    pattern = padded[:, table.future_edges].astype(np.int64) @ table.edge_weights
    pattern[padded[:, table.past_edges].any(axis=2)] = 0
    counts = table.n_candidates[table.vertex_type, pattern]

    phi = np.zeros((batch, lattice.n_faces), dtype=bool)
    if counts.any():
        choice = _choices(state, counts, variant)
        subsets = np.where(counts > 0, table.candidates[table.vertex_type, pattern, choice], 0)
        slots = np.arange(table.future_faces.shape[1], dtype=np.int64)
        rows, vertices, picked = np.nonzero((subsets[..., None] >> slots) & 1)
        faces = table.future_faces[vertices, picked]
        flips = np.zeros((batch, lattice.n_faces + 1), dtype=np.int64)
        np.add.at(flips, (rows, faces), 1)
        phi = (flips[:, :-1] & 1).astype(bool)
        state.syndrome ^= boundary_map(lattice, phi)
        state.correction ^= phi

    if logger.isEnabledFor(logging.DEBUG):
        logger.debug("T=%d w=%s |s|=%d |phi|=%d", state.step, table.direction,
                     int(state.syndrome.sum()), int(phi.sum()))
    state.step += 1
    return phi
