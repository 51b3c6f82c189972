"""Lookup tables for the local sweep rule.

For every vertex and direction the rule maps the syndrome pattern on the
vertex's future edges to the face subsets it may return. Vertices with
identical local geometry share one table row, so the automaton needs a
single gather per step.
"""
import itertools
import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, List, Tuple

import numpy as np

from sweepdecoder.errors import RuleTableError
from sweepdecoder.lattice.geometry import BULK, LatticeGeometry
from sweepdecoder.metrics import metric_key, metrics
from sweepdecoder.sweep.causal import (
    SweepDirection, _add, diamond_coords, parity_key, sweep_context, trailing_condition,
)

logger = logging.getLogger(__name__)


@dataclass
class VertexType:
    """Local geometry shared by all vertices of one table row."""
    vertex: int
    bulk: bool
    base: Tuple[int, int, int]
    future_steps: Tuple[Tuple[int, int, int], ...]
    face_masks: Tuple[int, ...]
    face_coords: Tuple[Tuple[Tuple[int, int, int], ...], ...]


def _popcount(x: int) -> int:
    return bin(x).count("1")


def _future_pattern(mask: int, positions) -> int:
    return sum(((mask >> p) & 1) << i for i, p in enumerate(positions))


def minimum_candidates(masks: Tuple[int, ...]) -> Dict[int, List[int]]:
    """Smallest face subsets (as slot bitmasks) reproducing each pattern."""
    found: Dict[int, List[int]] = {}
    for size in range(1, len(masks) + 1):
        level: Dict[int, List[int]] = {}
        for combo in itertools.combinations(range(len(masks)), size):
            pattern = 0
            for slot in combo:
                pattern ^= masks[slot]
            if pattern and pattern not in found:
                level.setdefault(pattern, []).append(sum(1 << s for s in combo))
        found.update(level)
    return found


def _diamond_matches(kind, vtype: VertexType, pattern: int, subset: int, omega, cache) -> bool:
    base = vtype.base
    checks = [base] + [_add(base, step) for i, step in enumerate(vtype.future_steps)
                       if pattern >> i & 1]
    faces = {_add(base, c) for slot, coords in enumerate(vtype.face_coords)
             if subset >> slot & 1 for c in coords}
    key_s = (parity_key(kind, base), "s", tuple(sorted(checks)))
    key_f = (parity_key(kind, base), "f", tuple(sorted(faces)))
    for key, coords in ((key_s, checks), (key_f, faces)):
        if key not in cache:
            cache[key] = frozenset(diamond_coords(kind, coords, omega))
    return cache[key_s] == cache[key_f]


class RuleTable(object):
    """Dense rule arrays for one lattice and one sweep direction.

    ``candidates[t, pattern, i]`` is the i-th face subset for vertex type
    ``t`` given the future-edge ``pattern``, encoded as a bitmask over the
    type's future-face slots. ``future_faces[v, slot]`` maps slots back to
    face indices. Padding uses |E| and |F|, one past the last valid index.
    """

    def __init__(self, lattice: LatticeGeometry, direction: SweepDirection, types: List[VertexType],
                 vertex_type, future_edges, past_edges, future_faces, candidates, n_candidates,
                 dead_vertices):
        self.lattice = lattice
        self.direction = direction
        self.types = types
        self.vertex_type = vertex_type
        self.future_edges = future_edges
        self.past_edges = past_edges
        self.future_faces = future_faces
        self.candidates = candidates
        self.n_candidates = n_candidates
        self.dead_vertices = dead_vertices
        self.edge_weights = 1 << np.arange(future_edges.shape[1], dtype=np.int64)
        self.ambiguous = (n_candidates > 1).any(axis=1)

    def __repr__(self):
        return (f"RuleTable({self.lattice.family}, L={self.lattice.L}, {self.direction}, "
                f"types={len(self.types)}, dead={len(self.dead_vertices)})")

    def lookup(self, v: int, pattern: int) -> List[List[int]]:
        """Face subsets the rule may return at ``v`` for a future-edge pattern."""
        t = self.vertex_type[v]
        out = []
        for subset in self.candidates[t, pattern, :self.n_candidates[t, pattern]]:
            slots = [s for s in range(self.future_faces.shape[1]) if subset >> s & 1]
            out.append(sorted(int(self.future_faces[v, s]) for s in slots))
        return out

    def freeze(self):
        for array in (self.vertex_type, self.future_edges, self.past_edges, self.future_faces,
                      self.candidates, self.n_candidates, self.dead_vertices):
            array.setflags(write=False)
        return self


def build_rule_table(lattice: LatticeGeometry, direction: SweepDirection) -> RuleTable:
    ctx = sweep_context(lattice, direction)
    with metrics.timer(metric_key("rules", "build", lattice.family)):
        n = lattice.n_vertices
        types: List[VertexType] = []
        type_rules: List[Dict[int, List[int]]] = []
        index: Dict[tuple, int] = {}
        vertex_type = np.zeros(n, dtype=np.int64)
        slot_faces: List[List[int]] = []
        dead = []
        dead_types = set()
        diamonds = {}
        for v in range(n):
            bulk = bool(lattice.vertex_label[v] == BULK)
            positions = ctx.future_positions[v]
            local = []
            for f, mask, rel in ctx.structure.faces[v]:
                if ctx.face_infimum[f] != v:
                    continue
                fmask = 0
                for i, p in enumerate(positions):
                    fmask |= (mask >> p & 1) << i
                local.append((fmask, rel, f))
            local.sort()
            slot_faces.append([f for _, _, f in local])
            key = (ctx.signature(v), bulk)
            if key in index:
                vertex_type[v] = index[key]
                if index[key] in dead_types:
                    dead.append(v)
                continue

            vtype = VertexType(
                vertex=v, bulk=bulk, base=tuple(int(c) for c in lattice.coords[v]),
                future_steps=tuple(ctx.structure.displacements[v][p] for p in positions),
                face_masks=tuple(m for m, _, _ in local),
                face_coords=tuple(rel for _, rel, _ in local),
            )
            rules = minimum_candidates(vtype.face_masks)
            report = trailing_condition(ctx, v)
            if not report.ok:
                if bulk:
                    raise RuleTableError(f"bulk vertex {v} of {lattice!r} has future syndromes "
                                         f"with no matching faces for {direction}",
                                         vertex=v, pattern=(report.unmatched or report.blocked)[0])
                dead.append(v)
            # a blocked restriction belongs to a face outside the future; leave it to another direction
            for mask in report.blocked:
                rules.pop(_future_pattern(mask, positions), None)
            if bulk:
                for pattern, subsets in list(rules.items()):
                    kept = [s for s in subsets
                            if _diamond_matches(ctx.kind, vtype, pattern, s, ctx.omega, diamonds)]
                    if not kept:
                        raise RuleTableError(f"no face subset at bulk vertex {v} keeps the causal "
                                             f"diamond of pattern {pattern:b} for {direction}",
                                             vertex=v, pattern=pattern)
                    rules[pattern] = kept
            index[key] = len(types)
            vertex_type[v] = len(types)
            types.append(vtype)
            type_rules.append(rules)
            if not report.ok:
                dead_types.add(index[key])

        width_edges = max((len(e) for e in ctx.future_edges), default=0)
        width_past = max((len(e) for e in ctx.past_edges), default=0)
        width_faces = max((len(s) for s in slot_faces), default=0)
        width_choice = max((len(c) for rules in type_rules for c in rules.values()), default=1)
        future_edges = np.full((n, width_edges), lattice.n_edges, dtype=np.int64)
        past_edges = np.full((n, max(width_past, 1)), lattice.n_edges, dtype=np.int64)
        future_faces = np.full((n, max(width_faces, 1)), lattice.n_faces, dtype=np.int64)
        for v in range(n):
            future_edges[v, :len(ctx.future_edges[v])] = ctx.future_edges[v]
            past_edges[v, :len(ctx.past_edges[v])] = ctx.past_edges[v]
            future_faces[v, :len(slot_faces[v])] = slot_faces[v]
        candidates = np.zeros((len(types), 1 << width_edges, width_choice), dtype=np.int64)
        n_candidates = np.zeros((len(types), 1 << width_edges), dtype=np.int64)
        for t, rules in enumerate(type_rules):
            for pattern, subsets in rules.items():
                candidates[t, pattern, :len(subsets)] = subsets
                n_candidates[t, pattern] = len(subsets)

        table = RuleTable(lattice, direction, types, vertex_type, future_edges, past_edges,
                          future_faces, candidates, n_candidates,
                          np.array(sorted(dead), dtype=np.int64)).freeze()
    if table.ambiguous.any():
        logger.warning("%r: %d vertex types have ambiguous rule entries",
                       table, int(table.ambiguous.sum()))
    logger.info("built %r", table)
    return table



@lru_cache(maxsize=64)
def rule_table(lattice: LatticeGeometry, direction: SweepDirection) -> RuleTable:
    """Build the table for a lattice and direction once per process."""
    return build_rule_table(lattice, direction)


def verify_rule_table(table: RuleTable):
    """Re-check every stored entry; raise RuleTableError on the first bad one.

    Each subset must use only future faces of its vertex, reproduce the
    pattern on the future edges, be of minimum size, and for bulk types
    keep the causal diamond of the pattern.
    """
    lattice = table.lattice
    ctx = sweep_context(lattice, table.direction)
    diamonds = {}
    for t, vtype in enumerate(table.types):
        best = minimum_candidates(vtype.face_masks)
        for pattern in range(table.n_candidates.shape[1]):
            count = int(table.n_candidates[t, pattern])
            if count and pattern >> len(vtype.future_steps):
                raise RuleTableError(f"type {t} acts on a pattern {pattern:b} outside its future edges",
                                     vertex=vtype.vertex, pattern=pattern)
            for subset in table.candidates[t, pattern, :count]:
                subset = int(subset)
                if subset >> len(vtype.face_masks):
                    raise RuleTableError(f"type {t} returns a face outside the future of "
                                         f"vertex {vtype.vertex}", vertex=vtype.vertex, pattern=pattern)
                produced = 0
                for slot, mask in enumerate(vtype.face_masks):
                    if subset >> slot & 1:
                        produced ^= mask
                if produced != pattern:
                    raise RuleTableError(f"type {t} subset {subset:b} leaves {produced:b} "
                                         f"instead of {pattern:b} at vertex {vtype.vertex}",
                                         vertex=vtype.vertex, pattern=pattern)
                if pattern in best and _popcount(subset) != _popcount(best[pattern][0]):
                    raise RuleTableError(f"type {t} subset {subset:b} is not of minimum size",
                                         vertex=vtype.vertex, pattern=pattern)
                if vtype.bulk and not _diamond_matches(ctx.kind, vtype, pattern, subset,
                                                       ctx.omega, diamonds):
                    raise RuleTableError(f"type {t} subset {subset:b} changes the causal diamond "
                                         f"of pattern {pattern:b}", vertex=vtype.vertex, pattern=pattern)
    for v in range(lattice.n_vertices):
        for f in table.future_faces[v]:
            if f < lattice.n_faces and ctx.face_infimum[f] != v:
                raise RuleTableError(f"face {f} is listed in the future of vertex {v} "
                                     f"but its infimum is {ctx.face_infimum[f]}", vertex=v)
    logger.debug("verified %r", table)


def corrupt_rule_table(table: RuleTable, seed: int = 0) -> RuleTable:
    """Copy of ``table`` with one stored subset altered by a single face."""
    rng = np.random.default_rng(seed)
    filled = np.argwhere(table.n_candidates > 0)
    if not len(filled):
        raise RuleTableError(f"{table!r} has no entries to corrupt")
    t, pattern = filled[rng.integers(len(filled))]
    candidates = table.candidates.copy()
    width = max(len(table.types[t].face_masks), 1)
    candidates[t, pattern, 0] ^= 1 << int(rng.integers(width))
    logger.warning("corrupted entry (type %d, pattern %s) of %r", t, bin(pattern), table)
    return RuleTable(table.lattice, table.direction, table.types, table.vertex_type,
                     table.future_edges, table.past_edges, table.future_faces, candidates,
                     table.n_candidates, table.dead_vertices)
