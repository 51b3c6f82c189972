"""Partial order induced on a lattice by a sweep direction.

A sweep direction w orders the vertices: u precedes v when a path of
edges leads from u to v with every step increasing the height w.x. All
order computations run on the infinite lattice in doubled coordinates.
Results are mapped back onto the finite lattice, either by wrapping on
the torus or by dropping exterior vertices for lattices with boundaries.
"""
import itertools
import logging
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, FrozenSet, Iterable, List, NamedTuple, Optional, Sequence, Tuple

import networkx as nx
import numpy as np

from sweepdecoder.errors import CausalOrderError
from sweepdecoder.lattice.geometry import (
    BULK, SIDE_BITS, SIDE_NAMES, SIDE_NORMALS, LatticeGeometry,
)

logger = logging.getLogger(__name__)

RHOMBIC = "rhombic"
CUBIC = "cubic"

SIGNS = tuple(itertools.product((-1, 1), repeat=3))
CUBIC_STEPS = tuple(tuple(2 * s if i == k else 0 for i in range(3))
                    for k in range(3) for s in (-1, 1))

DIRECTION_ORDER = (
    (1, 1, 1), (-1, -1, -1), (1, -1, -1), (-1, 1, 1),
    (-1, 1, -1), (1, -1, 1), (-1, -1, 1), (1, 1, -1),
)

Coordinate = Tuple[int, int, int]


@dataclass(frozen=True)
class SweepDirection:
    vector: Tuple[int, int, int]

    def __post_init__(self):
        vector = tuple(int(c) for c in self.vector)
        if len(vector) != 3 or any(c not in (-1, 1) for c in vector):
            raise CausalOrderError(f"sweep directions have entries +-1, got {self.vector}")
        object.__setattr__(self, "vector", vector)

    @classmethod
    def parse(cls, text: str) -> "SweepDirection":
        text = text.strip()
        if len(text) == 3 and set(text) <= {"+", "-"}:
            return cls(tuple(1 if c == "+" else -1 for c in text))
        try:
            return cls(tuple(int(c) for c in text.split(",")))
        except ValueError:
            raise CausalOrderError(f"cannot parse sweep direction {text!r}")

    def __str__(self):
        return "".join("+" if c > 0 else "-" for c in self.vector)

    def __neg__(self):
        return SweepDirection(tuple(-c for c in self.vector))

    def height(self, coord) -> int:
        return int(np.dot(coord, self.vector))


OMEGA = tuple(SweepDirection(v) for v in DIRECTION_ORDER)


def lattice_kind(lattice_or_family) -> str:
    family = getattr(lattice_or_family, "family", lattice_or_family)
    return RHOMBIC if family.startswith(RHOMBIC) else CUBIC


def parity_key(kind: str, coord) -> tuple:
    """Residue class that fixes the local shape of the infinite lattice at a vertex."""
    if kind == CUBIC:
        return ()
    return tuple(int(c) % 4 for c in coord)


@lru_cache(maxsize=None)
def _rhombic_steps(residue):
    if all(c % 2 == 0 for c in residue):
        # corners connect to the centers of the odd cubes around them
        return tuple(s for s in SIGNS if (sum(residue) + sum(s)) % 4 == 1)
    return SIGNS


def lattice_steps(kind: str, coord) -> Tuple[Coordinate, ...]:
    """Edge displacements leaving a vertex of the infinite lattice."""
    if kind == CUBIC:
        return CUBIC_STEPS
    return _rhombic_steps(parity_key(kind, coord))


def _dot(a, b) -> int:
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]


def _add(a, b) -> Coordinate:
    return a[0] + b[0], a[1] + b[1], a[2] + b[2]


def reach(kind: str, starts: Iterable[Coordinate], omega: Sequence[int],
          forward: bool = True, bound: Optional[int] = None) -> set:
    """Vertices reachable from ``starts`` by causal paths.

    Going forward the height never exceeds ``bound``; going backward it
    never drops below it. Without a bound the traversal would not end.
    """
    if bound is None:
        raise CausalOrderError("infinite-lattice traversals need a height bound")
    sign = 1 if forward else -1
    seen = {tuple(int(c) for c in s) for s in starts}
    frontier = list(seen)
    while frontier:
        nxt = []
        for coord in frontier:
            for step in lattice_steps(kind, coord):
                if sign * _dot(step, omega) <= 0:
                    continue
                node = _add(coord, step)
                if sign * _dot(node, omega) > sign * bound or node in seen:
                    continue
                seen.add(node)
                nxt.append(node)
        frontier = nxt
    return seen


def precedes_coords(kind: str, u, w, omega) -> bool:
    u, w = tuple(int(c) for c in u), tuple(int(c) for c in w)
    hu, hw = _dot(u, omega), _dot(w, omega)
    if hw < hu:
        return False
    if hw == hu:
        return u == w
    if kind == CUBIC:
        return all(o * (b - a) >= 0 for o, a, b in zip(omega, u, w))
    return w in reach(kind, [u], omega, True, hw)


def bound_coords(kind: str, coords: Iterable[Coordinate], omega, upper: bool = True,
                 max_slack: int = 4096) -> Coordinate:
    """Least upper bound (``upper``) or greatest lower bound of a coordinate set."""
    coords = list({tuple(int(c) for c in x) for x in coords})
    if not coords:
        raise CausalOrderError("the supremum and infimum of an empty set are undefined")
    if len(coords) == 1:
        return coords[0]
    sign = 1 if upper else -1
    top = max(sign * _dot(c, omega) for c in coords)
    slack = 4
    while slack <= max_slack:
        bound = sign * (top + slack)
        common = set.intersection(*(reach(kind, [c], omega, upper, bound) for c in coords))
        if common:
            best = min(sign * _dot(c, omega) for c in common)
            lowest = [c for c in common if sign * _dot(c, omega) == best]
            if len(lowest) > 1:
                raise CausalOrderError(f"{len(coords)} vertices have {len(lowest)} minimal "
                                       f"{'upper' if upper else 'lower'} bounds")
            candidate = lowest[0]
            if not common <= reach(kind, [candidate], omega, upper, bound):
                raise CausalOrderError(f"no {'least upper' if upper else 'greatest lower'} "
                                       f"bound for {sorted(coords)}")
            return candidate
        slack *= 2
    raise CausalOrderError(f"no common bound found for {sorted(coords)}")


def diamond_coords(kind: str, coords: Iterable[Coordinate], omega) -> FrozenSet[Coordinate]:
    """Future of the infimum intersected with the past of the supremum."""
    coords = list(coords)
    low = bound_coords(kind, coords, omega, upper=False)
    high = bound_coords(kind, coords, omega, upper=True)
    up = reach(kind, [low], omega, True, _dot(high, omega))
    down = reach(kind, [high], omega, False, _dot(low, omega))
    return frozenset(up & down)


def longest_chain_coords(kind: str, u, w, omega) -> int:
    """Number of steps of the longest causal path from u to w."""
    u, w = tuple(int(c) for c in u), tuple(int(c) for c in w)
    if not precedes_coords(kind, u, w, omega):
        raise CausalOrderError(f"{u} does not precede {w}")
    inside = (reach(kind, [u], omega, True, _dot(w, omega))
              & reach(kind, [w], omega, False, _dot(u, omega)))
    chain = {u: 0}
    for coord in sorted(inside, key=lambda c: _dot(c, omega)):
        if coord not in chain:
            continue
        for step in lattice_steps(kind, coord):
            node = _add(coord, step)
            if _dot(step, omega) > 0 and node in inside:
                chain[node] = max(chain.get(node, -1), chain[coord] + 1)
    return chain[w]


class CausalPoint(NamedTuple):
    coord: Coordinate
    vertex: Optional[int]

    @property
    def interior(self) -> bool:
        return self.vertex is not None


class LocalStructure(object):
    """Direction-independent neighbourhood data of every vertex.

    Incident edges are sorted by their displacement from the vertex; each
    face through the vertex is recorded with a bitmask over those edges
    (its restriction to the vertex) and its vertex offsets relative to it.
    """

    def __init__(self, lattice: LatticeGeometry):
        self.lattice = lattice
        self.kind = lattice_kind(lattice)
        n = lattice.n_vertices
        self.incident: List[np.ndarray] = []
        self.displacements: List[Tuple[Coordinate, ...]] = []
        position: List[Dict[int, int]] = []
        for v in range(n):
            entries = []
            for e in lattice.incident_edges(v):
                tail, head = lattice.edges[e]
                vector = lattice.edge_vectors[e]
                disp = tuple(int(c) for c in (vector if tail == v else -vector))
                entries.append((disp, int(e)))
                if tail == head:
                    raise CausalOrderError(f"edge {e} is a loop at vertex {v}")
            entries.sort()
            self.incident.append(np.array([e for _, e in entries], dtype=np.int64))
            self.displacements.append(tuple(d for d, _ in entries))
            position.append({e: i for i, (_, e) in enumerate(entries)})

        self.faces: List[List[Tuple[int, int, Tuple[Coordinate, ...]]]] = [[] for _ in range(n)]
        for f in range(lattice.n_faces):
            verts = lattice.face_vertex_list(f)
            offsets = lattice.face_offsets[f, :len(verts)]
            edges = lattice.face_edge_list(f)
            for slot, v in enumerate(verts):
                mask = 0
                for e in edges:
                    if v in lattice.edges[e]:
                        mask |= 1 << position[v][e]
                rel = tuple(tuple(int(c) for c in off - offsets[slot]) for off in offsets)
                self.faces[v].append((f, mask, rel))


@lru_cache(maxsize=16)
def local_structure(lattice: LatticeGeometry) -> LocalStructure:
    return LocalStructure(lattice)


class SweepContext(object):
    """Future and past edges and faces of every vertex for one sweep direction."""

    def __init__(self, lattice: LatticeGeometry, direction: SweepDirection):
        self.lattice = lattice
        self.direction = direction
        self.omega = direction.vector
        self.kind = lattice_kind(lattice)
        self.structure = local_structure(lattice)

        self.future_positions: List[Tuple[int, ...]] = []
        self.future_edges: List[np.ndarray] = []
        self.past_edges: List[np.ndarray] = []
        for v in range(lattice.n_vertices):
            gains = [_dot(d, self.omega) for d in self.structure.displacements[v]]
            fut = tuple(i for i, g in enumerate(gains) if g > 0)
            self.future_positions.append(fut)
            self.future_edges.append(self.structure.incident[v][list(fut)])
            self.past_edges.append(self.structure.incident[v][[i for i, g in enumerate(gains) if g < 0]])

        self.face_infimum = self._face_infima()
        self.future_faces: List[List[int]] = [[] for _ in range(lattice.n_vertices)]
        for f, v in enumerate(self.face_infimum):
            if v >= 0:
                self.future_faces[int(v)].append(f)
        self._trailing_cache: Dict[tuple, "TrailingReport"] = {}

    def __repr__(self):
        return f"SweepContext({self.lattice!r}, {self.direction})"

    def _face_infima(self) -> np.ndarray:
        lattice = self.lattice
        present = lattice.face_vertices >= 0
        heights = np.where(present, lattice.face_offsets @ np.asarray(self.omega), np.iinfo(np.int64).max)
        slots = heights.argmin(axis=1)
        lowest = heights[np.arange(lattice.n_faces), slots]
        ties = ((heights == lowest[:, None]) & present).sum(axis=1) > 1
        infima = np.full(lattice.n_faces, -1, dtype=np.int64)
        cache = {}
        for f in np.flatnonzero(~ties):
            slot = slots[f]
            m = int(lattice.face_vertices[f, slot])
            base = tuple(int(c) for c in lattice.coords[m])
            offsets = lattice.face_offsets[f, present[f]]
            deltas = tuple(tuple(int(c) for c in off - lattice.face_offsets[f, slot]) for off in offsets)
            key = (parity_key(self.kind, base), deltas)
            if key not in cache:
                cache[key] = all(precedes_coords(self.kind, base, _add(base, d), self.omega)
                                 for d in deltas)
            if cache[key]:
                infima[f] = m
        return infima

    def signature(self, v: int) -> tuple:
        """Everything the local rule at ``v`` depends on."""
        structure = self.structure
        faces = tuple(sorted((mask, rel, bool(self.face_infimum[f] == v))
                             for f, mask, rel in structure.faces[v]))
        return (parity_key(self.kind, self.lattice.coords[v]), structure.displacements[v],
                self.future_positions[v], faces)


@lru_cache(maxsize=64)
def sweep_context(lattice: LatticeGeometry, direction: SweepDirection) -> SweepContext:
    return SweepContext(lattice, direction)


def local_coords(ctx: SweepContext, vertices: Iterable[int],
                 reference: Optional[Coordinate] = None) -> List[Coordinate]:
    """Coordinates of ``vertices`` in one unrolled patch of the lattice.

    On the torus every vertex takes the image closest to the reference;
    sets as wide as half the torus are rejected since the order is only
    defined locally there.
    """
    lattice = ctx.lattice
    vertices = list(vertices)
    coords = lattice.coords[vertices]
    if not lattice.periodic or not len(vertices):
        return [tuple(int(c) for c in row) for row in coords]
    period = lattice.period
    ref = coords[0] if reference is None else np.asarray(reference)
    unrolled = ref + (coords - ref + period // 2) % period - period // 2
    spread = unrolled.max(axis=0) - unrolled.min(axis=0)
    if (spread >= lattice.L).any():
        raise CausalOrderError(f"vertex set of width {spread.max() / 2} is too wide for the "
                               f"local order on a torus of size {lattice.L}")
    return [tuple(int(c) for c in row) for row in unrolled]


def to_vertices(ctx: SweepContext, coords: Iterable[Coordinate]) -> FrozenSet[int]:
    found = (ctx.lattice.vertex_at(c) for c in coords)
    return frozenset(v for v in found if v is not None)


def _point(ctx, coord) -> CausalPoint:
    coord = ctx.lattice.wrap(coord)
    return CausalPoint(coord, ctx.lattice.vertex_at(coord))


def _horizon(ctx, v, horizon, forward):
    if horizon is not None:
        return horizon
    if ctx.lattice.periodic:
        return ctx.lattice.L
    heights = ctx.lattice.coords @ np.asarray(ctx.omega)
    h = int(heights[v])
    return int(heights.max()) - h if forward else h - int(heights.min())


def future(ctx: SweepContext, v: int, horizon: Optional[int] = None) -> FrozenSet[int]:
    """Vertices w with v preceding w, up to ``horizon`` above v in doubled height.

    Lattices with boundaries default to their full height range; on the
    torus the default horizon is L.
    """
    (start,) = local_coords(ctx, [v])
    bound = _dot(start, ctx.omega) + _horizon(ctx, v, horizon, True)
    return to_vertices(ctx, reach(ctx.kind, [start], ctx.omega, True, bound))


def past(ctx: SweepContext, v: int, horizon: Optional[int] = None) -> FrozenSet[int]:
    (start,) = local_coords(ctx, [v])
    bound = _dot(start, ctx.omega) - _horizon(ctx, v, horizon, False)
    return to_vertices(ctx, reach(ctx.kind, [start], ctx.omega, False, bound))


def precedes(ctx: SweepContext, u: int, w: int) -> bool:
    cu, cw = local_coords(ctx, [u, w])
    return precedes_coords(ctx.kind, cu, cw, ctx.omega)


def infimum(ctx: SweepContext, vertices: Iterable[int]) -> CausalPoint:
    vertices = list(vertices)
    if not vertices:
        raise CausalOrderError("infimum of an empty vertex set")
    return _point(ctx, bound_coords(ctx.kind, local_coords(ctx, vertices), ctx.omega, upper=False))


def supremum(ctx: SweepContext, vertices: Iterable[int]) -> CausalPoint:
    vertices = list(vertices)
    if not vertices:
        raise CausalOrderError("supremum of an empty vertex set")
    return _point(ctx, bound_coords(ctx.kind, local_coords(ctx, vertices), ctx.omega, upper=True))


def causal_diamond(ctx: SweepContext, vertices: Iterable[int]) -> FrozenSet[int]:
    """Lattice vertices of the causal diamond of a vertex set."""
    vertices = list(vertices)
    if not vertices:
        raise CausalOrderError("causal diamond of an empty vertex set")
    return to_vertices(ctx, diamond_coords(ctx.kind, local_coords(ctx, vertices), ctx.omega))


def causal_region(contexts: Sequence[SweepContext], vertices: Iterable[int]) -> FrozenSet[int]:
    """Compose the restricted diamonds of each direction, first context first."""
    region = frozenset(vertices)
    for ctx in contexts:
        region = causal_diamond(ctx, region)
    return region


def longest_chain(ctx: SweepContext, u: int, w: int) -> int:
    cu, cw = local_coords(ctx, [u, w])
    return longest_chain_coords(ctx.kind, cu, cw, ctx.omega)


def removal_potential(ctx: SweepContext, syndrome: np.ndarray, top: CausalPoint) -> int:
    """Longest chain from any vertex of the syndrome to ``top``; zero for no syndrome."""
    vertices = support_vertices(ctx.lattice, syndrome)
    if not len(vertices):
        return 0
    reference = np.asarray(top.coord)
    if ctx.lattice.periodic:
        period = ctx.lattice.period
        coords = reference + (ctx.lattice.coords[vertices] - reference + period // 2) % period - period // 2
    else:
        coords = ctx.lattice.coords[vertices]
    return max(longest_chain_coords(ctx.kind, c, top.coord, ctx.omega) for c in coords)


def support_vertices(lattice: LatticeGeometry, checks: np.ndarray) -> np.ndarray:
    """Vertices touched by a set of edges."""
    return np.unique(lattice.edges[np.flatnonzero(checks)].ravel())


def restrict(lattice: LatticeGeometry, members: np.ndarray, v: int, over: str = "edges") -> np.ndarray:
    """Indices of the edges (or faces) of ``members`` that contain vertex ``v``."""
    if over == "edges":
        local = lattice.incident_edges(v)
    elif over == "faces":
        local = lattice.incident_faces(v)
    else:
        raise ValueError(f"can only restrict edges or faces, not {over!r}")
    members = np.asarray(members, dtype=bool)
    return np.sort(local[members[local]])


def is_trailing(ctx: SweepContext, syndrome: np.ndarray, v: int) -> bool:
    local = restrict(ctx.lattice, syndrome, v)
    return len(local) > 0 and bool(np.isin(local, ctx.future_edges[v]).all())


@lru_cache(maxsize=8)
def syndrome_graph(lattice: LatticeGeometry) -> nx.Graph:
    graph = nx.Graph()
    graph.add_nodes_from(range(lattice.n_edges))
    for f in range(lattice.n_faces):
        graph.add_edges_from(itertools.combinations(lattice.face_edge_list(f), 2))
    return graph


def syndrome_distance(lattice: LatticeGeometry, sigma: np.ndarray, tau: np.ndarray) -> int:
    """Shortest path between two edge sets in the graph of edges sharing a face."""
    sources = set(int(e) for e in np.flatnonzero(sigma))
    targets = set(int(e) for e in np.flatnonzero(tau))
    if not sources or not targets:
        raise CausalOrderError("syndrome distance needs two nonempty edge sets")
    lengths = nx.multi_source_dijkstra_path_length(syndrome_graph(lattice), sources)
    found = [lengths[e] for e in targets if e in lengths]
    if not found:
        raise CausalOrderError("edge sets lie in disconnected parts of the syndrome graph")
    return int(min(found))


def _span(masks: Iterable[int]) -> set:
    span = {0}
    for mask in masks:
        if mask and mask not in span:
            span |= {s ^ mask for s in span}
    return span


@dataclass
class TrailingReport:
    ok: bool
    unmatched: Tuple[int, ...] = ()
    blocked: Tuple[int, ...] = ()


def trailing_condition(ctx: SweepContext, v: int) -> TrailingReport:
    """Every local syndrome that lies in the future of ``v`` can be matched by future faces.

    Local syndromes are restrictions of boundaries of face sets to ``v``;
    the report lists the unmatched ones as bitmasks over incident edges.
    A face through ``v`` whose restriction lies in the future while the
    face itself does not (a tie or a vertex below ``v``) also fails the
    condition; its restriction is listed under ``blocked``.
    """
    key = ctx.signature(v)
    if key in ctx._trailing_cache:
        return ctx._trailing_cache[key]
    faces = ctx.structure.faces[v]
    future_bits = sum(1 << i for i in ctx.future_positions[v])
    achievable = _span(mask for _, mask, _ in faces)
    matched = _span(mask for f, mask, _ in faces if ctx.face_infimum[f] == v)
    unmatched = tuple(sorted(p for p in achievable
                             if p and not p & ~future_bits and p not in matched))
    blocked = tuple(sorted({mask for f, mask, _ in faces
                            if mask and not mask & ~future_bits and ctx.face_infimum[f] != v}))
    report = TrailingReport(not unmatched and not blocked, unmatched, blocked)
    ctx._trailing_cache[key] = report
    return report


@dataclass
class AuditReport:
    family: str
    L: int
    direction: str
    failures: Dict[str, List[str]] = field(default_factory=dict)
    boundary_faces_without_infimum: int = 0
    rule_dead: List[int] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not any(self.failures.values())

    def fail(self, condition: str, message: str):
        self.failures.setdefault(condition, []).append(message)


def locality_violations(lattice: LatticeGeometry, samples: int, rng) -> List[int]:
    """Vertices where restricting a boundary differs from summing restricted faces."""
    structure = local_structure(lattice)
    errors = rng.random((samples, lattice.n_faces)) < 0.1
    syndromes = (lattice.boundary.T @ errors.T.astype(np.int32)).T & 1
    bad = []
    for v in range(lattice.n_vertices):
        incident = structure.incident[v]
        local = np.zeros((samples, len(incident)), dtype=np.int64)
        for f, mask, _ in structure.faces[v]:
            bits = np.array([(mask >> i) & 1 for i in range(len(incident))], dtype=np.int64)
            local ^= errors[:, f, None] * bits
        if not np.array_equal(local, syndromes[:, incident]):
            bad.append(v)
    return bad


def condition_audit(lattice: LatticeGeometry, directions: Sequence[SweepDirection] = OMEGA,
                    samples: int = 500, seed: int = 0) -> List[AuditReport]:
    """Check the five causal-code conditions for each direction.

    Conditions three and five are required of bulk faces and vertices;
    boundary exceptions are counted in the report instead.
    """
    rng = np.random.default_rng(seed)
    nonlocal_vertices = locality_violations(lattice, samples, rng)
    reports = []
    for direction in directions:
        ctx = sweep_context(lattice, direction)
        report = AuditReport(lattice.family, lattice.L, str(direction))

        for _ in range(min(samples, 50)):
            v = int(rng.integers(lattice.n_vertices))
            neighbours = [int(u) for u in lattice.edges[lattice.incident_edges(v)].ravel() if u != v]
            sample = [v] + ([int(rng.choice(neighbours))] if neighbours else [])
            try:
                low, high = infimum(ctx, sample), supremum(ctx, sample)
            except CausalOrderError as e:
                report.fail("bounds", f"{sample}: {e}")
                continue
            if not all(precedes_coords(ctx.kind, _nearest(ctx, low.coord, c), c, ctx.omega) and
                       precedes_coords(ctx.kind, c, _nearest(ctx, high.coord, c), ctx.omega)
                       for c in local_coords(ctx, sample)):
                report.fail("bounds", f"{sample}: bounds do not enclose the set")

        sizes = lattice.face_size
        if (sizes < 1).any() or (sizes > 4).any():
            report.fail("finite", "faces with no edges or more than four edges")

        missing = ctx.face_infimum < 0
        for f in np.flatnonzero(missing & (lattice.face_label == BULK))[:10]:
            report.fail("infimum", f"bulk face {f} does not contain its infimum")
        report.boundary_faces_without_infimum = int((missing & (lattice.face_label != BULK)).sum())

        for v in nonlocal_vertices[:10]:
            report.fail("locality", f"restriction at vertex {v} disagrees with the boundary")

        for v in range(lattice.n_vertices):
            if trailing_condition(ctx, v).ok:
                continue
            if lattice.vertex_label[v] == BULK:
                report.fail("trailing", f"bulk vertex {v} fails the trailing condition")
            else:
                report.rule_dead.append(v)

        logger.info("%s L=%d %s: %s, %d boundary faces without infimum, %d rule-dead vertices",
                    lattice.family, lattice.L, direction, "pass" if report.passed else "FAIL",
                    report.boundary_faces_without_infimum, len(report.rule_dead))
        reports.append(report)
    return reports


def _nearest(ctx, coord, reference):
    if not ctx.lattice.periodic:
        return coord
    period = ctx.lattice.period
    ref = np.asarray(reference)
    return tuple(int(c) for c in ref + (np.asarray(coord) - ref + period // 2) % period - period // 2)


def allowed_directions(lattice: LatticeGeometry) -> Dict[str, List[SweepDirection]]:
    """Directions satisfying the trailing condition on all vertices of each boundary side.

    Only vertices on exactly one side are considered; edges and corners
    where sides meet are left out.
    """
    table = {}
    sides = lattice.rough_sides | lattice.smooth_sides
    for name in SIDE_NAMES:
        bit = SIDE_BITS[name]
        if not sides & bit:
            continue
        members = np.flatnonzero(lattice.vertex_sides == bit)
        table[name] = [d for d in OMEGA
                       if all(trailing_condition(sweep_context(lattice, d), int(v)).ok for v in members)]
    return table


def outward(direction: SweepDirection, side: str) -> bool:
    return _dot(direction.vector, SIDE_NORMALS[side]) > 0
