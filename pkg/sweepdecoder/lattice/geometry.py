import logging
from collections import Counter
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
from scipy import sparse

from sweepdecoder.errors import LatticeError

logger = logging.getLogger(__name__)

Coordinate = Tuple[int, int, int]

RHOMBIC_PERIODIC = "rhombic-periodic"
RHOMBIC_OPEN = "rhombic-open"
CUBIC_PERIODIC = "cubic-periodic"
CUBIC_OPEN = "cubic-open"
FAMILIES = (RHOMBIC_PERIODIC, RHOMBIC_OPEN, CUBIC_PERIODIC, CUBIC_OPEN)

CORNER = 0
CENTER = 1

BULK = 0
ROUGH = 1
SMOOTH = 2
LABEL_NAMES = {BULK: "bulk", ROUGH: "rough", SMOOTH: "smooth"}

SIDE_NAMES = ("x-", "x+", "y-", "y+", "z-", "z+")
SIDE_BITS = {name: 1 << i for i, name in enumerate(SIDE_NAMES)}
# outward unit normal per side
SIDE_NORMALS = {
    "x-": (-1, 0, 0), "x+": (1, 0, 0),
    "y-": (0, -1, 0), "y+": (0, 1, 0),
    "z-": (0, 0, -1), "z+": (0, 0, 1),
}


def side_mask(names: Iterable[str]) -> int:
    mask = 0
    for name in names:
        mask |= SIDE_BITS[name]
    return mask


@dataclass
class _DraftFace:
    cycle: List[Coordinate]
    offsets: List[Coordinate]
    edges: List[tuple]


@dataclass
class LatticeDraft:
    """Mutable incidence data collected by the builders before indexing.

    Vertices are keyed by their (wrapped) doubled coordinate, edges by
    (tail coordinate, displacement), faces and cells by builder-specific
    geometric keys. ``assemble`` turns the draft into a LatticeGeometry
    with dense indices in lexicographic key order.
    """
    family: str
    L: int
    period: Optional[int] = None
    rough_sides: int = 0
    smooth_sides: int = 0
    vertices: Dict[Coordinate, Tuple[int, int]] = field(default_factory=dict)
    edges: Dict[tuple, Tuple[Coordinate, Coordinate, Coordinate, int]] = field(default_factory=dict)
    faces: Dict[tuple, _DraftFace] = field(default_factory=dict)
    cells: Dict[tuple, List[tuple]] = field(default_factory=dict)
    truncated_cells: Dict[tuple, List[tuple]] = field(default_factory=dict)

    def wrap(self, coord: Sequence[int]) -> Coordinate:
        if self.period is None:
            return tuple(int(c) for c in coord)
        return tuple(int(c) % self.period for c in coord)

    def add_vertex(self, coord, kind, sides=0):
        self.vertices[self.wrap(coord)] = (kind, sides)

    def add_edge(self, tail, vector, edge_class):
        tail = self.wrap(tail)
        head = self.wrap(np.add(tail, vector))
        key = (tail, tuple(int(v) for v in vector))
        self.edges[key] = (tail, head, key[1], edge_class)
        return key

    def add_face(self, key, cycle, offsets, edges):
        self.faces[key] = _DraftFace([self.wrap(c) for c in cycle],
                                     [tuple(int(o) for o in off) for off in offsets],
                                     list(edges))

    def add_cell(self, key, face_keys) -> bool:
        """Record a cell if all its faces are complete rhombi or squares.

        Cells cut by a boundary are kept apart as truncated cells when the
        faces that survive still have a trivial boundary.
        """
        present = [k for k in face_keys if k in self.faces]
        if len(present) == len(face_keys) and all(len(self.faces[k].edges) == 4 for k in present):
            self.cells[key] = present
            return True
        parity = Counter(e for k in present for e in self.faces[k].edges)
        if present and all(c % 2 == 0 for c in parity.values()):
            self.truncated_cells[key] = present
        return False

    def assemble(self) -> "LatticeGeometry":
        vertex_keys = sorted(self.vertices)
        vertex_index = {key: i for i, key in enumerate(vertex_keys)}
        coords = np.array(vertex_keys, dtype=np.int64).reshape(-1, 3)
        kinds = np.array([self.vertices[k][0] for k in vertex_keys], dtype=np.int8)
        sides = np.array([self.vertices[k][1] for k in vertex_keys], dtype=np.uint8)

        edge_keys = sorted(self.edges)
        edge_index = {key: i for i, key in enumerate(edge_keys)}
        edges = np.empty((len(edge_keys), 2), dtype=np.int64)
        vectors = np.empty((len(edge_keys), 3), dtype=np.int64)
        classes = np.empty(len(edge_keys), dtype=np.int8)
        for i, key in enumerate(edge_keys):
            tail, head, vector, edge_class = self.edges[key]
            try:
                edges[i] = (vertex_index[tail], vertex_index[head])
            except KeyError as e:
                raise LatticeError(f"edge {key} references a missing vertex {e}") from e
            vectors[i] = vector
            classes[i] = edge_class

        face_keys = sorted(self.faces)
        face_index = {key: i for i, key in enumerate(face_keys)}
        face_vertices = np.full((len(face_keys), 4), -1, dtype=np.int64)
        face_offsets = np.zeros((len(face_keys), 4, 3), dtype=np.int64)
        face_edges = np.full((len(face_keys), 4), -1, dtype=np.int64)
        for i, key in enumerate(face_keys):
            face = self.faces[key]
            for j, (coord, offset) in enumerate(zip(face.cycle, face.offsets)):
                face_vertices[i, j] = vertex_index[coord]
                face_offsets[i, j] = offset
            for j, edge_key in enumerate(face.edges):
                face_edges[i, j] = edge_index[edge_key]

        cell_keys = sorted(self.cells)
        width = max((len(self.cells[k]) for k in cell_keys), default=0)
        cells = np.full((len(cell_keys), width), -1, dtype=np.int64)
        for i, key in enumerate(cell_keys):
            cells[i, :len(self.cells[key])] = [face_index[f] for f in self.cells[key]]

        truncated = [[face_index[f] for f in self.truncated_cells[k]]
                     for k in sorted(self.truncated_cells)]

        return LatticeGeometry(
            family=self.family, L=self.L, period=self.period,
            coords=coords, vertex_kind=kinds, vertex_sides=sides,
            edges=edges, edge_vectors=vectors, edge_class=classes,
            face_vertices=face_vertices, face_offsets=face_offsets, face_edges=face_edges,
            cells=cells, rough_sides=self.rough_sides, smooth_sides=self.smooth_sides,
            face_keys=face_keys, cell_keys=cell_keys,
            truncated_cells=truncated,
        )


class LatticeGeometry(object):
    """Immutable incidence structure of a 3D cell complex.

    Qubits live on faces, X checks on edges and Z stabilizers on cells.
    All coordinates are doubled integers so that cube centers stay exact.
    """

    def __init__(self, family, L, period, coords, vertex_kind, vertex_sides,
                 edges, edge_vectors, edge_class, face_vertices, face_offsets,
                 face_edges, cells, rough_sides=0, smooth_sides=0,
                 face_keys=None, cell_keys=None, truncated_cells=None):
        self.family = family
        self.L = int(L)
        self.period = period
        self.periodic = period is not None
        self.rough_sides = rough_sides
        self.smooth_sides = smooth_sides

        self.coords = coords
        self.vertex_kind = vertex_kind
        self.vertex_sides = vertex_sides
        self.edges = edges
        self.edge_vectors = edge_vectors
        self.edge_class = edge_class
        self.face_vertices = face_vertices
        self.face_offsets = face_offsets
        self.face_edges = face_edges
        self.cells = cells
        self.face_keys = list(face_keys) if face_keys is not None else None
        self.cell_keys = list(cell_keys) if cell_keys is not None else None
        self.truncated_cells = [list(c) for c in truncated_cells] if truncated_cells else []

        self.vertex_index = {tuple(int(c) for c in row): i for i, row in enumerate(coords)}
        self.face_index = ({key: i for i, key in enumerate(self.face_keys)}
                           if self.face_keys is not None else {})

        self.face_size = (face_edges >= 0).sum(axis=1)
        self.degree = np.bincount(edges.ravel(), minlength=len(coords)) if len(edges) else \
            np.zeros(len(coords), dtype=np.int64)

        self.vertex_label = self._vertex_labels()
        self.edge_label = self._edge_labels()
        self.face_label = self._face_labels()

        rows = np.repeat(np.arange(len(face_edges)), 4)
        cols = face_edges.ravel()
        keep = cols >= 0
        self.boundary = sparse.csr_matrix(
            (np.ones(int(keep.sum()), dtype=np.int32), (rows[keep], cols[keep])),
            shape=(len(face_edges), len(edges)))

        self.vertex_edges = self._incidence(edges.ravel(), np.repeat(np.arange(len(edges)), 2))
        self.vertex_faces = self._incidence(face_vertices.ravel(),
                                            np.repeat(np.arange(len(face_vertices)), 4))

        for array in (coords, vertex_kind, vertex_sides, edges, edge_vectors, edge_class,
                      face_vertices, face_offsets, face_edges, cells, self.face_size,
                      self.degree, self.vertex_label, self.edge_label, self.face_label,
                      self.vertex_edges, self.vertex_faces):
            array.setflags(write=False)

        self.isolated_vertices = np.flatnonzero(self.degree == 0)
        if len(self.isolated_vertices):
            logger.warning("%s L=%d has %d vertices of degree 0 (kept, flagged)",
                           family, self.L, len(self.isolated_vertices))

    def __repr__(self):
        return (f"LatticeGeometry({self.family}, L={self.L}, V={self.n_vertices}, "
                f"E={self.n_edges}, F={self.n_faces}, C={self.n_cells})")

    @property
    def n_vertices(self):
        return len(self.coords)

    @property
    def n_edges(self):
        return len(self.edges)

    @property
    def n_faces(self):
        return len(self.face_edges)

    @property
    def n_cells(self):
        return len(self.cells)

    @property
    def counts(self):
        return self.n_vertices, self.n_edges, self.n_faces, self.n_cells

    def wrap(self, coord) -> Coordinate:
        if self.period is None:
            return tuple(int(c) for c in coord)
        return tuple(int(c) % self.period for c in coord)

    def vertex_at(self, coord) -> Optional[int]:
        return self.vertex_index.get(self.wrap(coord))

    def face_vertex_list(self, face):
        row = self.face_vertices[face]
        return [int(v) for v in row[row >= 0]]

    def face_edge_list(self, face):
        row = self.face_edges[face]
        return [int(e) for e in row[row >= 0]]

    def incident_edges(self, vertex):
        row = self.vertex_edges[vertex]
        return row[row >= 0]

    def incident_faces(self, vertex):
        row = self.vertex_faces[vertex]
        return row[row >= 0]

    def sides_of(self, vertex) -> List[str]:
        bits = int(self.vertex_sides[vertex])
        return [name for name in SIDE_NAMES if bits & SIDE_BITS[name]]

    def _incidence(self, owners, members):
        keep = owners >= 0
        owners, members = owners[keep], members[keep]
        n = len(self.coords)
        counts = np.bincount(owners, minlength=n)
        width = int(counts.max()) if n and len(owners) else 0
        table = np.full((n, width), -1, dtype=np.int64)
        order = np.lexsort((members, owners))
        owners, members = owners[order], members[order]
        starts = np.concatenate([[0], np.cumsum(counts)[:-1]])
        slots = np.arange(len(owners)) - starts[owners]
        table[owners, slots] = members
        return table

    def _vertex_labels(self):
        labels = np.full(len(self.coords), BULK, dtype=np.int8)
        labels[(self.vertex_sides & self.smooth_sides) > 0] = SMOOTH
        labels[(self.vertex_sides & self.rough_sides) > 0] = ROUGH
        return labels

    def _edge_labels(self):
        if not len(self.edges):
            return np.zeros(0, dtype=np.int8)
        ends = self.vertex_label[self.edges]
        labels = np.full(len(self.edges), BULK, dtype=np.int8)
        labels[(ends == SMOOTH).any(axis=1)] = SMOOTH
        labels[(ends == ROUGH).any(axis=1)] = ROUGH
        return labels

    def _face_labels(self):
        n = len(self.face_edges)
        labels = np.full(n, BULK, dtype=np.int8)
        padded = np.append(self.vertex_label, BULK)
        verts = padded[self.face_vertices]
        any_rough = (verts == ROUGH).any(axis=1)
        any_smooth = (verts == SMOOTH).any(axis=1)
        partial = (self.face_size < 4) | (self.face_vertices < 0).any(axis=1)
        labels[any_smooth] = SMOOTH
        labels[any_rough | (partial & ~any_smooth)] = ROUGH
        return labels


def qubit_set(lattice: LatticeGeometry, faces: Iterable[int] = ()) -> np.ndarray:
    out = np.zeros(lattice.n_faces, dtype=bool)
    out[list(faces)] = True
    return out


def check_set(lattice: LatticeGeometry, edges: Iterable[int] = ()) -> np.ndarray:
    out = np.zeros(lattice.n_edges, dtype=bool)
    out[list(edges)] = True
    return out


def boundary_map(lattice: LatticeGeometry, error: np.ndarray) -> np.ndarray:
    """Syndrome of a face set: each face contributes its edges, summed mod 2.

    Accepts a single QubitSet of shape (F,) or a batch of shape (B, F).
    """
    error = np.asarray(error)
    if error.shape[-1] != lattice.n_faces:
        raise LatticeError(f"error width {error.shape[-1]} does not match |F|={lattice.n_faces}")
    counts = lattice.boundary.T @ error.T.astype(np.int32)
    return (np.asarray(counts).T & 1).astype(bool)
