"""Line-oriented text export of a lattice.

    H <family> <L> <period|-> <rough sides> <smooth sides>
    V <index> <x> <y> <z> <kind> <sides> <label>
    E <index> <tail> <head> <dx> <dy> <dz> <class>
    F <index> <kx> <ky> <kz> <axis> ; <vertex cycle> ; <edges> ; <offsets>
    C <index> <kx> <ky> <kz> ; <faces>
    T <index> ; <faces>

Coordinates are the doubled integers used internally. Lines starting with
``#`` are comments.
"""
import logging
from typing import IO

import numpy as np

from sweepdecoder.errors import LatticeError
from sweepdecoder.lattice.geometry import LABEL_NAMES, LatticeGeometry

logger = logging.getLogger(__name__)


def _ints(text):
    return [int(t) for t in text.split()]


def export_lattice(lattice: LatticeGeometry, stream: IO[str]):
    period = "-" if lattice.period is None else str(lattice.period)
    stream.write(f"# {lattice!r}\n")
    stream.write(f"H {lattice.family} {lattice.L} {period} "
                 f"{lattice.rough_sides} {lattice.smooth_sides}\n")
    for i, coord in enumerate(lattice.coords):
        stream.write("V {} {} {} {} {} {} {}\n".format(
            i, *coord, lattice.vertex_kind[i], lattice.vertex_sides[i],
            LABEL_NAMES[int(lattice.vertex_label[i])]))
    for i, (tail, head) in enumerate(lattice.edges):
        stream.write("E {} {} {} {} {} {} {}\n".format(
            i, tail, head, *lattice.edge_vectors[i], lattice.edge_class[i]))
    for i, (corner, axis) in enumerate(lattice.face_keys):
        verts = lattice.face_vertex_list(i)
        offsets = lattice.face_offsets[i, :len(verts)].ravel()
        stream.write("F {} {} {} {} {} ; {} ; {} ; {}\n".format(
            i, *corner, axis, " ".join(map(str, verts)),
            " ".join(map(str, lattice.face_edge_list(i))), " ".join(map(str, offsets))))
    for i, key in enumerate(lattice.cell_keys):
        faces = [int(f) for f in lattice.cells[i] if f >= 0]
        stream.write("C {} {} {} {} ; {}\n".format(i, *key, " ".join(map(str, faces))))
    for i, faces in enumerate(lattice.truncated_cells):
        stream.write("T {} ; {}\n".format(i, " ".join(map(str, faces))))


def load_lattice(stream: IO[str]) -> LatticeGeometry:
    header = None
    vertices, edges, faces, cells, truncated = [], [], [], [], []
    for lineno, line in enumerate(stream, start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        tag, _, rest = line.partition(" ")
        try:
            if tag == "H":
                family, L, period, rough, smooth = rest.split()
                header = (family, int(L), None if period == "-" else int(period),
                          int(rough), int(smooth))
            elif tag == "V":
                fields = rest.split()
                vertices.append([int(f) for f in fields[:6]])
            elif tag == "E":
                edges.append(_ints(rest))
            elif tag == "F":
                head, verts, face_edges, offsets = rest.split(";")
                head = _ints(head)
                faces.append((tuple(head[1:4]), head[4], _ints(verts), _ints(face_edges),
                              _ints(offsets)))
            elif tag == "C":
                head, members = rest.split(";")
                cells.append((tuple(_ints(head)[1:4]), _ints(members)))
            elif tag == "T":
                truncated.append(_ints(rest.split(";")[1]))
            else:
                raise ValueError(f"unknown record {tag!r}")
        except ValueError as e:
            raise LatticeError(f"line {lineno}: {e}") from e
    if header is None:
        raise LatticeError("lattice export has no header line")

    family, L, period, rough, smooth = header
    vertices = np.array(vertices, dtype=np.int64).reshape(-1, 6)
    edges = np.array(edges, dtype=np.int64).reshape(-1, 7)
    face_vertices = np.full((len(faces), 4), -1, dtype=np.int64)
    face_offsets = np.zeros((len(faces), 4, 3), dtype=np.int64)
    face_edges = np.full((len(faces), 4), -1, dtype=np.int64)
    for i, (_, _, verts, members, offsets) in enumerate(faces):
        face_vertices[i, :len(verts)] = verts
        face_offsets[i, :len(verts)] = np.reshape(offsets, (-1, 3))
        face_edges[i, :len(members)] = members
    width = max((len(m) for _, m in cells), default=0)
    cell_array = np.full((len(cells), width), -1, dtype=np.int64)
    for i, (_, members) in enumerate(cells):
        cell_array[i, :len(members)] = members

    lattice = LatticeGeometry(
        family=family, L=L, period=period,
        coords=vertices[:, 1:4].copy(), vertex_kind=vertices[:, 4].astype(np.int8),
        vertex_sides=vertices[:, 5].astype(np.uint8),
        edges=edges[:, 1:3].copy(), edge_vectors=edges[:, 3:6].copy(),
        edge_class=edges[:, 6].astype(np.int8),
        face_vertices=face_vertices, face_offsets=face_offsets, face_edges=face_edges,
        cells=cell_array, rough_sides=rough, smooth_sides=smooth,
        face_keys=[(corner, axis) for corner, axis, _, _, _ in faces],
        cell_keys=[key for key, _ in cells], truncated_cells=truncated,
    )
    logger.info("loaded %r", lattice)
    return lattice
