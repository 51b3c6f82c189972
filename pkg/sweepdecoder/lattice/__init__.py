from functools import lru_cache

from sweepdecoder.errors import LatticeError
from sweepdecoder.lattice.cubic import build_cubic_open, build_cubic_periodic
from sweepdecoder.lattice.export import export_lattice, load_lattice
from sweepdecoder.lattice.geometry import (
    BULK, CENTER, CORNER, CUBIC_OPEN, CUBIC_PERIODIC, FAMILIES, LABEL_NAMES, RHOMBIC_OPEN,
    RHOMBIC_PERIODIC, ROUGH, SIDE_BITS, SIDE_NAMES, SIDE_NORMALS, SMOOTH, LatticeGeometry,
    boundary_map, check_set, qubit_set,
)
from sweepdecoder.lattice.gf2 import gf2_in_span, gf2_rank
from sweepdecoder.lattice.logicals import (
    logical_qubit_count, logical_representatives, stabilizer_cells, verify_logicals,
)
from sweepdecoder.lattice.rhombic import build_rhombic_open, build_rhombic_periodic

BUILDERS = {
    RHOMBIC_PERIODIC: build_rhombic_periodic,
    RHOMBIC_OPEN: build_rhombic_open,
    CUBIC_PERIODIC: build_cubic_periodic,
    CUBIC_OPEN: build_cubic_open,
}


@lru_cache(maxsize=None)
def build_lattice(family: str, L: int) -> LatticeGeometry:
    """Build (once per process) the lattice of a family and linear size."""
    try:
        builder = BUILDERS[family]
    except KeyError:
        raise LatticeError(f"unknown lattice family {family!r}, expected one of {FAMILIES}")
    return builder(int(L))
