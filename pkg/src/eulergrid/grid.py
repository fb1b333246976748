"""Binary occupancy grids in 2D and 3D.

A :class:`BinaryGrid` stores one cell per pixel/voxel, row-major with the
last index varying fastest. Grids are immutable values: every operation
returns a new grid, so instances can be shared freely across threads.
"""

from __future__ import annotations

from enum import Enum

import numpy as np

from .errors import DimensionalityError, InvalidDimensionsError

# Guards against accidentally allocating absurd volumes, not a hard
# architectural limit.
MAX_CELLS = 1 << 34


class Connectivity(Enum):
    """Adjacency conventions for component counting.

    Foreground and background tags come in dual pairs (8 with 4, 26 with 6);
    the cubical-complex construction in :mod:`eulergrid.cubical` fixes
    foreground connectivity to 8 (2D) / 26 (3D).
    """

    FG2D_8 = "fg2d-8"
    BG2D_4 = "bg2d-4"
    FG3D_26 = "fg3d-26"
    BG3D_6 = "bg3d-6"

    @property
    def ndim(self) -> int:
        return 2 if self in (Connectivity.FG2D_8, Connectivity.BG2D_4) else 3

    @property
    def dual(self) -> "Connectivity":
        return _DUALS[self]

    @property
    def structure(self) -> np.ndarray:
        """Neighbourhood footprint usable with ``scipy.ndimage.label``."""
        if self is Connectivity.FG2D_8:
            return np.ones((3, 3), dtype=bool)
        if self is Connectivity.BG2D_4:
            s = np.zeros((3, 3), dtype=bool)
            s[1, :] = s[:, 1] = True
            return s
        if self is Connectivity.FG3D_26:
            return np.ones((3, 3, 3), dtype=bool)
        s = np.zeros((3, 3, 3), dtype=bool)
        s[1, 1, :] = s[1, :, 1] = s[:, 1, 1] = True
        return s


_DUALS = {
    Connectivity.FG2D_8: Connectivity.BG2D_4,
    Connectivity.BG2D_4: Connectivity.FG2D_8,
    Connectivity.FG3D_26: Connectivity.BG3D_6,
    Connectivity.BG3D_6: Connectivity.FG3D_26,
}


class BinaryGrid:
    """An immutable 2D or 3D binary grid.

    ``cells`` is a read-only uint8 array of 0/1 values with shape ``dims``,
    row-major (C order, last index fastest).
    """

    __slots__ = ("cells",)

    def __init__(self, cells: np.ndarray):
        src = np.asarray(cells)
        if src.ndim not in (2, 3):
            raise DimensionalityError(f"grids must be 2D or 3D, got ndim={src.ndim}")
        if any(e < 1 for e in src.shape):
            raise InvalidDimensionsError(f"all extents must be >= 1, got {src.shape}")
        if src.size > MAX_CELLS:
            raise InvalidDimensionsError(f"grid of {src.size} cells exceeds capacity")
        # != 0 before the dtype cast so float values below 1 are not truncated
        # away; the copy also keeps the caller's array untouched.
        arr = np.ascontiguousarray((src != 0).astype(np.uint8))
        arr.setflags(write=False)
        self.cells = arr

    @property
    def ndim(self) -> int:
        return self.cells.ndim

    @property
    def dims(self) -> tuple[int, ...]:
        return self.cells.shape

    def count(self) -> int:
        """Number of foreground cells."""
        return int(self.cells.sum())

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, BinaryGrid)
            and self.dims == other.dims
            and bool(np.array_equal(self.cells, other.cells))
        )

    def __hash__(self):
        return hash((self.dims, self.cells.tobytes()))

    def __repr__(self):
        return f"BinaryGrid(dims={self.dims}, fg={self.count()})"


def make_grid(ndim: int, dims: tuple[int, ...], fill: int = 0) -> BinaryGrid:
    """Create a grid of shape ``dims`` with every cell set to ``fill``."""
    if ndim not in (2, 3):
        raise DimensionalityError(f"ndim must be 2 or 3, got {ndim}")
    if len(dims) != ndim:
        raise InvalidDimensionsError(f"expected {ndim} extents, got {dims}")
    if any(int(e) < 1 for e in dims):
        raise InvalidDimensionsError(f"all extents must be >= 1, got {dims}")
    cells = 1
    for e in dims:
        cells *= int(e)
    if cells > MAX_CELLS:
        raise InvalidDimensionsError(f"grid of {cells} cells exceeds capacity")
    if fill not in (0, 1):
        raise ValueError(f"fill must be 0 or 1, got {fill}")
    return BinaryGrid(np.full(dims, fill, dtype=np.uint8))


def from_array(values: np.ndarray) -> BinaryGrid:
    """Wrap an array; any nonzero value counts as foreground."""
    return BinaryGrid(np.asarray(values) != 0)


def from_probabilities(values: np.ndarray, threshold: float = 0.5) -> BinaryGrid:
    """Binarize a probability map: foreground where value >= ``threshold``."""
    return BinaryGrid(np.asarray(values, dtype=np.float64) >= threshold)


def _check_index(grid: BinaryGrid, index: tuple[int, ...]) -> tuple[int, ...]:
    idx = tuple(int(i) for i in index)
    if len(idx) != grid.ndim:
        raise IndexError(f"index {idx} has wrong arity for dims {grid.dims}")
    for i, e in zip(idx, grid.dims):
        if not 0 <= i < e:
            raise IndexError(f"index {idx} out of range for dims {grid.dims}")
    return idx


def flip_cell(grid: BinaryGrid, index: tuple[int, ...]) -> BinaryGrid:
    """Return a copy of ``grid`` with exactly one cell inverted."""
    idx = _check_index(grid, index)
    cells = grid.cells.copy()
    cells[idx] ^= 1
    return BinaryGrid(cells)


def complement(grid: BinaryGrid) -> BinaryGrid:
    """Invert every cell; an involution."""
    return BinaryGrid(1 - grid.cells)


def pad_background(grid: BinaryGrid, margin: int) -> BinaryGrid:
    """Grow every extent by ``2 * margin`` background cells."""
    if margin < 0:
        raise ValueError(f"margin must be >= 0, got {margin}")
    if margin == 0:
        return grid
    return BinaryGrid(np.pad(grid.cells, margin, constant_values=0))
