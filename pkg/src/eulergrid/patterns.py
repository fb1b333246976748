"""Fast Euler characteristics via 2x2 / 2x2x2 pattern counting.

Every window of the background-padded grid is reduced to a pattern code:
the window bits read in row-major order, first-read cell most significant
(so a 2D window [[a, b], [c, d]] has code ``8a + 4b + 2c + d``). Window
positions form the *pattern lattice* with extents ``(h+1, w+1[, d+1])``.
chi is a lookup-table dot product over the code histogram; the equivalent
convolution-and-match formulation is replaced by exact integer code
matching, which is branch-free and O(1) per window.

chi accounting is kept in integers scaled by 4 (2D) or 8 (3D); division by
the scale is deferred to the exposed values and checked exact. All scaled
values are dyadic rationals, so float64 exposure is still exact.

2D weights are fixed (Gray's bit-quad groups, defined semantically: one
foreground cell +1, three foreground cells -1, the two diagonal pairs -2).
3D weights come from a :class:`CoefficientVector`, normally produced by the
exact solver in :mod:`eulergrid.calibration`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

from . import _kernels
from .errors import ConsistencyError, DimensionalityError
from .grid import BinaryGrid

N_CLASSES = 22
SCALE_2D = 4
SCALE_3D = 8


def _quad_weight_table() -> np.ndarray:
    """Per-code chi contributions scaled by 4."""
    lut = np.zeros(16, dtype=np.int64)
    for code in range(16):
        pop = bin(code).count("1")
        if pop == 1:
            lut[code] = 1
        elif pop == 3:
            lut[code] = -1
    lut[0b1001] = -2  # main diagonal
    lut[0b0110] = -2  # anti diagonal
    return lut


QUAD_WEIGHTS_X4 = _quad_weight_table()
QUAD_WEIGHTS_X4.setflags(write=False)


@dataclass(frozen=True, eq=False)
class PatternHistogram:
    """Counts of window pattern codes: 16 codes in 2D, 256 in 3D."""

    ndim: int
    counts: np.ndarray

    @property
    def total(self) -> int:
        return int(self.counts.sum())


@dataclass(frozen=True, eq=False)
class CoefficientVector:
    """Per-symmetry-class chi weights for 2x2x2 patterns.

    ``weights`` holds one exact rational per class id; ``class_of`` maps each
    of the 256 codes to its class. Weights must be eighths so the scaled
    integer accounting stays exact.
    """

    weights: tuple[Fraction, ...]
    class_of: np.ndarray
    code_weights_x8: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if len(self.weights) != N_CLASSES:
            raise ValueError(f"expected {N_CLASSES} weights, got {len(self.weights)}")
        if self.class_of.shape != (256,):
            raise ValueError("class_of must map all 256 codes")
        scaled = []
        for w in self.weights:
            s = w * SCALE_3D
            if s.denominator != 1:
                raise ValueError(f"coefficient {w} is not a multiple of 1/8")
            scaled.append(int(s))
        lut = np.array(scaled, dtype=np.int64)[self.class_of]
        lut.setflags(write=False)
        object.__setattr__(self, "code_weights_x8", lut)

    def nonzero_classes(self) -> list[int]:
        return [i for i, w in enumerate(self.weights) if w != 0]


def _pad1(cells: np.ndarray) -> np.ndarray:
    # np.pad costs tens of microseconds on small grids; a zeros+assign is
    # cheap enough to keep the per-call overhead linear-friendly.
    out = np.zeros(tuple(e + 2 for e in cells.shape), dtype=np.uint8)
    out[(slice(1, -1),) * cells.ndim] = cells
    return out


def _codes_2d(cells: np.ndarray) -> np.ndarray:
    """Pattern codes on the (h+1, w+1) lattice of the margin-1 padded grid.

    Built by pairing along the last axis first, so each window's bits
    combine as code = 8*c00 + 4*c01 + 2*c10 + c11.
    """
    p = _pad1(cells)
    pairs = (p[:, :-1] << 1) | p[:, 1:]
    return (pairs[:-1] << 2) | pairs[1:]


def _codes_3d(cells: np.ndarray) -> np.ndarray:
    p = _pad1(cells)
    z = (p[:, :, :-1] << 1) | p[:, :, 1:]
    zy = (z[:, :-1, :] << 2) | z[:, 1:, :]
    return (zy[:-1] << 4) | zy[1:]


def pattern_codes(grid: BinaryGrid) -> np.ndarray:
    """Window codes over the pattern lattice (uint8 array)."""
    if grid.ndim == 2:
        return _codes_2d(grid.cells)
    return _codes_3d(grid.cells)


def quad_histogram(grid: BinaryGrid) -> PatternHistogram:
    """Occurrences of every 2x2 pattern; counts sum to (h+1)(w+1)."""
    if grid.ndim != 2:
        raise DimensionalityError("quad_histogram requires a 2D grid")
    counts = np.bincount(_codes_2d(grid.cells).ravel(), minlength=16)
    return PatternHistogram(ndim=2, counts=counts.astype(np.int64))


def octet_histogram(grid: BinaryGrid) -> PatternHistogram:
    """Occurrences of every 2x2x2 pattern; counts sum to (h+1)(w+1)(d+1)."""
    if grid.ndim != 3:
        raise DimensionalityError("octet_histogram requires a 3D grid")
    counts = np.bincount(_codes_3d(grid.cells).ravel(), minlength=256)
    return PatternHistogram(ndim=3, counts=counts.astype(np.int64))


def _exact_quarter(scaled: int, scale: int, what: str) -> int:
    if scaled % scale:
        raise ConsistencyError(f"{what} is not an exact integer: {scaled}/{scale}")
    return scaled // scale


def chi_gray(grid: BinaryGrid) -> int:
    """2D Euler characteristic from weighted bit-quad occurrences."""
    if grid.ndim != 2:
        raise DimensionalityError("chi_gray requires a 2D grid")
    scaled = int(_kernels.window_weight_sum_2d(_pad1(grid.cells), QUAD_WEIGHTS_X4))
    return _exact_quarter(scaled, SCALE_2D, "chi")


def chi_octet(grid: BinaryGrid, coeffs: CoefficientVector) -> int:
    """3D Euler characteristic from weighted bit-octet occurrences."""
    if grid.ndim != 3:
        raise DimensionalityError("chi_octet requires a 3D grid")
    scaled = int(
        _kernels.window_weight_sum_3d(_pad1(grid.cells), coeffs.code_weights_x8)
    )
    return _exact_quarter(scaled, SCALE_3D, "chi")


@lru_cache(maxsize=1)
def default_coefficients() -> CoefficientVector:
    """Solved 3D coefficients, derived once per process and cached."""
    from . import calibration

    return calibration.solve_coefficients(
        calibration.sample_volumes(64, extent=7, seed=0x0E5)
    ).coefficients


def chi(grid: BinaryGrid) -> int:
    """Euler characteristic via the fast path for either dimensionality."""
    if grid.ndim == 2:
        return chi_gray(grid)
    return chi_octet(grid, default_coefficients())


def _weight_map(grid: BinaryGrid, coeffs: CoefficientVector | None):
    """Scaled per-window weights over the pattern lattice, plus the scale."""
    if grid.ndim == 2:
        return _kernels.weight_lattice_2d(_pad1(grid.cells), QUAD_WEIGHTS_X4), SCALE_2D
    if coeffs is None:
        coeffs = default_coefficients()
    return (
        _kernels.weight_lattice_3d(_pad1(grid.cells), coeffs.code_weights_x8),
        SCALE_3D,
    )


@dataclass(frozen=True, eq=False)
class ChiMap:
    """Patch-local chi values on the pattern lattice.

    ``values`` holds the scaled integers (scale 4 in 2D, 8 in 3D). In tiled
    mode (stride == patch) the cells partition the lattice, the last tile
    per axis possibly partial, and the cell values sum to the global scaled
    chi. In dense mode (stride 1) each lattice position holds the sum over
    the patch-sized window anchored there, windows past the far edge
    counting zero, so the output extents equal the lattice extents.
    """

    values: np.ndarray
    scale: int
    patch: int
    stride: int
    mode: str

    @property
    def dims(self) -> tuple[int, ...]:
        return self.values.shape

    def exact(self) -> np.ndarray:
        """Cell values divided by the scale; exact because dyadic."""
        return self.values / self.scale

    def chi_total(self) -> int:
        """Global chi recovered from a tiled map."""
        if self.mode != "tiled":
            raise ValueError("chi_total is only defined for tiled maps")
        return _exact_quarter(int(self.values.sum()), self.scale, "chi")

    def compatible_with(self, other: "ChiMap") -> bool:
        return (
            self.dims == other.dims
            and self.scale == other.scale
            and self.patch == other.patch
            and self.stride == other.stride
            and self.mode == other.mode
        )


def _tile_sums(weights: np.ndarray, patch: int) -> np.ndarray:
    """Sum over a partition into patch-sized tiles, edge tiles partial."""
    w = weights.astype(np.int64, copy=False)
    pads = tuple((-e) % patch for e in w.shape)
    if any(pads):
        padded = np.zeros(tuple(e + p for e, p in zip(w.shape, pads)), dtype=np.int64)
        padded[tuple(slice(0, e) for e in w.shape)] = w
        w = padded
    if w.ndim == 2:
        h, wd = w.shape
        return w.reshape(h // patch, patch, wd // patch, patch).sum(axis=(1, 3))
    h, wd, d = w.shape
    return w.reshape(
        h // patch, patch, wd // patch, patch, d // patch, patch
    ).sum(axis=(1, 3, 5))


def _box_sums(weights: np.ndarray, patch: int) -> np.ndarray:
    """Sliding sums over [p, p+patch) per axis, zero beyond the far edge."""
    out = weights.astype(np.int64)
    for ax in range(out.ndim):
        n = out.shape[ax]
        csum = np.concatenate(
            [np.zeros_like(out.take([0], axis=ax)), np.cumsum(out, axis=ax)], axis=ax
        )
        hi = np.minimum(np.arange(n) + patch, n)
        out = csum.take(hi, axis=ax) - csum.take(np.arange(n), axis=ax)
    return out


def chi_map(
    grid: BinaryGrid,
    patch: int = 32,
    stride: int | None = None,
    mode: str = "tiled",
    coeffs: CoefficientVector | None = None,
) -> ChiMap:
    """Patch-local chi map over the pattern lattice."""
    if patch < 1:
        raise ValueError(f"patch must be >= 1, got {patch}")
    if mode == "tiled":
        if stride is None:
            stride = patch
        if stride != patch:
            raise ValueError(f"tiled mode requires stride == patch, got {stride}")
    elif mode == "dense":
        if stride is None:
            stride = 1
        if stride != 1:
            raise ValueError(f"dense mode requires stride == 1, got {stride}")
    else:
        raise ValueError(f"mode must be 'tiled' or 'dense', got {mode!r}")

    if mode == "tiled":
        # Fused kernel: accumulates straight into the tile grid without
        # materializing the per-window weight lattice.
        scale = SCALE_2D if grid.ndim == 2 else SCALE_3D
        padded = _pad1(grid.cells)
        if grid.ndim == 2:
            values = _kernels.tile_weight_sums_2d(padded, QUAD_WEIGHTS_X4, patch)
        else:
            if coeffs is None:
                coeffs = default_coefficients()
            values = _kernels.tile_weight_sums_3d(
                padded, coeffs.code_weights_x8, patch
            )
    else:
        weights, scale = _weight_map(grid, coeffs)
        values = _box_sums(weights, patch)
    return ChiMap(values=values, scale=scale, patch=patch, stride=stride, mode=mode)


def _local_window_block(grid: BinaryGrid, index: tuple[int, ...]) -> np.ndarray:
    """The 3**ndim padded-cell neighbourhood whose windows contain ``index``."""
    block = np.zeros((3,) * grid.ndim, dtype=np.uint8)
    src = []
    dst = []
    for i, e in zip(index, grid.dims):
        lo, hi = i - 1, i + 2
        src.append(slice(max(lo, 0), min(hi, e)))
        dst.append(slice(max(lo, 0) - lo, 3 - (hi - min(hi, e))))
    block[tuple(dst)] = grid.cells[tuple(src)]
    return block


def _window_code(block: np.ndarray, origin: tuple[int, ...]) -> int:
    code = 0
    nd = block.ndim
    for bit, off in enumerate(np.ndindex(*(2,) * nd)):
        cell = tuple(o + d for o, d in zip(origin, off))
        code |= int(block[cell]) << ((1 << nd) - 1 - bit)
    return code


def flip_window_deltas(
    grid: BinaryGrid,
    index: tuple[int, ...],
    coeffs: CoefficientVector | None = None,
) -> tuple[list[tuple[tuple[int, ...], int]], int]:
    """Scaled weight change of each window containing ``index`` when flipped.

    Returns ``([(lattice_position, delta_scaled), ...], scale)``. A cell is
    contained in exactly 2**ndim windows, none of which fall outside the
    padded lattice.
    """
    nd = grid.ndim
    if len(index) != nd:
        raise IndexError(f"index {index} has wrong arity for dims {grid.dims}")
    for i, e in zip(index, grid.dims):
        if not 0 <= i < e:
            raise IndexError(f"index {index} out of range for dims {grid.dims}")
    if nd == 2:
        lut, scale = QUAD_WEIGHTS_X4, SCALE_2D
    else:
        if coeffs is None:
            coeffs = default_coefficients()
        lut, scale = coeffs.code_weights_x8, SCALE_3D

    block = _local_window_block(grid, index)
    deltas = []
    for origin in np.ndindex(*(2,) * nd):
        code = _window_code(block, origin)
        # The flipped cell sits at block position (1,..); its offset within
        # this window is 1 - origin per axis.
        bit = 0
        for k, o in enumerate(origin):
            bit = bit * 2 + (1 - o)
        mask = 1 << ((1 << nd) - 1 - bit)
        lattice_pos = tuple(i + o for i, o in zip(index, origin))
        deltas.append((lattice_pos, int(lut[code ^ mask]) - int(lut[code])))
    return deltas, scale


def flip_delta_chi(
    grid: BinaryGrid,
    index: tuple[int, ...],
    coeffs: CoefficientVector | None = None,
) -> int:
    """chi(flip_cell(grid, index)) - chi(grid), from the affected windows only."""
    deltas, scale = flip_window_deltas(grid, index, coeffs)
    scaled = sum(d for _, d in deltas)
    return _exact_quarter(scaled, scale, "chi delta")
