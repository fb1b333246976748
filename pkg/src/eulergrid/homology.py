"""Betti numbers and the segmentation metrics built on them.

beta0 is counted directly (8-connectivity in 2D, 26 in 3D, matching the
cubical-complex convention). The hole count comes from the Euler identity
beta0 - beta1 (+ beta2) = chi rather than cycle detection, which is exact
and also exercises the fast chi path. Enclosed cavities (and, as a 2D
cross-check, holes) are counted as bounded components of the background
under the dual connectivity: pad by one background cell and discard the
single component that touches the pad.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from scipy import ndimage

from .errors import ConsistencyError, DimensionalityError
from .grid import BinaryGrid, Connectivity, complement, pad_background
from .patterns import chi


@dataclass(frozen=True)
class BettiVector:
    """(beta0, beta1) for 2D grids, (beta0, beta1, beta2) for 3D."""

    betti: tuple[int, ...]

    @property
    def ndim(self) -> int:
        return len(self.betti)

    @property
    def chi(self) -> int:
        b = self.betti
        return b[0] - b[1] + (b[2] if len(b) == 3 else 0)

    def __iter__(self):
        return iter(self.betti)


def component_count(grid: BinaryGrid, connectivity: Connectivity) -> int:
    """Number of connected components of the set cells under the adjacency."""
    if connectivity.ndim != grid.ndim:
        raise DimensionalityError(
            f"{connectivity} does not apply to a {grid.ndim}D grid"
        )
    _, n = ndimage.label(grid.cells, structure=connectivity.structure)
    return int(n)


def bounded_background_components(grid: BinaryGrid) -> int:
    """Background components that do not reach the grid border.

    Counted under the dual connectivity (4 in 2D, 6 in 3D) on the complement
    of the margin-1 padded grid; the pad ring itself is connected, so the
    unbounded exterior is exactly one component.
    """
    conn = Connectivity.BG2D_4 if grid.ndim == 2 else Connectivity.BG3D_6
    bg = complement(pad_background(grid, 1))
    labels, n = ndimage.label(bg.cells, structure=conn.structure)
    if n == 0:
        # Complement empty means the padded grid was all foreground, which
        # cannot happen with a real pad; guard anyway.
        return 0
    return int(n - 1)


def betti_2d(grid: BinaryGrid) -> BettiVector:
    """(components, holes) of a 2D grid."""
    if grid.ndim != 2:
        raise DimensionalityError("betti_2d requires a 2D grid")
    b0 = component_count(grid, Connectivity.FG2D_8)
    b1 = b0 - chi(grid)
    if b1 < 0:
        raise ConsistencyError(f"negative beta1={b1} from the Euler identity")
    return BettiVector(betti=(b0, b1))


def betti_3d(grid: BinaryGrid) -> BettiVector:
    """(components, tunnels, cavities) of a 3D grid."""
    if grid.ndim != 3:
        raise DimensionalityError("betti_3d requires a 3D grid")
    b0 = component_count(grid, Connectivity.FG3D_26)
    b2 = bounded_background_components(grid)
    b1 = b0 + b2 - chi(grid)
    if b1 < 0:
        raise ConsistencyError(f"negative beta1={b1} from the Euler identity")
    return BettiVector(betti=(b0, b1, b2))


def betti(grid: BinaryGrid) -> BettiVector:
    return betti_2d(grid) if grid.ndim == 2 else betti_3d(grid)


@dataclass(frozen=True)
class BettiError:
    """Per-dimension L1 distances between two Betti vectors.

    Both aggregations are exposed because both are in use: the mean over
    dimensions and the plain sum.
    """

    per_dim: tuple[int, ...]

    @property
    def sum(self) -> int:
        return sum(self.per_dim)

    @property
    def mean(self) -> Fraction:
        return Fraction(self.sum, len(self.per_dim))


def betti_error(a: BettiVector, b: BettiVector) -> BettiError:
    if a.ndim != b.ndim:
        raise DimensionalityError(
            f"Betti vectors of different dimensionality: {a.ndim} vs {b.ndim}"
        )
    return BettiError(per_dim=tuple(abs(x - y) for x, y in zip(a, b)))


def dice(a: BinaryGrid, b: BinaryGrid) -> Fraction:
    """Overlap score 2|A&B| / (|A| + |B|); two empty grids score 1."""
    if a.dims != b.dims:
        raise DimensionalityError(f"shape mismatch: {a.dims} vs {b.dims}")
    total = a.count() + b.count()
    if total == 0:
        return Fraction(1)
    inter = int((a.cells & b.cells).sum())
    return Fraction(2 * inter, total)
