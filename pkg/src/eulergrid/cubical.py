"""Ground-truth Euler characteristic by explicit cubical-complex counting.

Every foreground pixel/voxel contributes its closed unit square/cube: the
cell itself plus all faces, edges and vertices, with shared cells counted
once. Under this construction foreground cells touching at a vertex or an
edge belong to the same complex, i.e. foreground connectivity is 8 in 2D
and 26 in 3D. This module is the correctness oracle for the fast
pattern-counting paths, so it deliberately shares no code with them.

A k-cell is present exactly when at least one incident grid cell is
foreground, so the distinct-cell counts are computed on dense boolean
lattices by OR-ing shifted copies of the occupancy array.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grid import BinaryGrid


@dataclass(frozen=True)
class CellCounts:
    """Distinct k-cell counts of the complex; ``n3`` is 0 for 2D grids."""

    n0: int
    n1: int
    n2: int
    n3: int = 0

    @property
    def chi(self) -> int:
        return self.n0 - self.n1 + self.n2 - self.n3


def _any_incident(mask: np.ndarray, expand: tuple[int, ...]) -> np.ndarray:
    """OR of ``mask`` over the 0/1 shifts along each axis in ``expand``.

    A k-cell spanning axes S is flush with the grid along S and sits between
    two grid cells along every other axis, so its lattice has extent+1 along
    the axes in ``expand`` (= complement of S) and it is present iff any of
    the 2**len(expand) touching grid cells is foreground.
    """
    pad = tuple((1, 1) if ax in expand else (0, 0) for ax in range(mask.ndim))
    padded = np.pad(mask, pad, constant_values=False)
    out = None
    for shift in np.ndindex(*(2 if ax in expand else 1 for ax in range(mask.ndim))):
        sl = tuple(
            slice(s, s + padded.shape[ax] - 1) if ax in expand else slice(None)
            for ax, s in enumerate(shift)
        )
        view = padded[sl]
        out = view.copy() if out is None else np.logical_or(out, view, out=out)
    return out


def cell_counts(grid: BinaryGrid) -> CellCounts:
    """Count the distinct vertices, edges, faces (and cubes) of the complex."""
    mask = grid.cells.astype(bool)
    nd = grid.ndim
    axes = tuple(range(nd))

    # Vertices expand along every axis, an edge along axis ``ax`` expands
    # along the remaining axes, a face only along its normal, a cube never.
    n0 = int(_any_incident(mask, axes).sum())
    n1 = sum(
        int(_any_incident(mask, tuple(a for a in axes if a != ax)).sum())
        for ax in axes
    )
    if nd == 2:
        return CellCounts(n0=n0, n1=n1, n2=int(mask.sum()), n3=0)
    n2 = sum(int(_any_incident(mask, (ax,)).sum()) for ax in axes)
    return CellCounts(n0=n0, n1=n1, n2=n2, n3=int(mask.sum()))


def chi_exact(grid: BinaryGrid) -> int:
    """Euler characteristic as the alternating sum of cell counts."""
    return cell_counts(grid).chi
