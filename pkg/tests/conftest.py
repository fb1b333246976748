"""Shared helpers: independent brute-force oracles and random grid factories.

These reimplement window scanning, box pooling and flip-remeasure with
plain Python loops so the fast vectorized paths are checked against code
that shares nothing with them.
"""

import numpy as np
import pytest

from eulergrid import BinaryGrid, chi_map, flip_cell

DENSITIES = (0.05, 0.2, 0.5, 0.8, 0.95)


def random_grid(rng, ndim, lo=1, hi=16, density=None):
    dims = tuple(int(d) for d in rng.integers(lo, hi + 1, size=ndim))
    if density is None:
        density = float(rng.choice(DENSITIES))
    return BinaryGrid(rng.random(dims) < density)


def brute_window_patterns(grid):
    """Every window of the margin-1 padded grid as a pattern tuple."""
    cells = np.pad(grid.cells, 1)
    nd = cells.ndim
    out = {}
    lattice = tuple(e - 1 for e in cells.shape)
    for pos in np.ndindex(*lattice):
        bits = tuple(
            int(cells[tuple(p + o for p, o in zip(pos, off))])
            for off in np.ndindex(*(2,) * nd)
        )
        out[pos] = bits
    return out


def brute_pattern_code(bits):
    code = 0
    for b in bits:
        code = code * 2 + b
    return code


def brute_histogram(grid):
    n = 16 if grid.ndim == 2 else 256
    counts = [0] * n
    for bits in brute_window_patterns(grid).values():
        counts[brute_pattern_code(bits)] += 1
    return counts


def brute_tile_value(window_weights, lattice, patch, tile):
    """Scaled chi of one tile by direct window enumeration."""
    total = 0
    for pos, w in window_weights.items():
        if all(p // patch == t for p, t in zip(pos, tile)):
            total += w
    return total


def brute_violation(pred, gt, patch, mode):
    """Flip every cell, rebuild both chi maps, re-measure the L1 error."""
    xg = chi_map(gt, patch=patch, mode=mode)
    xp = chi_map(pred, patch=patch, mode=mode)
    before = np.abs(xp.values - xg.values)
    out = np.zeros(pred.dims, dtype=np.int64)
    for cell in np.ndindex(*pred.dims):
        xf = chi_map(flip_cell(pred, cell), patch=patch, mode=mode)
        after = np.abs(xf.values - xg.values)
        out[cell] = int(np.maximum(before - after, 0).sum())
    return out


@pytest.fixture
def rng():
    return np.random.default_rng(0xE0C)


@pytest.fixture
def ring2d():
    return BinaryGrid(np.array([[1, 1, 1], [1, 0, 1], [1, 1, 1]], dtype=np.uint8))


@pytest.fixture
def hollow_shell():
    vol = np.ones((3, 3, 3), dtype=np.uint8)
    vol[1, 1, 1] = 0
    return BinaryGrid(vol)


@pytest.fixture
def voxel_ring():
    ring = np.array([[1, 1, 1], [1, 0, 1], [1, 1, 1]], dtype=np.uint8)
    return BinaryGrid(ring[:, :, None])
