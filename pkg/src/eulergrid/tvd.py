"""Topological violation detection and the masked-input construction.

The violation map assigns every cell the exact improvement of the L1
chi-map error achievable by flipping that cell alone: for each chi-map cell
p whose window contains a pattern touched by the flip,
``max(0, |X^_p - X_p| - |X^_p(after flip) - X_p|)`` is accumulated. The
definition is discrete on purpose: an autograd pass through the pattern
indicator has zero gradient almost everywhere, whereas the one-flip
sensitivity is well defined, nonnegative, exactly zero at agreement, and
testable against brute force. Values stay in the scaled-integer chi
accounting (x4 in 2D, x8 in 3D).

Masking replaces flagged cells with sigmoid-squashed unit Gaussians from a
pinned PRNG so the construction is reproducible bit for bit: a splitmix64
stream feeds uniforms u = ((z >> 11) + 0.5) * 2**-53 and Box-Muller
epsilon = sqrt(-2 ln u1) * cos(2 pi u2), one Gaussian per masked cell in
row-major order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionalityError
from .grid import BinaryGrid
from .patterns import (
    ChiMap,
    CoefficientVector,
    _tile_sums,
    _weight_map,
    chi_map,
    flip_window_deltas,
    pattern_codes,
)

_MASK64 = (1 << 64) - 1
_SPLITMIX_GAMMA = 0x9E3779B97F4A7C15
_SPLITMIX_M1 = 0xBF58476D1CE4E5B9
_SPLITMIX_M2 = 0x94D049BB133111EB


class SplitMix64:
    """The pinned PRNG: splitmix64 with the standard finalizer constants."""

    def __init__(self, seed: int):
        self.state = seed & _MASK64

    def next_u64(self) -> int:
        self.state = (self.state + _SPLITMIX_GAMMA) & _MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * _SPLITMIX_M1) & _MASK64
        z = ((z ^ (z >> 27)) * _SPLITMIX_M2) & _MASK64
        return z ^ (z >> 31)

    def next_uniform(self) -> float:
        """Uniform on the open interval (0, 1)."""
        return ((self.next_u64() >> 11) + 0.5) * 2.0**-53

    def next_gaussian(self) -> float:
        """One standard normal via the cosine branch of Box-Muller."""
        u1 = self.next_uniform()
        u2 = self.next_uniform()
        return math.sqrt(-2.0 * math.log(u1)) * math.cos(2.0 * math.pi * u2)


@dataclass(frozen=True, eq=False)
class ViolationMap:
    """Per-cell achievable reduction of the scaled chi error."""

    values: np.ndarray
    scale: int
    patch: int
    mode: str

    @property
    def dims(self) -> tuple[int, ...]:
        return self.values.shape

    def exact(self) -> np.ndarray:
        """Values divided by the scale; exact because dyadic."""
        return self.values / self.scale

    def max_exact(self) -> float:
        return float(self.values.max()) / self.scale


@dataclass(frozen=True, eq=False)
class MaskedGrid:
    """A prediction with flagged cells replaced by squashed noise.

    Unmasked cells keep the exact binary prediction value; masked cells lie
    strictly inside (0, 1).
    """

    values: np.ndarray
    mask: np.ndarray

    @property
    def dims(self) -> tuple[int, ...]:
        return self.values.shape


def chi_error(x: ChiMap, y: ChiMap) -> int:
    """L1 distance between two chi maps, in scaled integer units."""
    if not x.compatible_with(y):
        raise ValueError(
            "incompatible map parameters: "
            f"{x.dims}/{x.patch}/{x.stride}/{x.mode}/x{x.scale} vs "
            f"{y.dims}/{y.patch}/{y.stride}/{y.mode}/x{y.scale}"
        )
    return int(np.abs(x.values - y.values).sum())


def _rank(offset: tuple[int, ...]) -> int:
    r = 0
    for o in offset:
        r = r * 2 + o
    return r


def _violation_tiled(pred, gt, patch, coeffs):
    nd = pred.ndim
    dims = pred.dims
    codes = pattern_codes(pred)
    w_pred, scale = _weight_map(pred, coeffs)
    w_gt, _ = _weight_map(gt, coeffs)
    lut = _lut_for(pred, coeffs)

    xp = _tile_sums(w_pred, patch)
    xg = _tile_sums(w_gt, patch)
    base = np.abs(xp - xg)
    xp_f, xg_f, base_f = xp.ravel(), xg.ravel(), base.ravel()
    tile_shape = xp.shape

    # Window-weight change per window offset s: the flipped cell sits at
    # offset 1-s inside window (cell + s), i.e. code bit rank(s).
    deltas = {}
    for s in np.ndindex(*(2,) * nd):
        sl = tuple(slice(o, o + e) for o, e in zip(s, dims))
        c = codes[sl]
        deltas[s] = lut[c ^ np.uint8(1 << _rank(s))].astype(np.int64) - lut[c]

    # Per-axis tile coordinate of the low window and whether the two
    # windows containing the cell straddle a tile boundary on that axis.
    lo_tile = []
    split = []
    for k, e in enumerate(dims):
        idx = np.arange(e)
        shape = [1] * nd
        shape[k] = e
        lo = (idx // patch).reshape(shape)
        hi = ((idx + 1) // patch).reshape(shape)
        lo_tile.append(lo)
        split.append(lo != hi)

    values = np.zeros(dims, dtype=np.int64)
    for c in np.ndindex(*(2,) * nd):
        # Candidate tile (cell+c)//patch; counted once by requiring c_k = 0
        # on axes without a split.
        gate = np.ones(dims, dtype=bool)
        for k in range(nd):
            if c[k] == 1:
                gate &= split[k]
        if not gate.any():
            continue
        delta = np.zeros(dims, dtype=np.int64)
        for s, d in deltas.items():
            keep = np.ones(dims, dtype=bool)
            for k in range(nd):
                if s[k] != c[k]:
                    # Off-tile on a split axis; included when not split.
                    keep &= ~split[k]
            delta += np.where(keep, d, 0)
        tflat = np.zeros(dims, dtype=np.int64)
        for k in range(nd):
            idx = np.arange(dims[k])
            shape = [1] * nd
            shape[k] = dims[k]
            tflat = tflat * tile_shape[k] + ((idx + c[k]) // patch).reshape(shape)
        improved = np.abs(xp_f[tflat] + delta - xg_f[tflat])
        gain = np.maximum(base_f[tflat] - improved, 0)
        values += np.where(gate, gain, 0)
    return values, scale


def _lut_for(grid, coeffs):
    from .patterns import QUAD_WEIGHTS_X4, default_coefficients

    if grid.ndim == 2:
        return QUAD_WEIGHTS_X4
    if coeffs is None:
        coeffs = default_coefficients()
    return coeffs.code_weights_x8


def _violation_dense(pred, gt, patch, coeffs):
    # Each window feeds up to patch**ndim dense cells, so this path walks
    # cells one by one; fine at test scale, tiled is the production mode.
    xp = chi_map(pred, patch=patch, mode="dense", coeffs=coeffs)
    xg = chi_map(gt, patch=patch, mode="dense", coeffs=coeffs)
    values = np.zeros(pred.dims, dtype=np.int64)
    for cell in np.ndindex(*pred.dims):
        per_window, scale = flip_window_deltas(pred, cell, coeffs)
        acc: dict[tuple[int, ...], int] = {}
        for q, d in per_window:
            if d == 0:
                continue
            ranges = [range(max(qk - patch + 1, 0), qk + 1) for qk in q]
            for p in np.ndindex(*(len(r) for r in ranges)):
                pos = tuple(r[i] for r, i in zip(ranges, p))
                acc[pos] = acc.get(pos, 0) + d
        gain = 0
        for pos, d in acc.items():
            before = abs(int(xp.values[pos]) - int(xg.values[pos]))
            after = abs(int(xp.values[pos]) + d - int(xg.values[pos]))
            gain += max(0, before - after)
        values[cell] = gain
    return values, xp.scale


def violation_map(
    pred: BinaryGrid,
    gt: BinaryGrid,
    patch: int = 32,
    mode: str = "tiled",
    coeffs: CoefficientVector | None = None,
) -> ViolationMap:
    """Exact one-flip sensitivity of the chi-map L1 error."""
    if pred.dims != gt.dims:
        raise DimensionalityError(f"shape mismatch: {pred.dims} vs {gt.dims}")
    if patch < 1:
        raise ValueError(f"patch must be >= 1, got {patch}")
    if mode == "tiled":
        values, scale = _violation_tiled(pred, gt, patch, coeffs)
    elif mode == "dense":
        values, scale = _violation_dense(pred, gt, patch, coeffs)
    else:
        raise ValueError(f"mode must be 'tiled' or 'dense', got {mode!r}")
    return ViolationMap(values=values, scale=scale, patch=patch, mode=mode)


def threshold_mask(v: ViolationMap, t: float) -> BinaryGrid:
    """Cells whose violation value (in exposed units) is >= t."""
    if t < 0:
        raise ValueError(f"threshold must be >= 0, got {t}")
    return BinaryGrid(v.values >= t * v.scale)


def normalized_threshold_mask(v: ViolationMap, frac: float) -> BinaryGrid:
    """Threshold at ``frac`` of the map maximum; an all-zero map masks nothing."""
    peak = int(v.values.max())
    if peak == 0:
        return BinaryGrid(np.zeros(v.dims, dtype=np.uint8))
    return BinaryGrid(v.values >= frac * peak)


def sample_threshold(seed: int) -> float:
    """Seeded uniform draw from the masking-threshold range [0.2, 0.5]."""
    return 0.2 + 0.3 * SplitMix64(seed).next_uniform()


def noise_mask(pred: BinaryGrid, mask: BinaryGrid, seed: int) -> MaskedGrid:
    """Replace masked cells of ``pred`` with sigmoid(N(0,1)) noise.

    Gaussians are consumed strictly in row-major order of the masked cells,
    so the output is a pure function of (pred, mask, seed).
    """
    if pred.dims != mask.dims:
        raise DimensionalityError(f"shape mismatch: {pred.dims} vs {mask.dims}")
    values = pred.cells.astype(np.float64)
    flat = values.reshape(-1)
    rng = SplitMix64(seed)
    for i in np.flatnonzero(mask.cells.reshape(-1)):
        eps = rng.next_gaussian()
        flat[i] = 1.0 / (1.0 + math.exp(-eps))
    return MaskedGrid(values=values, mask=mask.cells.copy())
