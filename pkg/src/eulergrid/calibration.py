"""Derivation of the 3D chi coefficients from first principles.

The 256 possible 2x2x2 patterns fall into orbits under the 48 rigid
symmetries of the cube (24 rotations, each optionally mirrored). chi is
invariant under those symmetries, so patterns in one orbit must share a
coefficient, which cuts the unknowns to one weight per orbit. The weights
are then pinned by sampling binary volumes, pairing each volume's grouped
pattern counts with its oracle chi, and solving the resulting
overdetermined integer system exactly.

Rational Gaussian elimination is used instead of floating least squares:
counts and chi are integers, so the solve is exact, zero residual is a hard
requirement (a nonzero residual signals a counting bug), and the resulting
weights can be compared as exact fractions.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations, product

import numpy as np

from . import cubical
from .errors import CalibrationError
from .grid import BinaryGrid
from .patterns import N_CLASSES, CoefficientVector, octet_histogram


@dataclass(frozen=True, eq=False)
class OctetClassTable:
    """Orbit decomposition of the 256 pattern codes.

    Class ids are assigned in increasing order of the orbit's minimal code,
    which makes the labelling deterministic without reference to any
    external figure.
    """

    class_of: np.ndarray
    representatives: tuple[int, ...]
    orbit_sizes: tuple[int, ...]

    @property
    def n_classes(self) -> int:
        return len(self.representatives)


def _cell_bit(c: tuple[int, int, int]) -> int:
    # Row-major read order, first cell most significant.
    return 7 - (4 * c[0] + 2 * c[1] + c[2])


def _symmetry_code_maps() -> list[np.ndarray]:
    """One code->code permutation per element of the 48-symmetry group."""
    cells = list(product((0, 1), repeat=3))
    maps = []
    for perm in permutations(range(3)):
        for flips in product((0, 1), repeat=3):
            table = np.zeros(256, dtype=np.uint8)
            moved = [
                _cell_bit((c[perm[0]] ^ flips[0], c[perm[1]] ^ flips[1], c[perm[2]] ^ flips[2]))
                for c in cells
            ]
            bits = [_cell_bit(c) for c in cells]
            for code in range(256):
                new = 0
                for b, m in zip(bits, moved):
                    if code >> b & 1:
                        new |= 1 << m
                table[code] = new
            maps.append(table)
    return maps


def enumerate_classes() -> OctetClassTable:
    """Group the 256 codes into orbits of the cube symmetry group."""
    maps = _symmetry_code_maps()
    class_of = np.full(256, -1, dtype=np.int8)
    reps = []
    sizes = []
    for code in range(256):
        if class_of[code] >= 0:
            continue
        orbit = {int(t[code]) for t in maps}
        cid = len(reps)
        for member in orbit:
            class_of[member] = cid
        reps.append(code)  # ascending scan makes this the orbit minimum
        sizes.append(len(orbit))
    class_of.setflags(write=False)
    return OctetClassTable(
        class_of=class_of, representatives=tuple(reps), orbit_sizes=tuple(sizes)
    )


@dataclass(frozen=True, eq=False)
class CalibrationSample:
    """Grouped pattern counts of one volume paired with its oracle chi."""

    class_counts: np.ndarray
    chi: int


def grouped_counts(grid: BinaryGrid, table: OctetClassTable) -> np.ndarray:
    """Per-class pattern counts of a 3D grid."""
    hist = octet_histogram(grid).counts
    out = np.zeros(table.n_classes, dtype=np.int64)
    np.add.at(out, table.class_of, hist)
    return out


def _pattern_volume(code: int) -> np.ndarray:
    vol = np.zeros((2, 2, 2), dtype=np.uint8)
    for c in product((0, 1), repeat=3):
        vol[c] = code >> _cell_bit(c) & 1
    return vol


def _solid_cuboid(rng, extent):
    dims = rng.integers(1, extent + 1, size=3)
    return np.ones(dims, dtype=np.uint8)


def _hollow_cuboid(rng, extent):
    dims = rng.integers(3, max(extent, 3) + 1, size=3)
    vol = np.ones(dims, dtype=np.uint8)
    vol[1:-1, 1:-1, 1:-1] = 0
    return vol


def _ball(rng, extent, hollow=False):
    r = int(rng.integers(1, max(extent // 2, 1) + 1))
    n = 2 * r + 1
    ax = np.arange(n) - r
    d2 = ax[:, None, None] ** 2 + ax[None, :, None] ** 2 + ax[None, None, :] ** 2
    vol = d2 <= r * r
    if hollow and r >= 2:
        vol &= d2 > (r - 1) ** 2
    return vol.astype(np.uint8)


def _ring_prism(rng, extent):
    r = int(rng.integers(1, max(extent // 2, 1) + 1))
    n = 2 * r + 1
    ax = np.arange(n) - r
    d2 = ax[:, None] ** 2 + ax[None, :] ** 2
    ring = (d2 <= r * r) & (d2 > max(r - 2, 0) ** 2)
    depth = int(rng.integers(1, extent + 1))
    return np.repeat(ring[:, :, None].astype(np.uint8), depth, axis=2)


def _noise(rng, extent, density):
    dims = rng.integers(2, extent + 1, size=3)
    return (rng.random(dims) < density).astype(np.uint8)


def sample_volumes(count: int, extent: int = 8, seed: int = 0) -> list[CalibrationSample]:
    """Deterministic mix of calibration volumes with their oracle chi.

    The first samples are fixed structured volumes (all background, single
    voxel, then every class-representative pattern embedded as a 2x2x2
    volume) so sparse orbits are guaranteed to appear; the remainder cycles
    through noise at densities 0.1..0.9 and solid/hollow cuboids, balls and
    ring prisms.
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    if extent < 2:
        raise ValueError("extent must be >= 2")
    table = enumerate_classes()
    rng = np.random.default_rng(seed)
    densities = [0.1 * k for k in range(1, 10)]

    volumes = []
    volumes.append(np.zeros((2, 2, 2), dtype=np.uint8))
    volumes.append(np.ones((1, 1, 1), dtype=np.uint8))
    volumes.extend(_pattern_volume(rep) for rep in table.representatives)
    i = 0
    while len(volumes) < count:
        kind = i % 6
        if kind == 0:
            volumes.append(_noise(rng, extent, densities[i // 6 % len(densities)]))
        elif kind == 1:
            volumes.append(_solid_cuboid(rng, extent))
        elif kind == 2:
            volumes.append(_hollow_cuboid(rng, extent))
        elif kind == 3:
            volumes.append(_ball(rng, extent))
        elif kind == 4:
            volumes.append(_ball(rng, extent, hollow=True))
        else:
            volumes.append(_ring_prism(rng, extent))
        i += 1
    volumes = volumes[:count]

    samples = []
    for vol in volumes:
        grid = BinaryGrid(vol)
        samples.append(
            CalibrationSample(
                class_counts=grouped_counts(grid, table),
                chi=cubical.chi_exact(grid),
            )
        )
    return samples


@dataclass(frozen=True)
class CalibrationResult:
    coefficients: CoefficientVector
    rank: int
    unique: bool
    table: OctetClassTable


def solve_coefficients(samples: list[CalibrationSample]) -> CalibrationResult:
    """Exact solve of ``class_counts . w = chi`` over all samples.

    Maintains a reduced row echelon basis incrementally; an inconsistent row
    raises :class:`CalibrationError`. If the rank is below the class count
    the system is flagged non-unique and the free classes get weight zero,
    which is the minimal-support completion.
    """
    if len(samples) < N_CLASSES:
        raise ValueError(f"need at least {N_CLASSES} samples, got {len(samples)}")

    pivots: dict[int, list[Fraction]] = {}
    for s in samples:
        row = [Fraction(int(c)) for c in s.class_counts] + [Fraction(s.chi)]
        for col in sorted(pivots):
            if row[col]:
                f = row[col]
                prow = pivots[col]
                for k in range(col, N_CLASSES + 1):
                    row[k] -= f * prow[k]
        lead = next((k for k in range(N_CLASSES) if row[k]), None)
        if lead is None:
            if row[N_CLASSES]:
                raise CalibrationError(
                    "inconsistent calibration system: residual row with "
                    f"chi remainder {row[N_CLASSES]}"
                )
            continue
        inv = 1 / row[lead]
        row = [v * inv for v in row]
        for prow in pivots.values():
            if prow[lead]:
                f = prow[lead]
                for k in range(lead, N_CLASSES + 1):
                    prow[k] -= f * row[k]
        pivots[lead] = row

    rank = len(pivots)
    weights = [Fraction(0)] * N_CLASSES
    for col, row in pivots.items():
        weights[col] = row[N_CLASSES]

    table = enumerate_classes()
    coeffs = CoefficientVector(weights=tuple(weights), class_of=table.class_of)
    for s in samples:
        predicted = sum(w * int(c) for w, c in zip(weights, s.class_counts))
        if predicted != s.chi:
            raise CalibrationError(
                f"solution fails a training sample: {predicted} != {s.chi}"
            )
    return CalibrationResult(
        coefficients=coeffs, rank=rank, unique=rank == N_CLASSES, table=table
    )


@dataclass(frozen=True)
class VerificationReport:
    max_abs_error: Fraction
    n_samples: int

    @property
    def ok(self) -> bool:
        return self.max_abs_error == 0


def verify_coefficients(
    coeffs: CoefficientVector, heldout: list[CalibrationSample]
) -> VerificationReport:
    """Max |predicted chi - oracle chi| over held-out samples."""
    worst = Fraction(0)
    for s in heldout:
        predicted = sum(w * int(c) for w, c in zip(coeffs.weights, s.class_counts))
        worst = max(worst, abs(predicted - s.chi))
    return VerificationReport(max_abs_error=worst, n_samples=len(heldout))
