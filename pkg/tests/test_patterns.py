from fractions import Fraction

import numpy as np
import pytest

from eulergrid import (
    BinaryGrid,
    CoefficientVector,
    DimensionalityError,
    chi_exact,
    chi_gray,
    chi_map,
    chi_octet,
    default_coefficients,
    enumerate_classes,
    flip_cell,
    flip_delta_chi,
    make_grid,
    octet_histogram,
    quad_histogram,
)
from tests.conftest import (
    DENSITIES,
    brute_histogram,
    brute_tile_value,
    random_grid,
)


class TestQuadHistogram:
    def test_empty_3x3(self):
        h = quad_histogram(make_grid(2, (3, 3), 0))
        assert h.counts[0] == 16
        assert h.total == 16

    def test_diagonal_pair_in_2x2(self):
        g = BinaryGrid(np.eye(2))
        h = quad_histogram(g)
        ones = sum(int(h.counts[c]) for c in (1, 2, 4, 8))
        threes = sum(int(h.counts[c]) for c in (7, 11, 13, 14))
        diags = int(h.counts[0b1001] + h.counts[0b0110])
        assert (ones, diags, threes, int(h.counts[0])) == (6, 1, 0, 2)
        assert h.total == 9

    def test_single_pixel_in_2x2(self):
        g = flip_cell(make_grid(2, (2, 2), 0), (0, 0))
        h = quad_histogram(g)
        ones = sum(int(h.counts[c]) for c in (1, 2, 4, 8))
        assert ones == 4
        assert int(h.counts[0]) == 5

    def test_matches_brute_force(self, rng):
        for _ in range(25):
            g = random_grid(rng, 2, hi=7)
            assert quad_histogram(g).counts.tolist() == brute_histogram(g)

    def test_window_count_invariant(self, rng):
        for _ in range(25):
            g = random_grid(rng, 2, hi=30)
            h, w = g.dims
            assert quad_histogram(g).total == (h + 1) * (w + 1)

    def test_rejects_3d(self):
        with pytest.raises(DimensionalityError):
            quad_histogram(make_grid(3, (2, 2, 2), 0))


class TestOctetHistogram:
    def test_empty_2x2x2(self):
        h = octet_histogram(make_grid(3, (2, 2, 2), 0))
        assert h.counts[0] == 27
        assert h.total == 27

    def test_single_voxel_in_2x2x2(self):
        g = flip_cell(make_grid(3, (2, 2, 2), 0), (0, 0, 0))
        h = octet_histogram(g)
        ones = sum(int(h.counts[1 << b]) for b in range(8))
        assert ones == 8
        assert int(h.counts[0]) == 19

    def test_solid_block(self):
        h = octet_histogram(make_grid(3, (2, 2, 2), 1))
        assert int(h.counts[255]) == 1
        assert h.total == 27

    def test_matches_brute_force(self, rng):
        for _ in range(10):
            g = random_grid(rng, 3, hi=5)
            assert octet_histogram(g).counts.tolist() == brute_histogram(g)

    def test_window_count_invariant(self, rng):
        for _ in range(10):
            g = random_grid(rng, 3, hi=10)
            assert octet_histogram(g).total == int(
                np.prod([e + 1 for e in g.dims])
            )

    def test_rejects_2d(self):
        with pytest.raises(DimensionalityError):
            octet_histogram(make_grid(2, (2, 2), 0))


class TestChiGray:
    def test_solid_2x2_block(self):
        assert chi_gray(make_grid(2, (2, 2), 1)) == 1

    def test_diagonal_pair(self):
        assert chi_gray(BinaryGrid(np.eye(2))) == 1
        assert chi_exact(BinaryGrid(np.eye(2))) == 1

    def test_ring(self, ring2d):
        assert chi_gray(ring2d) == 0

    def test_oracle_equivalence(self, rng):
        for _ in range(400):
            g = random_grid(rng, 2, hi=24)
            assert chi_gray(g) == chi_exact(g)

    def test_symmetry_invariance(self, rng):
        g = random_grid(rng, 2, hi=12)
        ref = chi_gray(g)
        for k in range(4):
            assert chi_gray(BinaryGrid(np.rot90(g.cells, k))) == ref
        assert chi_gray(BinaryGrid(g.cells[::-1])) == ref
        assert chi_gray(BinaryGrid(g.cells[:, ::-1])) == ref


class TestChiOctet:
    def test_single_voxel(self):
        assert chi_octet(make_grid(3, (1, 1, 1), 1), default_coefficients()) == 1

    def test_hollow_shell(self, hollow_shell):
        assert chi_octet(hollow_shell, default_coefficients()) == 2

    def test_voxel_ring(self, voxel_ring):
        assert chi_octet(voxel_ring, default_coefficients()) == 0

    def test_oracle_equivalence(self, rng):
        coeffs = default_coefficients()
        for _ in range(120):
            g = random_grid(rng, 3, lo=2, hi=12)
            assert chi_octet(g, coeffs) == chi_exact(g)

    def test_symmetry_invariance(self, rng):
        coeffs = default_coefficients()
        g = random_grid(rng, 3, hi=6)
        ref = chi_octet(g, coeffs)
        arr = np.transpose(g.cells, (2, 0, 1))[::-1]
        assert chi_octet(BinaryGrid(arr), coeffs) == ref

    def test_rejects_2d(self):
        with pytest.raises(DimensionalityError):
            chi_octet(make_grid(2, (2, 2), 0), default_coefficients())


class TestCoefficientVector:
    def test_rejects_wrong_length(self):
        table = enumerate_classes()
        with pytest.raises(ValueError):
            CoefficientVector(weights=(Fraction(0),) * 21, class_of=table.class_of)

    def test_rejects_non_eighth(self):
        table = enumerate_classes()
        weights = [Fraction(0)] * 22
        weights[3] = Fraction(1, 3)
        with pytest.raises(ValueError):
            CoefficientVector(weights=tuple(weights), class_of=table.class_of)


class TestChiMap:
    def test_whole_lattice_tile_equals_global_chi(self, rng):
        for _ in range(15):
            g = random_grid(rng, 2, hi=10)
            lattice = max(e + 1 for e in g.dims)
            m = chi_map(g, patch=lattice)
            assert m.dims == (1, 1)
            assert m.chi_total() == chi_exact(g)
            assert m.exact()[0, 0] == chi_exact(g)

    def test_ring_tiled_patch2(self, ring2d):
        from eulergrid.patterns import QUAD_WEIGHTS_X4, pattern_codes
        from tests.conftest import brute_pattern_code, brute_window_patterns

        m = chi_map(ring2d, patch=2)
        assert m.dims == (2, 2)
        assert int(m.values.sum()) == 0
        window_weights = {
            pos: int(QUAD_WEIGHTS_X4[brute_pattern_code(bits)])
            for pos, bits in brute_window_patterns(ring2d).items()
        }
        for tile in np.ndindex(2, 2):
            assert int(m.values[tile]) == brute_tile_value(
                window_weights, (4, 4), 2, tile
            )

    def test_empty_grid_all_zero(self):
        m = chi_map(make_grid(3, (5, 4, 3), 0), patch=2)
        assert not m.values.any()

    def test_partition_sum_random(self, rng):
        for _ in range(40):
            g = random_grid(rng, int(rng.choice([2, 3])), hi=12)
            patch = int(rng.integers(1, 8))
            m = chi_map(g, patch=patch)
            assert int(m.values.sum()) == chi_exact(g) * m.scale

    def test_dense_extents_match_lattice(self, rng):
        g = random_grid(rng, 2, hi=9)
        m = chi_map(g, patch=3, mode="dense")
        assert m.dims == tuple(e + 1 for e in g.dims)

    def test_dense_matches_brute_box_sums(self, rng):
        from eulergrid.patterns import QUAD_WEIGHTS_X4
        from tests.conftest import brute_pattern_code, brute_window_patterns

        for _ in range(10):
            g = random_grid(rng, 2, hi=6)
            patch = int(rng.integers(1, 5))
            m = chi_map(g, patch=patch, mode="dense")
            weights = {
                pos: int(QUAD_WEIGHTS_X4[brute_pattern_code(bits)])
                for pos, bits in brute_window_patterns(g).items()
            }
            for pos in np.ndindex(*m.dims):
                expected = sum(
                    w
                    for q, w in weights.items()
                    if all(p <= qk < p + patch for p, qk in zip(pos, q))
                )
                assert int(m.values[pos]) == expected

    def test_dense_patch1_cells_sum_to_chi(self, rng):
        g = random_grid(rng, 2, hi=10)
        m = chi_map(g, patch=1, mode="dense")
        assert int(m.values.sum()) == chi_exact(g) * m.scale

    def test_invalid_combinations(self):
        g = make_grid(2, (4, 4), 0)
        with pytest.raises(ValueError):
            chi_map(g, patch=0)
        with pytest.raises(ValueError):
            chi_map(g, patch=4, stride=2, mode="tiled")
        with pytest.raises(ValueError):
            chi_map(g, patch=4, stride=2, mode="dense")
        with pytest.raises(ValueError):
            chi_map(g, patch=4, mode="strided")


class TestFlipDelta:
    def test_empty_grid_flip_is_plus_one(self, rng):
        g = make_grid(2, (6, 6), 0)
        idx = tuple(int(rng.integers(0, 6)) for _ in range(2))
        assert flip_delta_chi(g, idx) == 1

    def test_ring_hole_fill(self, ring2d):
        assert flip_delta_chi(ring2d, (1, 1)) == 1

    def test_flip_unflip_cancels(self, rng):
        g = random_grid(rng, 3, hi=5)
        idx = tuple(int(rng.integers(0, e)) for e in g.dims)
        d1 = flip_delta_chi(g, idx)
        d2 = flip_delta_chi(flip_cell(g, idx), idx)
        assert d1 + d2 == 0

    def test_matches_full_recomputation(self, rng):
        for _ in range(150):
            nd = int(rng.choice([2, 3]))
            g = random_grid(rng, nd, hi=8)
            idx = tuple(int(rng.integers(0, e)) for e in g.dims)
            expected = chi_exact(flip_cell(g, idx)) - chi_exact(g)
            assert flip_delta_chi(g, idx) == expected

    def test_out_of_range(self):
        with pytest.raises(IndexError):
            flip_delta_chi(make_grid(2, (3, 3), 0), (3, 0))


def test_density_sweep_equivalence(rng):
    coeffs = default_coefficients()
    for density in DENSITIES:
        for _ in range(20):
            g2 = random_grid(rng, 2, hi=20, density=density)
            assert chi_gray(g2) == chi_exact(g2)
            g3 = random_grid(rng, 3, lo=2, hi=8, density=density)
            assert chi_octet(g3, coeffs) == chi_exact(g3)
