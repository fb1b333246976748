"""From chi error to violation map to masked training input.

The violation map scores every cell by how much flipping it alone would
shrink the chi-map L1 error; thresholding the normalized map and replacing
flagged cells with sigmoid-squashed Gaussian noise produces the masked
grids a topology-correction network trains on.
"""

import numpy as np

import eulergrid as eg
from eulergrid.tvd import normalized_threshold_mask

gt = np.zeros((12, 12), dtype=np.uint8)
gt[2:10, 2:10] = 1
gt[4:8, 4:8] = 0  # ground truth: one ring
pred = gt.copy()
pred[2, 5] = 0  # break the ring
pred[11, 11] = 1  # and add a speck
gt_grid, pred_grid = eg.BinaryGrid(gt), eg.BinaryGrid(pred)

print(f"gt betti {tuple(eg.betti(gt_grid))}, pred betti {tuple(eg.betti(pred_grid))}")

v = eg.violation_map(pred_grid, gt_grid, patch=32)  # one tile at this size
print("\nviolation map (descaled, nonzero where a flip helps):")
print(v.exact())

t = eg.sample_threshold(seed=42)
mask = normalized_threshold_mask(v, t)
print(f"sampled threshold t={t:.3f} of max -> {mask.count()} masked cells")

masked = eg.noise_mask(pred_grid, mask, seed=42)
print("\nmasked grid values at flagged cells (strictly inside (0,1)):")
for idx in zip(*np.nonzero(mask.cells)):
    pos = tuple(int(i) for i in idx)
    print(f"  {pos}: {masked.values[pos]:.6f}")
print("\nunmasked cells keep the exact binary prediction.")
