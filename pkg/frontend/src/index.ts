/**
 * Flat-buffer bindings over the eulergrid command line.
 *
 * Callers hand in contiguous row-major views (bytes for binary grids,
 * 32-bit floats for probability maps, binarized at >= 0.5 on entry) and get
 * copied typed arrays back, so results outlive the call and caller memory
 * is never retained. Each operation is one CLI invocation exchanging BVOL
 * containers through a private temporary directory.
 */

import { readFileSync, writeFileSync } from "node:fs";
import { join } from "node:path";

import { decodeBvol, encodeBvol } from "./bvol.js";
import { BindingError } from "./errors.js";
import { runCli, withTempDir } from "./runner.js";

export { BindingError } from "./errors.js";
export { decodeBvol, encodeBvol } from "./bvol.js";

export interface FlatGridView {
  /** Grid extents (h, w) or (h, w, d); the buffer is row-major. */
  shape: readonly number[];
  data: Uint8Array | Float32Array;
}

export type ChiMapMode = "tiled" | "dense";

export interface FlatMap {
  shape: number[];
  /** Scaled integers: chi values times 4 (2D) or 8 (3D). */
  data: Int32Array;
  scale: number;
}

function checkView(name: string, view: FlatGridView): void {
  const { shape, data } = view;
  if (shape.length !== 2 && shape.length !== 3) {
    throw new BindingError(`shape must have 2 or 3 extents, got ${shape.length}`, name);
  }
  for (const dim of shape) {
    if (!Number.isInteger(dim) || dim < 1) {
      throw new BindingError(`extents must be positive integers, got ${shape}`, name);
    }
  }
  const count = shape.reduce((a, b) => a * b, 1);
  if (data.length !== count) {
    throw new BindingError(
      `buffer length ${data.length} does not match shape ${shape} (${count} cells); ` +
        "views must be contiguous and unsliced",
      name,
    );
  }
  if (data instanceof Uint8Array) {
    for (let i = 0; i < data.length; i++) {
      if (data[i] > 1) {
        throw new BindingError("byte views must contain only 0/1", name);
      }
    }
  }
}

function writeGrid(dir: string, name: string, view: FlatGridView): string {
  const path = join(dir, `${name}.bvol`);
  const bytes =
    view.data instanceof Float32Array
      ? encodeBvol(2, view.shape, view.data)
      : encodeBvol(0, view.shape, view.data);
  writeFileSync(path, bytes);
  return path;
}

function readMap(path: string, ndim: number): FlatMap {
  const doc = decodeBvol(readFileSync(path));
  if (!(doc.data instanceof Int32Array)) {
    throw new BindingError("expected an i32 map from the CLI", "cli");
  }
  return { shape: doc.shape, data: doc.data, scale: ndim === 2 ? 4 : 8 };
}

/** Euler characteristic of a binary grid or probability map. */
export function bindChi(view: FlatGridView): number {
  checkView("view", view);
  return withTempDir((dir) => {
    const input = writeGrid(dir, "input", view);
    return parseInt(runCli(["chi", input]).trim(), 10);
  });
}

/** Patch-local chi map; values carry the x4/x8 integer scale. */
export function bindChiMap(
  view: FlatGridView,
  patch = 32,
  mode: ChiMapMode = "tiled",
): FlatMap {
  checkView("view", view);
  return withTempDir((dir) => {
    const input = writeGrid(dir, "input", view);
    const output = join(dir, "map.bvol");
    runCli(["chi-map", input, output, "--patch", String(patch), "--mode", mode]);
    return readMap(output, view.shape.length);
  });
}

/** Betti numbers: [b0, b1] in 2D, [b0, b1, b2] in 3D. */
export function bindBetti(view: FlatGridView): number[] {
  checkView("view", view);
  return withTempDir((dir) => {
    const input = writeGrid(dir, "input", view);
    return runCli(["betti", input])
      .trim()
      .split(/\s+/)
      .map((token) => parseInt(token, 10));
  });
}

/** One-flip sensitivity of the chi-map error, as scaled integers. */
export function bindViolation(
  pred: FlatGridView,
  gt: FlatGridView,
  patch = 32,
  mode: ChiMapMode = "tiled",
): FlatMap {
  checkView("pred", pred);
  checkView("gt", gt);
  return withTempDir((dir) => {
    const predPath = writeGrid(dir, "pred", pred);
    const gtPath = writeGrid(dir, "gt", gt);
    const output = join(dir, "violation.bvol");
    runCli([
      "violation",
      predPath,
      gtPath,
      output,
      "--patch",
      String(patch),
      "--mode",
      mode,
    ]);
    return readMap(output, pred.shape.length);
  });
}

/**
 * Replace masked cells of a prediction with seeded sigmoid-Gaussian noise.
 *
 * The mask view flags cells directly (nonzero = replace); the seed drives
 * the pinned PRNG, so outputs are bit-reproducible.
 */
export function bindNoiseMask(
  pred: FlatGridView,
  mask: FlatGridView,
  seed: number,
): Float32Array {
  checkView("pred", pred);
  checkView("mask", mask);
  if (mask.shape.length !== pred.shape.length ||
      mask.shape.some((dim, i) => dim !== pred.shape[i])) {
    throw new BindingError(
      `mask shape ${mask.shape} does not match pred shape ${pred.shape}`,
      "mask",
    );
  }
  return withTempDir((dir) => {
    const predPath = writeGrid(dir, "pred", pred);
    // The CLI masks cells at or above a fraction of the map maximum, so a
    // 0/1 map with threshold 1 selects exactly the flagged cells (and an
    // all-zero map selects none).
    const flags = new Int32Array(mask.data.length);
    for (let i = 0; i < mask.data.length; i++) {
      flags[i] = (
        mask.data instanceof Float32Array ? mask.data[i] >= 0.5 : mask.data[i] !== 0
      )
        ? 1
        : 0;
    }
    const maskPath = join(dir, "mask.bvol");
    writeFileSync(maskPath, encodeBvol(1, mask.shape, flags));
    const output = join(dir, "masked.bvol");
    runCli([
      "mask",
      predPath,
      maskPath,
      output,
      "--threshold",
      "1",
      "--seed",
      String(seed),
    ]);
    const doc = decodeBvol(readFileSync(output));
    if (!(doc.data instanceof Float32Array)) {
      throw new BindingError("expected an f32 grid from the CLI", "cli");
    }
    return doc.data;
  });
}
