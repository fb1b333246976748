/**
 * Minimal BVOL codec (little-endian container used by the eulergrid CLI).
 *
 * Layout: "BVL1" | dtype u8 (0=u8 binary, 1=i32, 2=f32, 3=f64) | ndim u8 |
 * two zero bytes | ndim x u32 dims (h, w[, d]) | row-major payload.
 */

const MAGIC = [0x42, 0x56, 0x4c, 0x31]; // "BVL1"

export type BvolDtype = 0 | 1 | 2 | 3;

export type BvolPayload = Uint8Array | Int32Array | Float32Array | Float64Array;

const ITEM_SIZE: Record<BvolDtype, number> = { 0: 1, 1: 4, 2: 4, 3: 8 };

export function encodeBvol(
  dtype: BvolDtype,
  shape: readonly number[],
  data: BvolPayload,
): Uint8Array {
  const count = shape.reduce((a, b) => a * b, 1);
  if (data.length !== count) {
    throw new Error(`payload length ${data.length} does not match shape ${shape}`);
  }
  const header = 8 + 4 * shape.length;
  const out = new Uint8Array(header + count * ITEM_SIZE[dtype]);
  const view = new DataView(out.buffer);
  MAGIC.forEach((b, i) => (out[i] = b));
  out[4] = dtype;
  out[5] = shape.length;
  shape.forEach((dim, i) => view.setUint32(8 + 4 * i, dim, true));
  // Typed-array byte order is the platform's; this codec assumes a
  // little-endian host, which holds for every supported Node target.
  out.set(new Uint8Array(data.buffer, data.byteOffset, data.byteLength), header);
  return out;
}

export interface BvolDocument {
  dtype: BvolDtype;
  shape: number[];
  data: BvolPayload;
}

export function decodeBvol(bytes: Uint8Array): BvolDocument {
  if (bytes.length < 8 || !MAGIC.every((b, i) => bytes[i] === b)) {
    throw new Error("not a BVOL container (bad magic)");
  }
  const dtype = bytes[4] as BvolDtype;
  const ndim = bytes[5];
  if (!(dtype in ITEM_SIZE) || (ndim !== 2 && ndim !== 3)) {
    throw new Error(`unsupported BVOL header: dtype=${dtype} ndim=${ndim}`);
  }
  const view = new DataView(bytes.buffer, bytes.byteOffset, bytes.byteLength);
  const shape: number[] = [];
  for (let i = 0; i < ndim; i++) shape.push(view.getUint32(8 + 4 * i, true));
  const count = shape.reduce((a, b) => a * b, 1);
  const header = 8 + 4 * ndim;
  if (bytes.length !== header + count * ITEM_SIZE[dtype]) {
    throw new Error("BVOL payload length does not match dims");
  }
  // Copy into a fresh buffer: Node Buffers are pool-backed views whose
  // .slice() shares the pool, so reinterpreting .buffer at offset 0 would
  // read unrelated pool bytes.
  const payload = new Uint8Array(count * ITEM_SIZE[dtype]);
  payload.set(bytes.subarray(header));
  const buf = payload.buffer;
  const data: BvolPayload =
    dtype === 0
      ? payload
      : dtype === 1
        ? new Int32Array(buf, 0, count)
        : dtype === 2
          ? new Float32Array(buf, 0, count)
          : new Float64Array(buf, 0, count);
  return { dtype, shape, data };
}
