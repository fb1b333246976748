"""Bit-exact file formats: binary PGM, the BVOL container, metric reports.

BVOL layout (little-endian throughout):

    magic    4 bytes  "BVL1"
    dtype    1 byte   0 = u8 binary, 1 = i32, 2 = f32, 3 = f64
    ndim     1 byte   2 or 3
    reserved 2 bytes  zero
    dims     ndim * u32, in (h, w[, d]) order
    payload  row-major, last index fastest

Readers reject malformed input with a :class:`FormatError` naming the field
or byte offset; they never guess.
"""

from __future__ import annotations

import json
import struct
from fractions import Fraction

import numpy as np

from .errors import FormatError
from .grid import BinaryGrid

BVOL_MAGIC = b"BVL1"
_BVOL_DTYPES = {0: np.uint8, 1: np.dtype("<i4"), 2: np.dtype("<f4"), 3: np.dtype("<f8")}


def read_pgm(data: bytes) -> BinaryGrid:
    """Decode a binary PGM (P5); values >= 128 become foreground."""
    if data[:2] != b"P5":
        raise FormatError("not a binary PGM", field="magic", offset=0)
    pos = 2
    fields = []
    while len(fields) < 3:
        while pos < len(data) and data[pos : pos + 1].isspace():
            pos += 1
        if pos < len(data) and data[pos : pos + 1] == b"#":
            while pos < len(data) and data[pos] not in (0x0A, 0x0D):
                pos += 1
            continue
        start = pos
        while pos < len(data) and not data[pos : pos + 1].isspace():
            pos += 1
        token = data[start:pos]
        if not token.isdigit():
            raise FormatError(f"bad header token {token!r}", offset=start)
        fields.append(int(token))
    if pos >= len(data) or not data[pos : pos + 1].isspace():
        raise FormatError("missing whitespace after maxval", offset=pos)
    pos += 1

    width, height, maxval = fields
    if width < 1 or height < 1:
        raise FormatError(f"bad image size {width}x{height}", field="size")
    if maxval > 255 or maxval < 1:
        raise FormatError(f"maxval {maxval} out of range", field="maxval")
    payload = data[pos : pos + width * height]
    if len(payload) != width * height:
        raise FormatError(
            f"truncated payload: expected {width * height} bytes, got {len(payload)}",
            offset=pos,
        )
    pixels = np.frombuffer(payload, dtype=np.uint8).reshape(height, width)
    return BinaryGrid(pixels >= 128)


def write_pgm(values: BinaryGrid | np.ndarray) -> bytes:
    """Encode a grid (foreground -> 255) or a uint8 raster as binary PGM."""
    if isinstance(values, BinaryGrid):
        raster = values.cells * np.uint8(255)
    else:
        raster = np.ascontiguousarray(values, dtype=np.uint8)
    if raster.ndim != 2:
        raise FormatError(f"PGM requires 2D data, got ndim={raster.ndim}")
    h, w = raster.shape
    return f"P5\n{w} {h}\n255\n".encode() + raster.tobytes()


def read_bvol(data: bytes):
    """Decode a BVOL container.

    Returns a :class:`BinaryGrid` for dtype 0 and a numpy array (i4/f4/f8,
    native byte order) otherwise.
    """
    if len(data) < 8:
        raise FormatError("header truncated", offset=len(data))
    if data[:4] != BVOL_MAGIC:
        raise FormatError(f"bad magic {data[:4]!r}", field="magic", offset=0)
    dtype_code, ndim = data[4], data[5]
    if dtype_code not in _BVOL_DTYPES:
        raise FormatError(f"unknown dtype code {dtype_code}", field="dtype", offset=4)
    if ndim not in (2, 3):
        raise FormatError(f"ndim must be 2 or 3, got {ndim}", field="ndim", offset=5)
    if data[6:8] != b"\x00\x00":
        raise FormatError("reserved bytes must be zero", field="reserved", offset=6)
    header_end = 8 + 4 * ndim
    if len(data) < header_end:
        raise FormatError("dims truncated", field="dims", offset=8)
    dims = struct.unpack(f"<{ndim}I", data[8:header_end])
    if any(d < 1 for d in dims):
        raise FormatError(f"extents must be >= 1, got {dims}", field="dims")
    count = int(np.prod(dims))
    dtype = np.dtype(_BVOL_DTYPES[dtype_code])
    expected = header_end + count * dtype.itemsize
    if len(data) != expected:
        raise FormatError(
            f"payload length {len(data) - header_end} does not match "
            f"dims {dims} ({count * dtype.itemsize} bytes expected)",
            field="payload",
            offset=header_end,
        )
    payload = np.frombuffer(data[header_end:], dtype=dtype).reshape(dims)
    if dtype_code == 0:
        if payload.max(initial=0) > 1:
            raise FormatError("u8 payload contains bytes other than 0/1", field="payload")
        return BinaryGrid(payload)
    return payload.astype(payload.dtype.newbyteorder("="))


def write_bvol(value) -> bytes:
    """Encode a grid or array as BVOL; dtype is inferred from the input."""
    if isinstance(value, BinaryGrid):
        arr, code = value.cells, 0
    else:
        arr = np.ascontiguousarray(value)
        if arr.dtype == np.uint8:
            if arr.max(initial=0) > 1:
                raise FormatError("u8 payload must contain only 0/1", field="payload")
            code = 0
        elif np.issubdtype(arr.dtype, np.integer):
            if arr.size and (arr.min() < -(2**31) or arr.max() >= 2**31):
                raise FormatError("integer payload exceeds i32 range", field="payload")
            arr, code = arr.astype("<i4"), 1
        elif arr.dtype == np.float32:
            code = 2
        elif arr.dtype == np.float64:
            code = 3
        else:
            raise FormatError(f"unsupported dtype {arr.dtype}", field="dtype")
    if arr.ndim not in (2, 3):
        raise FormatError(f"ndim must be 2 or 3, got {arr.ndim}", field="ndim")
    header = BVOL_MAGIC + bytes([code, arr.ndim, 0, 0])
    header += struct.pack(f"<{arr.ndim}I", *arr.shape)
    return header + arr.astype(arr.dtype.newbyteorder("<")).tobytes()


def _exact_number(value):
    """JSON-safe exact representation: int, terminating decimal, or 'p/q'."""
    if isinstance(value, bool):
        return value
    if isinstance(value, (int, np.integer)):
        return int(value)
    fr = Fraction(value)
    if fr.denominator == 1:
        return int(fr)
    q = fr.denominator
    twos = fives = 0
    while q % 2 == 0:
        q //= 2
        twos += 1
    while q % 5 == 0:
        q //= 5
        fives += 1
    if q != 1:
        return f"{fr.numerator}/{fr.denominator}"
    places = max(twos, fives)
    digits = abs(fr.numerator) * 10**places // fr.denominator
    sign = "-" if fr.numerator < 0 else ""
    whole, frac = divmod(digits, 10**places)
    return f"{sign}{whole}.{frac:0{places}d}"


def write_metrics(report: dict) -> bytes:
    """Serialize a metrics report to canonical JSON bytes.

    Keys are sorted and numbers rendered exactly (integers as integers,
    non-integer rationals as terminating-decimal or 'p/q' strings), so equal
    reports serialize to identical bytes.
    """

    def convert(obj):
        if isinstance(obj, dict):
            return {k: convert(v) for k, v in obj.items()}
        if isinstance(obj, (list, tuple)):
            return [convert(v) for v in obj]
        if obj is None or isinstance(obj, str):
            return obj
        return _exact_number(obj)

    return (json.dumps(convert(report), sort_keys=True, separators=(",", ":")) + "\n").encode()
