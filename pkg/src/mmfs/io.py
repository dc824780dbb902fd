"""Signal file formats shared by the command-line tools.

CSV: header ``index,value`` (real) or ``index,re,im`` (complex), one row per
cell, values printed with 17 significant digits so re-parsing is lossless.

Binary: magic ``MMFS``, version u32 LE, cell count u64 LE, then N float64 LE
values (2N interleaved re/im for complex).
"""

from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

from .errors import SignalFormatError
from .grid import GridFunction, TorusGrid

MAGIC = b"MMFS"
BINARY_VERSION = 1


def _grid_for(n: int) -> TorusGrid:
    level = int(n).bit_length() - 1
    if n < 4 or (1 << level) != n:
        raise SignalFormatError(f"cell count {n} is not a power of two >= 4")
    return TorusGrid(level)


def write_csv(f: GridFunction, path) -> None:
    lines = []
    if f.is_real:
        lines.append("index,value")
        for i, v in enumerate(f.values):
            lines.append(f"{i},{v:.17g}")
    else:
        lines.append("index,re,im")
        for i, v in enumerate(f.values):
            lines.append(f"{i},{v.real:.17g},{v.imag:.17g}")
    Path(path).write_text("\n".join(lines) + "\n")


def read_csv(path) -> GridFunction:
    raw = Path(path).read_text().splitlines()
    if not raw:
        raise SignalFormatError("empty file")
    header = raw[0].strip()
    if header == "index,value":
        ncols, kind = 2, "real"
    elif header == "index,re,im":
        ncols, kind = 3, "complex"
    else:
        raise SignalFormatError(f"unrecognized header {header!r}", line=1)
    rows = []
    for lineno, line in enumerate(raw[1:], start=2):
        if not line.strip():
            continue
        parts = line.split(",")
        if len(parts) != ncols:
            raise SignalFormatError(f"expected {ncols} columns", line=lineno)
        try:
            idx = int(parts[0])
            nums = [float(p) for p in parts[1:]]
        except ValueError as exc:
            raise SignalFormatError(str(exc), line=lineno) from None
        rows.append((idx, nums))
    n = len(rows)
    grid = _grid_for(n)
    if kind == "real":
        values = np.empty(n, dtype=np.float64)
    else:
        values = np.empty(n, dtype=np.complex128)
    seen = np.zeros(n, dtype=bool)
    for idx, nums in rows:
        if not 0 <= idx < n or seen[idx]:
            raise SignalFormatError(f"bad or repeated index {idx}")
        seen[idx] = True
        values[idx] = nums[0] if kind == "real" else complex(nums[0], nums[1])
    return GridFunction(grid, values, kind)


def write_binary(f: GridFunction, path) -> None:
    n = f.grid.ncells
    header = MAGIC + struct.pack("<IQ", BINARY_VERSION, n)
    if f.is_real:
        payload = np.asarray(f.values, dtype="<f8").tobytes()
    else:
        inter = np.empty(2 * n, dtype="<f8")
        inter[0::2] = f.values.real
        inter[1::2] = f.values.imag
        payload = inter.tobytes()
    Path(path).write_bytes(header + payload)


def read_binary(path) -> GridFunction:
    blob = Path(path).read_bytes()
    if len(blob) < 16 or blob[:4] != MAGIC:
        raise SignalFormatError("missing MMFS magic")
    version, n = struct.unpack("<IQ", blob[4:16])
    if version != BINARY_VERSION:
        raise SignalFormatError(f"unsupported version {version}")
    body = np.frombuffer(blob[16:], dtype="<f8")
    grid = _grid_for(n)
    if body.size == n:
        return GridFunction(grid, body.astype(np.float64), "real")
    if body.size == 2 * n:
        values = body[0::2] + 1j * body[1::2]
        return GridFunction(grid, values, "complex")
    raise SignalFormatError(f"payload holds {body.size} floats, expected {n} or {2 * n}")


def write_signal(f: GridFunction, path) -> None:
    """Binary for .bin/.mmfs paths, CSV otherwise."""
    if Path(path).suffix in (".bin", ".mmfs"):
        write_binary(f, path)
    else:
        write_csv(f, path)


def read_signal(path) -> GridFunction:
    """Sniffs the MMFS magic, falls back to CSV."""
    with open(path, "rb") as fh:
        head = fh.read(4)
    if head == MAGIC:
        return read_binary(path)
    return read_csv(path)
