"""Binary occupancy grids and bit-exact file I/O.

Conventions used throughout the package:

* arrays are indexed ``[y, x]`` in 2D and ``[z, y, x]`` in 3D, so the x
  coordinate varies fastest in the C-order linearization;
* lattice points are integer index tuples in the same order;
* loaded grids always keep their foreground strictly interior (at least a
  one-cell background border), which guarantees that every foreground cell
  can see background -- a requirement of the distance transform.

Two file formats are supported: binary PBM (P4) for 2D images and a
minimal "VOX" container for 3D volumes.  A VOX file is a single ASCII
header line ``VOX <nx> <ny> <nz>`` followed by ``nx*ny*nz`` packed bits in
row-major order with x fastest.
"""

import numpy as np

from .errors import DomainError, FormatError, ParameterError

FORMAT_PBM = "pbm"
FORMAT_VOX = "vox"


class CpmaIOError(OSError):
    """Grid file could not be written."""

_EXTENSIONS = {".pbm": FORMAT_PBM, ".vox": FORMAT_VOX}


class BinaryGrid:
    """Immutable n-dimensional (n in {2, 3}) boolean occupancy grid."""

    __slots__ = ("data",)

    def __init__(self, data):
        data = np.array(data, dtype=bool)
        if data.ndim not in (2, 3):
            raise ParameterError(f"grids must be 2D or 3D, got {data.ndim}D")
        if min(data.shape) < 3:
            raise ParameterError(f"all axis extents must be >= 3, got {data.shape}")
        data.setflags(write=False)
        self.data = data

    @property
    def dims(self):
        return self.data.shape

    @property
    def ndim(self):
        return self.data.ndim

    def count(self):
        """Number of foreground cells."""
        return int(self.data.sum())

    def __eq__(self, other):
        if not isinstance(other, BinaryGrid):
            return NotImplemented
        return self.dims == other.dims and bool(np.array_equal(self.data, other.data))

    def __hash__(self):
        return hash((self.dims, self.data.tobytes()))

    def __repr__(self):
        return f"BinaryGrid(dims={self.dims}, foreground={self.count()})"


def ensure_border(grid):
    """Return a grid whose foreground is strictly interior.

    Pads by one background cell per side when the foreground touches the
    boundary; already-padded grids are returned unchanged (idempotent).
    """
    data = grid.data
    touches = False
    for ax in range(data.ndim):
        first = np.take(data, 0, axis=ax)
        last = np.take(data, -1, axis=ax)
        if first.any() or last.any():
            touches = True
            break
    if not touches:
        return grid
    return BinaryGrid(np.pad(data, 1, mode="constant", constant_values=False))


def _detect_format(path, fmt):
    if fmt is not None:
        return fmt
    path = str(path)
    for ext, f in _EXTENSIONS.items():
        if path.endswith(ext):
            return f
    raise ParameterError(f"cannot infer grid format from path {path!r}")


def _parse_pbm(raw):
    # Tokenizer over the P4 header: tokens separated by whitespace, with
    # '#' comments running to end of line.
    pos = 0
    n = len(raw)

    def next_token():
        nonlocal pos
        while pos < n:
            c = raw[pos : pos + 1]
            if c == b"#":
                while pos < n and raw[pos : pos + 1] not in (b"\n", b"\r"):
                    pos += 1
            elif c.isspace():
                pos += 1
            else:
                break
        if pos >= n:
            raise FormatError("unexpected end of PBM header", offset=pos)
        start = pos
        while pos < n and not raw[pos : pos + 1].isspace() and raw[pos : pos + 1] != b"#":
            pos += 1
        return start, raw[start:pos]

    off, magic = next_token()
    if magic != b"P4":
        raise FormatError(f"not a binary PBM (magic {magic!r})", offset=off)
    off, wtok = next_token()
    off_h, htok = next_token()
    try:
        width, height = int(wtok), int(htok)
    except ValueError:
        raise FormatError("non-numeric PBM dimensions", offset=off) from None
    if width <= 0 or height <= 0:
        raise FormatError("non-positive PBM dimensions", offset=off)
    # Exactly one whitespace byte separates the header from the raster.
    if pos >= n or not raw[pos : pos + 1].isspace():
        raise FormatError("missing whitespace before PBM raster", offset=pos)
    pos += 1
    row_bytes = (width + 7) // 8
    need = row_bytes * height
    if n - pos < need:
        raise FormatError(
            f"PBM raster truncated: need {need} bytes, have {n - pos}", offset=pos
        )
    raster = np.frombuffer(raw[pos : pos + need], dtype=np.uint8)
    bits = np.unpackbits(raster.reshape(height, row_bytes), axis=1)[:, :width]
    return bits.astype(bool)


def _write_pbm(data):
    height, width = data.shape
    packed = np.packbits(data.astype(np.uint8), axis=1)
    return b"P4\n%d %d\n" % (width, height) + packed.tobytes()


def _parse_vox(raw):
    nl = raw.find(b"\n")
    if nl < 0:
        raise FormatError("missing VOX header line", offset=0)
    parts = raw[:nl].split()
    if len(parts) != 4 or parts[0] != b"VOX":
        raise FormatError("malformed VOX header", offset=0)
    try:
        nx, ny, nz = (int(p) for p in parts[1:])
    except ValueError:
        raise FormatError("non-numeric VOX dimensions", offset=4) from None
    if min(nx, ny, nz) <= 0:
        raise FormatError("non-positive VOX dimensions", offset=4)
    total = nx * ny * nz
    need = (total + 7) // 8
    body = raw[nl + 1 :]
    if len(body) < need:
        raise FormatError(
            f"VOX raster truncated: need {need} bytes, have {len(body)}", offset=nl + 1
        )
    bits = np.unpackbits(np.frombuffer(body[:need], dtype=np.uint8))[:total]
    return bits.reshape(nz, ny, nx).astype(bool)


def _write_vox(data):
    nz, ny, nx = data.shape
    packed = np.packbits(data.reshape(-1).astype(np.uint8))
    return b"VOX %d %d %d\n" % (nx, ny, nz) + packed.tobytes()


def load_grid(path, fmt=None):
    """Load a binary grid from ``path``.

    ``fmt`` is "pbm" or "vox"; when omitted it is inferred from the file
    extension.  The returned grid has a one-cell background border
    enforced and a nonempty foreground.
    """
    fmt = _detect_format(path, fmt)
    with open(path, "rb") as fh:
        raw = fh.read()
    if fmt == FORMAT_PBM:
        data = _parse_pbm(raw)
    elif fmt == FORMAT_VOX:
        data = _parse_vox(raw)
    else:
        raise ParameterError(f"unknown grid format {fmt!r}")
    if not data.any():
        raise DomainError("empty shape: file has no foreground cells")
    if min(data.shape) < 3:
        data = np.pad(data, 1, mode="constant", constant_values=False)
    return ensure_border(BinaryGrid(data))


def save_grid(grid, path, fmt=None):
    """Write ``grid`` to ``path``; load(save(g)) == g for padded grids."""
    fmt = _detect_format(path, fmt)
    if fmt == FORMAT_PBM:
        if grid.ndim != 2:
            raise ParameterError("PBM stores 2D grids only")
        payload = _write_pbm(grid.data)
    elif fmt == FORMAT_VOX:
        if grid.ndim != 3:
            raise ParameterError("VOX stores 3D grids only")
        payload = _write_vox(grid.data)
    else:
        raise ParameterError(f"unknown grid format {fmt!r}")
    try:
        with open(path, "wb") as fh:
            fh.write(payload)
    except OSError as exc:
        raise CpmaIOError(str(exc)) from exc


def foreground_points(grid):
    """Foreground cell coordinates as an (K, ndim) int64 array.

    Rows are sorted in row-major order (y, x) / (z, y, x).
    """
    return np.argwhere(grid.data).astype(np.int64)
