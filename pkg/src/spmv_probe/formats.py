"""Sparse matrix storage formats (CSR, COO, ELL, HYB) and conversions.

CSR is the canonical interchange form: everything converts from and back to
it, and all conversions preserve the stored entry set exactly (bit-identical
values). Storage layout is fixed at 4-byte unsigned indices / row pointers
and 8-byte float values, which is also what the footprint accounting counts.
"""

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import CapacityExceededError

INDEX_DTYPE = np.uint32
VALUE_DTYPE = np.float64

#: Matrices needing 2**32 or more stored entries do not fit 4-byte indices.
MAX_NNZ = 2**32 - 1

#: Default ceiling for padded (ELL/HYB) layouts.
DEFAULT_PAD_CEILING_BYTES = 8 << 30


def _as_index_array(a) -> np.ndarray:
    arr = np.ascontiguousarray(a, dtype=INDEX_DTYPE)
    arr.setflags(write=False)
    return arr


def _as_value_array(a) -> np.ndarray:
    arr = np.ascontiguousarray(a, dtype=VALUE_DTYPE)
    arr.setflags(write=False)
    return arr


@dataclass(eq=False)
class CsrMatrix:
    """Compressed sparse row matrix. Immutable after construction."""

    nr_rows: int
    nr_cols: int
    row_ptr: np.ndarray
    col_idx: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        self.row_ptr = _as_index_array(self.row_ptr)
        self.col_idx = _as_index_array(self.col_idx)
        self.values = _as_value_array(self.values)

    @property
    def nnz(self) -> int:
        return self.values.shape[0]

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nr_rows, self.nr_cols)

    def row_lengths(self) -> np.ndarray:
        return np.diff(self.row_ptr).astype(np.int64)


@dataclass(eq=False)
class CooMatrix:
    """Coordinate-format matrix, entries sorted by (row, col)."""

    nr_rows: int
    nr_cols: int
    row_idx: np.ndarray
    col_idx: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        self.row_idx = _as_index_array(self.row_idx)
        self.col_idx = _as_index_array(self.col_idx)
        self.values = _as_value_array(self.values)

    @property
    def nnz(self) -> int:
        return self.values.shape[0]


@dataclass(eq=False)
class EllMatrix:
    """Padded dense-width format: nr_rows x width column/value arrays.

    Padding cells carry value 0.0 and, so padded SpMV never reads x out of
    bounds, the column index of the row's last stored entry (0 for an empty
    row).
    """

    nr_rows: int
    nr_cols: int
    width: int
    col_idx: np.ndarray  # shape (nr_rows, width)
    values: np.ndarray  # shape (nr_rows, width)

    def __post_init__(self):
        self.col_idx = _as_index_array(self.col_idx).reshape(self.nr_rows, self.width)
        self.values = _as_value_array(self.values).reshape(self.nr_rows, self.width)


@dataclass(eq=False)
class HybMatrix:
    """Hybrid split: first k entries of each row in ELL, overflow in COO."""

    ell_part: EllMatrix
    coo_part: CooMatrix
    k: int

    @property
    def nr_rows(self) -> int:
        return self.ell_part.nr_rows

    @property
    def nr_cols(self) -> int:
        return self.ell_part.nr_cols

    @property
    def nnz(self) -> int:
        return int(np.count_nonzero(self.ell_part.values)) + self.coo_part.nnz


class CsrViolation(NamedTuple):
    """Names the first violated CSR invariant and where it was found."""

    invariant: str
    index: int

    def __str__(self):
        return f"{self.invariant} at index {self.index}"


def validate_csr(m: CsrMatrix) -> CsrViolation | None:
    """Check all CsrMatrix invariants; return None if they hold.

    Violations are the return value, not an exception: the first violated
    invariant is reported with its location.
    """
    if m.row_ptr.shape[0] != m.nr_rows + 1:
        return CsrViolation("row_ptr length", m.row_ptr.shape[0])
    if m.col_idx.shape[0] != m.values.shape[0]:
        return CsrViolation("col_idx/values length mismatch", m.col_idx.shape[0])
    if m.nnz > MAX_NNZ:
        return CsrViolation("nnz exceeds 4-byte index range", m.nnz)
    if m.row_ptr[0] != 0:
        return CsrViolation("row_ptr start", 0)
    ptr = m.row_ptr.astype(np.int64)
    steps = np.diff(ptr)
    bad = np.nonzero(steps < 0)[0]
    if bad.size:
        return CsrViolation("row_ptr non-decreasing", int(bad[0]) + 1)
    if ptr[m.nr_rows] != m.nnz:
        return CsrViolation("row_ptr end", m.nr_rows)
    if m.nnz:
        cols = m.col_idx.astype(np.int64)
        oob = np.nonzero(cols >= m.nr_cols)[0]
        if oob.size:
            return CsrViolation("column out of range", int(oob[0]))
        # Strictly increasing within each row: any non-increasing adjacent
        # pair that is not a row boundary is a violation.
        diffs = np.diff(cols)
        nondecr = np.nonzero(diffs <= 0)[0] + 1
        if nondecr.size:
            row_starts = ptr[1:-1]
            bad_pos = np.setdiff1d(nondecr, row_starts, assume_unique=False)
            if bad_pos.size:
                return CsrViolation("columns not strictly increasing", int(bad_pos[0]))
    return None


def csr_footprint_bytes(m: CsrMatrix) -> int:
    """CSR storage size in bytes: 8-byte values, 4-byte indices/pointers."""
    return 12 * m.nnz + 4 * (m.nr_rows + 1)


def footprint_bytes_for(nr_rows: int, nnz: int) -> int:
    """Footprint of a CSR matrix with the given shape, without building it."""
    return 12 * nnz + 4 * (nr_rows + 1)


def csr_to_coo(m: CsrMatrix) -> CooMatrix:
    """Expand the row pointer into explicit row indices."""
    row_idx = np.repeat(
        np.arange(m.nr_rows, dtype=INDEX_DTYPE), m.row_lengths()
    )
    return CooMatrix(m.nr_rows, m.nr_cols, row_idx, m.col_idx.copy(), m.values.copy())


def coo_to_csr(m: CooMatrix) -> CsrMatrix:
    """Compress sorted COO back to CSR (entries must be sorted by row, col)."""
    counts = np.bincount(m.row_idx.astype(np.int64), minlength=m.nr_rows)
    row_ptr = np.zeros(m.nr_rows + 1, dtype=np.int64)
    np.cumsum(counts, out=row_ptr[1:])
    return CsrMatrix(m.nr_rows, m.nr_cols, row_ptr, m.col_idx.copy(), m.values.copy())


def csr_from_triplets(
    nr_rows: int,
    nr_cols: int,
    rows: np.ndarray,
    cols: np.ndarray,
    vals: np.ndarray,
    sum_duplicates: bool = True,
) -> CsrMatrix:
    """Build CSR from unordered triplets, sorting and summing duplicates."""
    rows = np.asarray(rows, dtype=np.int64)
    cols = np.asarray(cols, dtype=np.int64)
    vals = np.asarray(vals, dtype=VALUE_DTYPE)
    order = np.lexsort((cols, rows))
    rows, cols, vals = rows[order], cols[order], vals[order]
    if sum_duplicates and rows.size:
        keep = np.ones(rows.size, dtype=bool)
        keep[1:] = (rows[1:] != rows[:-1]) | (cols[1:] != cols[:-1])
        if not keep.all():
            group = np.cumsum(keep) - 1
            vals = np.bincount(group, weights=vals)
            rows, cols = rows[keep], cols[keep]
    counts = np.bincount(rows, minlength=nr_rows)
    row_ptr = np.zeros(nr_rows + 1, dtype=np.int64)
    np.cumsum(counts, out=row_ptr[1:])
    return CsrMatrix(nr_rows, nr_cols, row_ptr, cols, vals)


def _ell_bytes(nr_rows: int, width: int) -> int:
    # 8-byte value + 4-byte column index per padded cell
    return nr_rows * width * 12


def csr_to_ell(
    m: CsrMatrix, max_bytes: int = DEFAULT_PAD_CEILING_BYTES
) -> EllMatrix:
    """Pad every row out to the longest row's length.

    Raises CapacityExceededError if the padded layout would exceed
    ``max_bytes`` (short rows next to one huge row blow the padding up).
    """
    lengths = m.row_lengths()
    width = int(lengths.max()) if m.nr_rows else 0
    padded = _ell_bytes(m.nr_rows, width)
    if padded > max_bytes:
        raise CapacityExceededError(
            f"ELL padding needs {padded} bytes "
            f"({m.nr_rows} rows x width {width}), ceiling is {max_bytes}"
        )
    return _build_ell(m, lengths, width)


def _build_ell(m: CsrMatrix, lengths: np.ndarray, width: int) -> EllMatrix:
    """Pack the first min(len, width) entries of each row into dense arrays."""
    nr = m.nr_rows
    take = np.minimum(lengths, width)
    # Padding column: the row's last packed column, 0 for empty rows.
    vals = np.zeros((nr, width), dtype=VALUE_DTYPE)
    cols = np.zeros((nr, width), dtype=np.int64)
    if m.nnz and width:
        starts = m.row_ptr[:-1].astype(np.int64)
        lane = np.arange(width, dtype=np.int64)
        mask = lane[None, :] < take[:, None]
        src = starts[:, None] + lane[None, :]
        flat_src = src[mask]
        cols[mask] = m.col_idx[flat_src]
        vals[mask] = m.values[flat_src]
        last = np.zeros(nr, dtype=np.int64)
        nonempty = take > 0
        last[nonempty] = m.col_idx[(starts + take - 1)[nonempty]]
        cols[~mask] = np.broadcast_to(last[:, None], (nr, width))[~mask]
    return EllMatrix(nr, m.nr_cols, width, cols, vals)


def hyb_auto_threshold(m: CsrMatrix) -> int:
    """Average entries per row, rounded up."""
    if m.nr_rows == 0:
        return 0
    return math.ceil(m.nnz / m.nr_rows)


def csr_to_hyb(
    m: CsrMatrix,
    k: int | None = None,
    max_bytes: int = DEFAULT_PAD_CEILING_BYTES,
) -> HybMatrix:
    """Split at threshold k: ELL holds each row's first k entries, COO the rest.

    ``k=None`` selects the automatic threshold (ceil of the average row
    length).
    """
    if k is None:
        k = hyb_auto_threshold(m)
    lengths = m.row_lengths()
    width = int(min(k, lengths.max())) if m.nr_rows and m.nnz else 0
    padded = _ell_bytes(m.nr_rows, width)
    if padded > max_bytes:
        raise CapacityExceededError(
            f"HYB ELL part needs {padded} bytes, ceiling is {max_bytes}"
        )
    ell = _build_ell(m, lengths, width)
    # Overflow entries: positions width.. of each longer row.
    over = lengths > width
    if over.any():
        starts = m.row_ptr[:-1].astype(np.int64)
        extra = (lengths - width)[over]
        rows = np.repeat(np.nonzero(over)[0], extra)
        offsets = np.concatenate([np.arange(width, l) for l in lengths[over]])
        src = np.repeat(starts[over], extra) + offsets
        coo = CooMatrix(m.nr_rows, m.nr_cols, rows, m.col_idx[src], m.values[src])
    else:
        empty = np.empty(0, dtype=INDEX_DTYPE)
        coo = CooMatrix(m.nr_rows, m.nr_cols, empty, empty, np.empty(0))
    return HybMatrix(ell, coo, int(k))


def ell_to_csr(m: EllMatrix) -> CsrMatrix:
    """Drop padding cells (value 0.0) and recompress."""
    mask = m.values != 0.0
    lengths = mask.sum(axis=1)
    row_ptr = np.zeros(m.nr_rows + 1, dtype=np.int64)
    np.cumsum(lengths, out=row_ptr[1:])
    return CsrMatrix(m.nr_rows, m.nr_cols, row_ptr, m.col_idx[mask], m.values[mask])


def hyb_to_csr(m: HybMatrix) -> CsrMatrix:
    """Reassemble the ELL and COO parts into one CSR matrix."""
    ell_csr = ell_to_csr(m.ell_part)
    ell_coo = csr_to_coo(ell_csr)
    rows = np.concatenate([ell_coo.row_idx, m.coo_part.row_idx])
    cols = np.concatenate([ell_coo.col_idx, m.coo_part.col_idx])
    vals = np.concatenate([ell_coo.values, m.coo_part.values])
    return csr_from_triplets(m.nr_rows, m.nr_cols, rows, cols, vals,
                             sum_duplicates=False)


def as_csr(m) -> CsrMatrix:
    """Convert any supported format back to CSR."""
    if isinstance(m, CsrMatrix):
        return m
    if isinstance(m, CooMatrix):
        return coo_to_csr(m)
    if isinstance(m, EllMatrix):
        return ell_to_csr(m)
    if isinstance(m, HybMatrix):
        return hyb_to_csr(m)
    raise TypeError(f"not a sparse matrix: {type(m).__name__}")
