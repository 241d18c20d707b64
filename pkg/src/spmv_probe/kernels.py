"""Double-precision SpMV kernels (y = A*x) for every storage format.

Kernels take a worker count and decompose rows (or row-aligned element
chunks) internally so that output writes stay disjoint; per row the
summation order is fixed, which makes results bit-identical across worker
counts. The compensated-summation reference is the correctness oracle for
everything else.
"""

from typing import NamedTuple

import numpy as np
from numba import njit, prange

from .errors import DimensionMismatchError
from .formats import CooMatrix, CsrMatrix, EllMatrix, HybMatrix


class RowPartition(NamedTuple):
    """Contiguous row ranges, one per worker: boundaries[w] .. boundaries[w+1]."""

    boundaries: np.ndarray

    @property
    def workers(self) -> int:
        return self.boundaries.shape[0] - 1


def make_even_partition(nr_rows: int, workers: int) -> RowPartition:
    """Split rows into near-equal contiguous ranges."""
    workers = max(1, min(workers, max(nr_rows, 1)))
    bounds = np.linspace(0, nr_rows, workers + 1).round().astype(np.int64)
    return RowPartition(bounds)


def make_balanced_partition(m: CsrMatrix, workers: int) -> RowPartition:
    """Split rows so each range carries ~nnz/workers stored entries.

    The imbalance of any range is bounded by the largest single row.
    """
    workers = max(1, min(workers, max(m.nr_rows, 1)))
    ptr = m.row_ptr.astype(np.int64)
    targets = (np.arange(1, workers) * m.nnz) // workers
    inner = np.searchsorted(ptr, targets, side="left").astype(np.int64)
    bounds = np.concatenate(([0], inner, [m.nr_rows]))
    return RowPartition(np.maximum.accumulate(bounds))


def _check_dims(nr_cols: int, x: np.ndarray):
    if x.shape[0] != nr_cols:
        raise DimensionMismatchError(
            f"x has length {x.shape[0]}, matrix has {nr_cols} columns"
        )


@njit(cache=True, parallel=True)
def _csr_chunks(row_ptr, col_idx, values, x, bounds, y):
    for w in prange(bounds.shape[0] - 1):
        for r in range(bounds[w], bounds[w + 1]):
            lo = np.int64(row_ptr[r])
            hi = np.int64(row_ptr[r + 1])
            acc = 0.0
            for k in range(lo, hi):
                acc += values[k] * x[col_idx[k]]
            y[r] = acc


@njit(cache=True, parallel=True)
def _csr_reference(row_ptr, col_idx, values, x, y):
    # Neumaier compensation: error-free two-sum per accumulation step.
    for r in prange(y.shape[0]):
        lo = np.int64(row_ptr[r])
        hi = np.int64(row_ptr[r + 1])
        s = 0.0
        c = 0.0
        for k in range(lo, hi):
            p = values[k] * x[col_idx[k]]
            t = s + p
            if abs(s) >= abs(p):
                c += (s - t) + p
            else:
                c += (p - t) + s
            s = t
        y[r] = s + c


@njit(cache=True, parallel=True)
def _coo_chunks(row_idx, col_idx, values, x, bounds, y):
    for w in prange(bounds.shape[0] - 1):
        for k in range(bounds[w], bounds[w + 1]):
            y[row_idx[k]] += values[k] * x[col_idx[k]]


@njit(cache=True, parallel=True)
def _ell_chunks(col_idx, values, x, bounds, y):
    width = values.shape[1]
    for w in prange(bounds.shape[0] - 1):
        for r in range(bounds[w], bounds[w + 1]):
            acc = 0.0
            for j in range(width):
                acc += values[r, j] * x[col_idx[r, j]]
            y[r] = acc


def spmv_reference(m: CsrMatrix, x: np.ndarray) -> np.ndarray:
    """Compensated-summation CSR SpMV, used as the correctness oracle."""
    _check_dims(m.nr_cols, x)
    y = np.zeros(m.nr_rows)
    _csr_reference(m.row_ptr, m.col_idx, m.values, x, y)
    return y


def spmv_csr(
    m: CsrMatrix,
    x: np.ndarray,
    workers: int = 1,
    partition: RowPartition | None = None,
) -> np.ndarray:
    """Row-split CSR SpMV; workers=1 (or a single-range partition) is serial."""
    _check_dims(m.nr_cols, x)
    if partition is None:
        partition = make_even_partition(m.nr_rows, workers)
    y = np.zeros(m.nr_rows)
    _csr_chunks(m.row_ptr, m.col_idx, m.values, x, partition.boundaries, y)
    return y


def spmv_csr_balanced(m: CsrMatrix, x: np.ndarray, workers: int = 1) -> np.ndarray:
    """CSR SpMV with nonzero-balanced (row-resolution) work distribution."""
    return spmv_csr(m, x, partition=make_balanced_partition(m, workers))


def _coo_row_aligned_bounds(m: CooMatrix, workers: int) -> np.ndarray:
    """Element chunk boundaries snapped back to row starts.

    Snapping keeps every row inside a single chunk, so no two workers write
    the same y element; a row longer than nnz/workers serializes that row.
    """
    workers = max(1, workers)
    rows = m.row_idx
    raw = (np.arange(1, workers) * m.nnz) // workers
    if m.nnz:
        snapped = np.searchsorted(rows, rows[raw], side="left")
    else:
        snapped = raw
    bounds = np.concatenate(([0], snapped, [m.nnz])).astype(np.int64)
    return np.maximum.accumulate(bounds)


def spmv_coo(m: CooMatrix, x: np.ndarray, workers: int = 1) -> np.ndarray:
    """COO SpMV over row-aligned element chunks."""
    _check_dims(m.nr_cols, x)
    y = np.zeros(m.nr_rows)
    bounds = _coo_row_aligned_bounds(m, workers)
    _coo_chunks(m.row_idx, m.col_idx, m.values, x, bounds, y)
    return y


def spmv_ell(m: EllMatrix, x: np.ndarray, workers: int = 1) -> np.ndarray:
    """ELL SpMV over the padded dense width.

    Padding cells contribute exactly 0: padded values are 0.0 and padded
    column indices stay in bounds.
    """
    _check_dims(m.nr_cols, x)
    y = np.zeros(m.nr_rows)
    bounds = make_even_partition(m.nr_rows, workers).boundaries
    _ell_chunks(m.col_idx, m.values, x, bounds, y)
    return y


def spmv_hyb(m: HybMatrix, x: np.ndarray, workers: int = 1) -> np.ndarray:
    """HYB SpMV: ELL pass, then COO overflow accumulated on top."""
    _check_dims(m.nr_cols, x)
    y = spmv_ell(m.ell_part, x, workers)
    if m.coo_part.nnz:
        bounds = _coo_row_aligned_bounds(m.coo_part, workers)
        _coo_chunks(
            m.coo_part.row_idx, m.coo_part.col_idx, m.coo_part.values, x, bounds, y
        )
    return y


def spmv_error_scale(m: CsrMatrix, x: np.ndarray) -> np.ndarray:
    """Componentwise error scale: sum_j |a_ij| |x_j| per row."""
    abs_m = CsrMatrix(m.nr_rows, m.nr_cols, m.row_ptr, m.col_idx, np.abs(m.values))
    return spmv_csr(abs_m, np.abs(x))


def max_scaled_error(
    y: np.ndarray, y_ref: np.ndarray, scale: np.ndarray, abs_floor: float = 1e-300
) -> float:
    """Largest |y_i - y_ref_i| / (scale_i + floor) over all components."""
    return float(np.max(np.abs(y - y_ref) / (scale + abs_floor)))
