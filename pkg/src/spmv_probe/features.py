"""Structural feature extraction for sparse matrices.

The five features tie directly to known SpMV bottlenecks: memory footprint
(bandwidth intensity), average row length (ILP), skew of row lengths (load
imbalance), and the two irregularity measures — same-row neighbor count and
cross-row similarity — which proxy spatial and temporal locality on the x
vector. A scaled row-bandwidth figure is carried along because the generator
steers placement with it.
"""

from dataclasses import dataclass, fields

import numpy as np
from numba import njit

from .errors import EmptyMatrixError
from .formats import CsrMatrix, csr_footprint_bytes


@dataclass(frozen=True)
class FeatureVector:
    """Measured features of one matrix, in fixed serialization order."""

    mem_footprint_mb: float
    avg_nz_row: float
    std_nz_row: float
    skew_coeff: float
    cross_row_sim: float
    avg_num_neigh: float
    bw_scaled: float
    nr_rows: int
    nr_cols: int
    nnz: int

    def to_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}

    @staticmethod
    def field_names() -> list[str]:
        return [f.name for f in fields(FeatureVector)]


def skew_coefficient(row_lengths: np.ndarray) -> float:
    """(max - mean) / mean of the per-row entry counts.

    A value of 1 means the longest row is twice the average; balanced
    matrices sit near 0, unbalanced ones in the hundreds or thousands.
    """
    lengths = np.asarray(row_lengths, dtype=np.int64)
    if lengths.size == 0:
        raise EmptyMatrixError("skew coefficient needs at least one row")
    avg = lengths.mean()
    if avg <= 0:
        raise EmptyMatrixError("skew coefficient is undefined for an empty matrix")
    return float((lengths.max() - avg) / avg)


def avg_num_neighbors(m: CsrMatrix) -> float:
    """Mean, over stored entries, of same-row entries at column distance 1.

    Each entry sees at most one neighbor on each side, so the result lies in
    [0, 2]; it measures same-row clustering.
    """
    if m.nnz == 0:
        raise EmptyMatrixError("neighbor count is undefined for an empty matrix")
    cols = m.col_idx.astype(np.int64)
    adjacent = cols[1:] == cols[:-1] + 1
    # Pairs straddling a row boundary are not neighbors.
    starts = m.row_ptr[1:-1].astype(np.int64)
    starts = starts[(starts > 0) & (starts < m.nnz)]
    adjacent[starts - 1] = False
    # Each adjacent pair gives both of its entries one neighbor.
    return float(2.0 * np.count_nonzero(adjacent) / m.nnz)


@njit(cache=True)
def _cross_row_matched(row_ptr, col_idx, nr_rows):
    """Per matched-fraction sums for rows that have a successor row."""
    total = 0.0
    rows_counted = 0
    for r in range(nr_rows - 1):
        lo = np.int64(row_ptr[r])
        hi = np.int64(row_ptr[r + 1])
        if hi == lo:
            continue
        nlo = np.int64(row_ptr[r + 1])
        nhi = np.int64(row_ptr[r + 2])
        matched = 0
        j = nlo
        for k in range(lo, hi):
            c = np.int64(col_idx[k])
            while j < nhi and np.int64(col_idx[j]) < c - 1:
                j += 1
            if j < nhi and np.int64(col_idx[j]) <= c + 1:
                matched += 1
        total += matched / (hi - lo)
        rows_counted += 1
    return total, rows_counted


def cross_row_similarity(m: CsrMatrix) -> float:
    """Average fraction of a row's entries with a next-row entry at column
    distance <= 1 (same column or one of the adjacent ones).

    Averaged over non-empty rows that have a successor row; the final row is
    excluded rather than counted as zero.
    """
    if m.nnz == 0:
        raise EmptyMatrixError("cross-row similarity is undefined for an empty matrix")
    if m.nr_rows < 2:
        raise EmptyMatrixError("cross-row similarity needs at least two rows")
    total, rows = _cross_row_matched(m.row_ptr, m.col_idx, m.nr_rows)
    if rows == 0:
        raise EmptyMatrixError("no non-final row holds any entries")
    return float(total / rows)


def bandwidth_scaled(m: CsrMatrix) -> float:
    """Mean per-row column extent as a fraction of the column count."""
    if m.nnz == 0:
        raise EmptyMatrixError("bandwidth is undefined for an empty matrix")
    ptr = m.row_ptr.astype(np.int64)
    lengths = ptr[1:] - ptr[:-1]
    nonempty = lengths > 0
    first = m.col_idx[ptr[:-1][nonempty]].astype(np.int64)
    last = m.col_idx[(ptr[1:][nonempty]) - 1].astype(np.int64)
    extents = last - first + 1
    return float(extents.mean() / m.nr_cols)


def extract_features(m: CsrMatrix) -> FeatureVector:
    """Measure all features of a matrix. Deterministic and pure."""
    lengths = m.row_lengths()
    return FeatureVector(
        mem_footprint_mb=csr_footprint_bytes(m) / 2**20,
        avg_nz_row=float(lengths.mean()) if m.nr_rows else 0.0,
        std_nz_row=float(lengths.std()) if m.nr_rows else 0.0,
        skew_coeff=skew_coefficient(lengths),
        cross_row_sim=cross_row_similarity(m),
        avg_num_neigh=avg_num_neighbors(m),
        bw_scaled=bandwidth_scaled(m),
        nr_rows=m.nr_rows,
        nr_cols=m.nr_cols,
        nnz=m.nnz,
    )
