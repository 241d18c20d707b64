"""Artificial sparse matrix generation over a five-feature space.

A matrix is produced in two stages. First a per-row entry-count plan is
drawn: a deterministic exponentially decreasing block supplies the requested
skew (starting at the maximum row length the skew equation implies), and the
remaining rows draw from a normal distribution whose mean is recomputed so
the combined average matches the request exactly. Then columns are placed
row by row: whole runs of the previous row are duplicated with probability
``cross_row_sim``, the remaining budget is filled by uniform draws inside a
bandwidth-confined window around the scaled diagonal, and each fresh draw
grows into a contiguous run by Bernoulli trials with success
``avg_num_neigh / 2`` (a run of expected length L yields 2(L-1)/L neighbors
per element, so this hits the requested neighbor count).

All randomness is counter-based on the seed, so identical parameters give
bit-identical matrices.
"""

import hashlib
import math
from dataclasses import dataclass, fields, replace

import numpy as np
from numba import njit

from .errors import InfeasibleError, ParseError
from .formats import MAX_NNZ, CsrMatrix, footprint_bytes_for
from .rng import GOLDEN, derive_seed, mix64_jit, permutation, stream_normal, stream_unit

#: Fraction of rows the exponential skew block may span at most.
DEFAULT_DECAY_FRACTION = 0.1


@dataclass(frozen=True)
class GenParams:
    """One point in the generator's feature space."""

    nr_rows: int
    nr_cols: int
    avg_nz_row: float
    std_nz_row: float = 0.0
    distribution: str = "normal"
    skew_coef: float = 0.0
    bw_scaled: float = 1.0
    cross_row_sim: float = 0.0
    avg_num_neigh: float = 0.0
    seed: int = 0
    shuffle_rows: bool = False

    def to_kv(self) -> str:
        """Flat key=value form used by the CLI and sweep manifests."""
        parts = []
        for f in fields(self):
            v = getattr(self, f.name)
            if isinstance(v, bool):
                v = int(v)
            parts.append(f"{f.name}={v}")
        return " ".join(parts)

    @classmethod
    def from_kv(cls, text: str) -> "GenParams":
        kv = {}
        for token in text.split():
            if "=" not in token:
                raise ParseError(f"expected key=value, got {token!r}")
            k, v = token.split("=", 1)
            kv[k] = v
        try:
            return cls(
                nr_rows=int(kv["nr_rows"]),
                nr_cols=int(kv["nr_cols"]),
                avg_nz_row=float(kv["avg_nz_row"]),
                std_nz_row=float(kv.get("std_nz_row", 0.0)),
                distribution=kv.get("distribution", "normal"),
                skew_coef=float(kv.get("skew_coef", 0.0)),
                bw_scaled=float(kv.get("bw_scaled", 1.0)),
                cross_row_sim=float(kv.get("cross_row_sim", 0.0)),
                avg_num_neigh=float(kv.get("avg_num_neigh", 0.0)),
                seed=int(kv.get("seed", 0)),
                shuffle_rows=bool(int(kv.get("shuffle_rows", 0))),
            )
        except (KeyError, ValueError) as exc:
            raise ParseError(f"bad GenParams text: {exc}") from exc

    def key(self) -> str:
        """Stable content hash, used as matrix id and resume key."""
        return hashlib.sha1(self.to_kv().encode()).hexdigest()[:16]


@dataclass(frozen=True)
class RowPlan:
    """Target entry count per row."""

    targets: np.ndarray  # int64

    @property
    def total(self) -> int:
        return int(self.targets.sum())


def _round_half_up(x: float) -> int:
    return int(math.floor(x + 0.5))


def plan_dimensions(footprint_mb: float, avg_nz_row: float) -> tuple[int, int]:
    """Square dimensions whose CSR footprint matches the request.

    Inverts footprint = (12*avg + 4)*n + 4 for n (the trailing 4 bytes are
    noise at any realistic size).
    """
    if avg_nz_row < 1:
        raise InfeasibleError("avg_nz_row must be at least 1")
    n = _round_half_up(footprint_mb * 2**20 / (12.0 * avg_nz_row + 4.0))
    if n < 1:
        raise InfeasibleError(
            f"footprint {footprint_mb} MB is below one row at {avg_nz_row} nnz/row"
        )
    if avg_nz_row > n:
        raise InfeasibleError(
            f"avg_nz_row {avg_nz_row} exceeds the {n} columns implied by the footprint"
        )
    return n, n


def _window_cap(p: GenParams) -> int:
    return max(1, int(math.floor(p.bw_scaled * p.nr_cols)))


def _window_target(p: GenParams) -> int:
    return max(1, _round_half_up(p.bw_scaled * p.nr_cols))


def _max_row_target(p: GenParams) -> int:
    n = p.nr_rows
    total = _round_half_up(p.avg_nz_row * n)
    forced = -(-total // n) if n else 1  # ceil(total / n)
    return max(_round_half_up(p.avg_nz_row * (1.0 + p.skew_coef)), forced)


def check_feasibility(p: GenParams) -> str | None:
    """Return None if p can be generated, else the reason it cannot."""
    if p.distribution != "normal":
        return f"unsupported distribution {p.distribution!r}"
    if p.nr_rows < 2 or p.nr_cols < 1:
        return "matrix needs at least 2 rows and 1 column"
    if p.avg_nz_row < 1:
        return "avg_nz_row below 1"
    if p.avg_nz_row > p.nr_cols:
        return "avg_nz_row exceeds nr_cols"
    if p.std_nz_row < 0 or p.skew_coef < 0:
        return "negative std_nz_row or skew_coef"
    if not 0 < p.bw_scaled <= 1:
        return "bw_scaled outside (0, 1]"
    if not 0 <= p.cross_row_sim <= 1:
        return "cross_row_sim outside [0, 1]"
    if not 0 <= p.avg_num_neigh <= 2:
        return "avg_num_neigh outside [0, 2]"
    total = _round_half_up(p.avg_nz_row * p.nr_rows)
    if total > MAX_NNZ:
        return "nnz exceeds 4-byte index range"
    max_row = _max_row_target(p)
    cap = _window_cap(p)
    if max_row > cap:
        return (
            f"longest row ({max_row}) exceeds the bandwidth window ({cap}): "
            "bw_scaled*nr_cols must cover avg_nz_row*(skew_coef+1)"
        )
    if total < max_row:
        return "too few rows to absorb the requested skew"
    return None


def _solve_block(n: int, total: int, max_row: int, block_len: int):
    """Exponential block values and the bulk mean that keep the grand mean.

    Finds the decay ratio r such that the block (max_row * r^i, i < K) plus
    (n - K) bulk rows at level max_row * r^K sums to ``total``; the left
    side is strictly increasing in r, so bisection applies.
    """
    if block_len == 1:
        mu = (total - max_row) / (n - 1)
        return np.array([max_row], dtype=np.int64), mu

    def mass(r: float) -> float:
        k = float(block_len)
        if r >= 1.0:
            return n * float(max_row)
        s = max_row * (1.0 - r**k) / (1.0 - r)
        return s + (n - k) * max_row * r**k

    lo, hi = 0.0, 1.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mass(mid) < total:
            lo = mid
        else:
            hi = mid
    r = 0.5 * (lo + hi)
    i = np.arange(block_len, dtype=np.float64)
    block = np.floor(max_row * r**i + 0.5).astype(np.int64)
    block[0] = max_row
    block = np.maximum(block, 1)
    mu = max_row * r**block_len
    return block, mu


def _profile_shape(
    p: GenParams, decay_fraction: float = DEFAULT_DECAY_FRACTION
) -> tuple[np.ndarray, float]:
    """Deterministic part of the row plan: skew block and bulk mean."""
    n = p.nr_rows
    total = _round_half_up(p.avg_nz_row * n)
    max_row = _max_row_target(p)
    forced = -(-total // n)
    if p.skew_coef <= 0 or max_row <= forced:
        return np.empty(0, dtype=np.int64), total / n
    block_len = min(max(1, _round_half_up(decay_fraction * n)), n - 1)
    while True:
        block, mu = _solve_block(n, total, max_row, block_len)
        if mu >= 1.0 or block_len == 1:
            break
        block_len = max(1, block_len // 2)
    if mu < 1.0:
        raise InfeasibleError(
            "skew unreachable: the exponential block leaves less than one "
            "entry per remaining row"
        )
    return block, mu


def row_nnz_profile(
    p: GenParams, decay_fraction: float = DEFAULT_DECAY_FRACTION
) -> RowPlan:
    """Per-row entry targets matching the requested mean, std and skew."""
    reason = check_feasibility(p)
    if reason:
        raise InfeasibleError(reason)
    n = p.nr_rows
    total = _round_half_up(p.avg_nz_row * n)
    upper = min(_window_cap(p), _max_row_target(p))
    block, mu = _profile_shape(p, decay_fraction)
    k = block.shape[0]

    bulk_n = n - k
    if p.std_nz_row > 0:
        noise = stream_normal(derive_seed(p.seed, 11), 0, bulk_n)
        bulk = np.floor(mu + p.std_nz_row * noise + 0.5).astype(np.int64)
    else:
        bulk = np.full(bulk_n, _round_half_up(mu), dtype=np.int64)
    np.clip(bulk, 1, upper, out=bulk)

    # Rounding and clamping drift the total; nudge bulk rows until the grand
    # mean is exact. The block is left untouched to keep max and monotonicity.
    delta = total - int(block.sum()) - int(bulk.sum())
    pass_no = 0
    while delta != 0:
        if delta > 0:
            room = np.nonzero(bulk < upper)[0]
        else:
            room = np.nonzero(bulk > 1)[0]
        if room.size == 0:
            raise InfeasibleError("cannot reconcile row plan with requested mean")
        order = permutation(derive_seed(p.seed, 13, pass_no), room.size)
        take = min(abs(delta), room.size)
        bulk[room[order[:take]]] += 1 if delta > 0 else -1
        delta -= take if delta > 0 else -take
        pass_no += 1

    targets = np.concatenate([block, bulk]) if k else bulk
    if p.shuffle_rows:
        targets = targets[permutation(derive_seed(p.seed, 17), n)]
    return RowPlan(targets)


@njit(cache=True)
def _pairs_target(budget, neigh):
    """Adjacent pairs a row of this size needs to measure ``neigh``.

    Each same-column-distance-1 pair gives both its members one neighbor,
    so neigh = 2 * pairs / budget; capped at the contiguous-row maximum.
    """
    t = int(neigh * budget / 2.0 + 0.5)
    if t > budget - 1:
        t = budget - 1
    return t if t > 0 else 0


@njit(cache=True)
def _runs_for(budget, neigh):
    r = budget - _pairs_target(budget, neigh)
    return r if r >= 1 else 1


@njit(cache=True)
def _draw_width(budget, w_target, neigh, nr_cols):
    """Window width whose expected placement extent is the target width.

    For R independently placed runs, the expected span of R uniform
    positions is (R-1)(W+1)/(R+1), extended by about one run length; the
    width is widened so that span lands on w_target.
    """
    runs = _runs_for(budget, neigh)
    w = w_target
    if runs >= 2:
        need = int((w_target - budget / runs) * (runs + 1.0) / (runs - 1.0)) + 1
        if need > w:
            w = need
    if w > nr_cols:
        w = nr_cols
    if w < budget:
        w = budget
    return w


@njit(cache=True)
def _place_rows(targets, nr_rows, nr_cols, w_target, neigh, crs, seed, col_out, row_ptr):
    occ = np.zeros(nr_cols, dtype=np.uint8)
    max_b = 1
    for r in range(nr_rows):
        if targets[r] > max_b:
            max_b = targets[r]
    buf = np.empty(max_b, dtype=np.int64)
    two53 = 2.0**-53
    out = 0
    prev_lo = 0
    prev_hi = 0
    carry = 0.0  # matrix-level pair deficit rolled into later rows
    for r in range(nr_rows):
        b = targets[r]
        state = mix64_jit(np.uint64(seed) ^ (np.uint64(r) + np.uint64(1)))
        w_draw = _draw_width(b, w_target, neigh, nr_cols)
        center = (2 * r * nr_cols + nr_rows) // (2 * nr_rows)
        lo = center - w_draw // 2
        if lo < 0:
            lo = 0
        if lo > nr_cols - w_draw:
            lo = nr_cols - w_draw
        hi = lo + w_draw

        count = 0
        pairs = 0
        true_target = neigh * b / 2.0
        boost = carry
        if boost > (b - 1) - true_target:
            boost = (b - 1) - true_target
        if boost < -true_target:
            boost = -true_target
        want = int(true_target + boost + 0.5)
        if want > b - 1:
            want = b - 1
        if want < 0:
            want = 0
        runs_t = b - want

        # Duplicate runs of the previous row: copied clustering keeps the
        # matched fraction tracking crs. Once the row's pair budget is
        # spent, elements that would extend a copied pair are skipped; the
        # skipped original still sits at distance 1 from the previous copy,
        # so the match survives while inherited pairs stop compounding.
        i = prev_lo
        while i < prev_hi and count < b:
            j = i + 1
            while j < prev_hi and col_out[j] == col_out[j - 1] + 1:
                j += 1
            state += GOLDEN
            if ((mix64_jit(state) >> np.uint64(11)) * two53) < crs:
                t = i
                while t < j and count < b:
                    c = col_out[t]
                    if lo <= c < hi and occ[c] == 0:
                        gain = 0
                        if c > 0 and occ[c - 1] == 1:
                            gain += 1
                        if c + 1 < nr_cols and occ[c + 1] == 1:
                            gain += 1
                        if gain > 0 and pairs >= want:
                            t += 1
                            continue
                        pairs += gain
                        occ[c] = 1
                        buf[count] = c
                        count += 1
                    t += 1
            i = j

        # Fill the remaining budget, steering the row toward its adjacent
        # pair target (drives avg_num_neigh) and its run-count target
        # (drives the extent, hence bw_scaled). Each step either drops a
        # fresh uniform seed (new run) or extends an existing run's end;
        # fractional pair debt is carried into later rows, bounded so the
        # controller cannot wind up and flip whole rows.
        while count < b:
            c = np.int64(-1)
            m = b - count
            deficit = want - pairs
            do_seed = deficit <= 0 or (count - pairs < runs_t and m - 1 >= deficit)
            if not do_seed and count > 0:
                # Extend: walk outward from a random element to its run end.
                for _ in range(8):
                    state += GOLDEN
                    anchor = buf[np.int64(mix64_jit(state) % np.uint64(count))]
                    state += GOLDEN
                    step = np.int64(1) if (mix64_jit(state) & np.uint64(1)) else np.int64(-1)
                    probe = anchor + step
                    while lo <= probe < hi and occ[probe] == 1:
                        probe += step
                    if lo <= probe < hi and occ[probe] == 0:
                        c = probe
                        break
            if c < 0:
                for _ in range(100):
                    state += GOLDEN
                    cand = lo + np.int64(mix64_jit(state) % np.uint64(w_draw))
                    if occ[cand] == 0:
                        c = cand
                        break
            if c < 0:
                # Window nearly full: take the first free slot after a
                # random start so the fill stays unbiased enough.
                state += GOLDEN
                start = np.int64(mix64_jit(state) % np.uint64(w_draw))
                for off in range(w_draw):
                    probe = lo + (start + off) % w_draw
                    if occ[probe] == 0:
                        c = probe
                        break
            if c > 0 and occ[c - 1] == 1:
                pairs += 1
            if c + 1 < nr_cols and occ[c + 1] == 1:
                pairs += 1
            occ[c] = 1
            buf[count] = c
            count += 1

        carry += true_target - pairs
        limit = true_target if true_target > 2.0 else 2.0
        if carry > limit:
            carry = limit
        if carry < -limit:
            carry = -limit
        row = np.sort(buf[:count])
        for t in range(count):
            col_out[out + t] = row[t]
            occ[row[t]] = 0
        row_ptr[r + 1] = out + count
        prev_lo = out
        prev_hi = out + count
        out += count


def generate(
    p: GenParams, decay_fraction: float = DEFAULT_DECAY_FRACTION
) -> CsrMatrix:
    """Generate the matrix for p. Pure function of p (seed included)."""
    reason = check_feasibility(p)
    if reason:
        raise InfeasibleError(reason)
    plan = row_nnz_profile(p, decay_fraction)
    nnz = plan.total
    col_out = np.empty(nnz, dtype=np.int64)
    row_ptr = np.zeros(p.nr_rows + 1, dtype=np.int64)
    _place_rows(
        plan.targets,
        p.nr_rows,
        p.nr_cols,
        _window_target(p),
        p.avg_num_neigh,
        p.cross_row_sim,
        np.uint64(derive_seed(p.seed, 23)),
        col_out,
        row_ptr,
    )
    values = 1.0 - stream_unit(derive_seed(p.seed, 29), 0, nnz)
    return CsrMatrix(p.nr_rows, p.nr_cols, row_ptr, col_out, values)


# ---------------------------------------------------------------------------
# Fidelity attainability
# ---------------------------------------------------------------------------

#: Tolerances the generated features are held to (absolute unless noted).
FIDELITY_TOLERANCES = {
    "avg_nz_row": 0.05,  # relative
    "mem_footprint_mb": 0.10,  # relative
    "skew_coeff": 0.20,  # relative; 0.05 absolute at skew 0
    "cross_row_sim": 0.10,
    "avg_num_neigh": 0.15,
    "bw_scaled": 0.10,
}

_BW_MARGIN = 0.03
_NEIGH_MARGIN = 0.05
_CRS_MARGIN = 0.03


def _class_rows(p: GenParams, decay_fraction: float):
    """Row-length classes of the deterministic plan as (lengths, counts).

    The exponential block is compressed by value so the estimator stays
    cheap even when the block spans millions of rows; the bulk is one class
    at the recomputed mean. The bulk class comes last.
    """
    block, mu = _profile_shape(p, decay_fraction)
    if block.shape[0]:
        values, counts = np.unique(block, return_counts=True)
        values = values[::-1].astype(np.float64)
        counts = counts[::-1].astype(np.float64)
    else:
        values = np.empty(0)
        counts = np.empty(0)
    bulk_n = p.nr_rows - block.shape[0]
    if bulk_n > 0:
        values = np.append(values, max(1.0, mu))
        counts = np.append(counts, float(bulk_n))
    return values, counts


def fidelity_headroom(
    p: GenParams, decay_fraction: float = DEFAULT_DECAY_FRACTION
) -> str | None:
    """Whether the irregularity/bandwidth targets are physically reachable.

    A parameter point can be generatable yet unable to meet the fidelity
    tolerances: near-dense windows force neighbors and similarity up, and a
    row shorter than one run cannot span its window. Returns None when all
    tolerances are expected to hold, else the blocking feature.
    """
    reason = check_feasibility(p)
    if reason:
        return reason
    neigh = p.avg_num_neigh
    w_target = _window_target(p)
    b, m = _class_rows(p, decay_fraction)
    n_rows = m.sum()
    n_el = (b * m).sum()

    crs = p.cross_row_sim
    # Mirrors _pairs_target/_runs_for/_draw_width (the jitted scalar forms
    # used during placement), vectorized over the row-length classes.
    pairs_t = np.minimum(np.floor(neigh * b / 2.0 + 0.5), b - 1).clip(min=0)
    runs = np.maximum(b - pairs_t, 1.0)
    need = np.floor((w_target - b / runs) * (runs + 1.0) / (runs - 1.0 + 1e-12)) + 1
    w_draw = np.where(runs >= 2, np.maximum(w_target, need), w_target)
    w_draw = np.maximum(np.minimum(w_draw, p.nr_cols), b)
    ext = np.where(
        runs < 2,
        np.minimum(b, w_draw),
        np.minimum(w_draw, (runs - 1) * (w_draw + 1) / (runs + 1) + b / runs),
    )
    # Expected per-element neighbors for rows of each length: the target
    # clamped between the accidental floor (uniform placement density;
    # dashed duplication suppresses most compounding, but needs room for a
    # spacing-2 comb, so the credit fades out as density approaches half)
    # and the ceiling of a fully contiguous row.
    density = b / w_draw
    eff = ((0.45 - density) / 0.45).clip(0.0, 1.0)
    floor_c = 2.0 * density * (1.0 - 0.8 * crs * eff)
    pigeon = np.where(density > 0.5, 2.0 * (2.0 - 1.0 / density), 0.0)
    floor_c = np.maximum(floor_c, pigeon)
    ceil_c = np.where(b > 1.0, 2.0 * (b - 1.0) / b, 0.0)
    exp_c = np.minimum(np.maximum(neigh, floor_c), ceil_c)
    exp_pairs = float((exp_c * b * m).sum())
    base_crs = float((-np.expm1(-3.0 * b / w_draw) * m).sum())
    bulk_runs = float(runs[-1])  # last class is the bulk

    est_bw = float((ext * m).sum()) / n_rows / p.nr_cols
    # Runs are reborn at rate (1-crs) * runs per row; well below one per
    # row the strand population drifts through merge/collapse transients
    # and the realized extent wobbles short of the ideal-span estimate.
    rebirth = (1.0 - crs) * bulk_runs
    bw_risk = p.bw_scaled * 0.2 * max(0.0, 1.0 - rebirth)
    tol = FIDELITY_TOLERANCES
    if abs(est_bw - p.bw_scaled) + bw_risk > tol["bw_scaled"] - _BW_MARGIN:
        return (
            f"bw_scaled unattainable: expected extent fraction {est_bw:.3f} "
            f"(risk {bw_risk:.3f}) vs requested {p.bw_scaled}"
        )
    # Run churn at high crs starves pair repairs; the loss scales with the
    # run-length fraction of a row (empirically calibrated).
    neigh_risk = neigh * 0.12 * max(0.0, 1.0 - rebirth) * math.sqrt(1.0 / max(bulk_runs, 1))
    est_neigh = exp_pairs / n_el
    if abs(est_neigh - p.avg_num_neigh) + neigh_risk > tol["avg_num_neigh"] - _NEIGH_MARGIN:
        return (
            f"avg_num_neigh unattainable: expected value {est_neigh:.3f} "
            f"(churn risk {neigh_risk:.3f}) vs requested {p.avg_num_neigh}"
        )
    floor_crs = (1.0 - crs) * base_crs / n_rows
    if floor_crs > tol["cross_row_sim"] - _CRS_MARGIN:
        return (
            f"cross_row_sim unattainable: accidental-match floor adds "
            f"{floor_crs:.3f} to requested {crs}"
        )
    return None


def fidelity_errors(p: GenParams, measured) -> dict[str, float]:
    """Tolerance-scaled errors of measured features; <= 1 means within."""
    out = {}
    total = _round_half_up(p.avg_nz_row * p.nr_rows)
    req_footprint = footprint_bytes_for(p.nr_rows, total) / 2**20
    out["avg_nz_row"] = abs(measured.avg_nz_row - p.avg_nz_row) / (
        p.avg_nz_row * FIDELITY_TOLERANCES["avg_nz_row"]
    )
    out["mem_footprint_mb"] = abs(measured.mem_footprint_mb - req_footprint) / (
        req_footprint * FIDELITY_TOLERANCES["mem_footprint_mb"]
    )
    if p.skew_coef == 0:
        out["skew_coeff"] = abs(measured.skew_coeff - 0.0) / 0.05
    else:
        out["skew_coeff"] = abs(measured.skew_coeff - p.skew_coef) / (
            p.skew_coef * FIDELITY_TOLERANCES["skew_coeff"]
        )
    out["cross_row_sim"] = (
        abs(measured.cross_row_sim - p.cross_row_sim)
        / FIDELITY_TOLERANCES["cross_row_sim"]
    )
    out["avg_num_neigh"] = (
        abs(measured.avg_num_neigh - p.avg_num_neigh)
        / FIDELITY_TOLERANCES["avg_num_neigh"]
    )
    out["bw_scaled"] = (
        abs(measured.bw_scaled - p.bw_scaled) / FIDELITY_TOLERANCES["bw_scaled"]
    )
    return out


def fidelity_ok(p: GenParams, measured) -> bool:
    return all(v <= 1.0 for v in fidelity_errors(p, measured).values())


# ---------------------------------------------------------------------------
# Parameter grid
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GridConfig:
    """Axes of the sweep grid; defaults reproduce the medium dataset."""

    footprint_ranges_mb: tuple = ((4.0, 32.0), (32.0, 512.0), (512.0, 2048.0))
    footprint_samples: int = 5
    avg_nz_row: tuple = (5.0, 10.0, 20.0, 50.0, 100.0, 500.0)
    skew_coef: tuple = (0.0, 100.0, 1000.0, 10000.0)
    cross_row_sim: tuple = (0.05, 0.5, 0.95)
    avg_num_neigh: tuple = (0.05, 0.5, 0.95, 1.4, 1.9)
    bw_scaled: tuple = (0.05, 0.3, 0.6)
    std_nz_row: float = 0.0
    master_seed: int = 20240
    shuffle_rows: bool = False


PRESETS = {
    "small": GridConfig(footprint_samples=1, avg_num_neigh=(0.05, 0.95, 1.9)),
    "medium": GridConfig(),
    "large": GridConfig(cross_row_sim=(0.05, 0.275, 0.5, 0.725, 0.95)),
}


@dataclass(frozen=True)
class GridCell:
    """One grid entry, flagged rather than dropped when it cannot be met."""

    params: GenParams
    footprint_mb: float
    infeasible: str | None = None
    unattainable: str | None = None

    @property
    def usable(self) -> bool:
        return self.infeasible is None and self.unattainable is None


def grid_footprints(cfg: GridConfig) -> list[float]:
    """Log-uniform footprint samples, a fixed set per range."""
    out = []
    for ridx, (lo, hi) in enumerate(cfg.footprint_ranges_mb):
        u = stream_unit(derive_seed(cfg.master_seed, 3, ridx), 0, cfg.footprint_samples)
        out.extend(float(lo * (hi / lo) ** ui) for ui in u)
    return out


def sweep_grid(cfg: GridConfig) -> list[GridCell]:
    """Cartesian product of all axes; one GridCell per combination.

    Infeasible or tolerance-unattainable cells are emitted flagged, never
    silently dropped, so the grid size is exactly the product of the axis
    lengths.
    """
    cells = []
    footprints = grid_footprints(cfg)
    idx = 0
    for fp in footprints:
        for avg in cfg.avg_nz_row:
            for skew in cfg.skew_coef:
                for crs in cfg.cross_row_sim:
                    for neigh in cfg.avg_num_neigh:
                        for bw in cfg.bw_scaled:
                            seed = derive_seed(cfg.master_seed, 7, idx)
                            idx += 1
                            try:
                                n, _ = plan_dimensions(fp, avg)
                            except InfeasibleError as exc:
                                stub = GenParams(
                                    nr_rows=0, nr_cols=0, avg_nz_row=avg,
                                    std_nz_row=cfg.std_nz_row, skew_coef=skew,
                                    bw_scaled=bw, cross_row_sim=crs,
                                    avg_num_neigh=neigh, seed=seed,
                                    shuffle_rows=cfg.shuffle_rows,
                                )
                                cells.append(GridCell(stub, fp, infeasible=str(exc)))
                                continue
                            p = GenParams(
                                nr_rows=n, nr_cols=n, avg_nz_row=avg,
                                std_nz_row=cfg.std_nz_row, skew_coef=skew,
                                bw_scaled=bw, cross_row_sim=crs,
                                avg_num_neigh=neigh, seed=seed,
                                shuffle_rows=cfg.shuffle_rows,
                            )
                            hard = check_feasibility(p)
                            soft = None if hard else fidelity_headroom(p)
                            cells.append(
                                GridCell(p, fp, infeasible=hard, unattainable=soft)
                            )
    return cells
