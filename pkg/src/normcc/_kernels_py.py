"""NumPy implementations of the hot kernels.

Same signatures as the compiled extension `normcc._kernels`; selected at
import time by `normcc.kernels` when the extension is unavailable (or when
NORMCC_PURE=1).  All CSR inputs use int64 indptr, int32 indices sorted within
each row, and no duplicate entries.
"""

from __future__ import annotations

import numpy as np

BACKEND = "python"


def _row_of(indptr: np.ndarray) -> np.ndarray:
    n = len(indptr) - 1
    return np.repeat(np.arange(n, dtype=np.int64), np.diff(indptr))


def intersect_size(a: np.ndarray, b: np.ndarray) -> int:
    """|a ∩ b| for sorted duplicate-free 1-d arrays."""
    if len(a) > len(b):
        a, b = b, a
    if len(a) == 0:
        return 0
    pos = np.searchsorted(b, a)
    ok = pos < len(b)
    return int(np.count_nonzero(b[pos[ok]] == a[ok]))


def pair_common_counts(indptr, indices, us, vs) -> np.ndarray:
    """|row(u) ∩ row(v)| for each pair (us[i], vs[i])."""
    out = np.empty(len(us), dtype=np.int64)
    for i in range(len(us)):
        a = indices[indptr[us[i]]:indptr[us[i] + 1]]
        b = indices[indptr[vs[i]]:indptr[vs[i] + 1]]
        out[i] = intersect_size(a, b)
    return out


def pair_common_counts_masked(indptr, indices, us, vs, mask) -> np.ndarray:
    """|row(u) ∩ row(v) ∩ {w: mask[w]}| for each pair."""
    out = np.empty(len(us), dtype=np.int64)
    for i in range(len(us)):
        a = indices[indptr[us[i]]:indptr[us[i] + 1]]
        b = indices[indptr[vs[i]]:indptr[vs[i] + 1]]
        if len(a) > len(b):
            a, b = b, a
        if len(a) == 0:
            out[i] = 0
            continue
        pos = np.searchsorted(b, a)
        ok = pos < len(b)
        hit = a[ok][b[pos[ok]] == a[ok]]
        out[i] = int(mask[hit].sum())
    return out


def row_masked_counts(indptr, indices, mask) -> np.ndarray:
    """Per-row count of entries whose column is in the mask."""
    n = len(indptr) - 1
    return np.bincount(_row_of(indptr), weights=mask[indices].astype(np.float64),
                       minlength=n).astype(np.int64)


def l_values(indptr, indices, vals, active, r) -> np.ndarray:
    """L(w) = r + sum over active v with x_wv <= r of (r - x_wv), for active w.

    Inactive rows get 0.  The leading r is the vertex's own contribution
    (its self distance is 0).
    """
    n = len(indptr) - 1
    row = _row_of(indptr)
    sel = active[row] & active[indices] & (vals <= r)
    out = np.bincount(row[sel], weights=r - vals[sel],
                      minlength=n).astype(np.float64)
    out[active] += r
    out[~active] = 0.0
    return out


def ball_member_counts(indptr, indices, vals, member, radius) -> np.ndarray:
    """For member rows: |{v member: x_wv <= radius}| + 1 (self); else 0."""
    n = len(indptr) - 1
    row = _row_of(indptr)
    sel = member[row] & member[indices] & (vals <= radius)
    cnt = np.bincount(row[sel], minlength=n).astype(np.int64)
    cnt += member.astype(np.int64)
    cnt[~member] = 0
    return cnt


def conflict_free(indptr, indices, vals, sampled, radius) -> np.ndarray:
    """sampled u with no other sampled vertex within the radius."""
    n = len(indptr) - 1
    row = _row_of(indptr)
    sel = sampled[row] & sampled[indices] & (vals <= radius)
    clash = np.bincount(row[sel], minlength=n) > 0
    return sampled & ~clash


def assign_min_center(indptr, indices, vals, active, center, radius) -> np.ndarray:
    """Minimum-id center within the radius of each active vertex, else -1."""
    n = len(indptr) - 1
    row = _row_of(indptr)
    out = np.full(n, n, dtype=np.int64)
    sel = active[row] & center[indices] & (vals <= radius)
    np.minimum.at(out, row[sel], indices[sel].astype(np.int64))
    own = active & center
    idx = np.flatnonzero(own)
    out[idx] = np.minimum(out[idx], idx)
    out[out == n] = -1
    out[~active] = -1
    return out
