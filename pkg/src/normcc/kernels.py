"""Kernel backend selection.

Prefers the compiled extension; falls back to the NumPy implementations when
it is not built.  Set NORMCC_PURE=1 to force the fallback (used by the
benchmark to compare backends).
"""

from __future__ import annotations

import os

if os.environ.get("NORMCC_PURE"):
    from normcc import _kernels_py as _impl
else:
    try:
        from normcc import _kernels as _impl  # type: ignore[attr-defined]
    except ImportError:
        from normcc import _kernels_py as _impl

BACKEND: str = _impl.BACKEND

intersect_size = _impl.intersect_size
pair_common_counts = _impl.pair_common_counts
pair_common_counts_masked = _impl.pair_common_counts_masked
row_masked_counts = _impl.row_masked_counts
l_values = _impl.l_values
ball_member_counts = _impl.ball_member_counts
conflict_free = _impl.conflict_free
assign_min_center = _impl.assign_min_center
