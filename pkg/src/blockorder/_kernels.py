"""Hot numeric kernels for nearest-neighbor counting.

The mutual-information estimator spends essentially all of its time finding
per-point k-th neighbor distances and counting marginal neighbors under the
max norm.  Both kernels exist twice: a numba-compiled version and a chunked
pure-numpy version.  Set ``BLOCKORDER_DISABLE_NUMBA=1`` to force the numpy
path.  The two paths are bit-identical (integer counts, and the k-th order
statistic is a well-defined value regardless of the selection algorithm), so
swapping them never changes results, only speed.  ``benchmarks/bench_mi.py``
times the two side by side.
"""

import os

import numpy as np

_FORCE_NUMPY = os.environ.get("BLOCKORDER_DISABLE_NUMBA", "").strip().lower() in {
    "1",
    "true",
    "yes",
    "on",
}

try:
    if _FORCE_NUMPY:
        raise ImportError("numba disabled via BLOCKORDER_DISABLE_NUMBA")
    from numba import njit

    HAS_NUMBA = True
except ImportError:
    HAS_NUMBA = False

# ~32 MB of float64 scratch per chunk in the numpy fallback
_CHUNK_FLOATS = 4_000_000


def _as_points(points):
    out = np.ascontiguousarray(points, dtype=np.float64)
    if out.ndim != 2:
        raise ValueError("points must be a 2-d (n, d) array")
    return out


def _chebyshev_block(block, pts):
    """Pairwise max-norm distances between a row block and all points."""
    dist = np.abs(block[:, None, 0] - pts[None, :, 0])
    for r in range(1, pts.shape[1]):
        np.maximum(dist, np.abs(block[:, None, r] - pts[None, :, r]), out=dist)
    return dist


def kth_neighbor_distance_numpy(points, k):
    """Max-norm distance from each point to its k-th nearest neighbor.

    ``points`` is (n, d); the distance to self (0) occupies rank 0, so the
    k-th neighbor is the element of rank k in the sorted distance row.
    """
    pts = _as_points(points)
    n = pts.shape[0]
    out = np.empty(n, dtype=np.float64)
    step = max(1, _CHUNK_FLOATS // max(n, 1))
    for start in range(0, n, step):
        dist = _chebyshev_block(pts[start : start + step], pts)
        out[start : start + step] = np.partition(dist, k, axis=1)[:, k]
    return out


def count_within_numpy(points, radii):
    """Count, per point, the other points strictly inside its max-norm radius."""
    pts = _as_points(points)
    n = pts.shape[0]
    out = np.empty(n, dtype=np.int64)
    step = max(1, _CHUNK_FLOATS // max(n, 1))
    for start in range(0, n, step):
        block = pts[start : start + step]
        dist = _chebyshev_block(block, pts)
        inside = dist < radii[start : start + step, None]
        # self-distance 0 is always strictly inside a positive radius
        out[start : start + step] = inside.sum(axis=1) - inside[
            np.arange(block.shape[0]), np.arange(start, start + block.shape[0])
        ].astype(np.int64)
    return out


if HAS_NUMBA:

    @njit(cache=True)
    def _kth_neighbor_distance_jit(pts, k):  # pragma: no cover - compiled
        n, d = pts.shape
        out = np.empty(n, dtype=np.float64)
        buf = np.empty(n, dtype=np.float64)
        for i in range(n):
            for j in range(n):
                m = 0.0
                for r in range(d):
                    v = abs(pts[i, r] - pts[j, r])
                    if v > m:
                        m = v
                buf[j] = m
            out[i] = np.partition(buf, k)[k]
        return out

    @njit(cache=True)
    def _count_within_jit(pts, radii):  # pragma: no cover - compiled
        n, d = pts.shape
        out = np.empty(n, dtype=np.int64)
        for i in range(n):
            eps = radii[i]
            c = 0
            for j in range(n):
                if j == i:
                    continue
                m = 0.0
                for r in range(d):
                    v = abs(pts[i, r] - pts[j, r])
                    if v > m:
                        m = v
                        if m >= eps:
                            break
                if m < eps:
                    c += 1
            out[i] = c
        return out

    def kth_neighbor_distance_numba(points, k):
        return _kth_neighbor_distance_jit(_as_points(points), k)

    def count_within_numba(points, radii):
        return _count_within_jit(_as_points(points), np.ascontiguousarray(radii, dtype=np.float64))

    kth_neighbor_distance = kth_neighbor_distance_numba
    count_within = count_within_numba
else:
    kth_neighbor_distance_numba = None
    count_within_numba = None
    kth_neighbor_distance = kth_neighbor_distance_numpy
    count_within = count_within_numpy
