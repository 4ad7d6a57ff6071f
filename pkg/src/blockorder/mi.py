"""Nonparametric mutual information via k-nearest-neighbor counting.

The estimator is the digamma-based neighbor-count form: distances use the
max norm, the k-th neighbor radius is found in the joint space, and marginal
neighbors strictly inside that radius are counted per point:

    MI = psi(k) + psi(n) - mean_i[ psi(nx_i + 1) + psi(ny_i + 1) ]

Every coordinate is scaled to unit variance first, so scores are comparable
across datasets, and a deterministic content-keyed jitter of magnitude 1e-10
breaks distance ties that discrete-valued inputs would otherwise produce.
Keying the jitter to content (not position) makes the estimate bit-identical
under sample reordering, coordinate reordering, and swapping the two
arguments.
"""

from dataclasses import dataclass

import numpy as np
from scipy.special import digamma

from ._kernels import count_within, kth_neighbor_distance
from .errors import DegenerateInputError, InvalidInputError

TIE_JITTER_SCALE = 1e-10

_SALT = np.uint64(0x5851F42D4C957F2D)


@dataclass(frozen=True)
class MiConfig:
    """Neighbor count for the estimator; distances are always max-norm."""

    k: int

    def __post_init__(self):
        if int(self.k) < 1:
            raise InvalidInputError(f"neighbor count must be >= 1, got {self.k}")
        object.__setattr__(self, "k", int(self.k))


def default_k(n: int) -> int:
    """Neighbor count rule used throughout: 5% of the sample size.

    Clamped to [1, n-1].
    """
    return int(min(max(1, round(0.05 * n)), n - 1))


def _splitmix64(x: np.ndarray) -> np.ndarray:
    x = x + np.uint64(0x9E3779B97F4A7C15)
    x = (x ^ (x >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
    x = (x ^ (x >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
    return x ^ (x >> np.uint64(31))


def _tie_jitter(z: np.ndarray) -> np.ndarray:
    """Deterministic per-cell jitter in (-1e-10, 1e-10), keyed to content.

    Each cell's offset is derived from a hash of its own row's values and a
    hash of its own sample's values.  Both hashes are order-independent
    (wrapping uint64 sums), which is what buys the permutation and argument
    -swap invariances.
    """
    bits = np.ascontiguousarray(z + 0.0).view(np.uint64)  # +0.0 folds -0.0 into +0.0
    cell = _splitmix64(bits ^ _SALT)
    sample_key = _splitmix64(cell.sum(axis=0, dtype=np.uint64))
    row_key = cell.sum(axis=1, dtype=np.uint64)
    mixed = _splitmix64(row_key[:, None] ^ sample_key[None, :])
    unit = (mixed >> np.uint64(11)).astype(np.float64) * 2.0**-53  # [0, 1)
    return (2.0 * unit - 1.0) * TIE_JITTER_SCALE


def mutual_information(x, y, cfg: MiConfig) -> float:
    """Estimated MI in nats between two sample blocks of shape (d, n).

    1-d inputs are treated as single-row blocks.  Raises if the sample
    counts differ, if ``n <= cfg.k``, or if any coordinate has zero
    variance.  Estimates may be slightly negative; callers compare them to
    a threshold as-is.
    """
    xm = np.atleast_2d(np.asarray(x, dtype=np.float64))
    ym = np.atleast_2d(np.asarray(y, dtype=np.float64))
    if xm.ndim != 2 or ym.ndim != 2:
        raise InvalidInputError("inputs must be at most 2-d")
    if xm.shape[1] != ym.shape[1]:
        raise InvalidInputError(
            f"sample counts differ: {xm.shape[1]} vs {ym.shape[1]}"
        )
    n = xm.shape[1]
    if n <= cfg.k:
        raise InvalidInputError(f"need more than k={cfg.k} samples, got {n}")
    joint = np.vstack((xm, ym))
    if not np.all(np.isfinite(joint)):
        raise InvalidInputError("inputs must be finite")
    scale = joint.std(axis=1)
    if not np.all(scale > 0.0):
        raise DegenerateInputError("zero-variance coordinate in MI input")
    scaled = joint / scale[:, None]
    jittered = scaled + _tie_jitter(scaled)

    d_x = xm.shape[0]
    eps = kth_neighbor_distance(np.ascontiguousarray(jittered.T), cfg.k)
    n_x = count_within(np.ascontiguousarray(jittered[:d_x].T), eps)
    n_y = count_within(np.ascontiguousarray(jittered[d_x:].T), eps)

    # Summing in sorted order keeps the value bit-identical under any
    # permutation of the samples.
    per_sample = digamma(n_x + 1.0) + digamma(n_y + 1.0)
    mean_term = float(np.sort(per_sample).sum()) / n
    return float(digamma(cfg.k) + digamma(n) - mean_term)
