"""Exact recursive search for an ordered-block decomposition.

At each level, every admissible proper subset S of the working set U is
scored by the mutual information between x_S and the residuals of the
remaining variables regressed on x_S.  The minimizer splits U when its score
is at or below the threshold delta; otherwise U stays together as one block.
Recursion on the minimizer reuses the original columns; recursion on its
complement uses the residual matrix.  With delta = +inf every block comes
out a singleton (full-ordering mode).
"""

import math
from dataclasses import dataclass
from itertools import combinations
from typing import Collection, NamedTuple, Sequence

import numpy as np

from .errors import InvalidInputError, SearchTooLargeError
from .linalg import DataMatrix, residualize
from .mi import MiConfig, default_k, mutual_information
from .model import BlockOrdering, ChainGraphModel
from .strengths import estimate_strengths

DEFAULT_DELTA = 1e-2
DEFAULT_MAX_EXACT_P = 15


@dataclass(frozen=True)
class SearchConfig:
    delta: float = DEFAULT_DELTA
    mi: MiConfig | None = None  # None: default_k(n) at call time
    max_exact_p: int = DEFAULT_MAX_EXACT_P

    def __post_init__(self):
        if math.isnan(self.delta) or self.delta < 0.0:
            raise InvalidInputError("delta must be >= 0 (or +inf)")
        if self.max_exact_p < 1:
            raise InvalidInputError("max_exact_p must be >= 1")

    def mi_config(self, n: int) -> MiConfig:
        return self.mi if self.mi is not None else MiConfig(default_k(n))


class ScoreRecord(NamedTuple):
    level: int
    subset: tuple[int, ...]
    score: float


def independence_score(data: DataMatrix, subset, mi: MiConfig) -> float:
    """MI between x_S and the residuals of the remaining variables on x_S."""
    s_ids = tuple(sorted(int(i) for i in subset))
    resid = residualize(data, s_ids)
    return mutual_information(data.restrict(s_ids).values, resid.values, mi)


def enumerate_candidates(
    u, constraints: Collection[tuple[int, int]] = ()
) -> list[tuple[int, ...]]:
    """Non-empty proper subsets of U, minus constraint violations.

    A known precedence (j1, j2) excludes any subset containing j2 while j1
    stays behind in U \\ S.  Order: by size, then lexicographic.
    """
    members = tuple(sorted(int(i) for i in u))
    if len(set(members)) != len(members):
        raise InvalidInputError("duplicate indices in U")
    if not members:
        raise InvalidInputError("U must not be empty")
    in_u = set(members)
    relevant = [
        (int(a), int(b))
        for a, b in constraints
        if int(a) in in_u and int(b) in in_u and int(a) != int(b)
    ]
    out: list[tuple[int, ...]] = []
    for size in range(1, len(members)):
        for combo in combinations(members, size):
            chosen = set(combo)
            if any(b in chosen and a not in chosen for a, b in relevant):
                continue
            out.append(combo)
    return out


def find_most_exogenous(
    data: DataMatrix,
    u,
    cfg: SearchConfig,
    constraints: Collection[tuple[int, int]] = (),
    trace: list[ScoreRecord] | None = None,
    level: int = 0,
):
    """Lowest-scoring admissible subset of U and its score.

    Ties go to the smallest subset, then lexicographic order (the
    enumeration order guarantees this).  Returns ``(None, inf)`` when the
    constraints exclude every candidate.
    """
    members = tuple(sorted(int(i) for i in u))
    if len(members) < 2:
        raise InvalidInputError("need at least 2 variables to search")
    if len(members) > cfg.max_exact_p:
        raise SearchTooLargeError(
            f"exact search over {len(members)} variables exceeds the guard "
            f"({cfg.max_exact_p}); use the covering-based large-graph mode"
        )
    mi_cfg = cfg.mi_config(data.n_samples)
    best_subset: tuple[int, ...] | None = None
    best_score = math.inf
    for candidate in enumerate_candidates(members, constraints):
        score = independence_score(data, candidate, mi_cfg)
        if trace is not None:
            trace.append(ScoreRecord(level, candidate, score))
        if best_subset is None or score < best_score:
            best_subset = candidate
            best_score = score
    return best_subset, best_score


def group_search(
    data: DataMatrix,
    u,
    cfg: SearchConfig,
    constraints: Collection[tuple[int, int]] = (),
    trace: list[ScoreRecord] | None = None,
    _level: int = 0,
) -> BlockOrdering:
    """Recursive ordered-block decomposition of U."""
    members = tuple(sorted(int(i) for i in u))
    if not set(members) <= set(data.variable_ids):
        raise InvalidInputError("U must be a subset of the data's variables")
    if len(members) == 1:
        return BlockOrdering((members,))
    sub = data if set(data.variable_ids) == set(members) else data.restrict(members)
    best, score = find_most_exogenous(sub, members, cfg, constraints, trace, _level)
    if best is None or not score <= cfg.delta:
        return BlockOrdering((members,))
    head = group_search(sub.restrict(best), best, cfg, constraints, trace, _level + 1)
    rest = tuple(i for i in members if i not in set(best))
    tail = group_search(residualize(sub, best), rest, cfg, constraints, trace, _level + 1)
    return BlockOrdering(head.blocks + tail.blocks)


def fit(data: DataMatrix, cfg: SearchConfig | None = None):
    """Full exact estimate: block ordering, strengths, residual covariances.

    Returns ``(model, trace)``.  Refuses more variables than the exact-search
    guard allows.
    """
    cfg = cfg or SearchConfig()
    p = data.n_variables
    if set(data.variable_ids) != set(range(p)):
        raise InvalidInputError("fit expects a full matrix with variables 0..p-1")
    if p > cfg.max_exact_p:
        raise SearchTooLargeError(
            f"{p} variables exceed the exact-search guard ({cfg.max_exact_p}); "
            "use the covering-based large-graph mode"
        )
    trace: list[ScoreRecord] = []
    ordering = group_search(data, data.variable_ids, cfg, (), trace)
    b, within = estimate_strengths(data, ordering)
    noise_std = _noise_std_from_within(ordering, within, p)
    model = ChainGraphModel(b, ordering, noise_std, tuple(within))
    return model, trace


def _noise_std_from_within(
    ordering: BlockOrdering, within: Sequence[np.ndarray], p: int
) -> np.ndarray:
    noise = np.zeros(p)
    for block, cov in zip(ordering.blocks, within):
        for idx, var in enumerate(block):
            noise[var] = math.sqrt(max(cov[idx, idx], 0.0))
    return noise
