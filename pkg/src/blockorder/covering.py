"""Covering-based approximate search for large graphs.

Exact search caps out quickly, so large graphs are handled by running it on
many random variable subsets of size h, turning each run's block ordering
into pairwise precedence facts, and merging those facts globally.  When
accumulated pairs form a directed cycle (possible under sampling noise), the
whole cycle collapses into one merged group; the final ordering is a
topological sort of the condensation, with incomparable nodes ordered by
smallest member index.  Variables a subset run leaves in one block simply
contribute no facts (merging them would overstate confounding).

Since precedence is transitive, each run is constrained by the transitive
closure of everything accumulated so far: a candidate S that would reverse
any established order, even indirectly, is never scored.  Under that rule a
run's output is always a linear extension of the known relation, so subset
runs cannot create cycles; the merge machinery still guards callers that
feed independently collected pair batches.
"""

import heapq
from dataclasses import dataclass

import numpy as np

from .errors import InvalidInputError
from .linalg import DataMatrix
from .model import BlockOrdering, ChainGraphModel
from .search import ScoreRecord, SearchConfig, _noise_std_from_within, group_search
from .strengths import estimate_strengths


@dataclass(frozen=True)
class Covering:
    """Subsets of equal size whose union is the whole variable set."""

    subsets: tuple[tuple[int, ...], ...]


def random_covering(p: int, h: int, n_subsets: int, seed: int) -> Covering:
    """N uniform size-h subsets of 0..p-1, patched so their union covers all.

    Variables missed by the N draws are chunked into extra subsets, each
    padded with uniformly drawn other variables up to size h.
    """
    if not 2 <= h <= p:
        raise InvalidInputError(f"need 2 <= h <= p, got h={h}, p={p}")
    if n_subsets < 1:
        raise InvalidInputError("need at least one subset")
    rng = np.random.default_rng(seed)
    subsets = [
        tuple(sorted(int(v) for v in rng.choice(p, size=h, replace=False)))
        for _ in range(n_subsets)
    ]
    covered = {v for subset in subsets for v in subset}
    missing = sorted(set(range(p)) - covered)
    for start in range(0, len(missing), h):
        chunk = missing[start : start + h]
        pool = np.array(sorted(set(range(p)) - set(chunk)))
        pad = rng.choice(pool, size=h - len(chunk), replace=False)
        subsets.append(tuple(sorted(chunk + [int(v) for v in pad])))
    return Covering(tuple(subsets))


@dataclass(frozen=True)
class PairOrderList:
    """Accumulated precedence pairs plus groups merged out of conflicts.

    ``pairs`` holds (j1, j2) facts meaning j1 precedes j2, with both
    endpoints in different groups; ``groups`` are the collapsed cycles
    (every size >= 2).
    """

    pairs: frozenset[tuple[int, int]]
    groups: tuple[tuple[int, ...], ...]

    @classmethod
    def empty(cls) -> "PairOrderList":
        return cls(frozenset(), ())


def _tarjan_scc(nodes, adjacency):
    """Strongly connected components, iterative Tarjan."""
    index: dict = {}
    low: dict = {}
    on_stack: set = set()
    stack: list = []
    components: list[tuple] = []
    counter = 0
    for root in nodes:
        if root in index:
            continue
        work = [(root, iter(adjacency.get(root, ())))]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            node, children = work[-1]
            advanced = False
            for child in children:
                if child not in index:
                    index[child] = low[child] = counter
                    counter += 1
                    stack.append(child)
                    on_stack.add(child)
                    work.append((child, iter(adjacency.get(child, ()))))
                    advanced = True
                    break
                if child in on_stack:
                    low[node] = min(low[node], index[child])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[node])
            if low[node] == index[node]:
                comp = []
                while True:
                    member = stack.pop()
                    on_stack.discard(member)
                    comp.append(member)
                    if member == node:
                        break
                components.append(tuple(comp))
    return components


class _UnionFind:
    def __init__(self):
        self.parent: dict[int, int] = {}

    def add(self, v: int):
        self.parent.setdefault(v, v)

    def find(self, v: int) -> int:
        root = v
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[v] != root:
            self.parent[v], v = root, self.parent[v]
        return root

    def union(self, a: int, b: int):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            # deterministic: smaller index becomes the root
            if rb < ra:
                ra, rb = rb, ra
            self.parent[rb] = ra


def merge_orders(k: PairOrderList, new_pairs) -> PairOrderList:
    """Union old and new pairs; collapse any directed cycle into a group.

    Pairs internal to a group leave the precedence relation but the group
    membership is kept.  The result depends only on the union of all pairs
    ever merged, not on the batch order.
    """
    pairs: set[tuple[int, int]] = set(k.pairs)
    for a, b in new_pairs:
        a, b = int(a), int(b)
        if a == b:
            raise InvalidInputError(f"self-pair ({a}, {a}) is not a valid precedence")
        pairs.add((a, b))

    uf = _UnionFind()
    for group in k.groups:
        for member in group:
            uf.add(member)
        first = group[0]
        for member in group[1:]:
            uf.union(first, member)
    for a, b in pairs:
        uf.add(a)
        uf.add(b)

    adjacency: dict[int, list[int]] = {}
    nodes = sorted({uf.find(v) for v in uf.parent})
    for a, b in sorted(pairs):
        ra, rb = uf.find(a), uf.find(b)
        if ra != rb:
            adjacency.setdefault(ra, []).append(rb)
    for comp in _tarjan_scc(nodes, adjacency):
        if len(comp) > 1:
            first = comp[0]
            for member in comp[1:]:
                uf.union(first, member)

    by_root: dict[int, list[int]] = {}
    for v in uf.parent:
        by_root.setdefault(uf.find(v), []).append(v)
    groups = tuple(
        tuple(sorted(members))
        for _, members in sorted(by_root.items())
        if len(members) > 1
    )
    kept = frozenset((a, b) for a, b in pairs if uf.find(a) != uf.find(b))
    return PairOrderList(kept, groups)


def implied_constraints(k: PairOrderList) -> frozenset[tuple[int, int]]:
    """Transitive closure of the precedence relation, expanded through groups.

    Every pair (a, b) such that a's group reaches b's group through recorded
    pairs; these are the orders a later subset run must not reverse.
    """
    rep: dict[int, int] = {}
    members: dict[int, tuple[int, ...]] = {}
    for group in k.groups:
        for v in group:
            rep[v] = group[0]
        members[group[0]] = group
    successors: dict[int, set[int]] = {}
    for a, b in k.pairs:
        ra = rep.get(a, a)
        rb = rep.get(b, b)
        if ra != rb:
            successors.setdefault(ra, set()).add(rb)
    out: set[tuple[int, int]] = set()
    for start in successors:
        reached: set[int] = set()
        stack = list(successors[start])
        while stack:
            node = stack.pop()
            if node in reached:
                continue
            reached.add(node)
            stack.extend(successors.get(node, ()))
        for target in reached:
            for a in members.get(start, (start,)):
                for b in members.get(target, (target,)):
                    out.add((a, b))
    return frozenset(out)


def extract_pairs(ordering: BlockOrdering) -> list[tuple[int, int]]:
    """All (earlier, later) pairs across blocks; members of one block give none."""
    out: list[tuple[int, int]] = []
    blocks = ordering.blocks
    for a in range(len(blocks)):
        for b in range(a + 1, len(blocks)):
            out.extend((i, j) for i in blocks[a] for j in blocks[b])
    return out


def build_block_order(k: PairOrderList, p: int) -> BlockOrdering:
    """Global ordering over 0..p-1 from accumulated pairs and merged groups.

    Groups become blocks, remaining variables become singletons, and the
    condensation is sorted topologically with ties broken by smallest member
    index.
    """
    grouped: dict[int, int] = {}
    blocks: list[tuple[int, ...]] = []
    for group in k.groups:
        for member in group:
            if member >= p or member < 0:
                raise InvalidInputError(f"variable {member} out of range for p={p}")
            grouped[member] = len(blocks)
        blocks.append(group)
    for v in range(p):
        if v not in grouped:
            grouped[v] = len(blocks)
            blocks.append((v,))

    successors: list[set[int]] = [set() for _ in blocks]
    indegree = [0] * len(blocks)
    for a, b in k.pairs:
        if a >= p or b >= p or a < 0 or b < 0:
            raise InvalidInputError(f"pair ({a}, {b}) out of range for p={p}")
        na, nb = grouped[a], grouped[b]
        if na != nb and nb not in successors[na]:
            successors[na].add(nb)
            indegree[nb] += 1

    ready = [(block[0], idx) for idx, block in enumerate(blocks) if indegree[idx] == 0]
    heapq.heapify(ready)
    ordered: list[tuple[int, ...]] = []
    while ready:
        _, idx = heapq.heappop(ready)
        ordered.append(blocks[idx])
        for succ in sorted(successors[idx]):
            indegree[succ] -= 1
            if indegree[succ] == 0:
                heapq.heappush(ready, (blocks[succ][0], succ))
    if len(ordered) != len(blocks):
        raise RuntimeError("precedence relation still cyclic after merging")
    return BlockOrdering(tuple(ordered))


def fit_large(data: DataMatrix, h: int, n_subsets: int, cfg: SearchConfig | None = None, seed: int = 0):
    """Approximate estimate via exact search on a random covering.

    Subset runs are sequential: each one is pruned by the transitive closure
    of the precedence pairs accumulated so far.  Returns ``(model, trace)``.
    """
    cfg = cfg or SearchConfig()
    p = data.n_variables
    if set(data.variable_ids) != set(range(p)):
        raise InvalidInputError("fit_large expects a full matrix with variables 0..p-1")
    if h > min(p, cfg.max_exact_p):
        raise InvalidInputError(
            f"h={h} must not exceed min(p, max_exact_p) = {min(p, cfg.max_exact_p)}"
        )
    cover = random_covering(p, h, n_subsets, seed)
    trace: list[ScoreRecord] = []
    accumulated = PairOrderList.empty()
    for subset in cover.subsets:
        constraints = implied_constraints(accumulated)
        ordering = group_search(data.restrict(subset), subset, cfg, constraints, trace)
        accumulated = merge_orders(accumulated, extract_pairs(ordering))
    ordering = build_block_order(accumulated, p)
    b, within = estimate_strengths(data, ordering)
    noise_std = _noise_std_from_within(ordering, within, p)
    model = ChainGraphModel(b, ordering, noise_std, tuple(within))
    return model, trace
