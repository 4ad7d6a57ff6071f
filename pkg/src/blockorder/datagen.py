"""Synthetic benchmark generator.

Datasets come from randomly drawn block-structured linear models driven by
independent non-Gaussian noise: a block-lower-triangular strength matrix
(within-block entries form a sub-chain, so later blocks never feed earlier
ones) whose parent-induced standard deviations land in [0.5, 1.5], noise
scales in [0.5, 1.5], and noise built by power-transforming Gaussians with
exponents from [0.5, 0.8] or [1.2, 2.0] (sub- and super-Gaussian
respectively).  A fixed five-variable example whose blocks are glued by two
latent confounders is available as its own mode.  Variable labels of the
random modes are permuted at the end so position carries no information.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidInputError
from .linalg import center
from .model import BlockOrdering, ChainGraphModel, mixing_from_adjacency

MODES = ("chain_graph", "dag", "eq4_example")

PARENT_STD_RANGE = (0.5, 1.5)
NOISE_STD_RANGE = (0.5, 1.5)
RAW_WEIGHT_RANGE = (0.1, 1.0)
SUB_GAUSSIAN_EXPONENTS = (0.5, 0.8)
SUPER_GAUSSIAN_EXPONENTS = (1.2, 2.0)

# The fixed example uses clearly super-Gaussian noise throughout: random
# exponents can land close to 1, and near-Gaussian confounders make the
# blocks statistically unidentifiable at moderate sample sizes.
EXAMPLE_EXPONENT = 2.0

_MASK64 = (1 << 64) - 1


@dataclass(frozen=True)
class GenSpec:
    p: int
    n: int
    seed: int
    mode: str

    def __post_init__(self):
        if self.p < 1:
            raise InvalidInputError("need p >= 1")
        if self.n < 2:
            raise InvalidInputError("need n >= 2")
        if self.mode not in MODES:
            raise InvalidInputError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.mode == "eq4_example" and self.p != 5:
            raise InvalidInputError("the five-variable example requires p=5")


def derive_seed(seed: int, index: int) -> int:
    """Child seed for trial ``index``, splitmix-style, collision-resistant."""
    x = (int(seed) ^ (int(index) * 0x9E3779B97F4A7C15)) & _MASK64
    x = (x + 0x9E3779B97F4A7C15) & _MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _MASK64
    return (x ^ (x >> 31)) & _MASK64


def _draw_exponent(rng: np.random.Generator) -> float:
    lo1, hi1 = SUB_GAUSSIAN_EXPONENTS
    lo2, hi2 = SUPER_GAUSSIAN_EXPONENTS
    span1 = hi1 - lo1
    u = rng.uniform(0.0, span1 + (hi2 - lo2))
    return lo1 + u if u <= span1 else lo2 + (u - span1)


def _power_noise(rng: np.random.Generator, n: int, q: float) -> np.ndarray:
    z = rng.standard_normal(n)
    e = np.sign(z) * np.abs(z) ** q
    e = e - e.mean()
    return e / e.std()


def sample_nongaussian(n: int, q: float, seed: int) -> np.ndarray:
    """Power-transformed Gaussian sample, standardized to mean 0 and variance 1."""
    if n < 2:
        raise InvalidInputError("need n >= 2")
    if q <= 0:
        raise InvalidInputError("exponent must be positive")
    return _power_noise(np.random.default_rng(seed), n, q)


def _implied_within_cov(b: np.ndarray, blocks, noise_covs) -> tuple[np.ndarray, ...]:
    """Residual covariance per block once earlier variables are projected out."""
    out = []
    for block, cov_e in zip(blocks, noise_covs):
        members = list(block)
        inner = b[np.ix_(members, members)]
        mix = np.linalg.solve(np.eye(len(members)) - inner, np.eye(len(members)))
        out.append(mix @ cov_e @ mix.T)
    return tuple(out)


class _StructureDraw:
    def __init__(self, blocks, b, noise_std, noise_covs):
        self.blocks = blocks
        self.b = b
        self.noise_std = noise_std
        self.noise_covs = noise_covs


def _draw_structure(rng: np.random.Generator, p: int, singletons: bool) -> _StructureDraw:
    if singletons:
        m = p
    else:
        m = int(rng.integers(1, p + 1))
    perm = rng.permutation(p)
    if m == 1:
        sizes = [p]
    else:
        cuts = sorted(int(c) for c in rng.choice(p - 1, size=m - 1, replace=False))
        bounds = [0] + [c + 1 for c in cuts] + [p]
        sizes = [bounds[i + 1] - bounds[i] for i in range(m)]
    blocks = []
    offset = 0
    for size in sizes:
        blocks.append(tuple(sorted(int(v) for v in perm[offset : offset + size])))
        offset += size

    max_parents = int(rng.integers(1, p + 1))
    noise_std = rng.uniform(*NOISE_STD_RANGE, size=p)

    # Each variable draws up to max_parents parents from everything generated
    # before it (earlier blocks plus earlier members of its own block, so the
    # matrix stays block-lower-triangular), and its incoming weights are
    # rescaled so the parents contribute a standard deviation in the target
    # range.  sigma_x tracks the model-implied covariance of the variables
    # generated so far, in generation order.
    b = np.zeros((p, p))
    generated: list[int] = []
    sigma_x = np.zeros((0, 0))
    for block in blocks:
        for v in block:
            var_own = noise_std[v] ** 2
            if generated:
                count = min(max_parents, len(generated))
                parents = sorted(
                    int(x) for x in rng.choice(len(generated), size=count, replace=False)
                )
                weights = rng.uniform(*RAW_WEIGHT_RANGE, size=count)
                weights *= rng.choice(np.array([-1.0, 1.0]), size=count)
                parent_var = float(weights @ sigma_x[np.ix_(parents, parents)] @ weights)
                target = rng.uniform(*PARENT_STD_RANGE)
                weights *= target / math.sqrt(parent_var)
                b[v, [generated[q] for q in parents]] = weights
                row = np.zeros(len(generated))
                row[parents] = weights
                cross = row @ sigma_x
                var_v = float(row @ cross) + var_own
                sigma_x = np.block(
                    [[sigma_x, cross[:, None]], [cross[None, :], np.array([[var_v]])]]
                )
            else:
                sigma_x = np.array([[var_own]])
            generated.append(v)
    noise_covs = tuple(np.diag(noise_std[list(block)] ** 2) for block in blocks)
    return _StructureDraw(tuple(blocks), b, noise_std, noise_covs)


def random_chain_graph(p: int, seed: int) -> ChainGraphModel:
    """Random block-structured model with the documented parameter ranges."""
    if p < 1:
        raise InvalidInputError("need p >= 1")
    draw = _draw_structure(np.random.default_rng(seed), p, singletons=False)
    return ChainGraphModel(
        draw.b,
        BlockOrdering(draw.blocks),
        draw.noise_std,
        _implied_within_cov(draw.b, draw.blocks, draw.noise_covs),
    )


def _draw_noise(rng: np.random.Generator, draw: _StructureDraw, n: int) -> np.ndarray:
    p = len(draw.noise_std)
    e = np.empty((p, n))
    for block in draw.blocks:
        for v in block:
            e[v] = draw.noise_std[v] * _power_noise(rng, n, _draw_exponent(rng))
    return e


def _permute_model(rng, x: np.ndarray, draw: _StructureDraw):
    """Relabel variables by a random permutation; returns (x_new, model)."""
    p = x.shape[0]
    perm = rng.permutation(p)
    x_new = np.empty_like(x)
    x_new[perm] = x
    b_new = np.zeros_like(draw.b)
    b_new[np.ix_(perm, perm)] = draw.b
    noise_new = np.empty_like(draw.noise_std)
    noise_new[perm] = draw.noise_std
    within = _implied_within_cov(draw.b, draw.blocks, draw.noise_covs)
    blocks_new = []
    within_new = []
    for block, cov in zip(draw.blocks, within):
        mapped = perm[np.array(block)]
        order = np.argsort(mapped)
        blocks_new.append(tuple(int(v) for v in mapped[order]))
        within_new.append(cov[np.ix_(order, order)])
    model = ChainGraphModel(
        b_new, BlockOrdering(tuple(blocks_new)), noise_new, tuple(within_new)
    )
    return x_new, model


def confounded_example_model(
    b21: float = 0.8,
    b32: float = 0.8,
    b42: float = 0.0,
    b43: float = 0.8,
    b51: float = 0.8,
    b54: float = 0.8,
    c1: float = 0.7,
    c2: float = 0.7,
    c4: float = 0.7,
    c5: float = 0.7,
):
    """The fixed 5-variable chain graph with confounders inside blocks 1 and 3.

    Blocks are {0,1} < {2} < {3,4}.  Noise pairs (e0, e1) and (e3, e4) share
    unit-variance latent factors with the given loadings; every e_i has unit
    variance.  Returns ``(model, loadings)``.
    """
    for c in (c1, c2, c4, c5):
        if not 0.0 <= c < 1.0:
            raise InvalidInputError("latent loadings must lie in [0, 1)")
    b = np.zeros((5, 5))
    b[1, 0] = b21
    b[2, 1] = b32
    b[3, 1] = b42
    b[3, 2] = b43
    b[4, 0] = b51
    b[4, 3] = b54
    blocks = ((0, 1), (2,), (3, 4))
    noise_covs = (
        np.array([[1.0, c1 * c2], [c1 * c2, 1.0]]),
        np.array([[1.0]]),
        np.array([[1.0, c4 * c5], [c4 * c5, 1.0]]),
    )
    model = ChainGraphModel(
        b,
        BlockOrdering(blocks),
        np.ones(5),
        _implied_within_cov(b, blocks, noise_covs),
    )
    return model, ((c1, c2), (), (c4, c5))


def _eq4_noise(rng: np.random.Generator, n: int, loadings) -> np.ndarray:
    e = np.empty((5, n))
    (c1, c2), _, (c4, c5) = loadings
    factor_f = _power_noise(rng, n, EXAMPLE_EXPONENT)
    factor_g = _power_noise(rng, n, EXAMPLE_EXPONENT)
    for row, (c, factor) in enumerate(
        [(c1, factor_f), (c2, factor_f), (0.0, None), (c4, factor_g), (c5, factor_g)]
    ):
        idio = _power_noise(rng, n, EXAMPLE_EXPONENT)
        if factor is None:
            e[row] = idio
        else:
            e[row] = c * factor + math.sqrt(1.0 - c * c) * idio
    return e


def generate_dataset(spec: GenSpec):
    """Draw a model and a dataset from it; returns ``(data, truth)``.

    Random modes relabel the variables at the end; the fixed example keeps
    its natural labels.
    """
    rng = np.random.default_rng(spec.seed)
    if spec.mode == "eq4_example":
        model, loadings = confounded_example_model()
        e = _eq4_noise(rng, spec.n, loadings)
        x = mixing_from_adjacency(model.b) @ e
        return center(x), model
    draw = _draw_structure(rng, spec.p, singletons=spec.mode == "dag")
    e = _draw_noise(rng, draw, spec.n)
    x = mixing_from_adjacency(draw.b) @ e
    x_new, model = _permute_model(rng, x, draw)
    return center(x_new), model
