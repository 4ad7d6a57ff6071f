"""Evaluation metrics: order-error counts and coefficient scatter pairs."""

import numpy as np

from .errors import InvalidInputError
from .model import BlockOrdering, ChainGraphModel


def order_error_count(true_model: ChainGraphModel, estimated: BlockOrdering) -> int:
    """True edges pointing from a later estimated block into an earlier one.

    Counts each nonzero true strength b_ij (an edge j -> i) whose target
    lands strictly before its source in the estimated ordering.  Pairs
    inside one estimated block never count.
    """
    p = true_model.n_variables
    if not estimated.is_partition_of(range(p)):
        raise InvalidInputError("estimated ordering must cover the model's variables")
    level_map = estimated.level_of()
    levels = np.array([level_map[i] for i in range(p)])
    violated = levels[:, None] < levels[None, :]
    return int(np.count_nonzero((true_model.b != 0.0) & violated))


def scatter_pairs(true_model: ChainGraphModel, estimated_model: ChainGraphModel):
    """(true, estimated) strength for every ordered pair (i, j), i != j."""
    if true_model.n_variables != estimated_model.n_variables:
        raise InvalidInputError("models must have the same number of variables")
    p = true_model.n_variables
    return [
        (float(true_model.b[i, j]), float(estimated_model.b[i, j]))
        for i in range(p)
        for j in range(p)
        if i != j
    ]


def median_errors(trials) -> float:
    """Standard median; the mean of the middle two for even lengths."""
    values = list(trials)
    if not values:
        raise InvalidInputError("need at least one trial")
    return float(np.median(np.asarray(values, dtype=np.float64)))
