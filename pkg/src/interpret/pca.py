import numpy as np
from msgspec import Struct

from src.numeric import Matrix, pca_explained_variance

# the target share of variance for choosing a component count
VARIANCE_TARGET = 0.99

# rounding slack when comparing cumulative ratios against the target
CUMULATIVE_SLACK = 1e-12


class PcaReport(Struct, kw_only=True, frozen=True):
    """
    Explained-variance ratios of the principal components, largest first, their running sum, and the smallest number
    of components reaching ``VARIANCE_TARGET``.
    """

    ratios: list[float]
    cumulative: list[float]
    components_99: int


def pca_report(hidden: Matrix) -> PcaReport:

    ratios = pca_explained_variance(points=hidden)
    cumulative = np.cumsum(ratios)

    reached = np.flatnonzero(cumulative >= VARIANCE_TARGET - CUMULATIVE_SLACK)
    components = int(reached[0]) + 1 if reached.size else ratios.shape[0]

    return PcaReport(ratios=ratios.tolist(), cumulative=cumulative.tolist(), components_99=components)
