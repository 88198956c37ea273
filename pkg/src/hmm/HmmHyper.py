from typing import NamedTuple

import numpy as np
from msgspec import Struct, field
from scipy.linalg import LinAlgError, cholesky

from src.core import NumericalError, UsageError


class NiwParams(NamedTuple):
    """
    Normal-Inverse-Wishart parameters ``(mu, kappa, nu, psi)``, used both for a prior and for a posterior.
    """

    mu: np.ndarray
    kappa: float
    nu: float
    psi: np.ndarray

    def check(self) -> None:
        """
        :raise UsageError: If ``kappa <= 0``, ``nu <= d - 1`` or the shapes disagree.
        :raise NumericalError: If ``psi`` is not symmetric positive definite.
        """

        d = self.mu.shape[0]

        if self.psi.shape != (d, d):
            raise UsageError(f"NIW scale matrix has shape {self.psi.shape}, expected {(d, d)}.")

        if not self.kappa > 0.0:
            raise UsageError(f"NIW kappa must be positive, got {self.kappa}.")

        if not self.nu > d - 1:
            raise UsageError(f"NIW nu must exceed {d - 1}, got {self.nu}.")

        try:
            cholesky(self.psi, lower=True)

        except LinAlgError:
            raise NumericalError("NIW scale matrix is not positive definite.") from None


class NiwPrior(Struct, kw_only=True, frozen=True):
    """
    Dimension-free description of the NIW prior: ``mu0 = mu0_fill * 1``, ``nu0 = d + nu0_extra``,
    ``psi0 = psi0_scale * I``.
    """

    mu0_fill: float = 0.0
    kappa0: float = 1.0
    nu0_extra: float = 2.0
    psi0_scale: float = 1.0

    def __post_init__(self):

        if not self.kappa0 > 0.0:
            raise UsageError(f"kappa0 must be positive, got {self.kappa0}.")

        if not self.nu0_extra > -1.0:
            raise UsageError(f"nu0_extra must exceed -1, got {self.nu0_extra}.")

        if not self.psi0_scale > 0.0:
            raise UsageError(f"psi0_scale must be positive, got {self.psi0_scale}.")

    def for_dim(self, dim: int) -> NiwParams:

        return NiwParams(mu=np.full(dim, self.mu0_fill), kappa=self.kappa0, nu=dim + self.nu0_extra,
                         psi=self.psi0_scale * np.eye(dim))


class HmmHyper(Struct, kw_only=True, frozen=True):
    """
    Gibbs hyperparameters: Dirichlet concentrations for transition (``alpha``) and emission (``beta``) rows and the
    NIW prior of continuous emissions.
    """

    alpha: float = 1.0
    beta: float = 0.1
    niw: NiwPrior = field(default_factory=NiwPrior)

    def __post_init__(self):

        if not self.alpha > 0.0:
            raise UsageError(f"alpha must be positive, got {self.alpha}.")

        if not self.beta > 0.0:
            raise UsageError(f"beta must be positive, got {self.beta}.")
