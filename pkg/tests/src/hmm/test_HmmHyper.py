import numpy as np
import pytest

from src.core import NumericalError, UsageError
from src.hmm import HmmHyper, NiwParams, NiwPrior


@pytest.mark.parametrize('kwargs', [{'alpha': 0.0}, {'beta': -1.0}])
def test_dirichlet_concentrations(kwargs):

    with pytest.raises(UsageError):
        HmmHyper(**kwargs)


@pytest.mark.parametrize('kwargs', [{'kappa0': 0.0}, {'nu0_extra': -1.0}, {'psi0_scale': 0.0}])
def test_niw_prior(kwargs):

    with pytest.raises(UsageError):
        NiwPrior(**kwargs)


def test_for_dim():

    prior = NiwPrior(mu0_fill=0.5, psi0_scale=2.0).for_dim(dim=3)

    assert np.array_equal(prior.mu, np.full(3, 0.5))
    assert prior.nu == 5.0
    assert np.array_equal(prior.psi, 2.0 * np.eye(3))


def test_niw_check():

    with pytest.raises(UsageError):
        NiwParams(mu=np.zeros(2), kappa=1.0, nu=0.5, psi=np.eye(2)).check()

    with pytest.raises(NumericalError):
        NiwParams(mu=np.zeros(2), kappa=1.0, nu=3.0, psi=-np.eye(2)).check()
