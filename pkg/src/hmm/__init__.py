from src.hmm.ContinuousHmmParams import ContinuousHmmParams
from src.hmm.DiscreteHmmParams import DiscreteHmmParams
from src.hmm.gibbs import (
    DEFAULT_ITERS,
    GibbsResult,
    HmmKind,
    count_emissions,
    count_transitions,
    estimate_pi0,
    fit_readout,
    gibbs_train,
    init_states_continuous,
    init_states_discrete,
    niw_posterior,
    sample_emissions_continuous,
    sample_emissions_discrete,
    sample_niw,
    sample_transitions,
)
from src.hmm.HmmHyper import HmmHyper, NiwParams, NiwPrior
from src.hmm.inference import (
    HmmParams,
    StateDists,
    States,
    emission_log_likelihoods,
    ffbs_sample,
    forward_filter,
    mvn_logpdf,
    next_symbol_distribution,
    predictive_loglik,
    readout_loglik,
    sample_hmm,
)


__all__ = [
    'ContinuousHmmParams',
    'DiscreteHmmParams',
    'DEFAULT_ITERS', 'GibbsResult', 'HmmKind', 'count_emissions', 'count_transitions', 'estimate_pi0', 'fit_readout',
    'gibbs_train', 'init_states_continuous', 'init_states_discrete', 'niw_posterior', 'sample_emissions_continuous',
    'sample_emissions_discrete', 'sample_niw', 'sample_transitions',
    'HmmHyper', 'NiwParams', 'NiwPrior',
    'HmmParams', 'StateDists', 'States', 'emission_log_likelihoods', 'ffbs_sample', 'forward_filter', 'mvn_logpdf',
    'next_symbol_distribution', 'predictive_loglik', 'readout_loglik', 'sample_hmm',
]
