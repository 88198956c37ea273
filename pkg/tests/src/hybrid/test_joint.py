import numpy as np
import pytest

from src.core import NumericalError, RandomSource
from src.hmm import forward_filter
from src.hybrid import (
    JointHybridParams,
    joint_filter,
    joint_hybrid_forward,
    joint_hybrid_loss_grad,
    softmax_rows_backward,
)
from src.hybrid.JointHybridParams import EMIT_LOGITS, INIT_LOGITS, TRANS_LOGITS
from src.numeric import finite_diff_grad, max_relative_error, param_grad_errors, softmax_rows

GRAD_TOLERANCE = 1e-4


def joint_params(seed: int, vocab_size: int = 4, hidden_dim: int = 3, n_hmm: int = 2) -> JointHybridParams:
    return JointHybridParams.init(vocab_size=vocab_size, hidden_dim=hidden_dim, layers=1, n_hmm=n_hmm,
                                  rng=RandomSource(seed=seed), scale=0.5)


def test_init_shapes():

    params = joint_params(seed=0, vocab_size=6, hidden_dim=3, n_hmm=4)

    assert params[TRANS_LOGITS].shape == (4, 4)
    assert params[EMIT_LOGITS].shape == (4, 6)
    assert params[INIT_LOGITS].shape == (4,)
    assert np.abs(params[TRANS_LOGITS]).max() < 1.0


def test_exported_hmm_filters_the_same(rng):

    params = joint_params(seed=1)
    ids = rng.integers(low=0, high=4, size=40)

    trans, emit, pi0 = params.probabilities()
    cache = joint_filter(trans=trans, emit=emit, pi0=pi0, ids=ids)

    assert np.allclose(cache.dists, forward_filter(params=params.hmm(), obs=ids), atol=1e-12)


def test_joint_filter_zero_probability():

    with pytest.raises(NumericalError, match='step 1'):
        joint_filter(trans=np.eye(2), emit=np.array([[1.0, 0.0], [1.0, 0.0]]), pi0=np.array([0.5, 0.5]),
                     ids=np.array([0, 1]))


def test_state_continues_across_windows(rng):

    params = joint_params(seed=2)
    ids = rng.integers(low=0, high=4, size=30)

    whole, _ = joint_hybrid_forward(params=params, ids=ids)
    head, state = joint_hybrid_forward(params=params, ids=ids[:11])
    tail, _ = joint_hybrid_forward(params=params, ids=ids[11:], state0=state)

    assert np.allclose(whole, np.concatenate([head, tail]), atol=1e-12)


def test_softmax_rows_backward(rng):

    logits = rng.normal(size=(3, 4))
    upstream = rng.normal(size=(3, 4))

    analytic = softmax_rows_backward(probs=softmax_rows(m=logits), d_probs=upstream)
    numeric = finite_diff_grad(f=lambda flat: float((softmax_rows(m=flat.reshape(3, 4)) * upstream).sum()),
                               x=logits.ravel())

    assert max_relative_error(analytic=analytic, numeric=numeric) < 1e-6


@pytest.mark.parametrize('seed, vocab_size, hidden_dim, n_hmm, steps, carried', [
    (seed, 3 + seed % 3, 2 + seed % 2, 1 + seed % 3, 5 + seed, seed % 2 == 1) for seed in range(6)
])
def test_gradients_of_every_group(seed, vocab_size, hidden_dim, n_hmm, steps, carried):

    rng = RandomSource(seed=200 + seed)
    params = joint_params(seed=seed, vocab_size=vocab_size, hidden_dim=hidden_dim, n_hmm=n_hmm)
    ids = rng.integers(low=0, high=vocab_size, size=steps)

    state0 = None

    if carried:
        _, state0 = joint_hybrid_forward(params=params, ids=rng.integers(low=0, high=vocab_size, size=4))

    _, grads, _ = joint_hybrid_loss_grad(params=params, ids=ids, state0=state0)

    assert {TRANS_LOGITS, EMIT_LOGITS, INIT_LOGITS} <= set(grads)

    errors = param_grad_errors(loss=lambda p: joint_hybrid_loss_grad(params=p, ids=ids, state0=state0)[0],
                               params=params, grads=grads)

    assert max(errors.values()) <= GRAD_TOLERANCE, errors


@pytest.mark.parametrize('cut', [0, 9, 30])
def test_future_characters_change_nothing_before_them(rng, cut):

    params = joint_params(seed=3, vocab_size=5, hidden_dim=3, n_hmm=3)
    ids = rng.integers(low=0, high=5, size=40)

    mutated = ids.copy()
    mutated[cut + 1:] = (ids[cut + 1:] + 1 + rng.integers(low=0, high=4, size=len(ids) - cut - 1)) % 5

    trans, emit, pi0 = params.probabilities()
    dists = joint_filter(trans=trans, emit=emit, pi0=pi0, ids=ids).dists
    mutated_dists = joint_filter(trans=trans, emit=emit, pi0=pi0, ids=mutated).dists

    np.testing.assert_array_equal(mutated_dists[:cut + 1], dists[:cut + 1])

    logits, _ = joint_hybrid_forward(params=params, ids=ids)
    mutated_logits, _ = joint_hybrid_forward(params=params, ids=mutated)

    np.testing.assert_array_equal(mutated_logits[:cut + 1], logits[:cut + 1])
    assert not np.array_equal(mutated_logits[cut + 1], logits[cut + 1])
