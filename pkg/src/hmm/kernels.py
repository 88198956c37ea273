import numpy as np
from numba import njit


@njit(cache=False)
def forward_log(
    log_pi0: np.ndarray,
    log_trans: np.ndarray,
    log_emit: np.ndarray
) -> tuple[np.ndarray, np.ndarray, int]:
    """
    Log-space forward filter.

    Returns the normalized log filtered distributions ``log P(x_t | y_1..t)``, the log normalizers
    ``log P(y_t | y_1..t-1)`` and ``-1``; or, when every state is impossible at some step ``t``, the partial arrays
    and ``t``.
    """

    steps, n = log_emit.shape

    log_p = np.empty((steps, n))
    log_norm = np.empty(steps)
    prior = np.empty(n)

    for t in range(steps):

        if t == 0:
            for j in range(n):
                prior[j] = log_pi0[j]

        else:
            for j in range(n):

                top = -np.inf
                for i in range(n):
                    v = log_p[t - 1, i] + log_trans[i, j]
                    if v > top:
                        top = v

                if top == -np.inf:
                    prior[j] = -np.inf

                else:
                    acc = 0.0
                    for i in range(n):
                        acc += np.exp(log_p[t - 1, i] + log_trans[i, j] - top)
                    prior[j] = top + np.log(acc)

        top = -np.inf
        for j in range(n):
            v = prior[j] + log_emit[t, j]
            log_p[t, j] = v
            if v > top:
                top = v

        if top == -np.inf:
            return log_p, log_norm, t

        acc = 0.0
        for j in range(n):
            acc += np.exp(log_p[t, j] - top)

        z = top + np.log(acc)
        log_norm[t] = z

        for j in range(n):
            log_p[t, j] -= z

    return log_p, log_norm, -1


@njit(cache=False)
def _draw_log(
    log_w: np.ndarray,
    u: float
) -> int:

    n = log_w.shape[0]

    top = -np.inf
    for i in range(n):
        if log_w[i] > top:
            top = log_w[i]

    if top == -np.inf:
        return -1

    total = 0.0
    for i in range(n):
        total += np.exp(log_w[i] - top)

    target = u * total
    acc = 0.0
    last = -1

    for i in range(n):
        e = np.exp(log_w[i] - top)
        if e > 0.0:
            last = i
            acc += e
            if acc > target:
                return i

    return last


@njit(cache=False)
def backward_sample(
    log_p: np.ndarray,
    log_trans: np.ndarray,
    uniforms: np.ndarray
) -> np.ndarray:
    """
    Backward sampling pass of FFBS: ``x_T ~ p_T`` then ``x_t ~ p_t * T[:, x_t+1]`` renormalized, by inverse CDF on
    the given uniforms. A ``-1`` marks a step where no state was possible.
    """

    steps, n = log_p.shape

    states = np.empty(steps, dtype=np.int64)
    log_w = np.empty(n)

    states[steps - 1] = _draw_log(log_p[steps - 1], uniforms[steps - 1])

    for t in range(steps - 2, -1, -1):

        following = states[t + 1]

        if following < 0:
            states[t] = -1
            continue

        for i in range(n):
            log_w[i] = log_p[t, i] + log_trans[i, following]

        states[t] = _draw_log(log_w, uniforms[t])

    return states
