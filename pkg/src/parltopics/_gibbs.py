"""Numba kernel for the collapsed Gibbs sweep.

Kept in its own module so the first call pays the (cached) JIT cost without
cluttering the sampler API. The kernel consumes one pre-drawn uniform per
token, which keeps the random stream owned by the caller's generator and the
arithmetic bit-reproducible.
"""

import numpy as np
from numba import njit


@njit(cache=True)
def gibbs_sweep(z, doc_ids, word_ids, n_dk, n_kw, n_k, alpha, beta, uniforms):
    """Resample every token's topic once, in storage order.

    For token i in document d with word w, the current assignment is removed
    from the counts and a new topic is drawn from

        p(k) ~ (n_dk[d, k] + alpha) * (n_kw[k, w] + beta) / (n_k[k] + V*beta)

    by inverting the cumulative sum at uniforms[i] * total. All count arrays
    are updated in place.
    """
    num_topics = n_dk.shape[1]
    v_beta = n_kw.shape[1] * beta
    cumulative = np.empty(num_topics, np.float64)
    for i in range(z.shape[0]):
        d = doc_ids[i]
        w = word_ids[i]
        k = z[i]
        n_dk[d, k] -= 1
        n_kw[k, w] -= 1
        n_k[k] -= 1
        total = 0.0
        for t in range(num_topics):
            total += (n_dk[d, t] + alpha) * (n_kw[t, w] + beta) / (n_k[t] + v_beta)
            cumulative[t] = total
        target = uniforms[i] * total
        new_k = 0
        while new_k < num_topics - 1 and cumulative[new_k] <= target:
            new_k += 1
        z[i] = new_k
        n_dk[d, new_k] += 1
        n_kw[new_k, w] += 1
        n_k[new_k] += 1
