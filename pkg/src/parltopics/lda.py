"""Latent Dirichlet allocation trained by collapsed Gibbs sampling.

Document-topic and topic-word distributions are integrated out; the sampler
keeps per-token topic assignments ``z`` plus the three count matrices and
resamples each token from the standard collapsed conditional

    p(z_i = k | z_-i, w) ~ (n_dk + alpha) * (n_kw + beta) / (n_k + V*beta)

with the current token removed from all counts. Point estimates of the
distributions are read off the final counts with Dirichlet smoothing.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from ._gibbs import gibbs_sweep
from .errors import InvariantError

DEFAULT_ITERATIONS = 1000
DEFAULT_BURN_IN = 500


@dataclass(frozen=True)
class Hyperparams:
    """Sampler settings. ``alpha`` and ``beta`` are symmetric scalar priors."""

    num_topics: int
    alpha: float
    beta: float
    iterations: int = DEFAULT_ITERATIONS
    burn_in: int = DEFAULT_BURN_IN
    seed: int = 42

    def __post_init__(self):
        if self.num_topics < 1:
            raise ValueError(f"num_topics must be >= 1, got {self.num_topics}")
        if self.alpha <= 0:
            raise ValueError(f"alpha must be > 0, got {self.alpha}")
        if self.beta <= 0:
            raise ValueError(f"beta must be > 0, got {self.beta}")
        if not self.iterations >= self.burn_in >= 0:
            raise ValueError(
                f"need iterations >= burn_in >= 0, got "
                f"iterations={self.iterations}, burn_in={self.burn_in}"
            )


@dataclass
class GibbsState:
    """Sampler state: per-token assignments, count matrices, and the RNG.

    Invariants (checked cheaply on every sweep, fully by ``verify_counts``):
    row d of ``n_dk`` sums to the length of document d, row k of ``n_kw``
    sums to ``n_k[k]``, and all counts agree with a recount from ``z``.
    """

    z: np.ndarray            # (N,) topic per token
    doc_ids: np.ndarray      # (N,) document index per token
    word_ids: np.ndarray     # (N,) word id per token
    doc_lengths: np.ndarray  # (D,)
    n_dk: np.ndarray         # (D, K)
    n_kw: np.ndarray         # (K, V)
    n_k: np.ndarray          # (K,)
    rng: np.random.Generator

    @property
    def num_tokens(self) -> int:
        return int(self.z.shape[0])

    @property
    def num_docs(self) -> int:
        return int(self.n_dk.shape[0])

    @property
    def num_topics(self) -> int:
        return int(self.n_dk.shape[1])

    @property
    def vocab_size(self) -> int:
        return int(self.n_kw.shape[1])


@dataclass
class TopicModel:
    """Smoothed point estimates plus a per-topic keep mask.

    ``phi`` is the (K, V) topic-word matrix, ``theta`` the (D, K)
    document-topic matrix; every row of each sums to one and all entries are
    strictly positive. ``keep_mask`` marks topics retained for downstream
    analysis; it does not alter ``phi``/``theta``.
    """

    phi: np.ndarray
    theta: np.ndarray
    keep_mask: np.ndarray = field(default=None)

    def __post_init__(self):
        if self.keep_mask is None:
            self.keep_mask = np.ones(self.phi.shape[0], dtype=bool)

    @property
    def num_topics(self) -> int:
        return int(self.phi.shape[0])

    @property
    def vocab_size(self) -> int:
        return int(self.phi.shape[1])

    @property
    def kept_topics(self) -> list[int]:
        return [int(k) for k in np.flatnonzero(self.keep_mask)]


def _flatten(docs: Sequence[Sequence[int]]) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    doc_lengths = np.array([len(doc) for doc in docs], dtype=np.int64)
    doc_ids = np.repeat(np.arange(len(docs), dtype=np.int64), doc_lengths)
    word_ids = np.concatenate(
        [np.asarray(doc, dtype=np.int64) for doc in docs if len(doc)]
    ) if doc_lengths.sum() else np.empty(0, dtype=np.int64)
    return doc_ids, word_ids, doc_lengths


def init_state(
    docs: Sequence[Sequence[int]],
    vocab_size: int,
    params: Hyperparams,
    rng: np.random.Generator | None = None,
) -> GibbsState:
    """Assign every token a uniform random topic and build consistent counts.

    ``docs`` is a sequence of token-id sequences. The generator defaults to
    ``numpy.random.default_rng(params.seed)``; passing the same seed twice
    yields an identical state.
    """
    if not len(docs):
        raise ValueError("empty corpus: no documents")
    if vocab_size < 1:
        raise ValueError(f"vocab_size must be >= 1, got {vocab_size}")
    doc_ids, word_ids, doc_lengths = _flatten(docs)
    if word_ids.size == 0:
        raise ValueError("empty corpus: documents contain no tokens")
    if word_ids.min() < 0 or word_ids.max() >= vocab_size:
        raise ValueError("token id outside [0, vocab_size)")
    if params.num_topics > word_ids.size:
        warnings.warn(
            f"num_topics={params.num_topics} exceeds the corpus token count "
            f"{word_ids.size}; some topics will stay empty",
            stacklevel=2,
        )
    if rng is None:
        rng = np.random.default_rng(params.seed)

    z = rng.integers(0, params.num_topics, word_ids.size, dtype=np.int64)
    n_dk = np.zeros((len(docs), params.num_topics), dtype=np.int64)
    n_kw = np.zeros((params.num_topics, vocab_size), dtype=np.int64)
    n_k = np.zeros(params.num_topics, dtype=np.int64)
    np.add.at(n_dk, (doc_ids, z), 1)
    np.add.at(n_kw, (z, word_ids), 1)
    np.add.at(n_k, z, 1)
    return GibbsState(z, doc_ids, word_ids, doc_lengths, n_dk, n_kw, n_k, rng)


def _check_counts(state: GibbsState) -> None:
    """Cheap consistency checks run before every sweep."""
    if (state.n_dk < 0).any() or (state.n_kw < 0).any() or (state.n_k < 0).any():
        raise InvariantError("negative entry in count matrices")
    if not np.array_equal(state.n_dk.sum(axis=1), state.doc_lengths):
        raise InvariantError("n_dk row sums disagree with document lengths")
    if not np.array_equal(state.n_kw.sum(axis=1), state.n_k):
        raise InvariantError("n_kw row sums disagree with n_k")
    if int(state.n_k.sum()) != state.num_tokens:
        raise InvariantError("n_k total disagrees with token count")


def recount(state: GibbsState) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Rebuild (n_dk, n_kw, n_k) from scratch out of ``z``."""
    n_dk = np.zeros_like(state.n_dk)
    n_kw = np.zeros_like(state.n_kw)
    n_k = np.zeros_like(state.n_k)
    np.add.at(n_dk, (state.doc_ids, state.z), 1)
    np.add.at(n_kw, (state.z, state.word_ids), 1)
    np.add.at(n_k, state.z, 1)
    return n_dk, n_kw, n_k


def verify_counts(state: GibbsState) -> None:
    """Full recount from ``z``; raises :class:`InvariantError` on any mismatch."""
    n_dk, n_kw, n_k = recount(state)
    if not (
        np.array_equal(n_dk, state.n_dk)
        and np.array_equal(n_kw, state.n_kw)
        and np.array_equal(n_k, state.n_k)
    ):
        raise InvariantError("stored counts disagree with a recount from z")


def sweep(state: GibbsState, params: Hyperparams) -> GibbsState:
    """One full Gibbs pass: every token resampled once, in storage order.

    Mutates and returns ``state``. Deterministic given the generator state;
    aborts with :class:`InvariantError` if the counts are inconsistent on
    entry.
    """
    _check_counts(state)
    uniforms = state.rng.random(state.num_tokens)
    gibbs_sweep(
        state.z,
        state.doc_ids,
        state.word_ids,
        state.n_dk,
        state.n_kw,
        state.n_k,
        params.alpha,
        params.beta,
        uniforms,
    )
    return state


def estimate(state: GibbsState, params: Hyperparams) -> TopicModel:
    """Smoothed point estimates from the current counts.

    phi[k, w] = (n_kw + beta) / (n_k + V*beta)
    theta[d, k] = (n_dk + alpha) / (len_d + K*alpha)
    """
    phi = (state.n_kw + params.beta) / (
        state.n_k + state.vocab_size * params.beta
    )[:, None]
    theta = (state.n_dk + params.alpha) / (
        state.doc_lengths + state.num_topics * params.alpha
    )[:, None]
    return TopicModel(phi=phi, theta=theta)


def train(
    docs: Sequence[Sequence[int]],
    vocab_size: int,
    params: Hyperparams,
) -> tuple[GibbsState, TopicModel]:
    """Initialize and run ``params.iterations`` sweeps, then estimate.

    The estimate uses the final sample only; the first ``params.burn_in``
    sweeps are the chain's warm-up and are not treated differently beyond
    that reading.
    """
    state = init_state(docs, vocab_size, params)
    for _ in range(params.iterations):
        sweep(state, params)
    return state, estimate(state, params)


def top_keywords(
    model: TopicModel,
    topic: int,
    n: int,
    vocabulary=None,
) -> list[tuple]:
    """The ``n`` highest-probability words of a topic, ties to lower token id.

    Returns ``(token, probability)`` pairs; ``token`` is the integer id, or
    the token string when a :class:`~parltopics.corpus.Vocabulary` is given.
    """
    if not 0 <= topic < model.num_topics:
        raise IndexError(
            f"topic id {topic} out of range [0, {model.num_topics})"
        )
    if n > model.vocab_size:
        raise ValueError(f"n={n} exceeds vocabulary size {model.vocab_size}")
    row = model.phi[topic]
    order = np.lexsort((np.arange(row.size), -row))
    result = []
    for word_id in order[:n]:
        token = vocabulary.id_to_token[word_id] if vocabulary is not None else int(word_id)
        result.append((token, float(row[word_id])))
    return result


def exclude_topics(model: TopicModel, excluded) -> TopicModel:
    """Return a copy of the model whose keep mask is false exactly on ``excluded``."""
    excluded = set(int(k) for k in excluded)
    for k in excluded:
        if not 0 <= k < model.num_topics:
            raise IndexError(f"topic id {k} out of range [0, {model.num_topics})")
    if len(excluded) >= model.num_topics:
        raise ValueError("cannot exclude every topic")
    keep_mask = np.ones(model.num_topics, dtype=bool)
    for k in excluded:
        keep_mask[k] = False
    return TopicModel(phi=model.phi, theta=model.theta, keep_mask=keep_mask)


def renormalize_kept(vector: np.ndarray, keep_mask: np.ndarray) -> np.ndarray:
    """Restrict a proportion vector to kept topics and rescale to sum one."""
    kept = np.asarray(vector, dtype=float)[keep_mask]
    total = kept.sum()
    if total <= 0:
        raise ValueError("no probability mass on kept topics")
    return kept / total


def kept_theta(model: TopicModel) -> np.ndarray:
    """Document-topic rows restricted to kept topics, each renormalized."""
    rows = model.theta[:, model.keep_mask]
    return rows / rows.sum(axis=1, keepdims=True)


def save_model(path, model: TopicModel, params: Hyperparams, vocab_hash: str = "") -> None:
    """Write the model to an ``.npz`` container.

    Arrays ``phi``, ``theta`` and ``keep_mask`` are stored as-is; sampler
    settings and the vocabulary hash travel in a JSON string under ``meta``.
    """
    meta = json.dumps(
        {
            "num_topics": params.num_topics,
            "alpha": params.alpha,
            "beta": params.beta,
            "iterations": params.iterations,
            "burn_in": params.burn_in,
            "seed": params.seed,
            "vocab_hash": vocab_hash,
        },
        sort_keys=True,
    )
    np.savez(
        path,
        phi=model.phi,
        theta=model.theta,
        keep_mask=model.keep_mask,
        meta=np.frombuffer(meta.encode("utf-8"), dtype=np.uint8),
    )


def load_model(path) -> tuple[TopicModel, dict]:
    """Inverse of :func:`save_model`; returns the model and the metadata dict."""
    with np.load(path) as data:
        model = TopicModel(
            phi=data["phi"],
            theta=data["theta"],
            keep_mask=data["keep_mask"].astype(bool),
        )
        meta = json.loads(bytes(data["meta"]).decode("utf-8"))
    return model, meta
