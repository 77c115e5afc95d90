import logging
import math
import time
from collections import Counter
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np

from alignment.candidates import WordPair, WordPairList
from utils.exceptions import ConfigError, EmptyInputError, EMDivergenceError
from utils.parallel import ordered_map

from .lattice import AlignmentLattice
from .model import TransliterationModel, mixture_terms, nontranslit_logprob
from .multigrams import DEFAULT_SHAPES, NEG_INF, Multigram, Shape, validate_shapes

DIVERGENCE_TOLERANCE = 1e-6


@dataclass(frozen=True)
class EMConfig:
    max_iterations: int = 100
    tolerance: float = 1e-6
    weight_by_posterior: bool = True
    max_word_length: int = 30
    shapes: Tuple[Shape, ...] = DEFAULT_SHAPES
    threads: int = 1

    def __post_init__(self):
        if self.max_iterations < 1:
            raise ConfigError(f"max_iterations must be >= 1, got {self.max_iterations}.")
        if self.tolerance < 0:
            raise ConfigError(f"tolerance must be >= 0, got {self.tolerance}.")
        if self.max_word_length < 1:
            raise ConfigError(f"max_word_length must be >= 1, got {self.max_word_length}.")
        validate_shapes(self.shapes)


@dataclass
class EMResult:
    model: Optional[TransliterationModel]
    log_likelihoods: List[float] = field(default_factory=list)
    # (sum theta, sum source unigrams, sum target unigrams) after each M-step
    mass_history: List[Tuple[float, float, float]] = field(default_factory=list)
    skipped: List[WordPair] = field(default_factory=list)
    converged: bool = False

    @property
    def iterations(self) -> int:
        return len(self.log_likelihoods)


@dataclass
class _PairState:
    pair: WordPair
    lattice: AlignmentLattice
    ids: List[int]


@dataclass
class _PairStatistics:
    log_total: float
    posterior: float
    arc_posteriors: Optional[List[float]]


def _unigram_logprobs(counts: Dict[str, float], previous: Optional[Dict[str, float]] = None) -> Dict[str, float]:
    total = math.fsum(counts.values())
    if total <= 0.0:
        return dict(previous) if previous is not None else {c: NEG_INF for c in counts}
    with np.errstate(divide="ignore"):
        return {c: float(np.log(v / total)) for c, v in sorted(counts.items())}


def _initial_log_theta(multigrams: List[Multigram]) -> List[float]:
    """
    Starting theta. Multigrams with at most one character per side share a uniform
    weight; one spanning two characters on a side starts at the weight of the
    two-step single-character path it merges.
    """
    singles = sum(1 for m in multigrams if max(m.shape) == 1) or 1
    weights = np.array([float(singles) ** (1 - max(m.shape)) for m in multigrams])
    return np.log(weights / weights.sum()).tolist()


def _prepare(candidates: WordPairList, config: EMConfig) -> Tuple[List[_PairState], List[Multigram], List[WordPair]]:
    states, skipped = [], []
    vocabulary: Dict[Multigram, int] = {}
    for pair in candidates:
        if not pair.source or not pair.target:
            logging.warning(f"[em_trainer] Skipping pair with an empty side: {pair.source!r}/{pair.target!r}.")
            skipped.append(pair)
            continue
        if len(pair.source) > config.max_word_length or len(pair.target) > config.max_word_length:
            logging.warning(
                f"[em_trainer][{pair.source}] Skipping pair longer than {config.max_word_length} characters."
            )
            skipped.append(pair)
            continue
        lattice = AlignmentLattice(pair.source, pair.target, config.shapes)
        states.append(_PairState(pair, lattice, []))
        for multigram in lattice.multigrams:
            vocabulary.setdefault(multigram, 0)
    multigrams = sorted(vocabulary)
    index = {m: k for k, m in enumerate(multigrams)}
    for state in states:
        state.ids = [index[m] for m in state.lattice.multigrams]
    return states, multigrams, skipped


def em_train(candidates: WordPairList, config: Optional[EMConfig] = None) -> EMResult:
    """
    Trains the transliteration mixture model on candidate word pairs by EM.

    theta starts from `_initial_log_theta` over every multigram that occurs in some
    pair's lattice, lambda at 0.5 and the unigram models at the character
    frequencies of the data.
    Each iteration:
    - E-step: per pair, forward-backward over the lattice gives arc posteriors and
      p1; the unigram model gives p_ntr; the mixture gives the pair's posterior of
      being a transliteration. Arc posteriors are weighted by that posterior (unless
      `weight_by_posterior` is off) and the pair's count.
    - M-step: theta, both unigram models (weighted by 1 - posterior) and lambda are
      re-estimated from the accumulated counts.

    Training stops when the log-likelihood gain drops below `tolerance` or after
    `max_iterations` iterations. Per-pair work runs on `threads` threads; counts are
    reduced in candidate order.

    Raises:
        EmptyInputError: If no usable candidate pair remains.
        EMDivergenceError: If the log-likelihood becomes NaN or decreases.
    """
    config = config or EMConfig()
    if len(candidates) == 0:
        raise EmptyInputError("Cannot train a transliteration model on an empty candidate list.")

    start_time = time.time()
    states, multigrams, skipped = _prepare(candidates, config)
    if not states:
        raise EmptyInputError("Every candidate pair was skipped; nothing to train on.")

    vocabulary_size = len(multigrams)
    log_theta = _initial_log_theta(multigrams)
    src_counts: Counter = Counter()
    tgt_counts: Counter = Counter()
    for state in states:
        for char in state.pair.source:
            src_counts[char] += state.pair.count
        for char in state.pair.target:
            tgt_counts[char] += state.pair.count
    src_unigrams = _unigram_logprobs(dict(src_counts))
    tgt_unigrams = _unigram_logprobs(dict(tgt_counts))
    lam = 0.5
    logging.info(
        f"[em_trainer] Training on {len(states)} pairs ({len(skipped)} skipped), "
        f"{vocabulary_size} multigrams, shapes {list(config.shapes)}."
    )

    result = EMResult(model=None, skipped=skipped)
    excluded = set()
    previous_ll = None
    for iteration in range(1, config.max_iterations + 1):
        model = TransliterationModel(
            dict(zip(multigrams, log_theta)), lam, src_unigrams, tgt_unigrams, config.shapes
        )

        def expectation(state: _PairState) -> _PairStatistics:
            weights = [log_theta[k] for k in state.ids]
            alpha = state.lattice.forward(weights)
            log_p1 = alpha[-1]
            log_pntr = nontranslit_logprob(model, state.pair.source, state.pair.target)
            translit, _, log_total = mixture_terms(model, log_p1, log_pntr)
            if log_total == NEG_INF:
                return _PairStatistics(NEG_INF, 0.0, None)
            posterior = math.exp(translit - log_total)
            arc_posteriors = None
            if log_p1 != NEG_INF and posterior > 0.0:
                arc_posteriors = state.lattice.arc_posteriors(weights, alpha=alpha)
            return _PairStatistics(log_total, posterior, arc_posteriors)

        statistics = ordered_map(expectation, states, config.threads)

        counts = [0.0] * vocabulary_size
        src_weighted: Dict[str, float] = {c: 0.0 for c in src_unigrams}
        tgt_weighted: Dict[str, float] = {c: 0.0 for c in tgt_unigrams}
        ll_terms, posterior_mass, pair_mass = [], [], []
        for state, stats in zip(states, statistics):
            pair = state.pair
            if stats.log_total == NEG_INF:
                if pair not in excluded:
                    excluded.add(pair)
                    logging.warning(
                        f"[em_trainer][{pair.source}] Pair {pair.source}/{pair.target} has zero probability "
                        f"under both sub-models; excluded."
                    )
                continue
            ll_terms.append(pair.count * stats.log_total)
            posterior_mass.append(pair.count * stats.posterior)
            pair_mass.append(pair.count)
            if stats.arc_posteriors is not None:
                weight = pair.count * (stats.posterior if config.weight_by_posterior else 1.0)
                for k, p in zip(state.ids, stats.arc_posteriors):
                    counts[k] += weight * p
            other = pair.count * (1.0 - stats.posterior)
            for char in pair.source:
                src_weighted[char] += other
            for char in pair.target:
                tgt_weighted[char] += other

        if not pair_mass:
            raise EMDivergenceError("Every pair has zero probability under both sub-models.")
        log_likelihood = math.fsum(ll_terms)
        result.log_likelihoods.append(log_likelihood)
        if math.isnan(log_likelihood):
            raise EMDivergenceError(f"Log-likelihood became NaN at iteration {iteration}.")
        delta = None if previous_ll is None else log_likelihood - previous_ll
        if delta is not None and delta < -DIVERGENCE_TOLERANCE * max(1.0, abs(previous_ll)):
            raise EMDivergenceError(
                f"Log-likelihood decreased from {previous_ll} to {log_likelihood} at iteration {iteration}."
            )
        logging.info(
            f"[em_trainer] Iteration {iteration}: log-likelihood {log_likelihood:.6f}, "
            f"delta {'n/a' if delta is None else f'{delta:.3e}'}, lambda {lam:.6f}."
        )

        # M-step
        count_vector = np.array(counts)
        total = count_vector.sum()
        if total > 0.0:
            with np.errstate(divide="ignore"):
                log_theta = np.log(count_vector / total).tolist()
        src_unigrams = _unigram_logprobs(src_weighted, src_unigrams)
        tgt_unigrams = _unigram_logprobs(tgt_weighted, tgt_unigrams)
        lam = min(1.0, max(0.0, math.fsum(posterior_mass) / math.fsum(pair_mass)))
        result.mass_history.append((
            float(np.exp(np.array(log_theta)).sum()),
            math.fsum(math.exp(v) for v in src_unigrams.values()),
            math.fsum(math.exp(v) for v in tgt_unigrams.values()),
        ))

        if delta is not None and abs(delta) < config.tolerance:
            result.converged = True
            break
        previous_ll = log_likelihood

    result.model = TransliterationModel(
        {m: lp for m, lp in zip(multigrams, log_theta) if lp != NEG_INF},
        lam,
        src_unigrams,
        tgt_unigrams,
        config.shapes,
    )
    elapsed_time = time.time() - start_time
    logging.info(
        f"[em_trainer] Finished training in {elapsed_time:.2f} seconds. "
        f"{result.iterations} iterations, converged: {result.converged}, lambda {lam:.6f}."
    )
    return result
