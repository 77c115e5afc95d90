import math
from typing import Callable, Dict, List, Sequence

import numpy as np

from .multigrams import DEFAULT_SHAPES, NEG_INF, Multigram, Shape, logaddexp


class AlignmentLattice:
    """
    AlignmentLattice is the grid of prefix positions (i, j), 0 <= i <= |e|, 0 <= j <= |f|,
    of a word pair, with one arc per multigram that advances from (i, j) to
    (i + di, j + dj).

    Forward values alpha(i, j) sum, in log space, the probabilities of all multigram
    sequences spelling e[:i] and f[:j]; backward values beta(i, j) do the same for the
    suffixes. alpha(|e|, |f|) is the joint probability of the pair and equals beta(0, 0).

    Arcs are stored in row-major order of their start node. Every arc ends at a later
    node, so one pass in arc order computes alpha and one reverse pass computes beta.

    Attributes:
    -----------
    - e, f (str): The source and target word.
    - arcs (list[tuple[int, int]]): (start node, end node) indexes, node = i * (|f| + 1) + j.
    - multigrams (list[Multigram]): The multigram carried by each arc.
    """

    def __init__(self, e: str, f: str, shapes: Sequence[Shape] = DEFAULT_SHAPES):
        self.e = e
        self.f = f
        self.width = len(f) + 1
        self.size = (len(e) + 1) * self.width
        self.arcs = []
        self.multigrams = []
        for i in range(len(e) + 1):
            for j in range(len(f) + 1):
                for di, dj in shapes:
                    if i + di <= len(e) and j + dj <= len(f):
                        self.arcs.append((i * self.width + j, (i + di) * self.width + j + dj))
                        self.multigrams.append(Multigram(e[i:i + di], f[j:j + dj]))

    def weights(self, logprob: Callable[[Multigram], float]) -> List[float]:
        """Arc log weights under a multigram log-probability function."""
        return [logprob(m) for m in self.multigrams]

    def forward(self, weights: Sequence[float]) -> List[float]:
        alpha = [NEG_INF] * self.size
        alpha[0] = 0.0
        for (start, end), w in zip(self.arcs, weights):
            a = alpha[start]
            if a == NEG_INF or w == NEG_INF:
                continue
            alpha[end] = logaddexp(alpha[end], a + w)
        return alpha

    def backward(self, weights: Sequence[float]) -> List[float]:
        beta = [NEG_INF] * self.size
        beta[-1] = 0.0
        for (start, end), w in zip(reversed(self.arcs), reversed(weights)):
            b = beta[end]
            if b == NEG_INF or w == NEG_INF:
                continue
            beta[start] = logaddexp(beta[start], w + b)
        return beta

    def log_joint(self, weights: Sequence[float]) -> float:
        return self.forward(weights)[-1]

    def arc_posteriors(self, weights: Sequence[float], alpha=None, beta=None) -> List[float]:
        """
        Posterior probability of each arc given that the pair is generated by the
        multigram model. All zeros when the pair has zero probability.
        """
        alpha = alpha if alpha is not None else self.forward(weights)
        beta = beta if beta is not None else self.backward(weights)
        log_z = alpha[-1]
        if log_z == NEG_INF:
            return [0.0] * len(self.arcs)
        posteriors = []
        for (start, end), w in zip(self.arcs, weights):
            score = alpha[start] + w + beta[end]
            posteriors.append(math.exp(score - log_z) if score != NEG_INF else 0.0)
        return posteriors

    def expected_counts(self, weights: Sequence[float]) -> Dict[Multigram, float]:
        """Expected number of uses of each multigram over the pair's alignments."""
        counts: Dict[Multigram, float] = {}
        for multigram, posterior in zip(self.multigrams, self.arc_posteriors(weights)):
            if posterior > 0.0:
                counts[multigram] = counts.get(multigram, 0.0) + posterior
        return counts

    def alpha_grid(self, weights: Sequence[float]) -> np.ndarray:
        return np.array(self.forward(weights)).reshape(len(self.e) + 1, self.width)

    def beta_grid(self, weights: Sequence[float]) -> np.ndarray:
        return np.array(self.backward(weights)).reshape(len(self.e) + 1, self.width)
