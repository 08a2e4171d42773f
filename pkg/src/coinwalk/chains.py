"""Birth-death chains underlying half-line walks, and their recurrence class.

The chain moves right from site j with probability ``p_j`` and left with
``q_j = 1 - p_j`` (at the origin, ``q_0`` is the stay probability).  The
class is decided by the two positive series

    c_R = sum_{j>=0} p_0...p_{j-1} / (q_1...q_j)     (reversible-measure mass)
    c_T = sum_{j>=1} q_0...q_j / (p_0...p_j)         (flow mass)

evaluated as an explicit prefix plus a closed-form geometric tail whenever
the tail of (p_j) is known to be constant.  All products are accumulated in
log space so long prefixes neither underflow nor overflow.
"""

from __future__ import annotations

import math
import sys
from dataclasses import dataclass

import numpy as np

from .errors import WrongClassError
from .walk import VerblunskySeq, coin_eigen

_LOG_MAX = math.log(sys.float_info.max)

POSITIVE_RECURRENT = "positive_recurrent"
NULL_RECURRENT = "null_recurrent"
TRANSIENT = "transient"
UNDETERMINED = "undetermined"


@dataclass(frozen=True)
class BDChain:
    """Right-move probabilities p_j, strictly inside (0, 1).

    ``table`` is the explicit prefix and ``tail`` the constant continuation.
    ``tail_known=False`` marks chains read off a finite table: their values
    beyond the table repeat the last entry by convention, but no
    classification is certified and partial sums stop at ``known_terms``.
    """

    table: tuple[float, ...] = ()
    tail: float = 0.5
    tail_known: bool = True
    known_terms: int | None = None

    def __post_init__(self):
        for v in (*self.table, self.tail):
            if not 0.0 < v < 1.0:
                raise ValueError(f"p = {v} must lie strictly inside (0, 1)")

    @classmethod
    def constant(cls, p: float) -> "BDChain":
        return cls((), float(p))

    @classmethod
    def from_table(cls, values, tail: float | None = None) -> "BDChain":
        values = tuple(float(v) for v in values)
        if tail is not None:
            return cls(values, float(tail), tail_known=True)
        if not values:
            raise ValueError("an explicit table needs at least one entry")
        return cls(values, values[-1], tail_known=False, known_terms=len(values))

    def p(self, j: int) -> float:
        if j < 0:
            raise ValueError(f"negative site {j}")
        return self.table[j] if j < len(self.table) else self.tail

    def q(self, j: int) -> float:
        return 1.0 - self.p(j)


def from_walk(seq: VerblunskySeq) -> BDChain:
    """Underlying chain of a walk: p_j from the coin eigendata at each site."""
    kappa = seq.kappa
    ps = [coin_eigen(v, kappa).p for v in seq.table]
    tail_p = coin_eigen(seq.tail, kappa).p
    if seq.tail_known:
        return BDChain(tuple(ps), tail_p, tail_known=True)
    return BDChain(tuple(ps), tail_p, tail_known=False, known_terms=seq.known_terms)


def log_reversible_measure(chain: BDChain, j: int) -> float:
    """log of m_V(j)/m_V(0) = log sqrt(p_0...p_{j-1} / (q_1...q_j))."""
    if j < 0:
        raise ValueError(f"negative site {j}")
    acc = 0.0
    for i in range(j):
        acc += math.log(chain.p(i)) - math.log(chain.q(i + 1))
    return 0.5 * acc


def reversible_measure(chain: BDChain, j: int) -> float:
    """m_V(j) normalized to m_V(0) = 1; satisfies detailed balance
    p_j m_V(j)^2 = q_{j+1} m_V(j+1)^2."""
    return math.exp(log_reversible_measure(chain, j))


@dataclass(frozen=True)
class RecurrenceClass:
    """Outcome of the series criteria; exactly one of the four kinds.

    ``c_R``/``c_T`` are present when the matching series converges.
    Undetermined results carry the partial sums and the number of terms
    actually evaluated.
    """

    kind: str
    c_R: float | None = None
    c_T: float | None = None
    partial_c_R: float | None = None
    partial_c_T: float | None = None
    terms_used: int | None = None

    @property
    def is_positive_recurrent(self) -> bool:
        return self.kind == POSITIVE_RECURRENT

    @property
    def is_null_recurrent(self) -> bool:
        return self.kind == NULL_RECURRENT

    @property
    def is_transient(self) -> bool:
        return self.kind == TRANSIENT

    @property
    def is_undetermined(self) -> bool:
        return self.kind == UNDETERMINED

    @property
    def determined(self) -> bool:
        return self.kind != UNDETERMINED

    def to_dict(self) -> dict:
        out: dict = {"class": self.kind}
        if self.c_R is not None:
            out["c_R"] = self.c_R
        if self.c_T is not None:
            out["c_T"] = self.c_T
        if self.kind == UNDETERMINED:
            out["partial_sums"] = {"c_R": self.partial_c_R, "c_T": self.partial_c_T}
        if self.terms_used is not None:
            out["terms_used"] = self.terms_used
        return out


def _from_log(x: float) -> float:
    """exp in the value domain; sums beyond double range come back as inf."""
    if x == -math.inf:
        return 0.0
    return math.exp(x) if x < _LOG_MAX else math.inf


def _prefix_sums(chain: BDChain, terms: int) -> tuple[float, float, float, float]:
    """Log partial sums of c_R (terms 0..terms-1) and c_T (terms 1..terms-1),
    plus the logs of the next term of each series.  Everything stays in log
    space: neither tiny nor astronomically large terms lose the
    classification."""
    log_sum_r = -math.inf
    log_sum_t = -math.inf
    log_tr = 0.0   # log of the c_R term at current j
    log_tt = 0.0   # log of q_0...q_j/(p_0...p_j) at current j
    for j in range(terms):
        log_sum_r = float(np.logaddexp(log_sum_r, log_tr))
        if j >= 1:
            log_sum_t = float(np.logaddexp(log_sum_t, log_tt))
        # advance both term recursions from j to j+1
        log_tr += math.log(chain.p(j)) - math.log(chain.q(j + 1))
        if j == 0:
            log_tt = (math.log(chain.q(0)) + math.log(chain.q(1))
                      - math.log(chain.p(0)) - math.log(chain.p(1)))
        else:
            log_tt += math.log(chain.q(j + 1)) - math.log(chain.p(j + 1))
    return log_sum_r, log_sum_t, log_tr, log_tt


def classify(chain: BDChain, max_terms: int = 1000, tol: float = 1e-12) -> RecurrenceClass:
    """Recurrence trichotomy via the series criteria.

    Chains with a known constant tail are classified exactly: the prefix is
    summed term by term and the remainder is a geometric series in
    p_tail/q_tail (for c_R) or q_tail/p_tail (for c_T).  ``tol`` is the
    half-width around 1 inside which the tail ratio counts as critical.
    Chains without a known tail are never certified; they come back
    Undetermined with partial sums over min(max_terms, known table) terms.
    """
    if max_terms < 1:
        raise ValueError(f"max_terms must be >= 1, got {max_terms}")

    if not chain.tail_known:
        horizon = min(max_terms, chain.known_terms or max_terms)
        log_sum_r, log_sum_t, _, _ = _prefix_sums(chain, horizon)
        return RecurrenceClass(UNDETERMINED, partial_c_R=_from_log(log_sum_r),
                               partial_c_T=_from_log(log_sum_t),
                               terms_used=horizon)

    prefix = len(chain.table) + 1
    log_sum_r, log_sum_t, log_tr, log_tt = _prefix_sums(chain, prefix)
    ratio_r = chain.tail / (1.0 - chain.tail)

    if abs(ratio_r - 1.0) <= tol:
        return RecurrenceClass(NULL_RECURRENT, terms_used=prefix)
    if ratio_r < 1.0:
        # c_R converges: remaining terms form a geometric series
        c_R = _from_log(float(np.logaddexp(
            log_sum_r, log_tr - math.log(1.0 - ratio_r))))
        return RecurrenceClass(POSITIVE_RECURRENT, c_R=c_R, terms_used=prefix)
    ratio_t = 1.0 / ratio_r
    c_T = _from_log(float(np.logaddexp(
        log_sum_t, log_tt - math.log(1.0 - ratio_t))))
    return RecurrenceClass(TRANSIENT, c_T=c_T, terms_used=prefix)


def stationary(chain: BDChain, max_terms: int = 1000, tol: float = 1e-12):
    """Stationary distribution j -> pi(j) of a positive recurrent chain.

    pi(j) = m_V(j)^2 / sum_i m_V(i)^2, and the normalizer equals c_R because
    m_V(0) = 1 puts the j = 0 term inside the series.  Raises WrongClassError
    for any other class.
    """
    rc = classify(chain, max_terms=max_terms, tol=tol)
    if not rc.is_positive_recurrent:
        raise WrongClassError(f"stationary distribution needs a positive "
                              f"recurrent chain, got {rc.kind}")
    log_norm = math.log(rc.c_R)

    def pi(j: int) -> float:
        return math.exp(2.0 * log_reversible_measure(chain, j) - log_norm)

    return pi
