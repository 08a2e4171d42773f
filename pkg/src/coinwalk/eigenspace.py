"""Closed-form point-spectrum eigenvectors certified against the evolution.

A positive recurrent chain yields the all-positive stationary-measure
eigenvector; a transient chain yields the alternating finite-flow
eigenvector.  Both are built in log space, truncated once a closed-form
bound on the discarded tail's l2 norm drops below ``tail_tol``, and then
certified by the Rayleigh quotient of the actual one-step operator.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .chains import BDChain, RecurrenceClass, classify
from .errors import (
    CertificationError,
    ResourceLimitError,
    WrongClassError,
    ZeroStateError,
)
from .walk import Arc, ArcState, VerblunskySeq, step

SOURCE_STATIONARY = "stationary-measure"
SOURCE_FLOW = "energy-flow"

# eigenvalue sanity thresholds used when certifying
_MODULUS_TOL = 1e-12
_BRANCH_TOL = 1e-8


@dataclass(frozen=True)
class CertifiedEigenpair:
    """Truncated eigenvector with its Rayleigh eigenvalue and residual."""

    vector: ArcState
    eigenvalue: complex
    residual: float
    source: str

    @property
    def norm_sq(self) -> float:
        return self.vector.norm_sq()

    @property
    def support_size(self) -> int:
        return len(self.vector.support())


def rayleigh_certify(state: ArcState, seq: VerblunskySeq) -> tuple[complex, float]:
    """Rayleigh quotient <psi, U psi>/<psi, psi> and the relative residual."""
    nsq = state.norm_sq()
    if nsq == 0.0:
        raise ZeroStateError("Rayleigh quotient of the zero state")
    image = step(state, seq)
    lam = state.inner(image) / nsq
    residual = image.distance(state.scaled(lam)) / math.sqrt(nsq)
    return lam, residual


def _amplitude_logs(chain: BDChain, flow: bool, tail_tol: float,
                    max_sites: int) -> list[float]:
    """log of |v_j| where v_j is the common amplitude of (j;R) and (j+1;L).

    Entries are emitted until twice the closed-form geometric bound on the
    remaining squared mass falls below tail_tol^2.  For chains without a
    known tail the last-term ratio stands in for the geometric ratio.
    """
    if flow:
        ratio_tail = chain.q(len(chain.table)) / chain.p(len(chain.table))
    else:
        ratio_tail = chain.p(len(chain.table)) / chain.q(len(chain.table))

    logs: list[float] = []
    acc = 0.0  # log of v_j^2 once site j has been folded in
    prev = None
    j = 0
    while True:
        if j > max_sites:
            raise ResourceLimitError(
                f"eigenvector support exceeded {max_sites} sites before the "
                f"tail bound {tail_tol} was reached")
        term = (math.log(chain.q(j)) - math.log(chain.p(j)) if flow
                else math.log(chain.p(j)) - math.log(chain.q(j)))
        acc += term
        if j >= len(chain.table) or not chain.tail_known:
            ratio = ratio_tail if chain.tail_known else (
                math.exp(acc - prev) if prev is not None else None)
            if ratio is not None and ratio < 1.0:
                remaining_sq = 2.0 * math.exp(acc) / (1.0 - ratio)
                if remaining_sq <= tail_tol * tail_tol:
                    return logs
        logs.append(0.5 * acc)
        prev = acc
        j += 1


def _build_pair(chain: BDChain, seq: VerblunskySeq, tail_tol: float | None,
                flow: bool, max_sites: int) -> CertifiedEigenpair:
    if tail_tol is None:
        tail_tol = 1e-14 if chain.tail_known else 1e-8
    if tail_tol <= 0:
        raise ValueError("tail_tol must be positive")
    logs = _amplitude_logs(chain, flow, tail_tol, max_sites)
    n = len(logs) + 1
    r = np.zeros(n, dtype=complex)
    l = np.zeros(n, dtype=complex)
    l[0] = 1.0
    for j, lg in enumerate(logs):
        v = math.exp(lg)
        if flow and (j + 1) % 2 == 1:
            v = -v
        r[j] = v
        l[j + 1] = v
    state = ArcState(r, l)

    lam, residual = rayleigh_certify(state, seq)
    kappa = seq.kappa
    if abs(abs(lam) - 1.0) > _MODULUS_TOL:
        raise CertificationError(f"|eigenvalue| = {abs(lam)} is off the circle")
    theta = math.atan2(lam.imag, lam.real)
    if abs(math.sin(theta) + kappa) > _BRANCH_TOL:
        raise CertificationError(
            f"sin(arg lambda) = {math.sin(theta)} does not match -kappa = {-kappa}")
    want_cos = -math.cos(theta) if flow else math.cos(theta)
    if want_cos < -_BRANCH_TOL:
        raise CertificationError(
            f"cos(arg lambda) = {math.cos(theta)} on the wrong side for "
            f"{'flow' if flow else 'stationary'} branch")
    return CertifiedEigenpair(
        vector=state, eigenvalue=lam, residual=residual,
        source=SOURCE_FLOW if flow else SOURCE_STATIONARY)


def stationary_eigenpair(chain: BDChain, seq: VerblunskySeq,
                         tail_tol: float | None = None,
                         assume_class: RecurrenceClass | None = None,
                         max_sites: int = 1_000_000) -> CertifiedEigenpair:
    """All-positive eigenvector grown from the reversible measure.

    Amplitudes are v_j = sqrt(p_0...p_j / (q_0...q_j)) on both (j;R) and
    (j+1;L), with 1 on the self-loop.  Requires a positive recurrent chain
    (pass ``assume_class`` to skip the internal classification, e.g. for
    chains whose tail cannot be certified).
    """
    rc = assume_class if assume_class is not None else classify(chain)
    if not rc.is_positive_recurrent:
        raise WrongClassError(
            f"stationary-measure eigenvector needs a positive recurrent "
            f"chain, got {rc.kind}")
    return _build_pair(chain, seq, tail_tol, flow=False, max_sites=max_sites)


def flow_eigenpair(chain: BDChain, seq: VerblunskySeq,
                   tail_tol: float | None = None,
                   assume_class: RecurrenceClass | None = None,
                   max_sites: int = 1_000_000) -> CertifiedEigenpair:
    """Alternating finite-flow eigenvector of a transient chain.

    Amplitudes are v_j = (-1)^{j+1} sqrt(q_0...q_j / (p_0...p_j)) on both
    (j;R) and (j+1;L); at every site the flow balance
    sqrt(q_j) psi(j;L) + sqrt(p_j) psi(j;R) = 0 holds.
    """
    rc = assume_class if assume_class is not None else classify(chain)
    if not rc.is_transient:
        raise WrongClassError(
            f"finite-flow eigenvector needs a transient chain, got {rc.kind}")
    return _build_pair(chain, seq, tail_tol, flow=True, max_sites=max_sites)


def localization_bound(seq: VerblunskySeq, pairs, arc, T: int,
                       orth_tol: float = 1e-8) -> tuple[float, float]:
    """Time-averaged return probability at ``arc`` vs the overlap bound.

    Returns ``(time_avg, bound)`` where time_avg = (1/T) sum_{t<T}
    |<delta_a, U^t delta_a>|^2 and bound = sum over the supplied eigenpairs
    of |<delta_a, psi_hat>|^4 with psi_hat normalized.  For large T the
    average should not drop below the bound (up to truncation error).
    """
    if T < 1:
        raise ValueError(f"horizon must be >= 1, got {T}")
    arc = Arc(*arc)
    pairs = list(pairs)
    normalized = [p.vector.scaled(1.0 / p.vector.norm()) for p in pairs]
    for i in range(len(normalized)):
        for j in range(i + 1, len(normalized)):
            ov = abs(normalized[i].inner(normalized[j]))
            if ov > orth_tol:
                raise ValueError(
                    f"eigenpairs {i} and {j} overlap by {ov:.3e} > {orth_tol}")
    bound = sum(abs(v.amplitude(arc)) ** 4 for v in normalized)

    cur = ArcState.delta(arc.site, arc.direction)
    acc = 0.0
    for _ in range(T):
        acc += abs(cur.amplitude(arc)) ** 2
        cur = step(cur, seq)
    return acc / T, float(bound)
