"""Certified point-spectrum eigenpairs and the localization bound."""

import math

import numpy as np
import pytest

from _support import make_rng, random_arc_state
from coinwalk import (
    ArcState,
    VerblunskySeq,
    WrongClassError,
    ZeroStateError,
    flow_eigenpair,
    from_walk,
    localization_bound,
    rayleigh_certify,
    stationary_eigenpair,
    step,
    truncated_matrix,
)
from coinwalk.planar import band_distance


def constant_walk(eta):
    seq = VerblunskySeq.constant(eta)
    return from_walk(seq), seq


# ------------------------------------------------------------- psi branch

def test_stationary_pair_norm_and_entries():
    chain, seq = constant_walk(0.4)  # p = 0.3
    pair = stationary_eigenpair(chain, seq, tail_tol=1e-14)
    assert pair.source == "stationary-measure"
    assert pair.norm_sq == pytest.approx(2.5, abs=1e-9)
    assert pair.vector.amplitude(0, "L") == 1.0
    assert pair.vector.amplitude(0, "R") == pytest.approx(
        0.6546536707079771, abs=1e-12)  # sqrt(3/7)
    # paired structure psi(j;R) = psi(j+1;L), all entries positive
    for j in range(40):
        r = pair.vector.amplitude(j, "R")
        assert r.real > 0 and abs(r.imag) == 0.0
        assert r == pair.vector.amplitude(j + 1, "L")


def test_stationary_pair_eigenvalue_real_coin():
    chain, seq = constant_walk(0.4)
    pair = stationary_eigenpair(chain, seq, tail_tol=1e-14)
    assert pair.residual <= 1e-10
    assert abs(abs(pair.eigenvalue) - 1.0) <= 1e-12
    theta = math.atan2(pair.eigenvalue.imag, pair.eigenvalue.real)
    assert abs(math.sin(theta)) <= 1e-8          # kappa = 0
    assert pair.eigenvalue.real > 0


def test_stationary_pair_rejects_other_classes():
    for eta in (-0.4, 0.0):
        chain, seq = constant_walk(eta)
        with pytest.raises(WrongClassError):
            stationary_eigenpair(chain, seq)


# -------------------------------------------------------------- xi branch

def test_flow_pair_norm_signs_and_kirchhoff():
    chain, seq = constant_walk(-0.4)  # p = 0.7
    pair = flow_eigenpair(chain, seq, tail_tol=1e-14)
    assert pair.source == "energy-flow"
    assert pair.norm_sq == pytest.approx(2.5, abs=1e-9)
    assert pair.vector.amplitude(0, "R") == pytest.approx(
        -0.6546536707079771, abs=1e-12)  # -sqrt(q0/p0) = -sqrt(3/7)
    # alternating signs and the per-site flow balance
    for j in range(40):
        v = pair.vector.amplitude(j, "R")
        assert (v.real < 0) == (j % 2 == 0)
        lhs = (math.sqrt(chain.q(j)) * pair.vector.amplitude(j, "L")
               + math.sqrt(chain.p(j)) * pair.vector.amplitude(j, "R"))
        assert abs(lhs) <= 1e-12
    # symmetric pairing xi(j;R) = xi(j+1;L)
    for j in range(40):
        assert pair.vector.amplitude(j, "R") == pair.vector.amplitude(j + 1, "L")


def test_flow_pair_eigenvalue():
    chain, seq = constant_walk(-0.4)
    pair = flow_eigenpair(chain, seq, tail_tol=1e-14)
    assert pair.residual <= 1e-10
    assert pair.eigenvalue.real < 0
    assert abs(pair.eigenvalue.imag) <= 1e-8


def test_flow_pair_rejects_other_classes():
    for eta in (0.4, 0.0):
        chain, seq = constant_walk(eta)
        with pytest.raises(WrongClassError):
            flow_eigenpair(chain, seq)


# -------------------------------------------------- complex-coin eigenvalues

@pytest.mark.parametrize("kappa", [0.25, -0.25, 0.5, -0.5])
@pytest.mark.parametrize("gap", [0.4, -0.4])
def test_branch_identities_complex_coin(kappa, gap):
    # Re(eta) = (q - p) sqrt(1 - kappa^2) realizes |q - p| = |gap|
    re = gap * math.sqrt(1.0 - kappa * kappa)
    seq = VerblunskySeq.constant(complex(re, kappa))
    chain = from_walk(seq)
    build = stationary_eigenpair if gap > 0 else flow_eigenpair
    pair = build(chain, seq, tail_tol=1e-14)
    assert pair.residual <= 1e-10
    assert abs(abs(pair.eigenvalue) - 1.0) <= 1e-12
    theta = math.atan2(pair.eigenvalue.imag, pair.eigenvalue.real)
    assert abs(math.sin(theta) + kappa) <= 1e-8
    if gap > 0:
        assert math.cos(theta) > 0
    else:
        assert math.cos(theta) < 0
    assert pair.norm_sq * abs(gap) == pytest.approx(1.0, abs=1e-9)


# ---------------------------------------------------------------- rayleigh

def test_rayleigh_exact_eigenvector_three_site_walk():
    # |eta_2| = 1 disconnects sites {0,1,2}: the five arcs below are invariant
    seq = VerblunskySeq.from_table([0.3 + 0.1j, -0.2 + 0.1j, 1.0], tail=0.5)
    arcs = [(0, "L"), (0, "R"), (1, "L"), (1, "R"), (2, "L")]
    dim = len(arcs)
    mat = np.zeros((dim, dim), dtype=complex)
    for col, arc in enumerate(arcs):
        out = step(ArcState.delta(*arc), seq)
        for row, target in enumerate(arcs):
            mat[row, col] = out.amplitude(target)
    w, v = np.linalg.eig(mat)
    idx = int(np.argmax(np.abs(w)))
    state = ArcState.from_amplitudes(
        {arc: v[row, idx] for row, arc in enumerate(arcs)})
    lam, residual = rayleigh_certify(state, seq)
    assert residual <= 1e-14
    assert lam == pytest.approx(w[idx], abs=1e-12)


def test_rayleigh_random_state_and_zero_state():
    seq = VerblunskySeq.constant(0.2 + 0.1j)
    rng = make_rng(31)
    s = random_arc_state(rng, sites=7)
    _, residual = rayleigh_certify(s, seq)
    assert residual >= 0.0
    with pytest.raises(ZeroStateError):
        rayleigh_certify(ArcState.zero(), seq)


# --------------------------------------------------------- localization

def test_localization_bound_values():
    chain, seq = constant_walk(0.4)
    pair = stationary_eigenpair(chain, seq, tail_tol=1e-14)
    time_avg, bound = localization_bound(seq, [pair], (0, "L"), T=300)
    assert bound == pytest.approx(0.16, abs=1e-9)
    assert time_avg >= bound - 0.02

    chain, seq = constant_walk(-0.4)
    pair = flow_eigenpair(chain, seq, tail_tol=1e-14)
    _, bound = localization_bound(seq, [pair], (0, "L"), T=10)
    assert bound == pytest.approx(0.16, abs=1e-9)


def test_localization_bound_empty_pairs():
    _, seq = constant_walk(0.0)
    time_avg, bound = localization_bound(seq, [], (0, "L"), T=200)
    assert bound == 0.0
    assert time_avg < 0.05


def test_localization_bound_rejects_overlapping_pairs():
    chain, seq = constant_walk(0.4)
    pair = stationary_eigenpair(chain, seq, tail_tol=1e-14)
    with pytest.raises(ValueError):
        localization_bound(seq, [pair, pair], (0, "L"), T=10)


# ------------------------------------------------------------- exclusivity

def test_no_separated_eigenvalue_at_critical_point():
    # Re(eta) = 0 (p = 1/2): the truncation shows nothing outside the bands
    for eta in (0.0, 0.5j, 0.25j):
        seq = VerblunskySeq.constant(eta)
        tw = truncated_matrix(seq, 200)
        ev = tw.eigenvalues()
        theta_c = math.acos(math.sqrt(max(0.0, 1.0 - abs(eta) ** 2)))
        for lam in ev[np.abs(ev) >= 0.9]:
            assert band_distance(math.atan2(lam.imag, lam.real), theta_c) <= 1e-3


def test_certified_pair_exists_iff_off_critical():
    for eta in (0.3, -0.3, 0.72):
        seq = VerblunskySeq.constant(eta)
        chain = from_walk(seq)
        build = stationary_eigenpair if eta > 0 else flow_eigenpair
        pair = build(chain, seq, tail_tol=1e-14)
        assert pair.residual <= 1e-10
