"""Acceptance suite: one test per criterion, one printed line per criterion.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the lines; every
tolerance is fixed here and matches the library's contracts.
"""

import math

import numpy as np
import pytest

from _support import make_rng, random_arc_state
from coinwalk import (
    ArcState,
    BDChain,
    CoinAngles,
    PlanarState,
    VerblunskySeq,
    classify,
    cmv_matrix,
    dispersion_table,
    edge_point,
    flow_eigenpair,
    fourier_reconstruct,
    from_walk,
    localization_bound,
    max_amplitude_difference,
    planar_step,
    reversible_measure,
    stationary_eigenpair,
    step,
    step_moving,
    verblunsky_of_k,
)

AE = CoinAngles(5 * math.pi / 4, math.pi / 6)

# twenty off-critical chains shared by criteria 2 and 3
TWENTY_PS = np.linspace(0.04, 0.96, 20)
KAPPAS = (0.0, 0.25, -0.25, 0.5, -0.5)


def report(name: str, ok: bool, detail: str = "") -> None:
    line = f"[{'PASS' if ok else 'FAIL'}] {name}"
    if detail:
        line += f" | {detail}"
    print(line)
    assert ok, line


def constant_seq(p: float, kappa: float = 0.0) -> VerblunskySeq:
    re = (1.0 - 2.0 * p) * math.sqrt(1.0 - kappa * kappa)
    return VerblunskySeq.constant(complex(re, kappa))


def certified_pair(p: float, kappa: float = 0.0):
    seq = constant_seq(p, kappa)
    chain = from_walk(seq)
    build = stationary_eigenpair if p < 0.5 else flow_eigenpair
    return build(chain, seq, tail_tol=1e-14), seq, chain


def test_criterion_1_recurrence_trichotomy():
    rc = classify(BDChain.constant(0.3))
    ok = rc.is_positive_recurrent and abs(rc.c_R - 7.0 / 4.0) <= 1e-12
    rc5 = classify(BDChain.constant(0.5))
    ok = ok and rc5.is_null_recurrent
    rc7 = classify(BDChain.constant(0.7))
    ok = ok and rc7.is_transient and abs(rc7.c_T - 9.0 / 28.0) <= 1e-12
    report("criterion 1: recurrence trichotomy with exact series", ok,
           f"c_R(0.3)={rc.c_R!r}, c_T(0.7)={rc7.c_T!r}")


def test_criterion_2_mass_formulas():
    worst = 0.0
    for p in TWENTY_PS:
        pair, _, _ = certified_pair(float(p))
        gap = abs(1.0 - 2.0 * p)
        worst = max(worst, abs(pair.norm_sq * gap - 1.0))
    report("criterion 2: eigenvector mass identities on 20 chains",
           worst <= 1e-9, f"max |norm_sq*(q-p) - 1| = {worst:.3e}")


def test_criterion_3_eigenpair_certification():
    worst_res = 0.0
    worst_mod = 0.0
    worst_branch = 0.0
    for i, p in enumerate(TWENTY_PS):
        kappa = KAPPAS[i % len(KAPPAS)]
        pair, _, _ = certified_pair(float(p), kappa)
        worst_res = max(worst_res, pair.residual)
        worst_mod = max(worst_mod, abs(abs(pair.eigenvalue) - 1.0))
        theta = math.atan2(pair.eigenvalue.imag, pair.eigenvalue.real)
        worst_branch = max(worst_branch, abs(math.sin(theta) + kappa))
    ok = worst_res <= 1e-10 and worst_mod <= 1e-12 and worst_branch <= 1e-8
    report("criterion 3: Rayleigh certification incl. complex coins", ok,
           f"residual={worst_res:.3e}, |lambda|-1={worst_mod:.3e}, "
           f"sin(arg)+kappa={worst_branch:.3e}")


def test_criterion_4_point_spectrum_dichotomy():
    ok = True
    details = []
    for k in (0.0, 0.3, math.pi, 4.0):
        cmv = cmv_matrix(AE, k, 400)
        iso = cmv.isolated_eigenvalues(margin=10.0 / 400)
        theta0, _ = edge_point(AE, k)
        target = complex(math.cos(theta0), math.sin(theta0))
        hit = len(iso) > 0 and np.min(np.abs(iso - target)) <= 1e-3
        ok = ok and hit
        details.append(f"k={k:.2f}:{'hit' if hit else 'MISS'}")
    for k in (math.pi / 2, 3 * math.pi / 2):
        iso = cmv_matrix(AE, k, 400).isolated_eigenvalues(margin=10.0 / 400)
        none_found = len(iso) == 0
        ok = ok and none_found
        details.append(f"k={k:.2f}:{'empty' if none_found else 'SPURIOUS'}")
    report("criterion 4: edge eigenvalue exists iff off-critical", ok,
           ", ".join(details))


def test_criterion_5_dispersion_reproduction():
    M = 1024
    table = dispersion_table(AE, M)
    absent = [m for m, row in enumerate(table.rows) if row.theta_0 is None]
    ok_absent = absent == [M // 4, 3 * M // 4]

    segments = ([], [], [])
    for row in table.rows:
        if row.theta_0 is None:
            continue
        if row.k < math.pi / 2:
            segments[0].append(row.theta_0)
        elif row.k < 3 * math.pi / 2:
            segments[1].append(row.theta_0)
        else:
            segments[2].append(row.theta_0)
    ok_monotone = all(np.all(np.diff(seg) > 0) for seg in segments)

    ok_theta_c = abs(table.rows[0].theta_c - 1.308997) <= 1e-6

    worst_gap = 0.0
    for row in table.rows:
        if row.theta_0 is not None:
            worst_gap = max(worst_gap, row.rho - abs(math.cos(row.theta_0)))
    ok_gap = worst_gap <= 1e-12

    report("criterion 5: dispersion table over 1024 wave numbers",
           ok_absent and ok_monotone and ok_theta_c and ok_gap,
           f"absent at grid {absent}, theta_c(0)={table.rows[0].theta_c:.6f}, "
           f"max band violation {worst_gap:.1e}")


def test_criterion_6_mode_pipeline_equivalence():
    state = PlanarState.point(0, 0, spin=(1.0, 0.0), cylinder=16)
    direct = state
    for _ in range(20):
        direct = planar_step(direct, AE)
    rebuilt = fourier_reconstruct(state, AE, 20)
    deviation = max_amplitude_difference(direct, rebuilt)
    report("criterion 6: direct vs mode-space evolution (L=16, n=20)",
           deviation <= 1e-9, f"max amplitude deviation {deviation:.3e}")


def test_criterion_7_localization_bound():
    results = []
    ok = True
    for p in (0.3, 0.7):
        pair, seq, _ = certified_pair(p)
        time_avg, bound = localization_bound(seq, [pair], (0, "L"), T=2000)
        good = time_avg >= 0.16 - 0.01 and abs(bound - 0.16) <= 1e-9
        ok = ok and good
        results.append(f"p={p}: avg={time_avg:.4f} bound={bound:.4f}")
    seq = constant_seq(0.5)
    time_avg, _ = localization_bound(seq, [], (0, "L"), T=2000)
    ok = ok and time_avg < 0.05
    results.append(f"p=0.5: avg={time_avg:.5f}")
    report("criterion 7: time-averaged return probability floor", ok,
           "; ".join(results))


def test_criterion_8_structural_property_suite():
    rng = make_rng(101)

    seqs = [
        VerblunskySeq.constant(0.3),
        VerblunskySeq.constant(0.2 - 0.35j),
        VerblunskySeq.from_table([0.5, -0.5, 0.25j], tail=0.1 + 0.25j),
        VerblunskySeq.fourier_mode(AE.alpha, AE.beta, 0.7),
    ]
    drift = 0.0
    for seq in seqs:
        s = random_arc_state(rng, sites=6)
        n0 = s.norm()
        for _ in range(100):
            s = step(s, seq)
        drift = max(drift, abs(s.norm() - n0))
    ok_unitary = drift <= 1e-11

    worst_eq = 0.0
    for i in range(100):
        seq = seqs[i % len(seqs)]
        s = random_arc_state(rng, sites=1 + (i % 10))
        worst_eq = max(worst_eq, step(s, seq).distance(step_moving(s, seq)))
    ok_shift = worst_eq <= 1e-14

    chain = BDChain.from_table([0.9, 0.2, 0.55, 0.8], tail=0.37)
    worst_db = 0.0
    for j in range(300):
        lhs = chain.p(j) * reversible_measure(chain, j) ** 2
        rhs = chain.q(j + 1) * reversible_measure(chain, j + 1) ** 2
        worst_db = max(worst_db, abs(lhs - rhs) / max(1.0, abs(lhs)))
    ok_db = worst_db <= 1e-12

    pair, _, chain_t = certified_pair(0.7)
    worst_k = 0.0
    top = pair.vector.max_site()
    for j in range(top + 1):
        lhs = (math.sqrt(chain_t.q(j)) * pair.vector.amplitude(j, "L")
               + math.sqrt(chain_t.p(j)) * pair.vector.amplitude(j, "R"))
        worst_k = max(worst_k, abs(lhs))
    ok_kirchhoff = worst_k <= 1e-12

    report("criterion 8: structural invariants",
           ok_unitary and ok_shift and ok_db and ok_kirchhoff,
           f"norm drift {drift:.1e}; shift equality {worst_eq:.1e}; "
           f"detailed balance {worst_db:.1e}; flow balance {worst_k:.1e}")
