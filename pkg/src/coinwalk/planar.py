"""Two-angle planar walk on the half plane, its per-mode reduction, and the
bulk/edge dispersion relation.

The walk alternates a vertical and a horizontal rotation coin
(angles alpha, beta) and is translation invariant along the boundary, so a
Fourier transform in y splits it into half-line walks labelled by the wave
number k.  Each mode carries the single coin parameter

    eta(k) = -sin(alpha+beta) cos(k) + i sin(alpha-beta) sin(k)

and the mode's recurrence class decides whether an edge eigenvalue exists
(positive recurrent or transient) or not (null recurrent); the continuous
bands are bounded by theta_c(k) = arccos(rho(k)).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .chains import (
    BDChain,
    NULL_RECURRENT,
    POSITIVE_RECURRENT,
    RecurrenceClass,
    TRANSIENT,
    classify,
)
from .errors import CertificationError, DegenerateCoinError, ResourceLimitError
from .walk import VerblunskySeq, coin_eigen, fourier_parameter

# |Re eta(k)| at or below this counts as the critical (null recurrent) case;
# it absorbs the rounding of cos(pi/2) without touching any physical value.
NULL_TOL = 1e-12


@dataclass(frozen=True)
class CoinAngles:
    """The two rotation angles, reduced mod 2*pi."""

    alpha: float
    beta: float

    def __post_init__(self):
        object.__setattr__(self, "alpha", float(self.alpha) % (2.0 * math.pi))
        object.__setattr__(self, "beta", float(self.beta) % (2.0 * math.pi))


def rotation(gamma: float) -> np.ndarray:
    c, s = math.cos(gamma), math.sin(gamma)
    return np.array([[c, -s], [s, c]], dtype=complex)


def _stencil_blocks(angles: CoinAngles):
    ha = rotation(angles.alpha)
    hb = rotation(angles.beta)

    def keep_top(h):   # |0><0| H
        return np.array([[h[0, 0], h[0, 1]], [0, 0]], dtype=complex)

    def keep_bot(h):   # |1><1| H
        return np.array([[0, 0], [h[1, 0], h[1, 1]]], dtype=complex)

    def turn(h):       # |1><0| H
        return np.array([[0, 0], [h[0, 0], h[0, 1]]], dtype=complex)

    pa, qa, sa = keep_top(ha), keep_bot(ha), turn(ha)
    pb, qb = keep_top(hb), keep_bot(hb)
    return {
        "QQ": qa @ qb, "QP": qa @ pb,
        "PQ": pa @ qb, "PP": pa @ pb,
        "SQ": sa @ qb, "SP": sa @ pb,
    }


class PlanarState:
    """Finitely supported C^2-valued amplitudes on the half plane or a cylinder.

    ``data[x, y', :]`` holds the spinor at (x, y0 + y'); on a cylinder of
    circumference L the y index runs over 0..L-1 and y0 is 0.
    """

    __slots__ = ("_data", "_cylinder", "_y0")

    def __init__(self, data, cylinder: int | None = None, y0: int = 0):
        data = np.asarray(data, dtype=complex)
        if data.ndim != 3 or data.shape[2] != 2:
            raise ValueError("planar amplitudes must have shape (nx, ny, 2)")
        if cylinder is not None:
            if data.shape[1] != cylinder:
                raise ValueError(
                    f"cylinder of circumference {cylinder} needs ny = {cylinder}")
            y0 = 0
        data = data.copy()
        data.flags.writeable = False
        self._data = data
        self._cylinder = cylinder
        self._y0 = int(y0)

    @property
    def data(self) -> np.ndarray:
        return self._data

    @property
    def cylinder(self) -> int | None:
        return self._cylinder

    @property
    def y0(self) -> int:
        return self._y0

    @property
    def topology(self) -> str:
        return "half-plane" if self._cylinder is None else "cylinder"

    @classmethod
    def point(cls, x: int, y: int, spin=(1.0, 0.0), *,
              cylinder: int | None = None) -> "PlanarState":
        if x < 0:
            raise ValueError(f"negative x {x}")
        spin = np.asarray(spin, dtype=complex)
        if cylinder is not None:
            data = np.zeros((x + 1, cylinder, 2), dtype=complex)
            data[x, y % cylinder] = spin
            return cls(data, cylinder=cylinder)
        data = np.zeros((x + 1, 1, 2), dtype=complex)
        data[x, 0] = spin
        return cls(data, y0=y)

    def amplitude(self, x: int, y: int) -> np.ndarray:
        if x < 0 or x >= self._data.shape[0]:
            return np.zeros(2, dtype=complex)
        if self._cylinder is not None:
            return self._data[x, y % self._cylinder].copy()
        yy = y - self._y0
        if yy < 0 or yy >= self._data.shape[1]:
            return np.zeros(2, dtype=complex)
        return self._data[x, yy].copy()

    def norm_sq(self) -> float:
        return float(np.sum(np.abs(self._data) ** 2))

    def norm(self) -> float:
        return math.sqrt(self.norm_sq())

    def probabilities(self) -> np.ndarray:
        """|amplitude|^2 summed over the spinor, shape (nx, ny)."""
        return np.sum(np.abs(self._data) ** 2, axis=2)

    def __repr__(self) -> str:
        return (f"PlanarState({self.topology}, nx={self._data.shape[0]}, "
                f"ny={self._data.shape[1]}, norm={self.norm():.6g})")


def planar_step(state: PlanarState, angles: CoinAngles) -> PlanarState:
    """One step of the alternating two-coin walk.

    Away from the boundary the walker hops diagonally from (x-1, y-1),
    (x-1, y+1), (x+1, y-1), (x+1, y+1); on the x = 0 column the two
    outward-pointing terms are replaced by the turnaround blocks reading
    (0, y-1) and (0, y+1).  Nothing at negative x is ever read.
    """
    blocks = _stencil_blocks(angles)
    d = state.data
    nx = d.shape[0]

    if state.cylinder is not None:
        padded = np.zeros((nx + 2, d.shape[1], 2), dtype=complex)
        padded[:nx] = d
        ym = np.roll(padded, 1, axis=1)    # ym[x, y] = padded[x, y-1]
        yp = np.roll(padded, -1, axis=1)   # yp[x, y] = padded[x, y+1]
        new_y0 = 0
    else:
        padded = np.zeros((nx + 2, d.shape[1] + 2, 2), dtype=complex)
        padded[:nx, 1:-1] = d
        ym = np.zeros_like(padded)
        ym[:, 1:] = padded[:, :-1]
        yp = np.zeros_like(padded)
        yp[:, :-1] = padded[:, 1:]
        new_y0 = state.y0 - 1

    def app(mat, block):
        return np.einsum("ij,xyj->xyi", mat, block)

    out = np.zeros((nx + 1, padded.shape[1], 2), dtype=complex)
    out[1:] = (app(blocks["QQ"], ym[: nx]) + app(blocks["QP"], yp[: nx])
               + app(blocks["PQ"], ym[2 : nx + 2]) + app(blocks["PP"], yp[2 : nx + 2]))
    out[0] = (blocks["SQ"] @ ym[0].T + blocks["SP"] @ yp[0].T
              + blocks["PQ"] @ ym[1].T + blocks["PP"] @ yp[1].T).T
    return PlanarState(out, cylinder=state.cylinder, y0=new_y0)


def verblunsky_of_k(angles: CoinAngles, k: float) -> complex:
    """Coin parameter of the wave-number-k mode."""
    return fourier_parameter(angles.alpha, angles.beta, k)


def fourier_seq(angles: CoinAngles, k: float) -> VerblunskySeq:
    """The mode's half-line walk as a constant coin-parameter sequence."""
    return VerblunskySeq.fourier_mode(angles.alpha, angles.beta, k)


def band_edge_angle(angles: CoinAngles, k: float) -> float:
    """theta_c(k) = arccos(rho(k)), the quasi-energy where the bands start.

    Evaluated through the closed form
    arccos(sqrt(cos^2(alpha-beta) - sin(2 alpha) sin(2 beta) cos^2 k)),
    whose radicand equals rho(k)^2 identically; leaving [0, 1] by more than
    1e-12 signals a parameter bug.
    """
    rad = (math.cos(angles.alpha - angles.beta) ** 2
           - math.sin(2 * angles.alpha) * math.sin(2 * angles.beta)
           * math.cos(k) ** 2)
    if rad < -1e-12 or rad > 1.0 + 1e-12:
        raise ValueError(f"band radicand {rad} outside [0, 1]")
    rad = min(1.0, max(0.0, rad))
    return math.acos(math.sqrt(rad))


def edge_point(angles: CoinAngles, k: float,
               null_tol: float = NULL_TOL) -> tuple[float, float] | None:
    """Edge quasi-energy and mass at wave number k, or None.

    Absent exactly when sin(alpha-beta) vanishes or Re eta(k) vanishes
    (within ``null_tol``).  Otherwise returns (theta_0, m_0) with theta_0
    in [0, 2*pi): arcsin(-Im eta) on the positive-real branch and
    pi - arcsin(-Im eta) on the negative-real branch, and
    m_0 = |Re eta| / sqrt(1 - Im(eta)^2).
    """
    if abs(math.sin(angles.alpha - angles.beta)) <= null_tol:
        return None
    eta = verblunsky_of_k(angles, k)
    if abs(eta.real) <= null_tol:
        return None
    if eta.real > 0:
        theta = math.asin(-eta.imag)
    else:
        theta = math.pi - math.asin(-eta.imag)
    theta %= 2.0 * math.pi
    mass = abs(eta.real) / math.sqrt(1.0 - eta.imag ** 2)
    return theta, mass


def classify_k(angles: CoinAngles, k: float,
               null_tol: float = NULL_TOL) -> RecurrenceClass:
    """Recurrence class of the mode's underlying chain.

    Delegates to the series criteria on the constant chain induced by
    eta(k) and cross-checks the result against the sign of Re eta(k).
    """
    eta = verblunsky_of_k(angles, k)
    if abs(abs(eta.imag) - 1.0) <= 1e-15 or abs(eta.imag) > 1.0:
        raise DegenerateCoinError(f"|Im eta({k})| = {abs(eta.imag)}")
    if abs(eta.real) <= null_tol:
        return RecurrenceClass(NULL_RECURRENT)
    expected = POSITIVE_RECURRENT if eta.real > 0 else TRANSIENT
    if 1.0 - abs(eta) ** 2 <= 0.0:
        # flat-coin boundary of the family: the sign rule extends continuously
        return RecurrenceClass(expected)
    rc = classify(BDChain.constant(coin_eigen(eta).p))
    if rc.kind != expected:
        raise CertificationError(
            f"series criteria gave {rc.kind} but Re eta = {eta.real} "
            f"demands {expected}")
    return rc


@dataclass(frozen=True)
class FourierRecord:
    """Per-wave-number dispersion data."""

    k: float
    eta: complex
    rho: float
    theta_c: float
    theta_0: float | None
    mass: float
    kind: str

    @property
    def band(self) -> tuple[float, float, float, float]:
        """(lo1, hi1, lo2, hi2) quasi-energy edges of the two bands."""
        return (self.theta_c, math.pi - self.theta_c,
                math.pi + self.theta_c, 2.0 * math.pi - self.theta_c)


@dataclass(frozen=True)
class DispersionTable:
    angles: CoinAngles
    rows: tuple[FourierRecord, ...]


def dispersion_table(angles: CoinAngles, M: int,
                     null_tol: float = NULL_TOL) -> DispersionTable:
    """Dispersion data on the uniform grid k_m = 2 pi m / M (0 included,
    2 pi excluded); edge jumps show up as grid points with an absent edge."""
    if M < 2:
        raise ValueError(f"grid size must be >= 2, got {M}")
    rows = []
    for m in range(M):
        k = 2.0 * math.pi * m / M
        eta = verblunsky_of_k(angles, k)
        rho = math.sqrt(max(0.0, 1.0 - abs(eta) ** 2))
        theta_c = band_edge_angle(angles, k)
        rc = classify_k(angles, k, null_tol=null_tol)
        ep = edge_point(angles, k, null_tol=null_tol)
        theta_0 = ep[0] if ep is not None else None
        mass = (abs(eta.real) / math.sqrt(1.0 - eta.imag ** 2)
                if abs(eta.imag) < 1.0 else 0.0)
        rows.append(FourierRecord(k=k, eta=eta, rho=rho, theta_c=theta_c,
                                  theta_0=theta_0, mass=mass, kind=rc.kind))
    return DispersionTable(angles=angles, rows=tuple(rows))


def operator_hat(angles: CoinAngles, k: float) -> np.ndarray:
    """The 2x2 unitary whose diagonal phases drive the mode's gauge."""
    ca, sa = math.cos(angles.alpha), math.sin(angles.alpha)
    cb, sb = math.cos(angles.beta), math.sin(angles.beta)
    em = complex(math.cos(k), -math.sin(k))
    ep = em.conjugate()
    return np.array([
        [em * ca * cb - ep * sa * sb, -em * ca * sb - ep * sa * cb],
        [em * sa * cb + ep * ca * sb, -em * sa * sb + ep * ca * cb],
    ])


def gauge_phases(angles: CoinAngles, k: float, n: int) -> np.ndarray:
    """Gauge angles omega(0..n-1) aligning the mode walk with its banded form.

    omega(2j) = j arg(h00) and omega(2j+1) = -(j+1) arg(h11), where h is the
    2x2 mode operator; these are the unique linear-in-j phases under which
    the transported walk reproduces the direct planar stepping (validated to
    rounding accuracy by the reconstruction equivalence tests).
    """
    h = operator_hat(angles, k)
    if abs(h[0, 0]) < 1e-300 or abs(h[1, 1]) < 1e-300:
        raise DegenerateCoinError(
            f"gauge phase undefined at k = {k}: diagonal of the mode "
            f"operator vanishes")
    a00 = math.atan2(h[0, 0].imag, h[0, 0].real)
    a11 = math.atan2(h[1, 1].imag, h[1, 1].real)
    out = np.empty(n, dtype=float)
    idx = np.arange(n)
    out[0::2] = (idx[0::2] // 2) * a00
    out[1::2] = -(idx[1::2] // 2 + 1) * a11
    return out


def _theta_block(a: complex) -> np.ndarray:
    rho = math.sqrt(max(0.0, 1.0 - abs(a) ** 2))
    return np.array([[np.conj(a), rho], [rho, -a]], dtype=complex)


@dataclass(frozen=True)
class CMVData:
    """Banded unitary truncation of the mode operator in its gauge basis.

    ``verblunsky`` lists the true coefficients (eta, 0, eta, 0, ...); the
    final one is replaced by the unimodular boundary value 1 inside
    ``matrix`` so the truncation stays exactly unitary.
    """

    matrix: np.ndarray
    verblunsky: tuple[complex, ...]
    hhat: np.ndarray
    omega: np.ndarray
    k: float
    angles: CoinAngles

    @property
    def size(self) -> int:
        return self.matrix.shape[0]

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvals(self.matrix)

    def isolated_eigenvalues(self, margin: float | None = None,
                             min_modulus: float = 0.9,
                             origin_mass: float = 0.5) -> np.ndarray:
        """Gap eigenvalues whose eigenvectors live at the physical origin.

        Eigenvalues closer than ``margin`` (default 10/N) to the continuous
        bands are truncation noise and dropped.  The unimodular closure at
        the far end of the window supports a mirror gap state localized
        there; eigenvectors carrying less than ``origin_mass`` of their
        weight in the lower half of the window are discarded as well.
        """
        if margin is None:
            margin = 10.0 / self.size
        theta_c = band_edge_angle(self.angles, self.k)
        w, v = np.linalg.eig(self.matrix)
        half = self.size // 2
        out = []
        for i, lam in enumerate(w):
            if abs(lam) < min_modulus:
                continue
            if band_distance(math.atan2(lam.imag, lam.real), theta_c) <= margin:
                continue
            weight = np.abs(v[:, i]) ** 2
            if weight[:half].sum() >= origin_mass * weight.sum():
                out.append(lam)
        return np.asarray(out, dtype=complex)


def cmv_matrix(angles: CoinAngles, k: float, N: int) -> CMVData:
    """N x N unitary truncation of the canonical banded form with
    coefficients (eta(k), 0, eta(k), 0, ...)."""
    if N < 4 or N % 2:
        raise ValueError(f"truncation size must be even and >= 4, got {N}")
    eta = verblunsky_of_k(angles, k)
    alphas = tuple(eta if i % 2 == 0 else 0j for i in range(N))

    lm = np.zeros((N, N), dtype=complex)
    for i in range(0, N, 2):
        lm[i : i + 2, i : i + 2] = _theta_block(alphas[i])
    mm = np.zeros((N, N), dtype=complex)
    mm[0, 0] = 1.0
    for i in range(1, N - 1, 2):
        mm[i : i + 2, i : i + 2] = _theta_block(alphas[i])
    mm[N - 1, N - 1] = 1.0  # unimodular boundary coefficient

    return CMVData(matrix=lm @ mm, verblunsky=alphas,
                   hhat=operator_hat(angles, k),
                   omega=gauge_phases(angles, k, N), k=k, angles=angles)


def circle_distance(a: float, b: float) -> float:
    """Arc distance between two angles."""
    return abs((a - b + math.pi) % (2.0 * math.pi) - math.pi)


def band_distance(theta: float, theta_c: float) -> float:
    """Arc distance from quasi-energy theta to the two continuous bands."""
    t = theta % (2.0 * math.pi)
    best = math.inf
    for lo, hi in ((theta_c, math.pi - theta_c),
                   (math.pi + theta_c, 2.0 * math.pi - theta_c)):
        if lo <= t <= hi:
            return 0.0
        best = min(best, circle_distance(t, lo), circle_distance(t, hi))
    return best


def isolated_points(eigvals: np.ndarray, theta_c: float, margin: float,
                    min_modulus: float = 0.9) -> np.ndarray:
    """Eigenvalues of a truncation that sit in a spectral gap.

    Keeps eigenvalues whose argument is more than ``margin`` away from the
    bands (arc distance) and whose modulus is at least ``min_modulus``; the
    modulus filter removes artifacts of non-unitary truncations, which live
    well inside the disc.
    """
    out = []
    for lam in np.atleast_1d(eigvals):
        if abs(lam) < min_modulus:
            continue
        if band_distance(math.atan2(lam.imag, lam.real), theta_c) > margin:
            out.append(lam)
    return np.asarray(out, dtype=complex)


def fourier_reconstruct(state: PlanarState, angles: CoinAngles, n: int,
                        cmv_size: int | None = None) -> PlanarState:
    """Evolve a cylinder state n steps through the per-mode banded form.

    Fourier transforms in y (exact on a cylinder), pushes every mode
    through its gauge, applies the transposed banded unitary n times,
    reverses the gauge and transforms back.  Independent of
    :func:`planar_step`, which it must reproduce to rounding accuracy.
    """
    if state.cylinder is None:
        raise ValueError("mode-space evolution needs a cylinder state")
    if n < 0:
        raise ValueError(f"negative step count {n}")
    circumference = state.cylinder
    nx = state.data.shape[0]
    needed = 2 * (nx + n + 2)
    if cmv_size is None:
        cmv_size = needed
    if cmv_size % 2 or cmv_size < 4:
        raise ValueError(f"cmv_size must be even and >= 4, got {cmv_size}")
    if cmv_size < 2 * (nx + n):
        raise ResourceLimitError(
            f"truncation window {cmv_size} cannot hold the light cone "
            f"({2 * (nx + n)} indices)")
    half = cmv_size // 2

    # forward transform: phat[x, m, :] = sum_y data[x, y, :] e^{i k_m y}
    phat = circumference * np.fft.ifft(state.data, axis=1)
    out_hat = np.zeros((half, circumference, 2), dtype=complex)

    for m in range(circumference):
        k = 2.0 * math.pi * m / circumference
        cmv = cmv_matrix(angles, k, cmv_size)
        phase = np.exp(1j * cmv.omega)
        f = np.zeros(cmv_size, dtype=complex)
        f[0::2] = phase[0::2] * np.concatenate(
            [phat[:, m, 1], np.zeros(half - nx)])
        f[1::2] = phase[1::2] * np.concatenate(
            [phat[:, m, 0], np.zeros(half - nx)])
        transport = cmv.matrix.T
        for _ in range(n):
            f = transport @ f
        back = np.conj(phase) * f
        out_hat[:, m, 0] = back[1::2]
        out_hat[:, m, 1] = back[0::2]

    out = np.fft.fft(out_hat, axis=1) / circumference
    return PlanarState(out[: nx + n], cylinder=circumference)


def max_amplitude_difference(a: PlanarState, b: PlanarState) -> float:
    """Largest pointwise spinor amplitude difference between two states."""
    if (a.cylinder is None) != (b.cylinder is None):
        raise ValueError("states live on different topologies")
    if a.cylinder is not None and a.cylinder != b.cylinder:
        raise ValueError("cylinder circumferences differ")
    nx = max(a.data.shape[0], b.data.shape[0])
    if a.cylinder is not None:
        da = np.zeros((nx, a.cylinder, 2), dtype=complex)
        db = np.zeros_like(da)
        da[: a.data.shape[0]] = a.data
        db[: b.data.shape[0]] = b.data
        return float(np.max(np.abs(da - db)))
    lo = min(a.y0, b.y0)
    hi = max(a.y0 + a.data.shape[1], b.y0 + b.data.shape[1])
    da = np.zeros((nx, hi - lo, 2), dtype=complex)
    db = np.zeros_like(da)
    da[: a.data.shape[0], a.y0 - lo : a.y0 - lo + a.data.shape[1]] = a.data
    db[: b.data.shape[0], b.y0 - lo : b.y0 - lo + b.data.shape[1]] = b.data
    return float(np.max(np.abs(da - db)))
