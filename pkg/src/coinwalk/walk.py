"""Coined quantum walks on the half line, one complex coin parameter per site.

A state lives on the arcs of the half line.  Site ``j`` carries the arc
``(j;R)`` entering it from the right (origin ``j+1``) and the arc ``(j;L)``
entering it from the left (origin ``j-1``); ``(0;L)`` doubles as the
self-loop at the origin.  One time step is ``U = S . C``: the coin ``C``
mixes the amplitude pair at every site in the basis (from-right, from-left),
and the flip-flop shift ``S`` reverses every arc, fixing the self-loop.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator, Mapping

import numpy as np

from .errors import (
    AssumptionError,
    DegenerateCoinError,
    ResourceLimitError,
)

# Constancy tolerance for Im(eta_j) across sites.  Spectral operations
# refuse sequences whose imaginary part drifts beyond this.
IMAG_CONSTANCY_TOL = 1e-12

DIRECTIONS = ("L", "R")


class Arc(tuple):
    """Arc on the half line, ``Arc(site, direction)`` with direction L or R."""

    __slots__ = ()

    def __new__(cls, site: int, direction: str):
        site = int(site)
        if site < 0:
            raise ValueError(f"negative site {site}")
        if direction not in DIRECTIONS:
            raise ValueError(f"direction must be L or R, got {direction!r}")
        return super().__new__(cls, (site, direction))

    @property
    def site(self) -> int:
        return self[0]

    @property
    def direction(self) -> str:
        return self[1]

    def flipped(self) -> "Arc":
        """Arc with origin and terminus swapped; the self-loop is its own flip."""
        if self.site == 0 and self.direction == "L":
            return self
        if self.direction == "R":
            return Arc(self.site + 1, "L")
        return Arc(self.site - 1, "R")

    def __repr__(self) -> str:
        return f"Arc({self.site}, {self.direction!r})"


SELF_LOOP = Arc(0, "L")


def fourier_parameter(alpha: float, beta: float, k: float) -> complex:
    """Coin parameter of the wave-number-k mode of the two-angle planar walk."""
    return complex(-math.sin(alpha + beta) * math.cos(k),
                   math.sin(alpha - beta) * math.sin(k))


@dataclass(frozen=True)
class VerblunskySeq:
    """Rule ``j -> eta_j`` with ``|eta_j| <= 1`` defining the coin at each site.

    Flavors:

    * ``constant`` -- a single value at every site;
    * ``table`` -- explicit prefix, then a constant tail.  When no tail was
      declared the last table entry is repeated as a numerical convention,
      ``tail_known`` stays False and classification can only ever report
      partial sums;
    * ``fourier`` -- the (alpha, beta, k) family, constant in ``j``.
    """

    flavor: str
    table: tuple[complex, ...] = ()
    tail: complex = 0j
    tail_known: bool = True
    known_terms: int | None = None
    angles: tuple[float, float, float] | None = None

    def __post_init__(self):
        for v in (*self.table, self.tail):
            if abs(v) > 1 + 1e-12:
                raise ValueError(f"coin parameter {v} lies outside the unit disc")

    @classmethod
    def constant(cls, eta: complex) -> "VerblunskySeq":
        return cls("constant", (), complex(eta))

    @classmethod
    def from_table(cls, values, tail: complex | None = None) -> "VerblunskySeq":
        values = tuple(complex(v) for v in values)
        if tail is not None:
            return cls("table", values, complex(tail), tail_known=True)
        if not values:
            raise ValueError("an explicit table needs at least one entry")
        return cls("table", values, values[-1], tail_known=False,
                   known_terms=len(values))

    @classmethod
    def fourier_mode(cls, alpha: float, beta: float, k: float) -> "VerblunskySeq":
        eta = fourier_parameter(alpha, beta, k)
        return cls("fourier", (), eta, angles=(float(alpha), float(beta), float(k)))

    def eta(self, j: int) -> complex:
        if j < 0:
            raise ValueError(f"negative site {j}")
        if j < len(self.table):
            return self.table[j]
        return self.tail

    def eta_array(self, n: int) -> np.ndarray:
        out = np.full(n, self.tail, dtype=complex)
        m = min(n, len(self.table))
        if m:
            out[:m] = self.table[:m]
        return out

    def rho(self, j: int) -> float:
        return math.sqrt(max(0.0, 1.0 - abs(self.eta(j)) ** 2))

    @property
    def imag_constant(self) -> bool:
        ims = [v.imag for v in (*self.table, self.tail)]
        return max(ims) - min(ims) <= IMAG_CONSTANCY_TOL

    @property
    def kappa(self) -> float:
        """Common imaginary part of the coin parameters.

        Raises AssumptionError when Im(eta_j) is not constant across sites;
        every spectral operation relies on this value.
        """
        if not self.imag_constant:
            raise AssumptionError("Im(eta_j) varies with the site")
        return self.tail.imag

    def degenerate_sites(self) -> list[int]:
        """Sites whose coin parameter has unit modulus (rho_j = 0)."""
        bad = [j for j, v in enumerate(self.table) if abs(abs(v) - 1.0) <= 1e-15]
        if abs(abs(self.tail) - 1.0) <= 1e-15:
            bad.append(len(self.table))
        return bad


def coin_at(seq: VerblunskySeq, j: int) -> np.ndarray:
    """2x2 unitary coin at site j in the (from-right, from-left) basis."""
    e = seq.eta(j)
    r = seq.rho(j)
    return np.array([[-e, r], [r, e.conjugate()]], dtype=complex)


@dataclass(frozen=True)
class CoinEigenData:
    """Eigendata of a coin: kappa = cos(phi) and the splitting (p, q)."""

    kappa: float
    phi: float
    p: float
    q: float

    @property
    def eigenvalue(self) -> complex:
        """The coin eigenvalue -i e^{i phi} attached to [sqrt(p), sqrt(q)]."""
        return -1j * complex(math.cos(self.phi), math.sin(self.phi))

    @property
    def vector(self) -> np.ndarray:
        return np.array([math.sqrt(self.p), math.sqrt(self.q)])


def coin_eigen(eta: complex, kappa: float | None = None) -> CoinEigenData:
    """Splitting probabilities (p, q) carried by the coin with parameter eta.

    p = (1 - Re(eta)/sqrt(1-kappa^2))/2 and q = 1 - p; the vector
    [sqrt(p), sqrt(q)] is the (-i e^{i phi})-eigenvector of the coin,
    cos(phi) = kappa.  Rejects flat coins (|kappa| = 1) and unit-modulus
    parameters (rho = 0), both of which disconnect the lattice.
    """
    eta = complex(eta)
    if kappa is None:
        kappa = eta.imag
    if abs(eta.imag - kappa) > IMAG_CONSTANCY_TOL:
        raise AssumptionError(
            f"Im(eta) = {eta.imag} does not match kappa = {kappa}")
    if abs(kappa) >= 1.0:
        raise DegenerateCoinError(f"|kappa| = {abs(kappa)} leaves no splitting")
    if 1.0 - abs(eta) ** 2 <= 0.0:
        raise DegenerateCoinError(
            f"|eta| = {abs(eta)}: zero transmission disconnects the lattice")
    s = math.sqrt(1.0 - kappa * kappa)
    p = 0.5 * (1.0 - eta.real / s)
    q = 0.5 * (1.0 + eta.real / s)
    return CoinEigenData(kappa=float(kappa), phi=math.acos(kappa), p=p, q=q)


class ArcState:
    """Finitely supported complex amplitude function on arcs.

    Immutable; backed by two windowed arrays ``r[j] = amplitude(j;R)`` and
    ``l[j] = amplitude(j;L)``.  Amplitudes outside the window are exact
    zeros, so support queries are exact (no tolerance involved).
    """

    __slots__ = ("_r", "_l")

    def __init__(self, r, l):
        r = np.atleast_1d(np.asarray(r, dtype=complex))
        l = np.atleast_1d(np.asarray(l, dtype=complex))
        if r.ndim != 1 or l.ndim != 1:
            raise ValueError("amplitude arrays must be one-dimensional")
        n = max(len(r), len(l), 1)
        rr = np.zeros(n, dtype=complex)
        ll = np.zeros(n, dtype=complex)
        rr[: len(r)] = r
        ll[: len(l)] = l
        rr.flags.writeable = False
        ll.flags.writeable = False
        self._r = rr
        self._l = ll

    @property
    def r(self) -> np.ndarray:
        return self._r

    @property
    def l(self) -> np.ndarray:
        return self._l

    @property
    def window(self) -> int:
        return len(self._r)

    @classmethod
    def zero(cls) -> "ArcState":
        return cls([0j], [0j])

    @classmethod
    def delta(cls, site: int, direction: str, amplitude: complex = 1.0) -> "ArcState":
        arc = Arc(site, direction)
        n = arc.site + 1
        r = np.zeros(n, dtype=complex)
        l = np.zeros(n, dtype=complex)
        (r if arc.direction == "R" else l)[arc.site] = amplitude
        return cls(r, l)

    @classmethod
    def from_amplitudes(cls, amplitudes: Mapping) -> "ArcState":
        if not amplitudes:
            return cls.zero()
        arcs = {Arc(*key): complex(v) for key, v in amplitudes.items()}
        n = max(a.site for a in arcs) + 1
        r = np.zeros(n, dtype=complex)
        l = np.zeros(n, dtype=complex)
        for a, v in arcs.items():
            (r if a.direction == "R" else l)[a.site] += v
        return cls(r, l)

    def amplitude(self, site, direction=None) -> complex:
        if direction is None:
            site, direction = site
        arc = Arc(site, direction)
        if arc.site >= self.window:
            return 0j
        return complex((self._r if arc.direction == "R" else self._l)[arc.site])

    def __getitem__(self, arc) -> complex:
        return self.amplitude(arc)

    def norm_sq(self) -> float:
        return float(np.vdot(self._r, self._r).real + np.vdot(self._l, self._l).real)

    def norm(self) -> float:
        return math.sqrt(self.norm_sq())

    def inner(self, other: "ArcState") -> complex:
        """<self, other>, conjugate-linear in self."""
        n = min(self.window, other.window)
        return complex(np.vdot(self._r[:n], other._r[:n])
                       + np.vdot(self._l[:n], other._l[:n]))

    def distance(self, other: "ArcState") -> float:
        n = max(self.window, other.window)
        dr = np.zeros(n, dtype=complex)
        dl = np.zeros(n, dtype=complex)
        dr[: self.window] = self._r
        dl[: self.window] = self._l
        dr[: other.window] -= other._r
        dl[: other.window] -= other._l
        return float(np.sqrt(np.vdot(dr, dr).real + np.vdot(dl, dl).real))

    def scaled(self, c: complex) -> "ArcState":
        return ArcState(c * self._r, c * self._l)

    def support(self) -> tuple[Arc, ...]:
        out = []
        for j in range(self.window):
            if self._l[j] != 0:
                out.append(Arc(j, "L"))
            if self._r[j] != 0:
                out.append(Arc(j, "R"))
        return tuple(out)

    def items(self) -> Iterator[tuple[Arc, complex]]:
        for arc in self.support():
            yield arc, self.amplitude(arc)

    def max_site(self) -> int | None:
        """Largest site carrying a nonzero amplitude, None for the zero state."""
        nz_r = np.nonzero(self._r)[0]
        nz_l = np.nonzero(self._l)[0]
        if len(nz_r) == 0 and len(nz_l) == 0:
            return None
        top = -1
        if len(nz_r):
            top = max(top, int(nz_r[-1]))
        if len(nz_l):
            top = max(top, int(nz_l[-1]))
        return top

    def site_probabilities(self) -> np.ndarray:
        """|amplitude|^2 summed over the two arcs at each site."""
        return np.abs(self._r) ** 2 + np.abs(self._l) ** 2

    def __repr__(self) -> str:
        return f"ArcState(window={self.window}, norm={self.norm():.6g})"


def _rho_of(e: np.ndarray) -> np.ndarray:
    return np.sqrt(np.maximum(0.0, 1.0 - np.abs(e) ** 2))


def apply_coin(state: ArcState, seq: VerblunskySeq) -> ArcState:
    """Mix the (from-right, from-left) pair at every site by its coin."""
    n = state.window
    e = seq.eta_array(n)
    rho = _rho_of(e)
    r, l = state.r, state.l
    return ArcState(-e * r + rho * l, rho * r + np.conj(e) * l)


def apply_flip_flop(state: ArcState) -> ArcState:
    """Reverse every arc; the origin self-loop is a fixed point (S^2 = I)."""
    r, l = state.r, state.l
    n = state.window
    nr = np.zeros(n + 1, dtype=complex)
    nl = np.zeros(n + 1, dtype=complex)
    nr[: n - 1] = l[1:]          # out(x;R) = in(x+1;L)
    nl[1 : n + 1] = r[:n]        # out(x;L) = in(x-1;R)
    nl[0] = l[0]                 # self-loop
    return ArcState(nr, nl)


def step(state: ArcState, seq: VerblunskySeq) -> ArcState:
    """One step of U = S . C."""
    return apply_flip_flop(apply_coin(state, seq))


def step_moving(state: ArcState, seq: VerblunskySeq) -> ArcState:
    """The same operator assembled from a moving shift and a rotated coin.

    Implemented independently of :func:`step` as a cross-check.  The rotated
    coin [[rho, conj(eta)], [-eta, rho]] acts at every site except the
    origin, whose block keeps the plain coin because the self-loop is not
    relabelled by the moving shift; the shift advances inbound arcs toward
    the origin, turns (0;R) into (1;L), and fixes the self-loop.
    """
    n = state.window + 1
    e = seq.eta_array(n)
    rho = _rho_of(e)
    r = np.zeros(n, dtype=complex)
    l = np.zeros(n, dtype=complex)
    r[: state.window] = state.r
    l[: state.window] = state.l

    cr = rho * r + np.conj(e) * l
    cl = -e * r + rho * l
    cr[0] = -e[0] * r[0] + rho[0] * l[0]
    cl[0] = rho[0] * r[0] + np.conj(e[0]) * l[0]

    nr = np.zeros(n, dtype=complex)
    nl = np.zeros(n, dtype=complex)
    nr[: n - 1] = cr[1:]        # out(x;R) = in(x+1;R)
    nl[2:] = cl[1 : n - 1]      # out(x;L) = in(x-1;L) for x >= 2
    nl[1] = cr[0]               # the origin turnaround
    nl[0] = cl[0]               # self-loop fixed
    return ArcState(nr, nl)


def iter_steps(state: ArcState, seq: VerblunskySeq, t: int,
               site_cap: int = 100_000) -> Iterator[ArcState]:
    """Yield the states U^0 psi, U^1 psi, ..., U^t psi."""
    if t < 0:
        raise ValueError(f"negative step count {t}")
    yield state
    cur = state
    for _ in range(t):
        if cur.window + 1 > site_cap:
            raise ResourceLimitError(
                f"evolution window {cur.window + 1} exceeds the cap {site_cap}")
        cur = step(cur, seq)
        yield cur


def evolve(state: ArcState, seq: VerblunskySeq, t: int,
           site_cap: int = 100_000) -> list[ArcState]:
    """Exact evolution for t steps; returns t+1 states including the input."""
    return list(iter_steps(state, seq, t, site_cap=site_cap))


@dataclass(frozen=True)
class TruncatedWalk:
    """Dense matrix of the walk on the arcs with site <= N.

    The basis keeps (j;L) for j <= N and (j;R) for j <= N-1, dimension
    2N+1.  ``clipped`` flags basis arcs whose image partially leaves the
    window, making the corresponding column non-isometric; every other
    column has unit norm.  Used as a diagonalization oracle for isolated
    eigenvalues, whose eigenvectors decay fast enough that the clipped
    column is irrelevant.
    """

    matrix: np.ndarray
    arcs: tuple[Arc, ...]
    clipped: np.ndarray

    @property
    def size(self) -> int:
        return self.matrix.shape[0]

    def index(self, arc: Arc) -> int:
        arc = Arc(*arc)
        return 2 * arc.site if arc.direction == "L" else 2 * arc.site + 1

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvals(self.matrix)


def truncated_matrix(seq: VerblunskySeq, N: int) -> TruncatedWalk:
    """Hard-window truncation of U on arcs within sites [0, N]."""
    if N < 1:
        raise ValueError(f"window must contain at least one interior site, got {N}")
    e = seq.eta_array(N + 1)
    rho = _rho_of(e)
    dim = 2 * N + 1
    m = np.zeros((dim, dim), dtype=complex)
    # rows for (x;R), x <= N-1
    for x in range(N):
        if x + 1 <= N - 1:
            m[2 * x + 1, 2 * (x + 1) + 1] = rho[x + 1]
        m[2 * x + 1, 2 * (x + 1)] = np.conj(e[x + 1])
    # rows for (x;L), x >= 1
    for x in range(1, N + 1):
        m[2 * x, 2 * (x - 1) + 1] = -e[x - 1]
        m[2 * x, 2 * (x - 1)] = rho[x - 1]
    m[0, 1] = rho[0]
    m[0, 0] = np.conj(e[0])

    arcs = []
    for j in range(N):
        arcs.append(Arc(j, "L"))
        arcs.append(Arc(j, "R"))
    arcs.append(Arc(N, "L"))
    clipped = np.zeros(dim, dtype=bool)
    clipped[2 * N] = rho[N] > 0.0
    return TruncatedWalk(matrix=m, arcs=tuple(arcs), clipped=clipped)
