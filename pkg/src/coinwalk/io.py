"""File formats: state snapshots, parameter files, chain tables, reports.

Every float is serialized with 17 significant digits, so identical inputs
produce byte-identical files.  CSV files begin with a versioned
``# schema: <name>/1`` comment; readers skip ``#`` lines.  Complex scalars
travel as ``re+imi``.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .chains import BDChain, RecurrenceClass
from .eigenspace import CertifiedEigenpair
from .errors import InputFormatError
from .planar import DispersionTable, PlanarState
from .walk import ArcState, VerblunskySeq


def fmt(x: float) -> str:
    return f"{float(x):.17g}"


def fmt_complex(z: complex) -> str:
    z = complex(z)
    return f"{fmt(z.real)}{z.imag:+.17g}i"


def parse_complex(text: str) -> complex:
    try:
        return complex(text.strip().replace("i", "j"))
    except ValueError as exc:
        raise InputFormatError(f"cannot parse complex scalar {text!r}") from exc


def dumps_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _write(path, text: str) -> None:
    Path(path).write_text(text, encoding="utf-8")


def _data_lines(path) -> list[str]:
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    return [ln.strip() for ln in lines if ln.strip() and not ln.lstrip().startswith("#")]


# ---------------------------------------------------------------- arc states

def arc_state_csv(state: ArcState) -> str:
    lines = ["# schema: arc-state/1", "site,direction,re,im"]
    for arc, amp in state.items():
        lines.append(f"{arc.site},{arc.direction},{fmt(amp.real)},{fmt(amp.imag)}")
    return "\n".join(lines) + "\n"


def write_arc_state(state: ArcState, path) -> None:
    _write(path, arc_state_csv(state))


def read_arc_state(path) -> ArcState:
    rows = _data_lines(path)
    if not rows or rows[0] != "site,direction,re,im":
        raise InputFormatError(f"{path}: expected an arc-state CSV header")
    amplitudes = {}
    for row in rows[1:]:
        parts = row.split(",")
        if len(parts) != 4:
            raise InputFormatError(f"{path}: bad arc-state row {row!r}")
        try:
            site = int(parts[0])
            direction = parts[1].strip()
            amp = complex(float(parts[2]), float(parts[3]))
        except ValueError as exc:
            raise InputFormatError(f"{path}: bad arc-state row {row!r}") from exc
        amplitudes[(site, direction)] = amplitudes.get((site, direction), 0j) + amp
    try:
        return ArcState.from_amplitudes(amplitudes)
    except ValueError as exc:
        raise InputFormatError(f"{path}: {exc}") from exc


# ------------------------------------------------------- coin parameter files

def verblunsky_text(seq: VerblunskySeq) -> str:
    lines = ["# schema: verblunsky/1"]
    if seq.flavor == "constant":
        lines += ["constant", fmt_complex(seq.tail)]
    elif seq.flavor == "fourier":
        a, b, k = seq.angles
        lines += ["fourier", f"{fmt(a)} {fmt(b)} {fmt(k)}"]
    elif seq.flavor == "table":
        lines.append("table")
        for j, v in enumerate(seq.table):
            lines.append(f"{j} {fmt(v.real)} {fmt(v.imag)}")
        if seq.tail_known:
            lines.append(f"tail {fmt_complex(seq.tail)}")
    else:
        raise InputFormatError(f"unknown flavor {seq.flavor!r}")
    return "\n".join(lines) + "\n"


def write_verblunsky(seq: VerblunskySeq, path) -> None:
    _write(path, verblunsky_text(seq))


def read_verblunsky(path) -> VerblunskySeq:
    rows = _data_lines(path)
    if not rows:
        raise InputFormatError(f"{path}: empty coin-parameter file")
    flavor = rows[0].lower()
    body = rows[1:]
    try:
        if flavor == "constant":
            if len(body) != 1:
                raise InputFormatError(f"{path}: constant flavor needs one value")
            return VerblunskySeq.constant(parse_complex(body[0]))
        if flavor in ("fourier", "ae"):
            if len(body) != 1 or len(body[0].split()) != 3:
                raise InputFormatError(f"{path}: fourier flavor needs 'alpha beta k'")
            a, b, k = (float(x) for x in body[0].split())
            return VerblunskySeq.fourier_mode(a, b, k)
        if flavor == "table":
            values = []
            tail = None
            for row in body:
                parts = row.split()
                if parts[0] == "tail":
                    tail = parse_complex(" ".join(parts[1:]))
                    continue
                if len(parts) != 3:
                    raise InputFormatError(f"{path}: bad table row {row!r}")
                j, re, im = int(parts[0]), float(parts[1]), float(parts[2])
                if j != len(values):
                    raise InputFormatError(
                        f"{path}: table rows must be consecutive from 0, got {j}")
                values.append(complex(re, im))
            return VerblunskySeq.from_table(values, tail)
    except (ValueError, InputFormatError) as exc:
        if isinstance(exc, InputFormatError):
            raise
        raise InputFormatError(f"{path}: {exc}") from exc
    raise InputFormatError(f"{path}: unknown flavor {flavor!r}")


# ----------------------------------------------------------------- p tables

def chain_csv(chain: BDChain) -> str:
    lines = ["# schema: chain/1", "j,p"]
    for j, p in enumerate(chain.table):
        lines.append(f"{j},{fmt(p)}")
    if chain.tail_known:
        lines.append(f"tail,{fmt(chain.tail)}")
    return "\n".join(lines) + "\n"


def write_chain(chain: BDChain, path) -> None:
    _write(path, chain_csv(chain))


def read_chain(path) -> BDChain:
    rows = _data_lines(path)
    if not rows or rows[0] != "j,p":
        raise InputFormatError(f"{path}: expected a chain CSV with header 'j,p'")
    values = []
    tail = None
    for row in rows[1:]:
        parts = row.split(",")
        if len(parts) != 2:
            raise InputFormatError(f"{path}: bad chain row {row!r}")
        try:
            if parts[0].strip() == "tail":
                tail = float(parts[1])
                continue
            j, p = int(parts[0]), float(parts[1])
        except ValueError as exc:
            raise InputFormatError(f"{path}: bad chain row {row!r}") from exc
        if j != len(values):
            raise InputFormatError(
                f"{path}: chain rows must be consecutive from 0, got {j}")
        values.append(p)
    try:
        if not values and tail is not None:
            return BDChain.constant(tail)
        return BDChain.from_table(values, tail)
    except ValueError as exc:
        raise InputFormatError(f"{path}: {exc}") from exc


# -------------------------------------------------------------- planar states

def planar_state_csv(state: PlanarState) -> str:
    lines = ["# schema: planar-state/1"]
    if state.cylinder is not None:
        lines.append(f"# topology: cylinder circumference={state.cylinder}")
    else:
        lines.append("# topology: half-plane")
    lines.append("x,y,re0,im0,re1,im1")
    d = state.data
    for x in range(d.shape[0]):
        for yy in range(d.shape[1]):
            c0, c1 = d[x, yy]
            if c0 == 0 and c1 == 0:
                continue
            y = yy + (0 if state.cylinder is not None else state.y0)
            lines.append(f"{x},{y},{fmt(c0.real)},{fmt(c0.imag)},"
                         f"{fmt(c1.real)},{fmt(c1.imag)}")
    return "\n".join(lines) + "\n"


def write_planar_state(state: PlanarState, path) -> None:
    _write(path, planar_state_csv(state))


def read_planar_state(path) -> PlanarState:
    raw = Path(path).read_text(encoding="utf-8").splitlines()
    cylinder = None
    for ln in raw:
        ln = ln.strip()
        if ln.startswith("# topology: cylinder"):
            try:
                cylinder = int(ln.split("circumference=")[1])
            except (IndexError, ValueError) as exc:
                raise InputFormatError(f"{path}: bad topology line {ln!r}") from exc
    rows = [ln.strip() for ln in raw if ln.strip() and not ln.lstrip().startswith("#")]
    if not rows or rows[0] != "x,y,re0,im0,re1,im1":
        raise InputFormatError(f"{path}: expected a planar-state CSV header")
    points = []
    for row in rows[1:]:
        parts = row.split(",")
        if len(parts) != 6:
            raise InputFormatError(f"{path}: bad planar row {row!r}")
        try:
            x, y = int(parts[0]), int(parts[1])
            c0 = complex(float(parts[2]), float(parts[3]))
            c1 = complex(float(parts[4]), float(parts[5]))
        except ValueError as exc:
            raise InputFormatError(f"{path}: bad planar row {row!r}") from exc
        if x < 0:
            raise InputFormatError(f"{path}: negative x {x}")
        points.append((x, y, c0, c1))
    if not points:
        raise InputFormatError(f"{path}: planar state has no amplitudes")
    nx = max(p[0] for p in points) + 1
    if cylinder is not None:
        data = np.zeros((nx, cylinder, 2), dtype=complex)
        for x, y, c0, c1 in points:
            data[x, y % cylinder] += (c0, c1)
        return PlanarState(data, cylinder=cylinder)
    y0 = min(p[1] for p in points)
    ny = max(p[1] for p in points) - y0 + 1
    data = np.zeros((nx, ny, 2), dtype=complex)
    for x, y, c0, c1 in points:
        data[x, y - y0] += (c0, c1)
    return PlanarState(data, y0=y0)


# ----------------------------------------------------------------- dispersion

DISPERSION_HEADER = "k,theta_c,band_lo1,band_hi1,band_lo2,band_hi2,theta_0,mass,class"


def dispersion_csv(table: DispersionTable) -> str:
    lines = ["# schema: dispersion/1", DISPERSION_HEADER]
    for r in table.rows:
        lo1, hi1, lo2, hi2 = r.band
        theta0 = fmt(r.theta_0) if r.theta_0 is not None else ""
        lines.append(f"{fmt(r.k)},{fmt(r.theta_c)},{fmt(lo1)},{fmt(hi1)},"
                     f"{fmt(lo2)},{fmt(hi2)},{theta0},{fmt(r.mass)},{r.kind}")
    return "\n".join(lines) + "\n"


def write_dispersion(table: DispersionTable, path) -> None:
    _write(path, dispersion_csv(table))


def read_dispersion_rows(path) -> list[dict]:
    """Rows of a dispersion CSV as dicts (theta_0 is None where absent)."""
    rows = _data_lines(path)
    if not rows or rows[0] != DISPERSION_HEADER:
        raise InputFormatError(f"{path}: expected a dispersion CSV header")
    out = []
    for row in rows[1:]:
        parts = row.split(",")
        if len(parts) != 9:
            raise InputFormatError(f"{path}: bad dispersion row {row!r}")
        try:
            out.append({
                "k": float(parts[0]),
                "theta_c": float(parts[1]),
                "band_lo1": float(parts[2]),
                "band_hi1": float(parts[3]),
                "band_lo2": float(parts[4]),
                "band_hi2": float(parts[5]),
                "theta_0": float(parts[6]) if parts[6] else None,
                "mass": float(parts[7]),
                "class": parts[8],
            })
        except ValueError as exc:
            raise InputFormatError(f"{path}: bad dispersion row {row!r}") from exc
    return out


def dispersion_records(table: DispersionTable) -> list[dict]:
    out = []
    for r in table.rows:
        lo1, hi1, lo2, hi2 = r.band
        out.append({
            "k": r.k, "theta_c": r.theta_c,
            "band_lo1": lo1, "band_hi1": hi1, "band_lo2": lo2, "band_hi2": hi2,
            "theta_0": r.theta_0, "mass": r.mass, "class": r.kind,
        })
    return out


# -------------------------------------------------------------------- reports

def classification_report(rc: RecurrenceClass) -> dict:
    return rc.to_dict()


def eigenpair_report(pair: CertifiedEigenpair) -> dict:
    return {
        "source": pair.source,
        "eigenvalue": {"re": pair.eigenvalue.real, "im": pair.eigenvalue.imag},
        "norm_sq": pair.norm_sq,
        "residual": pair.residual,
        "support_size": pair.support_size,
    }
