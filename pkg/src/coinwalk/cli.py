"""Command-line front end.

Subcommands: classify, eigen, evolve, dispersion, ae-evolve.  Shared flags:
--out, --format {csv,json}, --tol, --max-terms, --cutoff, --config.  A
config file holds ``key=value`` lines mirroring the long flag names; flags
override the file.  Exit codes: 0 ok, 2 malformed input, 3 undetermined
classification, 4 no point spectrum, 5 resource cap exceeded.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import io as cwio
from .chains import classify, from_walk
from .eigenspace import flow_eigenpair, stationary_eigenpair
from .errors import (
    AssumptionError,
    CertificationError,
    CoinwalkError,
    DegenerateCoinError,
    InputFormatError,
    ResourceLimitError,
    WrongClassError,
)
from .planar import (
    CoinAngles,
    PlanarState,
    dispersion_table,
    fourier_reconstruct,
    max_amplitude_difference,
    planar_step,
)
from .walk import ArcState, VerblunskySeq, iter_steps

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_UNDETERMINED = 3
EXIT_NO_POINT_SPECTRUM = 4
EXIT_RESOURCE = 5

GRID_CAP = 1_000_000
STEP_CAP = 1_000_000


def _add_common(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--out", help="output file (default: stdout)")
    sub.add_argument("--format", choices=("csv", "json"), dest="fmt",
                     help="output format")
    sub.add_argument("--tol", type=float, help="numerical tolerance")
    sub.add_argument("--max-terms", type=int, dest="max_terms",
                     help="series horizon for classification")
    sub.add_argument("--cutoff", type=int,
                     help="resource cap (sites / matrix size)")
    sub.add_argument("--config", help="key=value file mirroring the flags")


def _add_walk_inputs(sub: argparse.ArgumentParser, with_table: bool = True) -> None:
    sub.add_argument("--eta", help="constant coin parameter, e.g. 0.3 or 0.1+0.2i")
    sub.add_argument("--seq", help="coin-parameter file")
    if with_table:
        sub.add_argument("--table", help="chain CSV (columns j,p; optional tail row)")
    sub.add_argument("--alpha", type=float, help="first rotation angle (radians)")
    sub.add_argument("--beta", type=float, help="second rotation angle (radians)")
    sub.add_argument("--k", type=float, help="wave number of the reduced mode")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="coinwalk",
        description="Half-line coined walks: recurrence classes, point "
                    "spectra, evolution, and edge-state dispersion.")
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("classify", help="recurrence class of the underlying chain")
    _add_walk_inputs(p)
    _add_common(p)
    p.set_defaults(func=cmd_classify)

    p = subs.add_parser("eigen", help="certified point-spectrum eigenpair")
    _add_walk_inputs(p)
    p.add_argument("--vector-out", dest="vector_out",
                   help="write the truncated eigenvector as an arc-state CSV")
    _add_common(p)
    p.set_defaults(func=cmd_eigen)

    p = subs.add_parser("evolve", help="evolve a half-line state, emit marginals")
    _add_walk_inputs(p, with_table=False)
    p.add_argument("--steps", type=int, help="number of steps")
    p.add_argument("--state", help="initial arc-state CSV (default: self-loop)")
    _add_common(p)
    p.set_defaults(func=cmd_evolve)

    p = subs.add_parser("dispersion", help="bulk/edge dispersion table over k")
    p.add_argument("--alpha", type=float, help="first rotation angle (radians)")
    p.add_argument("--beta", type=float, help="second rotation angle (radians)")
    p.add_argument("--grid", type=int, help="number of k grid points (default 1024)")
    _add_common(p)
    p.set_defaults(func=cmd_dispersion)

    p = subs.add_parser("ae-evolve", help="evolve the two-angle planar walk")
    p.add_argument("--alpha", type=float, help="first rotation angle (radians)")
    p.add_argument("--beta", type=float, help="second rotation angle (radians)")
    p.add_argument("--steps", type=int, help="number of steps")
    p.add_argument("--cylinder", type=int,
                   help="evolve on a cylinder of this circumference")
    p.add_argument("--state", help="initial planar-state CSV (default: spin-up "
                                   "excitation at the boundary origin)")
    p.add_argument("--check-fourier", action="store_const", const=True,
                   default=None, dest="check_fourier",
                   help="cross-check against the mode-space pipeline and "
                        "report the largest amplitude deviation")
    _add_common(p)
    p.set_defaults(func=cmd_ae_evolve)

    return parser


# ------------------------------------------------------------- configuration

class Settings:
    """Flag values with config-file fallback; flags always win."""

    def __init__(self, args: argparse.Namespace):
        self.args = args
        self.file: dict[str, str] = {}
        cfg = getattr(args, "config", None)
        if cfg:
            path = Path(cfg)
            if not path.exists():
                raise InputFormatError(f"config file {cfg} does not exist")
            for ln in path.read_text(encoding="utf-8").splitlines():
                ln = ln.strip()
                if not ln or ln.startswith("#"):
                    continue
                if "=" not in ln:
                    raise InputFormatError(f"config line {ln!r} is not key=value")
                key, value = ln.split("=", 1)
                self.file[key.strip().replace("-", "_")] = value.strip()

    def get(self, name: str, cast=str, default=None):
        value = getattr(self.args, name, None)
        if value is None and name in self.file:
            raw = self.file[name]
            try:
                value = cast(raw) if cast is not bool else raw.lower() in ("1", "true", "yes")
            except ValueError as exc:
                raise InputFormatError(f"config value {name}={raw!r}: {exc}") from exc
        if value is None:
            return default
        return value


def _positive(settings: Settings, name: str, cast, default, cap=None):
    value = settings.get(name, cast, default)
    if value is not None and value <= 0:
        raise InputFormatError(f"--{name.replace('_', '-')} must be positive")
    if cap is not None and value is not None and value > cap:
        raise InputFormatError(
            f"--{name.replace('_', '-')} = {value} exceeds the cap {cap}")
    return value


def _parse_eta(text: str) -> complex:
    eta = cwio.parse_complex(text)
    if abs(eta) > 1 + 1e-12:
        raise InputFormatError(f"|eta| = {abs(eta)} lies outside the unit disc")
    return eta


def _walk_input(settings: Settings, allow_table: bool = True):
    """Resolve --eta/--seq/--table/(--alpha,--beta,--k) into (seq, chain).

    A chain table without coin parameters is lifted to the real-parameter
    walk with eta_j = q_j - p_j, which reproduces the same chain.
    """
    eta = settings.get("eta")
    seq_path = settings.get("seq")
    table_path = settings.get("table") if allow_table else None
    alpha = settings.get("alpha", float)
    beta = settings.get("beta", float)
    k = settings.get("k", float)

    mode_given = any(x is not None for x in (alpha, beta, k))
    sources = [eta is not None, seq_path is not None, table_path is not None,
               mode_given]
    if sum(sources) != 1:
        raise InputFormatError(
            "specify exactly one of --eta, --seq, --table, or --alpha/--beta/--k")

    if eta is not None:
        seq = VerblunskySeq.constant(_parse_eta(eta))
    elif seq_path is not None:
        seq = cwio.read_verblunsky(seq_path)
    elif table_path is not None:
        chain = cwio.read_chain(table_path)
        values = [chain.q(j) - chain.p(j) for j in range(len(chain.table))]
        if chain.tail_known:
            tail_eta = 1.0 - 2.0 * chain.tail
            seq = (VerblunskySeq.from_table(values, tail_eta) if values
                   else VerblunskySeq.constant(tail_eta))
        else:
            seq = VerblunskySeq.from_table(values)
        return seq, chain
    else:
        if alpha is None or beta is None or k is None:
            raise InputFormatError("the mode input needs all of --alpha, --beta, --k")
        seq = VerblunskySeq.fourier_mode(alpha, beta, k)
    return seq, from_walk(seq)


def _emit(settings: Settings, text: str) -> None:
    out = settings.get("out")
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _report_text(settings: Settings, record: dict, default_fmt="json") -> str:
    fmt = settings.get("fmt", str, default_fmt)
    if fmt == "json":
        return cwio.dumps_json(record)
    keys = list(record)
    flat = {}
    for key in keys:
        value = record[key]
        if isinstance(value, dict):
            for sub, v in value.items():
                flat[f"{key}_{sub}"] = v
        else:
            flat[key] = value
    head = ",".join(flat)
    vals = ",".join(
        cwio.fmt(v) if isinstance(v, float) else ("" if v is None else str(v))
        for v in flat.values())
    return head + "\n" + vals + "\n"


def _records_text(settings: Settings, header: str, rows: list[dict],
                  schema: str) -> str:
    fmt = settings.get("fmt", str, "csv")
    if fmt == "json":
        return cwio.dumps_json(rows)
    lines = [f"# schema: {schema}/1", header]
    cols = header.split(",")
    for row in rows:
        lines.append(",".join(
            cwio.fmt(row[c]) if isinstance(row[c], float)
            else ("" if row[c] is None else str(row[c]))
            for c in cols))
    return "\n".join(lines) + "\n"


# ----------------------------------------------------------------- commands

def cmd_classify(args, settings: Settings) -> int:
    seq, chain = _walk_input(settings)
    max_terms = _positive(settings, "max_terms", int, 1000, cap=10_000_000)
    tol = _positive(settings, "tol", float, 1e-12)
    rc = classify(chain, max_terms=max_terms, tol=tol)
    _emit(settings, _report_text(settings, cwio.classification_report(rc)))
    return EXIT_OK if rc.determined else EXIT_UNDETERMINED


def cmd_eigen(args, settings: Settings) -> int:
    seq, chain = _walk_input(settings)
    max_terms = _positive(settings, "max_terms", int, 1000, cap=10_000_000)
    tail_tol = _positive(settings, "tol", float, None)
    cutoff = _positive(settings, "cutoff", int, 1_000_000)
    rc = classify(chain, max_terms=max_terms)
    if rc.is_null_recurrent:
        print("no point spectrum: the underlying chain is null recurrent",
              file=sys.stderr)
        return EXIT_NO_POINT_SPECTRUM
    if rc.is_undetermined:
        print("recurrence class undetermined: cannot certify an eigenpair",
              file=sys.stderr)
        return EXIT_UNDETERMINED
    build = stationary_eigenpair if rc.is_positive_recurrent else flow_eigenpair
    pair = build(chain, seq, tail_tol=tail_tol, assume_class=rc, max_sites=cutoff)
    _emit(settings, _report_text(settings, cwio.eigenpair_report(pair)))
    vector_out = settings.get("vector_out")
    if vector_out:
        cwio.write_arc_state(pair.vector, vector_out)
    return EXIT_OK


def cmd_evolve(args, settings: Settings) -> int:
    seq, _ = _walk_input(settings, allow_table=False)
    steps = _positive(settings, "steps", int, None, cap=STEP_CAP)
    if steps is None:
        raise InputFormatError("evolve needs --steps")
    cutoff = _positive(settings, "cutoff", int, 100_000)
    state_path = settings.get("state")
    state = cwio.read_arc_state(state_path) if state_path else ArcState.delta(0, "L")

    rows = []
    for t, st in enumerate(iter_steps(state, seq, steps, site_cap=cutoff)):
        probs = st.site_probabilities()
        norm = st.norm()
        for site in range(st.window):
            rows.append({"step": t, "site": site,
                         "prob": float(probs[site]), "norm": norm})
    _emit(settings, _records_text(settings, "step,site,prob,norm", rows, "evolve"))
    return EXIT_OK


def cmd_dispersion(args, settings: Settings) -> int:
    alpha = settings.get("alpha", float)
    beta = settings.get("beta", float)
    if alpha is None or beta is None:
        raise InputFormatError("dispersion needs --alpha and --beta")
    grid = _positive(settings, "grid", int, 1024, cap=GRID_CAP)
    if grid < 2:
        raise InputFormatError("--grid must be at least 2")
    table = dispersion_table(CoinAngles(alpha, beta), grid)
    fmt = settings.get("fmt", str, "csv")
    if fmt == "json":
        _emit(settings, cwio.dumps_json(cwio.dispersion_records(table)))
    else:
        _emit(settings, cwio.dispersion_csv(table))
    return EXIT_OK


def cmd_ae_evolve(args, settings: Settings) -> int:
    alpha = settings.get("alpha", float)
    beta = settings.get("beta", float)
    if alpha is None or beta is None:
        raise InputFormatError("ae-evolve needs --alpha and --beta")
    steps = _positive(settings, "steps", int, None, cap=STEP_CAP)
    if steps is None:
        raise InputFormatError("ae-evolve needs --steps")
    angles = CoinAngles(alpha, beta)
    circumference = _positive(settings, "cylinder", int, None, cap=100_000)
    state_path = settings.get("state")
    if state_path:
        state = cwio.read_planar_state(state_path)
        if circumference is not None and state.cylinder != circumference:
            raise InputFormatError(
                f"--cylinder {circumference} does not match the state file "
                f"({state.cylinder})")
    else:
        state = PlanarState.point(0, 0, spin=(1.0, 0.0), cylinder=circumference)
    check_fourier = settings.get("check_fourier", bool, False)
    if check_fourier and state.cylinder is None:
        raise InputFormatError("--check-fourier needs a cylinder state")

    rows = []
    cur = state
    for t in range(steps + 1):
        probs = cur.probabilities()
        norm = cur.norm()
        y_base = 0 if cur.cylinder is not None else cur.y0
        for x in range(probs.shape[0]):
            for yy in range(probs.shape[1]):
                rows.append({"step": t, "x": x, "y": y_base + yy,
                             "prob": float(probs[x, yy]), "norm": norm})
        if t < steps:
            cur = planar_step(cur, angles)
    _emit(settings, _records_text(settings, "step,x,y,prob,norm", rows, "ae-evolve"))

    if check_fourier:
        rebuilt = fourier_reconstruct(state, angles, steps)
        deviation = max_amplitude_difference(cur, rebuilt)
        sys.stdout.write(f"fourier-deviation {cwio.fmt(deviation)}\n")
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        settings = Settings(args)
        return args.func(args, settings)
    except InputFormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ResourceLimitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except (DegenerateCoinError, AssumptionError, WrongClassError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except CertificationError as exc:
        print(f"internal certification failure: {exc}", file=sys.stderr)
        return 1
    except CoinwalkError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
