"""Command-line front end.

One subcommand per experiment plus `compute` for single-state
evaluation. Output is CSV: a provenance comment line, a header row,
then numeric rows with 17-significant-digit floats and LF endings, so
identical flags always reproduce identical bytes. `--plot` additionally
renders a PNG next to the CSV.
"""
from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, replace

import numpy as np

from .discord import (
    GRID_PHI,
    GRID_THETA,
    REFINE_ROUNDS,
    DiscordResult,
    q_discord,
    q_discord_fast2,
)
from .entropy import check_q
from .experiments import (
    DEFAULT_SEED,
    CsvTable,
    ExperimentSpec,
    alpha_sweep,
    concavity_pdf,
    discord_pdf,
    ordering_scan,
    random_scatter,
    werner_sweep,
)
from .states import (
    DensityMatrix,
    RngStream,
    alpha_beta_state,
    alpha_state,
    bell_diagonal,
    random_mixed,
    werner,
)

_FLOAT_FMT = ".17g"


@dataclass(frozen=True)
class CliConfig:
    """Parsed invocation: subcommand, validated flags, output routing."""

    subcommand: str
    options: dict
    out: str
    verbosity: int
    threads: int
    plot: bool
    seed: int


def _g(v: float) -> str:
    return format(float(v), _FLOAT_FMT)


def _p(v: float) -> str:
    """Shortest exact decimal for provenance text."""
    return repr(float(v))


def emit_csv(table: CsvTable, destination: str) -> None:
    """Write a table as CSV to a path, or to stdout for "-".

    UTF-8, comma separators, LF endings; floats carry 17 significant
    digits so they round-trip exactly. A leading `# ...` comment records
    the table's provenance when present.
    """
    lines = []
    if table.provenance:
        lines.append(f"# {table.provenance}")
    lines.append(",".join(table.header))
    for row in table.rows:
        lines.append(",".join(_g(v) for v in row))
    text = "\n".join(lines) + "\n"
    if destination == "-":
        sys.stdout.write(text)
    else:
        with open(destination, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def _q_arg(s: str) -> float:
    try:
        return check_q(float(s))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _seed_arg(s: str):
    if s.lower() == "random":
        return None
    try:
        return int(s, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"seed must be an integer or 'random', got {s!r}") from None


def _at_least(minimum: int):
    def convert(s: str) -> int:
        try:
            v = int(s)
        except ValueError:
            raise argparse.ArgumentTypeError(f"expected an integer, got {s!r}") from None
        if v < minimum:
            raise argparse.ArgumentTypeError(f"value must be >= {minimum}, got {v}")
        return v

    return convert


def _add_common(p: argparse.ArgumentParser, *, threads: bool = True) -> None:
    p.add_argument("--out", default="-",
                   help="output CSV path, or - for stdout (default)")
    p.add_argument("--seed", type=_seed_arg, default=DEFAULT_SEED,
                   help="RNG seed (integer, or 'random' for entropy)")
    p.add_argument("--verbose", action="count", default=0,
                   help="print progress notes to stderr")
    p.add_argument("--plot", action="store_true",
                   help="also render <out>.png (requires --out FILE)")
    if threads:
        p.add_argument("--threads", type=_at_least(1), default=1,
                       help="worker processes; results are identical for any value")


def _add_optimizer(p: argparse.ArgumentParser) -> None:
    p.add_argument("--grid-theta", type=_at_least(1), default=GRID_THETA,
                   help="coarse grid points in theta")
    p.add_argument("--grid-phi", type=_at_least(1), default=GRID_PHI,
                   help="coarse grid points in phi")
    p.add_argument("--refine", type=_at_least(0), default=REFINE_ROUNDS,
                   help="local refinement rounds")


def _add_q(p: argparse.ArgumentParser) -> None:
    p.add_argument("--q", action="append", type=_q_arg, default=None,
                   metavar="Q", help="entropic index; repeatable")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qdiscord",
        description="Tsallis q-discord of two-qubit states: single-state "
                    "evaluation and seeded Monte Carlo experiments.")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("compute", help="discord of a single state")
    p.add_argument("--family", required=True,
                   choices=("werner", "bell", "alpha", "alphabeta",
                            "random", "matrix-file"))
    p.add_argument("--c", type=float, help="werner mixing parameter")
    p.add_argument("--c1", type=float, help="bell correlation c1")
    p.add_argument("--c2", type=float, help="bell correlation c2")
    p.add_argument("--c3", type=float, help="bell correlation c3")
    p.add_argument("--alpha", type=float, help="alpha / alphabeta parameter")
    p.add_argument("--beta", type=float, help="alphabeta parameter")
    p.add_argument("--path", help="matrix file for --family matrix-file")
    p.add_argument("--q", type=_q_arg, default=1.0)
    p.add_argument("--fast2", action="store_true",
                   help="trace-based q=2 evaluation (requires --q 2)")
    _add_optimizer(p)
    _add_common(p, threads=False)

    p = sub.add_parser("concavity", help="conditional-entropy concavity histogram")
    _add_q(p)
    p.add_argument("--samples", type=_at_least(1), default=10_000)
    p.add_argument("--bins", type=_at_least(2), default=100)
    p.add_argument("--condition-on", choices=("A", "B"), default="A",
                   help="marginal subtracted in the conditional entropy")
    _add_common(p)

    p = sub.add_parser("werner-sweep", help="D_q and S_L over the werner family")
    _add_q(p)
    p.add_argument("--points", type=_at_least(2), default=101)
    _add_common(p)

    p = sub.add_parser("alpha-sweep", help="D_q and S_L over the alpha family")
    _add_q(p)
    p.add_argument("--points", type=_at_least(2), default=101)
    _add_common(p)

    p = sub.add_parser("ordering", help="sign changes of D_q(a1) - D_q(a2) in q")
    p.add_argument("--alpha1", type=float, default=0.4)
    p.add_argument("--alpha2", type=float, default=0.5)
    p.add_argument("--qmin", type=_q_arg, default=0.1)
    p.add_argument("--qmax", type=_q_arg, default=3.0)
    p.add_argument("--steps", type=_at_least(2), default=200)
    _add_common(p)

    p = sub.add_parser("scatter", help="D_q vs D_1 on random states")
    _add_q(p)
    p.add_argument("--samples", type=_at_least(1), default=10_000)
    _add_optimizer(p)
    _add_common(p)

    p = sub.add_parser("diff-scatter", help="discord differences on state pairs")
    _add_q(p)
    p.add_argument("--samples", type=_at_least(1), default=10_000)
    _add_optimizer(p)
    _add_common(p)

    p = sub.add_parser("pdf", help="distribution of D_q on random states")
    _add_q(p)
    p.add_argument("--samples", type=_at_least(1), default=10_000)
    p.add_argument("--bins", type=_at_least(2), default=100)
    _add_optimizer(p)
    _add_common(p)

    p = sub.add_parser("alphabeta-scatter", help="D_2 vs D_1 over the (alpha,beta) domain")
    p.add_argument("--alpha-points", type=_at_least(2), default=50)
    p.add_argument("--beta-points", type=_at_least(2), default=50)
    _add_optimizer(p)
    _add_common(p)

    return parser


_DEFAULT_QS = {
    "concavity": (0.2, 0.5, 0.8, 2.0, 5.0),
    "werner-sweep": (0.5, 1.0, 2.0),
    "alpha-sweep": (0.5, 1.0, 2.0),
    "scatter": (0.5, 2.0),
    "diff-scatter": (2.0,),
    "pdf": (0.5, 1.0, 2.0),
}


def _resolve_seed(seed) -> int:
    if seed is not None:
        return seed
    return int(np.random.SeedSequence().entropy) & ((1 << 64) - 1)


def _config_from(ns: argparse.Namespace) -> CliConfig:
    options = dict(vars(ns))
    sub = options.pop("subcommand")
    out = options.pop("out")
    verbosity = options.pop("verbose")
    plot = options.pop("plot")
    threads = options.pop("threads", 1)
    seed = _resolve_seed(options.pop("seed"))
    if "q" in options and options["q"] is None and sub in _DEFAULT_QS:
        options["q"] = _DEFAULT_QS[sub]
    if plot and out == "-":
        raise UsageError("--plot requires --out FILE (not stdout)")
    if sub == "compute" and options.get("fast2") and options.get("q") != 2.0:
        raise UsageError("--fast2 computes q=2 only; pass --q 2")
    return CliConfig(sub, options, out, verbosity, threads, plot, seed)


class UsageError(Exception):
    """Flag combinations that argparse alone cannot reject."""


def _require(options: dict, family: str, *names: str) -> list:
    missing = [n for n in names if options.get(n) is None]
    if missing:
        flags = ", ".join(f"--{n}" for n in missing)
        raise UsageError(f"--family {family} requires {flags}")
    return [options[n] for n in names]


def _load_matrix_file(path: str) -> DensityMatrix:
    """Parse the plain-text state format: `dim=4` then 4 rows of 4
    whitespace-separated complex entries written like -0.25+0.1i."""
    with open(path, encoding="utf-8") as fh:
        lines = [ln.strip() for ln in fh if ln.strip()]
    if not lines or lines[0].replace(" ", "") != "dim=4":
        raise ValueError(f"{path}: first line must be 'dim=4'")
    if len(lines) != 5:
        raise ValueError(f"{path}: expected 4 matrix rows, got {len(lines) - 1}")
    rows = []
    for ln in lines[1:]:
        parts = ln.split()
        if len(parts) != 4:
            raise ValueError(f"{path}: expected 4 entries per row, got {len(parts)}")
        try:
            rows.append([complex(p.replace("i", "j").replace("I", "j"))
                         for p in parts])
        except ValueError:
            raise ValueError(f"{path}: unparseable complex entry in {ln!r}") from None
    return DensityMatrix(np.array(rows, dtype=complex))


def _compute_state(cfg: CliConfig) -> tuple[DensityMatrix, list]:
    o = cfg.options
    family = o["family"]
    if family == "werner":
        (c,) = _require(o, family, "c")
        return werner(c), [("c", _p(c))]
    if family == "bell":
        c1, c2, c3 = _require(o, family, "c1", "c2", "c3")
        return bell_diagonal(c1, c2, c3), [
            ("c1", _p(c1)), ("c2", _p(c2)), ("c3", _p(c3))]
    if family == "alpha":
        (a,) = _require(o, family, "alpha")
        return alpha_state(a), [("alpha", _p(a))]
    if family == "alphabeta":
        a, b = _require(o, family, "alpha", "beta")
        return alpha_beta_state(a, b), [("alpha", _p(a)), ("beta", _p(b))]
    if family == "random":
        return random_mixed(4, RngStream(cfg.seed, 0)), []
    (path,) = _require(o, family, "path")
    return _load_matrix_file(path), [("path", path)]


def _compute_table(cfg: CliConfig) -> CsvTable:
    state, param_pairs = _compute_state(cfg)
    o = cfg.options
    if o["fast2"]:
        result: DiscordResult = q_discord_fast2(state)
    else:
        result = q_discord(state, o["q"], grid_theta=o["grid_theta"],
                           grid_phi=o["grid_phi"], refine=o["refine"])
    pairs = [("seed", str(cfg.seed)), ("family", o["family"])] + param_pairs + [
        ("q", _p(o["q"])),
        ("fast2", str(int(o["fast2"]))),
        ("grid-theta", str(o["grid_theta"])),
        ("grid-phi", str(o["grid_phi"])),
        ("refine", str(o["refine"])),
    ]
    row = (result.q, result.i_q, result.c_q, result.theta_raw, result.d_q,
           result.best_basis.theta, result.best_basis.phi,
           float(result.optimizer_evals))
    return CsvTable(
        ("q", "i_q", "c_q", "theta_raw", "D_q", "basis_theta", "basis_phi",
         "optimizer_evals"),
        (row,), _provenance("compute", pairs))


def _provenance(sub: str, pairs: list) -> str:
    return "qdiscord " + sub + "".join(f" {k}={v}" for k, v in pairs)


def _experiment_table(cfg: CliConfig) -> CsvTable:
    o = cfg.options
    sub = cfg.subcommand
    if sub == "ordering":
        q_grid = np.linspace(o["qmin"], o["qmax"], o["steps"])
        table = ordering_scan(o["alpha1"], o["alpha2"], q_grid)
        pairs = [("seed", str(cfg.seed)),
                 ("alpha1", _p(o["alpha1"])), ("alpha2", _p(o["alpha2"])),
                 ("qmin", _p(o["qmin"])), ("qmax", _p(o["qmax"])),
                 ("steps", str(o["steps"]))]
        return replace(table, provenance=_provenance(sub, pairs))

    qs = tuple(o["q"]) if o.get("q") is not None else ()
    pairs = [("seed", str(cfg.seed))]
    if sub == "concavity":
        spec = ExperimentSpec("concavity-pdf", qs, samples=o["samples"],
                              seed=cfg.seed, bins=o["bins"],
                              param_grid={"subsystem": o["condition_on"]})
        table = concavity_pdf(spec, threads=cfg.threads)
        pairs += [("samples", str(o["samples"])), ("bins", str(o["bins"])),
                  ("q", ",".join(_p(q) for q in qs)),
                  ("condition-on", o["condition_on"])]
    elif sub in ("werner-sweep", "alpha-sweep"):
        kind = "werner-sweep" if sub == "werner-sweep" else "alpha-sweep"
        spec = ExperimentSpec(kind, qs, seed=cfg.seed,
                              param_grid={"points": o["points"]})
        table = werner_sweep(spec) if kind == "werner-sweep" else alpha_sweep(spec)
        pairs += [("points", str(o["points"])),
                  ("q", ",".join(_p(q) for q in qs))]
    elif sub in ("scatter", "diff-scatter"):
        kind = "random-scatter" if sub == "scatter" else "diff-scatter"
        spec = ExperimentSpec(kind, qs, samples=o["samples"], seed=cfg.seed,
                              param_grid=_opt_overrides(o))
        table = random_scatter(spec, threads=cfg.threads)
        pairs += [("samples", str(o["samples"])),
                  ("q", ",".join(_p(q) for q in qs))] + _opt_pairs(o)
    elif sub == "pdf":
        spec = ExperimentSpec("discord-pdf", qs, samples=o["samples"],
                              seed=cfg.seed, bins=o["bins"],
                              param_grid=_opt_overrides(o))
        table = discord_pdf(spec, threads=cfg.threads)
        pairs += [("samples", str(o["samples"])), ("bins", str(o["bins"])),
                  ("q", ",".join(_p(q) for q in qs))] + _opt_pairs(o)
    elif sub == "alphabeta-scatter":
        grid = _opt_overrides(o)
        grid.update(alpha_points=o["alpha_points"], beta_points=o["beta_points"])
        spec = ExperimentSpec("alpha-beta-scatter", (1.0, 2.0), seed=cfg.seed,
                              param_grid=grid)
        table = random_scatter(spec, threads=cfg.threads)
        pairs += [("alpha-points", str(o["alpha_points"])),
                  ("beta-points", str(o["beta_points"]))] + _opt_pairs(o)
    else:
        raise UsageError(f"unknown subcommand {sub!r}")
    return replace(table, provenance=_provenance(sub, pairs))


def _opt_overrides(o: dict) -> dict:
    return {"grid_theta": o["grid_theta"], "grid_phi": o["grid_phi"],
            "refine": o["refine"]}


def _opt_pairs(o: dict) -> list:
    return [("grid-theta", str(o["grid_theta"])),
            ("grid-phi", str(o["grid_phi"])),
            ("refine", str(o["refine"]))]


def run(argv) -> int:
    """Parse argv, dispatch, write CSV (and optional PNG).

    Exit status: 0 success, 1 computation/domain error, 2 usage error.
    """
    parser = _build_parser()
    try:
        ns = parser.parse_args(list(argv))
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 2
    try:
        cfg = _config_from(ns)
    except UsageError as exc:
        print(f"qdiscord: usage error: {exc}", file=sys.stderr)
        return 2
    try:
        if cfg.subcommand == "compute":
            table = _compute_table(cfg)
        else:
            table = _experiment_table(cfg)
        emit_csv(table, cfg.out)
        if cfg.plot:
            from . import figures

            png = figures.render(cfg.subcommand, table, _png_path(cfg.out))
            if cfg.verbosity:
                print(f"qdiscord: wrote {png}", file=sys.stderr)
        if cfg.verbosity:
            dest = "stdout" if cfg.out == "-" else cfg.out
            print(f"qdiscord: wrote {dest} ({len(table.rows)} rows)",
                  file=sys.stderr)
        return 0
    except UsageError as exc:
        print(f"qdiscord: usage error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, ArithmeticError, OSError) as exc:
        print(f"qdiscord: error: {exc}", file=sys.stderr)
        return 1


def _png_path(out: str) -> str:
    return (out[:-4] if out.endswith(".csv") else out) + ".png"


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
