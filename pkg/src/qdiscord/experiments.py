"""Seeded Monte Carlo drivers and parameter sweeps over q-discord.

Each experiment turns an ExperimentSpec into a CsvTable: concavity
histograms of the conditional-entropy mixing defect, Werner and
one-parameter family sweeps, the q-ordering scan with crossing
bisection, random-state scatters, and discord distribution histograms.

Reproducibility contract: sample index i draws from RngStream(seed, i)
and from nothing else, so tables are bit-identical for any worker
count; aggregation always runs in index order.
"""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import partial

import numpy as np

from .discord import (
    GRID_PHI,
    GRID_THETA,
    REFINE_ROUNDS,
    _discord_profile,
    theta_analytic_alpha,
    theta_analytic_bell,
)
from .entropy import EIG_CLAMP, check_q, linear_entropy, norm_factor, tsallis_probs
from .linalg import hermitian_eig, partial_trace
from .states import (
    DensityMatrix,
    RngStream,
    alpha_beta_state,
    alpha_state,
    random_mixed,
    werner,
)

DEFAULT_SEED = 0xD15C04D
CROSSING_TOL = 1e-6

KINDS = (
    "concavity-pdf",
    "werner-sweep",
    "alpha-sweep",
    "ordering-scan",
    "random-scatter",
    "discord-pdf",
    "diff-scatter",
    "alpha-beta-scatter",
)
HISTOGRAM_KINDS = ("concavity-pdf", "discord-pdf")


@dataclass(frozen=True)
class ExperimentSpec:
    """Description of one seeded experiment run.

    param_grid carries family-specific knobs (grid point counts,
    optimizer grid overrides, the concavity conditioning side); every
    kind has workable defaults.
    """

    kind: str
    q_values: tuple
    samples: int = 10_000
    seed: int = DEFAULT_SEED
    bins: int = 100
    param_grid: dict = None

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ValueError(f"unknown experiment kind {self.kind!r}")
        qs = tuple(check_q(q) for q in self.q_values)
        if not qs:
            raise ValueError("q_values must be nonempty")
        object.__setattr__(self, "q_values", qs)
        if int(self.samples) < 1:
            raise ValueError(f"samples must be >= 1, got {self.samples}")
        object.__setattr__(self, "samples", int(self.samples))
        if self.kind in HISTOGRAM_KINDS and int(self.bins) < 2:
            raise ValueError(f"histograms need bins >= 2, got {self.bins}")
        object.__setattr__(self, "bins", int(self.bins))
        object.__setattr__(self, "seed", int(self.seed))
        object.__setattr__(self, "param_grid", dict(self.param_grid or {}))

    def grid(self, key: str, default):
        return self.param_grid.get(key, default)


@dataclass(frozen=True)
class CsvTable:
    """Rectangular numeric table with a provenance line for the CSV head."""

    header: tuple
    rows: tuple
    provenance: str = ""

    def __post_init__(self) -> None:
        header = tuple(str(h) for h in self.header)
        if not header:
            raise ValueError("table header must be nonempty")
        rows = tuple(tuple(float(v) for v in row) for row in self.rows)
        for row in rows:
            if len(row) != len(header):
                raise ValueError(
                    f"ragged row of width {len(row)}, header has {len(header)}")
            if not all(math.isfinite(v) for v in row):
                raise ValueError(f"non-finite value in row {row}")
        object.__setattr__(self, "header", header)
        object.__setattr__(self, "rows", rows)


def _g(v: float) -> str:
    """Shortest exact decimal for provenance text."""
    return repr(float(v))


def _q_token(qs) -> str:
    return ",".join(_g(q) for q in qs)


def _map_indices(fn, n: int, threads: int) -> list:
    """fn(i) for i in range(n), optionally across processes; output is
    always in index order, so thread count cannot change results."""
    if threads <= 1:
        return [fn(i) for i in range(n)]
    chunk = max(1, -(-n // (threads * 8)))
    with ProcessPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, range(n), chunksize=chunk))


def _histogram_rows(values: np.ndarray, bins: int, q: float) -> list:
    """Equal-width density histogram over the observed range; rows carry
    the bin edges so the binning is recorded in the output itself."""
    density, edges = np.histogram(np.asarray(values, dtype=float),
                                  bins=bins, density=True)
    return [
        (q, edges[b], edges[b + 1], (edges[b] + edges[b + 1]) / 2.0, density[b])
        for b in range(bins)
    ]


# --- concavity of the conditional q-entropy under mixing ---

def _conditional_entropies(dm: DensityMatrix, qs, subsystem: str) -> list:
    if subsystem not in ("A", "B"):
        raise ValueError(f'subsystem must be "A" or "B", got {subsystem!r}')
    w_full = _clamped_spectrum(dm.mat)
    w_marg = _clamped_spectrum(
        partial_trace(dm.mat, dm.dim_a, dm.dim_b, subsystem))
    return [tsallis_probs(w_full, q) - tsallis_probs(w_marg, q) for q in qs]


def _clamped_spectrum(mat: np.ndarray) -> np.ndarray:
    w = hermitian_eig(mat).eigenvalues
    if np.any(w < EIG_CLAMP):
        raise ValueError(f"eigenvalue {w.min()} below -1e-10")
    return np.where(w < 0.0, 0.0, w)


def concavity_delta(sigma: DensityMatrix, xi: DensityMatrix, t: float,
                    q: float, subsystem: str = "A") -> float:
    """Mixing defect of the conditional q-entropy S_q(rho) - S_q(rho_A).

    With rho = t sigma + (1-t) xi, returns the conditional entropy of
    rho minus the t-weighted conditional entropies of the parts;
    concavity means the result is >= 0. Conditioning defaults to
    subsystem A; pass subsystem="B" for the other marginal.
    """
    q = check_q(q)
    t = float(t)
    if not 0.0 <= t <= 1.0:
        raise ValueError(f"mixing weight t must lie in [0,1], got {t}")
    if (sigma.dim_a, sigma.dim_b) != (xi.dim_a, xi.dim_b):
        raise ValueError(
            f"mixed states must share a bipartition, got "
            f"({sigma.dim_a},{sigma.dim_b}) vs ({xi.dim_a},{xi.dim_b})")
    return _concavity_deltas(sigma, xi, t, (q,), subsystem)[0]


def _concavity_deltas(sigma, xi, t, qs, subsystem: str) -> list:
    """concavity_delta over several q, reusing the three spectra."""
    rho = DensityMatrix(t * sigma.mat + (1.0 - t) * xi.mat,
                        sigma.dim_a, sigma.dim_b)
    cond_rho = _conditional_entropies(rho, qs, subsystem)
    cond_sig = _conditional_entropies(sigma, qs, subsystem)
    cond_xi = _conditional_entropies(xi, qs, subsystem)
    return [cr - t * cs - (1.0 - t) * cx
            for cr, cs, cx in zip(cond_rho, cond_sig, cond_xi)]


def _concavity_job(i: int, seed: int, qs, subsystem: str) -> tuple:
    s = RngStream(seed, i)
    sigma = random_mixed(4, s)
    xi = random_mixed(4, s)
    t = float(s.generator.uniform())
    return tuple(_concavity_deltas(sigma, xi, t, qs, subsystem))


def concavity_pdf(spec: ExperimentSpec, threads: int = 1) -> CsvTable:
    """Histogram of the concavity defect over random N=4 state pairs.

    Each sample draws sigma, xi, and a uniform mixing weight t from its
    own stream; all q values are evaluated on the same draws.
    """
    if spec.kind != "concavity-pdf":
        raise ValueError(f"expected kind concavity-pdf, got {spec.kind}")
    subsystem = spec.grid("subsystem", "A")
    job = partial(_concavity_job, seed=spec.seed, qs=spec.q_values,
                  subsystem=subsystem)
    deltas = np.array(_map_indices(job, spec.samples, threads))
    rows = []
    for k, q in enumerate(spec.q_values):
        rows.extend(_histogram_rows(deltas[:, k], spec.bins, q))
    prov = (f"qdiscord concavity seed={spec.seed} samples={spec.samples} "
            f"bins={spec.bins} q={_q_token(spec.q_values)} subsystem={subsystem}")
    return CsvTable(("q", "bin_lo", "bin_hi", "bin_center", "density"),
                    tuple(rows), prov)


# --- closed-form family sweeps ---

def werner_sweep(spec: ExperimentSpec) -> CsvTable:
    """(c, q, D_q, S_L) over a uniform c-grid, via the Bell closed form."""
    if spec.kind != "werner-sweep":
        raise ValueError(f"expected kind werner-sweep, got {spec.kind}")
    points = int(spec.grid("points", 101))
    if points < 2:
        raise ValueError(f"sweep needs at least 2 grid points, got {points}")
    rows = []
    for c in np.linspace(0.0, 1.0, points):
        s_l = linear_entropy(werner(c).mat)
        for q in spec.q_values:
            d = norm_factor(q) * theta_analytic_bell(-c, -c, -c, q)
            rows.append((c, q, d, s_l))
    prov = (f"qdiscord werner-sweep seed={spec.seed} points={points} "
            f"q={_q_token(spec.q_values)}")
    return CsvTable(("c", "q", "D_q", "S_L"), tuple(rows), prov)


def alpha_sweep(spec: ExperimentSpec) -> CsvTable:
    """(alpha, q, D_q, S_L) over a uniform alpha-grid, via the closed form.

    The full alpha range is swept, so the table contains pairs of rows
    with equal S_L but different D_q (the mixedness curve is two-valued
    in this family).
    """
    if spec.kind != "alpha-sweep":
        raise ValueError(f"expected kind alpha-sweep, got {spec.kind}")
    points = int(spec.grid("points", 101))
    if points < 2:
        raise ValueError(f"sweep needs at least 2 grid points, got {points}")
    rows = []
    for a in np.linspace(0.0, 1.0, points):
        s_l = linear_entropy(alpha_state(a).mat)
        for q in spec.q_values:
            d = norm_factor(q) * theta_analytic_alpha(a, q)
            rows.append((a, q, d, s_l))
    prov = (f"qdiscord alpha-sweep seed={spec.seed} points={points} "
            f"q={_q_token(spec.q_values)}")
    return CsvTable(("alpha", "q", "D_q", "S_L"), tuple(rows), prov)


# --- q-ordering of two one-parameter states ---

def _alpha_discord_diff(alpha1: float, alpha2: float, q: float) -> float:
    return norm_factor(q) * (theta_analytic_alpha(alpha1, q)
                             - theta_analytic_alpha(alpha2, q))


def ordering_scan(alpha1: float, alpha2: float, q_grid) -> CsvTable:
    """D_q(alpha1) - D_q(alpha2) over a q-grid, with sign-change rows.

    Grid rows carry is_crossing=0. Wherever adjacent grid values have
    opposite signs, the crossing q is bisected to 1e-6 and appended as
    an is_crossing=1 row; rows are sorted by q, so crossings interleave.
    """
    a1, a2 = float(alpha1), float(alpha2)
    for name, a in (("alpha1", a1), ("alpha2", a2)):
        if not 0.0 <= a <= 1.0:
            raise ValueError(f"{name} must lie in [0,1], got {a}")
    qs = [check_q(q) for q in q_grid]
    if not qs:
        raise ValueError("q_grid must be nonempty")
    diffs = [_alpha_discord_diff(a1, a2, q) for q in qs]
    rows = [(q, d, 0.0) for q, d in zip(qs, diffs)]
    for (qa, fa), (qb, fb) in zip(zip(qs, diffs), zip(qs[1:], diffs[1:])):
        if fa * fb < 0.0:
            lo, hi, flo = qa, qb, fa
            while hi - lo > CROSSING_TOL:
                mid = (lo + hi) / 2.0
                fm = _alpha_discord_diff(a1, a2, mid)
                if flo * fm <= 0.0:
                    hi = mid
                else:
                    lo, flo = mid, fm
            qc = (lo + hi) / 2.0
            rows.append((qc, _alpha_discord_diff(a1, a2, qc), 1.0))
    rows.sort(key=lambda r: (r[0], r[2]))
    prov = (f"qdiscord ordering alpha1={_g(a1)} alpha2={_g(a2)} "
            f"qmin={_g(min(qs))} qmax={_g(max(qs))} steps={len(qs)}")
    return CsvTable(("q", "D_diff", "is_crossing"), tuple(rows), prov)


# --- random-state scatters and distributions ---

def _opt_grid(spec: ExperimentSpec) -> dict:
    return {
        "grid_theta": int(spec.grid("grid_theta", GRID_THETA)),
        "grid_phi": int(spec.grid("grid_phi", GRID_PHI)),
        "refine": int(spec.grid("refine", REFINE_ROUNDS)),
    }


def _scatter_job(i: int, seed: int, qs, opt: dict) -> tuple:
    rho = random_mixed(4, RngStream(seed, i))
    profile = _discord_profile(rho, (1.0,) + tuple(qs), **opt)
    return tuple(r.d_q for r in profile)


def _diff_job(i: int, seed: int, qs, opt: dict) -> tuple:
    s = RngStream(seed, i)
    rho = random_mixed(4, s)
    sigma = random_mixed(4, s)
    all_q = (1.0,) + tuple(qs)
    pr = _discord_profile(rho, all_q, **opt)
    ps = _discord_profile(sigma, all_q, **opt)
    return tuple(a.d_q - b.d_q for a, b in zip(pr, ps))


def random_scatter(spec: ExperimentSpec, threads: int = 1) -> CsvTable:
    """Scatter tables of discord against its q=1 value on random states.

    kind=random-scatter: rows (state_id, q, D_1, D_q) over mu-random
    states. kind=diff-scatter: rows (pair_id, q, dD_1, dD_q) of
    discord differences over independent state pairs. kind=
    alpha-beta-scatter: rows (alpha, beta, D_1, D_2) over the
    two-parameter family's domain grid (no sampling).
    """
    if spec.kind == "alpha-beta-scatter":
        return _alpha_beta_scatter(spec, threads)
    if spec.kind not in ("random-scatter", "diff-scatter"):
        raise ValueError(f"unsupported scatter kind {spec.kind}")
    opt = _opt_grid(spec)
    job = partial(_scatter_job if spec.kind == "random-scatter" else _diff_job,
                  seed=spec.seed, qs=spec.q_values, opt=opt)
    results = _map_indices(job, spec.samples, threads)
    rows = []
    for i, vals in enumerate(results):
        d1 = vals[0]
        for q, dq in zip(spec.q_values, vals[1:]):
            rows.append((float(i), q, d1, dq))
    sub = "scatter" if spec.kind == "random-scatter" else "diff-scatter"
    idcol = "state_id" if spec.kind == "random-scatter" else "pair_id"
    d1col, dqcol = ("D_1", "D_q") if spec.kind == "random-scatter" \
        else ("dD_1", "dD_q")
    prov = (f"qdiscord {sub} seed={spec.seed} samples={spec.samples} "
            f"q={_q_token(spec.q_values)} grid-theta={opt['grid_theta']} "
            f"grid-phi={opt['grid_phi']} refine={opt['refine']}")
    return CsvTable((idcol, "q", d1col, dqcol), tuple(rows), prov)


def _alpha_beta_job(i: int, alphas: tuple, beta_points: int, opt: dict) -> tuple:
    ia, ib = divmod(i, beta_points)
    a = alphas[ia]
    b = float(np.linspace(a - 1.0, 1.0 - a, beta_points)[ib])
    profile = _discord_profile(alpha_beta_state(a, b), (1.0, 2.0), **opt)
    return (a, b, profile[0].d_q, profile[1].d_q)


def _alpha_beta_scatter(spec: ExperimentSpec, threads: int) -> CsvTable:
    na = int(spec.grid("alpha_points", 50))
    nb = int(spec.grid("beta_points", 50))
    if na < 2 or nb < 2:
        raise ValueError(f"domain grid needs >= 2 points per axis, got {na}x{nb}")
    opt = _opt_grid(spec)
    alphas = tuple(float(a) for a in np.linspace(0.0, 1.0, na))
    job = partial(_alpha_beta_job, alphas=alphas, beta_points=nb, opt=opt)
    rows = _map_indices(job, na * nb, threads)
    prov = (f"qdiscord alphabeta-scatter seed={spec.seed} alpha-points={na} "
            f"beta-points={nb} grid-theta={opt['grid_theta']} "
            f"grid-phi={opt['grid_phi']} refine={opt['refine']}")
    return CsvTable(("alpha", "beta", "D_1", "D_2"), tuple(rows), prov)


def _pdf_job(i: int, seed: int, qs, opt: dict) -> tuple:
    rho = random_mixed(4, RngStream(seed, i))
    return tuple(r.d_q for r in _discord_profile(rho, qs, **opt))


def discord_pdf(spec: ExperimentSpec, threads: int = 1) -> CsvTable:
    """Per-q histogram of D_q over mu-random two-qubit states."""
    if spec.kind != "discord-pdf":
        raise ValueError(f"expected kind discord-pdf, got {spec.kind}")
    opt = _opt_grid(spec)
    job = partial(_pdf_job, seed=spec.seed, qs=spec.q_values, opt=opt)
    values = np.array(_map_indices(job, spec.samples, threads))
    rows = []
    for k, q in enumerate(spec.q_values):
        rows.extend(_histogram_rows(values[:, k], spec.bins, q))
    prov = (f"qdiscord pdf seed={spec.seed} samples={spec.samples} "
            f"bins={spec.bins} q={_q_token(spec.q_values)} "
            f"grid-theta={opt['grid_theta']} grid-phi={opt['grid_phi']} "
            f"refine={opt['refine']}")
    return CsvTable(("q", "bin_lo", "bin_hi", "bin_center", "density"),
                    tuple(rows), prov)
