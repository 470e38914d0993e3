"""Batch error-surface experiments over repeated random graph draws.

One experiment fixes a graph model and draws it `draws` times with
independent streams of the same base seed.  Each draw is factorized once up
to the largest budget in the grid, snapshotting the transform at every grid
point, and all four error kinds are evaluated per (mode, budget) cell.
Surfaces are then aggregated across draws by the elementwise median.

Medians use the lower-middle order statistic rather than midpoint averaging
so that aggregated values are always values that actually occurred, and runs
are bit-reproducible.  Undefined (NaN) normalized entries are excluded from
the median, with the excluded count recorded.

Draws are independent, so they run in parallel processes when more than one
core is available; the FGFT_THREADS environment variable caps the worker
count.  Results are merged in draw order, so parallel and serial runs emit
identical bytes.
"""

import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from ._version import __version__
from .errors import (
    DEFAULT_DENSITY_DELTA,
    ErrorSurface,
    err1_sq_profile,
    err2_sq_profile,
    eigenvalue_density,
    normalize_surface,
    orient_columns,
    save_surface_csv,
    save_vectors_csv,
)
from .graphs import RngSpec, erdos_renyi, laplacian, random_sensor, sbm
from .jacobi import full_jacobi, truncated_jacobi_snapshots
from .transform import to_dense

MODELS = ("erdos_renyi", "sbm", "sensor")


def default_j_grid(n):
    """25 log-spaced budgets from 0 to n(n-1)/4 (half a full sweep), plus 0."""
    top = max(n * (n - 1) // 4, 1)
    points = {int(round(x)) for x in np.geomspace(1.0, float(top), 25)}
    points.add(0)
    return tuple(sorted(points))


def snapshot_schedule(j_max, j_grid):
    """Validate a snapshot grid against the factorization budget."""
    schedule = tuple(int(j) for j in j_grid)
    if not schedule:
        raise ValueError("snapshot grid is empty")
    if any(b <= a for a, b in zip(schedule, schedule[1:])):
        raise ValueError("snapshot grid must be strictly increasing")
    if schedule[0] < 0 or schedule[-1] > j_max:
        raise ValueError(
            f"snapshot grid must stay within [0, {j_max}], got {schedule[0]}..{schedule[-1]}"
        )
    return schedule


@dataclass
class ExperimentConfig:
    """Settings of one experiment; mirrors the JSON config file field-for-field."""

    model: str
    n: int = 128
    draws: int = 100
    j_grid: tuple = None
    seed: int = 0
    delta: float = DEFAULT_DENSITY_DELTA
    output_dir: str = None
    p: float = None
    m: int = None
    c: float = None
    epsilon: float = None
    tau: float = None

    def __post_init__(self):
        if self.j_grid is None:
            self.j_grid = default_j_grid(self.n)
        self.j_grid = tuple(int(j) for j in self.j_grid)

    def validate(self):
        if self.model not in MODELS:
            raise ValueError(f"unknown model {self.model!r}, expected one of {MODELS}")
        if self.draws < 1:
            raise ValueError("need at least one draw")
        grid = snapshot_schedule(self.j_grid[-1], self.j_grid)
        if grid[0] != 0:
            raise ValueError("the budget grid must start at 0")
        needed = {"erdos_renyi": ("p",), "sbm": ("m", "c", "epsilon"), "sensor": ("tau",)}
        for name in needed[self.model]:
            if getattr(self, name) is None:
                raise ValueError(f"model {self.model!r} requires parameter {name!r}")
        return self

    @classmethod
    def from_json(cls, path):
        with open(path) as fh:
            raw = json.load(fh)
        unknown = set(raw) - {f for f in cls.__dataclass_fields__}
        if unknown:
            raise ValueError(f"unknown config fields: {sorted(unknown)}")
        return cls(**raw)


@dataclass
class ExperimentResult:
    """Median surfaces and per-draw bookkeeping of one experiment."""

    config: ExperimentConfig
    surfaces: dict
    density: np.ndarray
    baselines: dict
    mean_degrees: list
    component_counts: list
    excluded: dict = field(default_factory=dict)

    def save(self, outdir=None, gnuplot=False):
        """Write the run directory: config.json, per-kind CSV heatmaps,
        density.csv, baselines.csv and summary.json."""
        outdir = outdir if outdir is not None else self.config.output_dir
        if outdir is None:
            raise ValueError("no output directory given")
        os.makedirs(outdir, exist_ok=True)
        with open(os.path.join(outdir, "config.json"), "w") as fh:
            json.dump(_config_dict(self.config), fh, sort_keys=True, indent=2)
            fh.write("\n")
        for kind, surface in self.surfaces.items():
            save_surface_csv(surface, os.path.join(outdir, f"{kind}.csv"))
        save_vectors_csv({"density": self.density}, os.path.join(outdir, "density.csv"))
        save_vectors_csv(
            {f"{kind}_sq": vec for kind, vec in self.baselines.items()},
            os.path.join(outdir, "baselines.csv"),
        )
        summary = {
            "code_version": __version__,
            "model": self.config.model,
            "draws": self.config.draws,
            "j_grid": list(self.config.j_grid),
            "mean_degree": self.mean_degrees,
            "components": self.component_counts,
            "excluded_entries": self.excluded,
        }
        with open(os.path.join(outdir, "summary.json"), "w") as fh:
            json.dump(summary, fh, sort_keys=True, indent=2)
            fh.write("\n")
        if gnuplot:
            _write_gnuplot(outdir, self.config)
        return outdir


def _config_dict(cfg):
    d = asdict(cfg)
    d["j_grid"] = list(cfg.j_grid)
    return d


def _generate_graph(cfg, stream_index):
    rng = RngSpec(cfg.seed, stream_index)
    if cfg.model == "erdos_renyi":
        return erdos_renyi(cfg.n, cfg.p, rng)
    if cfg.model == "sbm":
        return sbm(cfg.n, cfg.m, cfg.c, cfg.epsilon, rng)
    return random_sensor(cfg.n, cfg.tau, rng)


def run_single_draw(cfg, stream_index):
    """Surfaces of every kind for one draw; the worker unit of an experiment."""
    cfg.validate()
    g = _generate_graph(cfg, stream_index)
    L = laplacian(g)
    exact = full_jacobi(L)
    snapshots = truncated_jacobi_snapshots(L, cfg.j_grid)
    U = exact.eigenvectors
    n, width = cfg.n, len(cfg.j_grid)
    err1_vals = np.empty((n, width))
    err2_vals = np.empty((n, width))
    for i, t in enumerate(snapshots):
        U_hat = orient_columns(U, to_dense(t))
        err1_vals[:, i] = err1_sq_profile(U, U_hat)
        err2_vals[:, i] = err2_sq_profile(L, exact.eigenvalues, U_hat)
    density = eigenvalue_density(exact.eigenvalues, cfg.delta)
    surfaces = {}
    for kind, vals in (("err1", err1_vals), ("err2", err2_vals)):
        # the grid starts at 0, so the first column is the degree-order baseline
        raw = ErrorSurface(kind, vals, cfg.j_grid, vals[:, 0].copy(), density, cfg.delta)
        surfaces[kind] = raw
        surfaces[kind + "_norm"] = normalize_surface(raw)
    return {
        "surfaces": surfaces,
        "density": density,
        "mean_degree": float(g.degrees().mean()),
        "components": int(g.model_tag["components"]),
    }


def lower_median(stack, axis=0):
    """Elementwise lower-middle order statistic, skipping NaN entries."""
    arr = np.sort(np.asarray(stack, dtype=float), axis=axis)
    counts = np.sum(~np.isnan(arr), axis=axis)
    idx = np.maximum((counts - 1) // 2, 0)
    med = np.take_along_axis(arr, np.expand_dims(idx, axis), axis=axis)
    med = np.squeeze(med, axis=axis)
    return np.where(counts == 0, np.nan, med)


def _thread_budget(draws):
    env = os.environ.get("FGFT_THREADS", "").strip()
    if env:
        try:
            cap = int(env)
        except ValueError:
            raise ValueError(f"FGFT_THREADS must be an integer, got {env!r}") from None
        if cap < 1:
            raise ValueError("FGFT_THREADS must be at least 1")
    else:
        cap = os.cpu_count() or 1
    return max(1, min(cap, draws))


def run_experiment(cfg, threads=None):
    """Run every draw, then aggregate elementwise medians across draws.

    Draws use stream indices 0..draws-1 of the base seed, so any single draw
    can be reproduced in isolation.  Nothing is written to disk here; pair
    with ExperimentResult.save.
    """
    cfg.validate()
    workers = threads if threads is not None else _thread_budget(cfg.draws)
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            per_draw = list(pool.map(run_single_draw, [cfg] * cfg.draws, range(cfg.draws)))
    else:
        per_draw = [run_single_draw(cfg, d) for d in range(cfg.draws)]

    median_density = lower_median(
        np.stack([draw["density"] for draw in per_draw])
    ).astype(np.int64)
    surfaces = {}
    baselines = {}
    excluded = {}
    for kind in ("err1", "err2", "err1_norm", "err2_norm"):
        stack = np.stack([draw["surfaces"][kind].values for draw in per_draw])
        base_stack = np.stack([draw["surfaces"][kind].baseline for draw in per_draw])
        nan_count = int(np.isnan(stack).sum())
        if nan_count:
            excluded[kind] = nan_count
        surfaces[kind] = ErrorSurface(
            kind,
            lower_median(stack),
            cfg.j_grid,
            lower_median(base_stack),
            median_density,
            cfg.delta,
        )
        if not kind.endswith("_norm"):
            baselines[kind] = surfaces[kind].baseline
    return ExperimentResult(
        config=cfg,
        surfaces=surfaces,
        density=median_density,
        baselines=baselines,
        mean_degrees=[draw["mean_degree"] for draw in per_draw],
        component_counts=[draw["components"] for draw in per_draw],
        excluded=excluded,
    )


_GNUPLOT_TEMPLATE = """\
# Heatmaps of the median error surfaces ({model}, {draws} draws).
# Usage: gnuplot plot.gp
set datafile separator comma
set datafile missing "nan"
set term pngcairo size 1400,1000
set output "surfaces.png"
set multiplot layout 2,2
set xlabel "budget index"
set ylabel "mode k"
do for [name in "err1 err2 err1_norm err2_norm"] {{
    set title name
    plot name.".csv" matrix every ::1:1 with image notitle
}}
unset multiplot
set term pngcairo size 800,500
set output "density.png"
set title "eigenvalue multiplicity count f(k)"
plot "density.csv" using 1:2 every ::1 with lines notitle
"""


def _write_gnuplot(outdir, cfg):
    with open(os.path.join(outdir, "plot.gp"), "w") as fh:
        fh.write(_GNUPLOT_TEMPLATE.format(model=cfg.model, draws=cfg.draws))
