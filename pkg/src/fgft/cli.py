"""Command-line front end.

Subcommands: generate, factorize, apply, eig, analyze, experiment, reproduce.
Exit codes: 0 success, 1 usage/config error, 2 numerical failure, 3 I/O error.
"""

import argparse
import sys

from ._version import __version__
from .errors import (
    DEFAULT_DENSITY_DELTA,
    FLOAT_FORMAT,
    err1_sq_profile,
    err2_sq_profile,
    eigenvalue_density,
    orient_columns,
)
from .experiment import MODELS, ExperimentConfig, run_experiment
from .graphs import (
    RngSpec,
    erdos_renyi,
    laplacian,
    load_graph,
    random_sensor,
    save_graph,
    sbm,
    sbm_epsilon_critical,
)
from .jacobi import DEFAULT_TOLERANCE, ConvergenceError, full_jacobi, truncated_jacobi
from .transform import (
    analyze,
    load_signal,
    load_transform,
    save_signal,
    save_transform,
    synthesize,
    to_dense,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NUMERICAL = 2
EXIT_IO = 3

# standard settings: n=128, average degree 10 for every model, 8 communities
PRESET_N = 128
PRESET_DEGREE = 10.0
PRESET_COMMUNITIES = 8
PRESET_TAU = 0.161


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _preset_model_params(model):
    if model == "erdos_renyi":
        return {"p": PRESET_DEGREE / (PRESET_N - 1)}
    if model == "sbm":
        eps = sbm_epsilon_critical(PRESET_DEGREE, PRESET_COMMUNITIES) / 10.0
        return {"m": PRESET_COMMUNITIES, "c": PRESET_DEGREE, "epsilon": eps}
    return {"tau": PRESET_TAU}


# preset -> (models to run, the CSV the corresponding panel shows, budget grid)
PRESETS = {}
for _letter, _model in (("a", "erdos_renyi"), ("b", "sensor"), ("c", "sbm")):
    PRESETS[f"fig2{_letter}"] = ((_model,), "err1.csv", "full")
    PRESETS[f"fig3{_letter}"] = ((_model,), "err1_norm.csv + density.csv", "full")
    PRESETS[f"fig5{_letter}"] = ((_model,), "err2.csv", "full")
for _letter, _model in (("d", "erdos_renyi"), ("e", "sensor"), ("f", "sbm")):
    PRESETS[f"fig5{_letter}"] = ((_model,), "err2_norm.csv", "full")
PRESETS["fig4"] = (MODELS, "baselines.csv", "zero")
del _letter, _model


def build_parser():
    parser = _Parser(prog="fgft", description=__doc__)
    parser.add_argument("--version", action="version", version=f"fgft {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="draw a random graph and write it")
    gen.add_argument("--model", choices=MODELS, required=True)
    gen.add_argument("--n", type=int, default=PRESET_N)
    gen.add_argument("--p", type=float, help="edge probability (erdos_renyi)")
    gen.add_argument("--m", type=int, help="community count (sbm)")
    gen.add_argument("--c", type=float, help="target average degree (sbm)")
    gen.add_argument("--epsilon", type=float, help="inter/intra probability ratio (sbm)")
    gen.add_argument("--tau", type=float, help="distance threshold (sensor)")
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--stream", type=int, default=0)
    gen.add_argument("--out", required=True)
    gen.set_defaults(func=_cmd_generate)

    fac = sub.add_parser("factorize", help="factor a graph Laplacian into rotations")
    fac.add_argument("graph")
    fac.add_argument("--rotations", "-J", "--J", type=int, required=True, dest="budget")
    fac.add_argument("--tol", type=float, default=None)
    fac.add_argument("--out", required=True)
    fac.set_defaults(func=_cmd_factorize)

    app = sub.add_parser("apply", help="apply a transform to a signal CSV")
    app.add_argument("transform")
    app.add_argument("signal")
    app.add_argument("--inverse", action="store_true")
    app.add_argument("--out", help="output CSV; stdout when omitted")
    app.set_defaults(func=_cmd_apply)

    eig = sub.add_parser("eig", help="exact eigenvalues/eigenvectors of a graph")
    eig.add_argument("graph")
    eig.add_argument("--tol", type=float, default=DEFAULT_TOLERANCE)
    eig.add_argument("--out-values", help="eigenvalue CSV; stdout when omitted")
    eig.add_argument("--out-vectors", help="eigenvector CSV")
    eig.set_defaults(func=_cmd_eig)

    ana = sub.add_parser("analyze", help="per-mode errors of a transform on a graph")
    ana.add_argument("graph")
    ana.add_argument("transform")
    ana.add_argument("--delta", type=float, default=DEFAULT_DENSITY_DELTA)
    ana.add_argument("--out", help="output CSV; stdout when omitted")
    ana.set_defaults(func=_cmd_analyze)

    exp = sub.add_parser("experiment", help="median error surfaces over many draws")
    exp.add_argument("--config", help="JSON config file (other flags ignored, except --out)")
    exp.add_argument("--model", choices=MODELS)
    exp.add_argument("--n", type=int, default=PRESET_N)
    exp.add_argument("--draws", type=int, default=100)
    exp.add_argument("--j-grid", help="comma-separated budgets, e.g. 0,10,100")
    exp.add_argument("--seed", type=int, default=0)
    exp.add_argument("--delta", type=float, default=DEFAULT_DENSITY_DELTA)
    exp.add_argument("--p", type=float)
    exp.add_argument("--m", type=int)
    exp.add_argument("--c", type=float)
    exp.add_argument("--epsilon", type=float)
    exp.add_argument("--tau", type=float)
    exp.add_argument(
        "--out",
        dest="output_dir",
        help="run directory (default: ./fgft_<model>_n<n>_d<draws>_s<seed>)",
    )
    exp.add_argument("--gnuplot", action="store_true")
    exp.set_defaults(func=_cmd_experiment)

    rep = sub.add_parser("reproduce", help="run a named preset experiment")
    rep.add_argument("preset", choices=sorted(PRESETS))
    rep.add_argument("--draws", type=int, default=100)
    rep.add_argument("--seed", type=int, default=0)
    rep.add_argument("--out", required=True)
    rep.add_argument("--gnuplot", action="store_true")
    rep.set_defaults(func=_cmd_reproduce)
    return parser


def _cmd_generate(args):
    rng = RngSpec(args.seed, args.stream)
    if args.model == "erdos_renyi":
        if args.p is None:
            raise UsageError("--p is required for erdos_renyi")
        g = erdos_renyi(args.n, args.p, rng)
    elif args.model == "sbm":
        if None in (args.m, args.c, args.epsilon):
            raise UsageError("--m, --c and --epsilon are required for sbm")
        g = sbm(args.n, args.m, args.c, args.epsilon, rng)
    else:
        if args.tau is None:
            raise UsageError("--tau is required for sensor")
        g = random_sensor(args.n, args.tau, rng)
    save_graph(g, args.out)
    print(f"wrote {args.out} ({g.n} vertices, {g.n_edges()} edges)")
    return EXIT_OK


def _cmd_factorize(args):
    g = load_graph(args.graph)
    t = truncated_jacobi(laplacian(g), args.budget, tol=args.tol)
    save_transform(t, args.out)
    print(f"wrote {args.out} ({t.j_actual} rotations of {t.j_requested} requested)")
    return EXIT_OK


def _cmd_apply(args):
    t = load_transform(args.transform)
    sig = load_signal(args.signal)
    out = synthesize(t, sig) if args.inverse else analyze(t, sig)
    if args.out:
        save_signal(out, args.out)
    else:
        print(f"n={out.values.shape[0]} domain={out.domain}")
        for v in out.values:
            print(FLOAT_FORMAT % v)
    return EXIT_OK


def _emit_csv(lines, path):
    text = "\n".join(lines) + "\n"
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _cmd_eig(args):
    g = load_graph(args.graph)
    exact = full_jacobi(laplacian(g), tol=args.tol)
    lines = ["k,lambda"]
    lines.extend(
        f"{k + 1},{FLOAT_FORMAT % v}" for k, v in enumerate(exact.eigenvalues)
    )
    _emit_csv(lines, args.out_values)
    if args.out_vectors:
        header = "i\\k," + ",".join(str(k + 1) for k in range(exact.n))
        rows = [header]
        for i in range(exact.n):
            rows.append(
                f"{i + 1},"
                + ",".join(FLOAT_FORMAT % v for v in exact.eigenvectors[i])
            )
        _emit_csv(rows, args.out_vectors)
    return EXIT_OK


def _cmd_analyze(args):
    g = load_graph(args.graph)
    t = load_transform(args.transform)
    L = laplacian(g)
    exact = full_jacobi(L)
    U_hat = orient_columns(exact.eigenvectors, to_dense(t))
    e1 = err1_sq_profile(exact.eigenvectors, U_hat)
    e2 = err2_sq_profile(L, exact.eigenvalues, U_hat)
    density = eigenvalue_density(exact.eigenvalues, args.delta)
    lines = ["k,lambda,lambda_hat,err1_sq,err2_sq,density"]
    for k in range(g.n):
        lines.append(
            ",".join(
                (
                    str(k + 1),
                    FLOAT_FORMAT % exact.eigenvalues[k],
                    FLOAT_FORMAT % t.lambda_hat[k],
                    FLOAT_FORMAT % e1[k],
                    FLOAT_FORMAT % e2[k],
                    str(int(density[k])),
                )
            )
        )
    _emit_csv(lines, args.out)
    return EXIT_OK


def _cmd_experiment(args):
    if args.config:
        cfg = ExperimentConfig.from_json(args.config)
        if args.output_dir:
            cfg.output_dir = args.output_dir
    else:
        if not args.model:
            raise UsageError("either --config or --model is required")
        grid = None
        if args.j_grid:
            grid = tuple(int(tok) for tok in args.j_grid.split(","))
        cfg = ExperimentConfig(
            model=args.model,
            n=args.n,
            draws=args.draws,
            j_grid=grid,
            seed=args.seed,
            delta=args.delta,
            output_dir=args.output_dir,
            p=args.p,
            m=args.m,
            c=args.c,
            epsilon=args.epsilon,
            tau=args.tau,
        )
    if cfg.output_dir is None:
        cfg.output_dir = f"fgft_{cfg.model}_n{cfg.n}_d{cfg.draws}_s{cfg.seed}"
    result = run_experiment(cfg)
    result.save(gnuplot=args.gnuplot)
    print(f"wrote {cfg.output_dir}")
    return EXIT_OK


def _cmd_reproduce(args):
    models, highlight, grid_mode = PRESETS[args.preset]
    for model in models:
        cfg = ExperimentConfig(
            model=model,
            n=PRESET_N,
            draws=args.draws,
            j_grid=(0,) if grid_mode == "zero" else None,
            seed=args.seed,
            output_dir=args.out if len(models) == 1 else f"{args.out}/{model}",
            **_preset_model_params(model),
        )
        result = run_experiment(cfg)
        result.save(gnuplot=args.gnuplot)
        print(f"wrote {cfg.output_dir} (see {highlight})")
    return EXIT_OK


def cli(argv=None):
    """Run the command line; returns the exit code instead of raising."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"fgft: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help / --version
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    try:
        return args.func(args)
    except (UsageError, ValueError) as exc:
        print(f"fgft: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ConvergenceError as exc:
        print(f"fgft: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except OSError as exc:
        print(f"fgft: {exc}", file=sys.stderr)
        return EXIT_IO


def main():
    sys.exit(cli())


if __name__ == "__main__":
    main()
