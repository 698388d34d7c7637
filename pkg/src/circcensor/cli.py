"""Command-line entry point: ``circcensor simulate|estimate|benchmark|compare``.

Exit codes: 0 success, 2 configuration error, 3 data error, 4 numerical
failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .evaluation import (
    PUBLISHED_RECOVERY,
    GridSpec,
    mise_monte_carlo,
    parameter_recovery_study,
    replication_rng,
)
from .exceptions import CircCensorError, ConfigError, DataError, InvalidInputError
from .io import FORMAT_VERSION, format_float, load_config, read_sample, write_csv, write_sample
from .sampling import REFERENCE_MODELS, generate_sample
from .sieve import estimate_density

logger = logging.getLogger("circcensor")

EXIT_OK, EXIT_CONFIG, EXIT_DATA, EXIT_NUMERIC = 0, 2, 3, 4

BENCHMARK_HEADER = (
    "model", "n", "N", "mise", "stderr", "censored_pct",
    "window_len", "complement_len", "m_hat_mode",
)
COMPARE_HEADER = (
    "concentration", "alpha", "n", "N", "npmle_mu", "mu_hat", "npmle_kappa", "kappa_hat",
    "mu_hat_stderr", "kappa_hat_stderr", "published_mu_hat", "published_kappa_hat",
)


def _outdir(cfg) -> Path:
    out = Path(cfg["out"])
    out.mkdir(parents=True, exist_ok=True)
    return out


def cmd_simulate(cfg) -> int:
    rng = replication_rng(cfg["seed"])
    smp = generate_sample(cfg["distribution"], cfg["censoring"], cfg["n"], rng)
    path = _outdir(cfg) / "sample.csv"
    write_sample(smp, path)
    print(f"wrote {path}")
    print(f"model={cfg['model']} n={smp.n} seed={cfg['seed']}")
    print(f"censored: {100 * smp.censored_fraction:.2f}%")
    print(f"mean window length: {np.mean(smp.window_lengths()):.4f}")
    print(f"mean censoring-arc length: {np.mean(smp.complement_lengths()):.4f}")
    return EXIT_OK


def cmd_estimate(cfg) -> int:
    smp = read_sample(cfg["sample"])
    est = estimate_density(smp, m_max=cfg["m_max"], kappa=cfg["kappa"], variant=cfg["variant"])
    fit = est.fit
    out = _outdir(cfg)

    write_csv(
        out / "coefficients.csv",
        ("lambda", "a_hat"),
        ((lam, float(a)) for lam, a in enumerate(fit.selected_coefficients)),
    )
    write_csv(
        out / "selection.csv",
        ("m", "contrast", "penalty", "total"),
        (
            (int(m), float(c), float(p), float(c + p))
            for m, c, p in zip(fit.models, fit.contrast, fit.penalty)
        ),
    )
    grid = GridSpec(cfg["grid"])
    theta = grid.theta
    f_hat = est(theta)
    if not np.all(np.isfinite(f_hat)):
        logger.error("density estimate is not finite on the grid")
        return EXIT_NUMERIC
    columns = [theta, f_hat]
    header = ["theta", "f_hat"]
    if cfg["distribution"] is not None:
        columns.append(np.asarray(cfg["distribution"].pdf(theta)))
        header.append("f_true")
    write_csv(out / "curve.csv", header, (tuple(map(float, row)) for row in zip(*columns)))

    manifest = {
        "format_version": FORMAT_VERSION,
        "n": fit.n,
        "delta_bar": format_float(fit.delta_bar),
        "kappa": format_float(fit.kappa),
        "kappa_source": fit.kappa_source,
        "m_hat": fit.m_selected,
        "m_max": fit.m_max,
        "variant": est.variant,
        "grid": grid.points,
        "sample": str(cfg["sample"]),
    }
    (out / "manifest.json").write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    print(f"n={fit.n} delta_bar={fit.delta_bar:.4f} kappa={fit.kappa:.4g} "
          f"({fit.kappa_source}) m_hat={fit.m_selected}")
    return EXIT_OK


def cmd_benchmark(cfg) -> int:
    grid = GridSpec(cfg["grid"])
    rows = []
    for idx in cfg["models"]:
        ref = REFERENCE_MODELS[idx]
        for n in cfg["sizes"]:
            rep = mise_monte_carlo(
                ref.distribution, ref.censoring, n, cfg["replications"], grid,
                seed=cfg["seed"], stream=(idx, n), m_max=cfg["m_max"],
                kappa=cfg["kappa"], variant=cfg["variant"], label=ref.name,
            )
            rows.append((
                ref.name, n, rep.replications, rep.mise, rep.mise_stderr,
                100 * rep.censored_rate_mean, rep.window_length_mean,
                rep.complement_length_mean, rep.m_hat_mode,
            ))
            print(f"{ref.name:7s} n={n:<5d} MISE={rep.mise:.4f} (+/- {rep.mise_stderr:.4f}) "
                  f"censored={100 * rep.censored_rate_mean:.2f}%")
    path = _outdir(cfg) / "benchmark.csv"
    write_csv(path, BENCHMARK_HEADER, rows)
    print(f"wrote {path}")
    return EXIT_OK


def cmd_compare(cfg) -> int:
    grid = GridSpec(cfg["grid"])
    rows = []
    for k in cfg["concentrations"]:
        for alpha in cfg["alphas"]:
            rep = parameter_recovery_study(
                k, alpha, n=cfg["n"], replications=cfg["replications"], mu=cfg["mu"],
                seed=cfg["seed"], grid=grid,
                m_max=cfg["m_max"], kappa=cfg["kappa"], variant=cfg["variant"],
            )
            ref = PUBLISHED_RECOVERY.get((k, alpha)) if cfg["mu"] == 2.0 else None
            published = (
                (ref["npmle_mu"], ref["npmle_kappa"], ref["mu"], ref["kappa"])
                if ref else ("NA",) * 4
            )
            rows.append((
                k, alpha, rep.n, rep.replications, published[0], rep.mu_hat_mean,
                published[1], rep.kappa_hat_mean, rep.mu_hat_stderr, rep.kappa_hat_stderr,
                published[2], published[3],
            ))
            print(f"k={k:g} alpha={alpha:g}: mu_hat={rep.mu_hat_mean:.3f} "
                  f"kappa_hat={rep.kappa_hat_mean:.3f}")
    path = _outdir(cfg) / "compare.csv"
    write_csv(path, COMPARE_HEADER, rows)
    print(f"wrote {path}")
    return EXIT_OK


COMMANDS = {
    "simulate": cmd_simulate,
    "estimate": cmd_estimate,
    "benchmark": cmd_benchmark,
    "compare": cmd_compare,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="circcensor",
        description="Density estimation for arc-censored circular data.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", metavar="PATH", help="INI file; the [%s] section is used" % name)
        p.add_argument("--seed", metavar="U64", help="random seed")
        p.add_argument("--out", metavar="DIR", help="output directory (default: .)")
        if name != "simulate":
            p.add_argument("--grid", metavar="N", help="evaluation grid size (default 1024)")
            p.add_argument("--kappa", metavar="auto|FLOAT", help="penalty constant")
            p.add_argument("--variant", choices=("threshold", "window"))
            p.add_argument("--m-max", dest="m_max", metavar="N", help="largest degree fitted")
        if name == "estimate":
            p.add_argument("--sample", metavar="PATH", help="sample file (x,delta,l,u)")
    return parser


def main(argv=None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s")
    args = build_parser().parse_args(argv)
    overrides = {
        k: v for k, v in vars(args).items() if k not in ("command", "config") and v is not None
    }
    try:
        cfg = load_config(args.config, args.command, overrides)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        return COMMANDS[args.command](cfg)
    except (DataError, InvalidInputError, OSError) as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except CircCensorError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
