"""Command-line interface.

Subcommands: fetch, embed, train, predict, bench, sweep-k, sweep-hp.
Exit codes: 0 success, 1 reference-tolerance failure in --check mode,
2 usage error, 3 data error.
"""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

import numpy as np

from .config import RunConfig, build_run_config, parse_config_file
from .errors import SpecgraphError
from .evaluation import (
    HP_GRID,
    ClassifierSpec,
    cross_validate,
    stratified_folds,
    sweep_embedding_dim,
    sweep_hyperparameters,
    write_cv_csv,
    write_sweep_csv,
)
from .forest import ForestConfig, fit_forest, load_forest, predict_forest, save_forest
from .reference import (
    ACCURACY_TOLERANCE_PP,
    BENCH_DATASETS,
    K_SWEEP_ACCURACY,
    K_SWEEP_VALUES,
    RFC_ACCURACY,
)
from .spectral import embed_dataset, write_embedding_csv
from .tu import (
    DATASET_ALIASES,
    DATASET_NAMES,
    canonical_dataset_name,
    fetch_dataset,
    parse_tu_dataset,
)

#: parameter-name aliases accepted by sweep-hp
_HP_ALIASES = {"n_estimators": "n_trees"}


class UsageError(Exception):
    pass


def _known_dataset_names(cfg: RunConfig) -> list[str]:
    names = set(DATASET_NAMES)
    cache = Path(cfg.cache_dir).expanduser()
    if cache.is_dir():
        for child in cache.iterdir():
            if child.is_dir() and (child / f"{child.name}_A.txt").is_file():
                names.add(child.name)
    return sorted(names)


def _resolve_datasets(arg: str | None, cfg: RunConfig, default) -> list[str]:
    if not arg:
        return list(default)
    names = [canonical_dataset_name(n.strip()) for n in arg.split(",") if n.strip()]
    if not names:
        raise UsageError("empty dataset list")
    known = _known_dataset_names(cfg)
    for name in names:
        if name not in known:
            raise UsageError(
                f"unknown dataset {name!r}; known names: "
                + ", ".join(known + sorted(DATASET_ALIASES)),
            )
    return names


def _load(name: str, cfg: RunConfig):
    path = fetch_dataset(name, cfg.cache_dir, cfg.url_template)
    return parse_tu_dataset(path, name)


def _forest_config(args, cfg: RunConfig) -> ForestConfig:
    base = cfg.forest
    return ForestConfig(
        n_trees=args.n_trees if args.n_trees is not None else base.n_trees,
        min_samples_leaf=(args.min_samples_leaf if args.min_samples_leaf is not None
                          else base.min_samples_leaf),
        max_depth=args.max_depth if args.max_depth is not None else base.max_depth,
        bootstrap=args.bootstrap if args.bootstrap is not None else base.bootstrap,
        seed=cfg.seed_forest,
    )


def _spec_params(fc: ForestConfig) -> dict:
    return {
        "n_trees": fc.n_trees, "min_samples_leaf": fc.min_samples_leaf,
        "max_depth": fc.max_depth, "bootstrap": fc.bootstrap,
        "max_features": fc.max_features, "seed": fc.seed,
    }


def cmd_fetch(args, cfg: RunConfig) -> int:
    names = _resolve_datasets(args.dataset, cfg, BENCH_DATASETS)
    for name in names:
        path = fetch_dataset(name, cfg.cache_dir, cfg.url_template)
        print(f"{name}: {path}")
    return 0


def cmd_embed(args, cfg: RunConfig) -> int:
    names = _resolve_datasets(args.dataset, cfg, [])
    out_dir = Path(cfg.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    for name in names:
        dataset = _load(name, cfg)
        X, y = embed_dataset(dataset, cfg.k, n_threads=cfg.resolved_threads())
        out = (Path(args.out) if args.out and len(names) == 1
               else out_dir / f"{name}_embedding.csv")
        write_embedding_csv(out, X, y)
        print(f"{name}: wrote {X.shape[0]}x{X.shape[1]} embedding to {out}")
    return 0


def cmd_train(args, cfg: RunConfig) -> int:
    names = _resolve_datasets(args.dataset, cfg, [])
    if len(names) != 1:
        raise UsageError("train requires exactly one --dataset")
    dataset = _load(names[0], cfg)
    X, y = embed_dataset(dataset, cfg.k, n_threads=cfg.resolved_threads())
    model = fit_forest(X, y, _forest_config(args, cfg),
                       n_threads=cfg.resolved_threads())
    save_forest(model, args.out)
    print(f"trained {model.n_trees} trees on {names[0]} "
          f"({X.shape[0]} graphs, k={X.shape[1]}); model written to {args.out}")
    return 0


def cmd_predict(args, cfg: RunConfig) -> int:
    names = _resolve_datasets(args.dataset, cfg, [])
    if len(names) != 1:
        raise UsageError("predict requires exactly one --dataset")
    model = load_forest(args.model)
    dataset = _load(names[0], cfg)
    X, y = embed_dataset(dataset, model.n_features,
                         n_threads=cfg.resolved_threads())
    pred = predict_forest(model, X)
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write("graph_id,prediction\n")
        for i, p in enumerate(pred):
            fh.write(f"{i},{int(p)}\n")
    accuracy = float(np.mean(pred == y))
    print(f"{names[0]}: wrote {len(pred)} predictions to {args.out} "
          f"(accuracy vs dataset labels: {100 * accuracy:.1f}%)")
    return 0


def _check_line(name: str, measured_pct: float, expected_pct: float | None) -> bool:
    """Print one aligned result row; returns False when outside tolerance."""
    if expected_pct is None:
        print(f"  {name:<16} {measured_pct:6.1f}")
        return True
    delta = measured_pct - expected_pct
    ok = abs(delta) <= ACCURACY_TOLERANCE_PP
    print(f"  {name:<16} {measured_pct:6.1f}  reference {expected_pct:5.1f}  "
          f"delta {delta:+5.1f}  [{'ok' if ok else 'OUT OF TOLERANCE'}]")
    return ok


def cmd_bench(args, cfg: RunConfig) -> int:
    names = _resolve_datasets(args.dataset, cfg, BENCH_DATASETS)
    out_dir = Path(cfg.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    forest_cfg = _forest_config(args, cfg)
    spec = ClassifierSpec("rfc", _spec_params(forest_cfg))

    rows = []
    failures = []
    out_of_tolerance = []
    t_start = time.perf_counter()
    print(f"spectral features + random forest, {cfg.n_folds}-fold CV "
          f"(fold seed {cfg.seed_fold}, forest seed {cfg.seed_forest})")
    for name in names:
        try:
            dataset = _load(name, cfg)
            t0 = time.perf_counter()
            X, y = embed_dataset(dataset, cfg.k, n_threads=cfg.resolved_threads())
            embed_s = time.perf_counter() - t0
            plan = stratified_folds(y, cfg.n_folds, cfg.seed_fold)
            report = cross_validate(X, y, spec, plan, embed_seconds=embed_s,
                                    n_threads=cfg.resolved_threads())
            rows.append((name, "rfc", X.shape[1], report))
            ok = _check_line(name, report.mean_percent, RFC_ACCURACY.get(name))
            if args.check and not ok:
                out_of_tolerance.append(name)
        except SpecgraphError as exc:
            failures.append(name)
            print(f"  {name:<16} FAILED: {exc}", file=sys.stderr)
    total = time.perf_counter() - t_start

    out_csv = out_dir / "bench.csv"
    write_cv_csv(out_csv, rows, include_timings=not args.no_timings)
    print(f"wrote {out_csv}")
    if not args.no_timings:
        print(f"total wall clock: {total:.1f}s")
    if failures:
        return 3
    if args.check and out_of_tolerance:
        return 1
    return 0


def cmd_sweep_k(args, cfg: RunConfig) -> int:
    names = _resolve_datasets(args.dataset, cfg, [])
    if len(names) != 1:
        raise UsageError("sweep-k requires exactly one --dataset")
    name = names[0]
    if args.k_values:
        try:
            k_values = [int(k) for k in args.k_values.split(",") if k.strip()]
        except ValueError:
            raise UsageError(f"bad k list {args.k_values!r}")
        if not k_values:
            raise UsageError("empty k list")
    else:
        k_values = list(K_SWEEP_VALUES)

    dataset = _load(name, cfg)
    forest_cfg = _forest_config(args, cfg)
    spec = ClassifierSpec("rfc", _spec_params(forest_cfg))
    plan = stratified_folds(dataset.labels, cfg.n_folds, cfg.seed_fold)
    reports = sweep_embedding_dim(dataset, k_values, spec, plan,
                                  n_threads=cfg.resolved_threads())

    out_dir = Path(cfg.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    out_csv = out_dir / f"sweep_k_{name}.csv"
    write_cv_csv(out_csv, [(name, "rfc", k, reports[k]) for k in k_values],
                 include_timings=not args.no_timings)

    all_ok = True
    print(f"embedding-dimension sweep on {name}")
    for k in k_values:
        expected = K_SWEEP_ACCURACY.get(k, {}).get(name)
        ok = _check_line(f"k={k}", reports[k].mean_percent, expected)
        if args.check and expected is not None and not ok:
            all_ok = False
    print(f"wrote {out_csv}")
    return 0 if (all_ok or not args.check) else 1


def cmd_sweep_hp(args, cfg: RunConfig) -> int:
    names = _resolve_datasets(args.dataset, cfg, [])
    if len(names) != 1:
        raise UsageError("sweep-hp requires exactly one --dataset")
    name = names[0]
    if args.param:
        grid = {}
        for raw in args.param.split(","):
            key = _HP_ALIASES.get(raw.strip(), raw.strip())
            if key not in HP_GRID:
                raise UsageError(
                    f"unknown hyperparameter {raw!r}; known: "
                    + ", ".join(sorted(HP_GRID) + sorted(_HP_ALIASES)),
                )
            grid[key] = HP_GRID[key]
    else:
        grid = dict(HP_GRID)

    dataset = _load(name, cfg)
    X, y = embed_dataset(dataset, cfg.k, n_threads=cfg.resolved_threads())
    plan = stratified_folds(y, cfg.n_folds, cfg.seed_fold)
    records = sweep_hyperparameters(X, y, plan, grid,
                                    forest_seed=cfg.seed_forest,
                                    n_threads=cfg.resolved_threads())
    out_dir = Path(cfg.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    out_csv = out_dir / f"sweep_hp_{name}.csv"
    write_sweep_csv(out_csv, name, records)
    for rec in records:
        mean = 100.0 * float(np.mean(rec.per_fold_accuracy))
        print(f"  {rec.param}={rec.value}: {mean:.1f}")
    print(f"wrote {out_csv}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="specgraph",
        description="Graph classification from normalized-Laplacian spectra",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--config", help="key-value config file")
        p.add_argument("--cache", help="dataset cache directory")
        p.add_argument("--url-template", help="archive URL with {name}")
        p.add_argument("--threads", type=int, help="worker threads (0 = all cores)")
        p.add_argument("--out-dir", help="directory for output files")

    def add_run(p):
        p.add_argument("--k", help='embedding width (integer or "auto")')
        p.add_argument("--n-folds", type=int, help="cross-validation folds")
        p.add_argument("--seed-fold", type=int, help="fold-plan seed")
        p.add_argument("--seed-forest", type=int, help="forest seed")

    def add_forest(p):
        p.add_argument("--n-trees", type=int)
        p.add_argument("--min-samples-leaf", type=int)
        p.add_argument("--max-depth", type=int)
        p.add_argument("--bootstrap", dest="bootstrap", action="store_true",
                       default=None)
        p.add_argument("--no-bootstrap", dest="bootstrap", action="store_false")

    p = sub.add_parser("fetch", help="download datasets into the cache")
    p.add_argument("--dataset", help="comma-separated names (default: all six)")
    add_common(p)
    p.set_defaults(func=cmd_fetch)

    p = sub.add_parser("embed", help="write spectral embeddings as CSV")
    p.add_argument("--dataset", required=True)
    p.add_argument("--out", help="output CSV (single dataset only)")
    add_common(p)
    add_run(p)
    p.set_defaults(func=cmd_embed)

    p = sub.add_parser("train", help="fit a forest on a whole dataset")
    p.add_argument("--dataset", required=True)
    p.add_argument("--out", required=True, help="model file to write")
    add_common(p)
    add_run(p)
    add_forest(p)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("predict", help="predict with a saved model")
    p.add_argument("--dataset", required=True)
    p.add_argument("--model", required=True)
    p.add_argument("--out", required=True, help="predictions CSV to write")
    add_common(p)
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("bench", help="reproduce the benchmark table")
    p.add_argument("--dataset", help="comma-separated names (default: all six)")
    p.add_argument("--check", action="store_true",
                   help="compare against reference values; exit 1 if outside tolerance")
    p.add_argument("--no-timings", action="store_true",
                   help="omit timing columns (for byte-identical outputs)")
    add_common(p)
    add_run(p)
    add_forest(p)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("sweep-k", help="accuracy across embedding dimensions")
    p.add_argument("--dataset", required=True)
    p.add_argument("--k", dest="k_values", help="comma-separated k values")
    p.add_argument("--check", action="store_true")
    p.add_argument("--no-timings", action="store_true")
    add_common(p)
    p.add_argument("--n-folds", type=int)
    p.add_argument("--seed-fold", type=int)
    p.add_argument("--seed-forest", type=int)
    add_forest(p)
    p.set_defaults(func=cmd_sweep_k)

    p = sub.add_parser("sweep-hp", help="forest hyperparameter robustness sweep")
    p.add_argument("--dataset", required=True)
    p.add_argument("--param", help="comma-separated hyperparameter names")
    add_common(p)
    add_run(p)
    p.set_defaults(func=cmd_sweep_hp)
    return parser


def _merge_flags(args, cfg: RunConfig) -> RunConfig:
    if getattr(args, "cache", None):
        cfg.cache_dir = args.cache
    if getattr(args, "url_template", None):
        cfg.url_template = args.url_template
    if getattr(args, "threads", None) is not None:
        cfg.threads = args.threads
    if getattr(args, "out_dir", None):
        cfg.out_dir = args.out_dir
    if getattr(args, "k", None) is not None:
        cfg.k = "auto" if args.k == "auto" else int(args.k)
    if getattr(args, "n_folds", None) is not None:
        cfg.n_folds = args.n_folds
    if getattr(args, "seed_fold", None) is not None:
        cfg.seed_fold = args.seed_fold
    if getattr(args, "seed_forest", None) is not None:
        cfg.seed_forest = args.seed_forest
    return cfg


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        file_values = parse_config_file(args.config) if getattr(args, "config", None) else None
        cfg = _merge_flags(args, build_run_config(file_values))
        return args.func(args, cfg)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except SpecgraphError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
