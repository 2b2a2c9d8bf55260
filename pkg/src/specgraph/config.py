"""Run configuration: defaults, config file, environment, CLI flag merging.

Precedence, lowest to highest: built-in defaults < config file < environment
variables < command-line flags. The config file is plain text, one
``key = value`` per line, ``#`` starts a comment. Recognized keys:

    data.cache_dir       dataset cache directory
    data.url_template    archive URL with a {name} placeholder
    run.n_folds          cross-validation folds
    run.k                embedding width ("auto" or integer)
    run.seed_fold        fold-plan seed
    run.seed_forest      forest seed
    run.threads          worker threads
    forest.n_trees, forest.min_samples_leaf, forest.max_depth,
    forest.bootstrap     forest hyperparameters

Environment variables: SPECGRAPH_CACHE (data.cache_dir),
SPECGRAPH_URL_TEMPLATE (data.url_template), SPECGRAPH_THREADS (run.threads).
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field

from .forest import ForestConfig
from .tu import DEFAULT_CACHE_DIR, DEFAULT_URL_TEMPLATE


@dataclass
class RunConfig:
    """Everything a benchmark run needs; defaults reproduce the reference
    setup (10 folds, fold seed 1, forest seed 1, k auto, default forest)."""

    datasets: list = field(default_factory=list)
    k: object = "auto"
    n_folds: int = 10
    seed_fold: int = 1
    seed_forest: int = 1
    cache_dir: str = DEFAULT_CACHE_DIR
    url_template: str = DEFAULT_URL_TEMPLATE
    out_dir: str = "."
    threads: int = 0  # 0: use all available cores
    forest: ForestConfig = field(default_factory=ForestConfig)

    def resolved_threads(self) -> int:
        return self.threads if self.threads > 0 else (os.cpu_count() or 1)


def parse_config_file(path) -> dict:
    """Parse the key-value config format into a flat dict of strings."""
    values = {}
    with open(path, "r", encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, 1):
            text = line.split("#", 1)[0].strip()
            if not text:
                continue
            key, sep, value = text.partition("=")
            if not sep:
                raise ValueError(f"{path}:{line_no}: expected 'key = value'")
            values[key.strip()] = value.strip()
    return values


def _parse_bool(text: str) -> bool:
    lowered = text.lower()
    if lowered in ("true", "1", "yes", "on"):
        return True
    if lowered in ("false", "0", "no", "off"):
        return False
    raise ValueError(f"expected a boolean, got {text!r}")


def _parse_k(text: str):
    return "auto" if text == "auto" else int(text)


def build_run_config(file_values: dict | None = None,
                     env: dict | None = None) -> RunConfig:
    """Apply config-file values then environment overrides to the defaults.

    CLI flags are merged on top by the caller (flags win).
    """
    cfg = RunConfig()
    values = dict(file_values or {})
    forest_kwargs = {}
    setters = {
        "data.cache_dir": lambda v: setattr(cfg, "cache_dir", v),
        "data.url_template": lambda v: setattr(cfg, "url_template", v),
        "run.n_folds": lambda v: setattr(cfg, "n_folds", int(v)),
        "run.k": lambda v: setattr(cfg, "k", _parse_k(v)),
        "run.seed_fold": lambda v: setattr(cfg, "seed_fold", int(v)),
        "run.seed_forest": lambda v: setattr(cfg, "seed_forest", int(v)),
        "run.threads": lambda v: setattr(cfg, "threads", int(v)),
        "forest.n_trees": lambda v: forest_kwargs.update(n_trees=int(v)),
        "forest.min_samples_leaf":
            lambda v: forest_kwargs.update(min_samples_leaf=int(v)),
        "forest.max_depth": lambda v: forest_kwargs.update(max_depth=int(v)),
        "forest.bootstrap":
            lambda v: forest_kwargs.update(bootstrap=_parse_bool(v)),
    }
    for key, value in values.items():
        if key not in setters:
            raise ValueError(f"unknown config key {key!r}")
        setters[key](value)
    if forest_kwargs:
        cfg.forest = ForestConfig(seed=cfg.seed_forest, **forest_kwargs)

    env = os.environ if env is None else env
    if env.get("SPECGRAPH_CACHE"):
        cfg.cache_dir = env["SPECGRAPH_CACHE"]
    if env.get("SPECGRAPH_URL_TEMPLATE"):
        cfg.url_template = env["SPECGRAPH_URL_TEMPLATE"]
    if env.get("SPECGRAPH_THREADS"):
        cfg.threads = int(env["SPECGRAPH_THREADS"])
    return cfg
