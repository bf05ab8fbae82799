"""
Command-line front end.

    tirair generate --model lorenz --length 50400 --out lorenz.txt
    tirair analyze lorenz.txt --m 3 --tau 1 --metric tir,air,des
    tirair surrogate-test logistic.txt --surrogates 100 --seed 7
    tirair batch bonn/ --m 2,3,4 --metric tir,air --out bonn.json
    tirair compare bonn.json --a A,B --b C,D,E --metric air --m 3

Flags override values from a flat ``key=value`` config file given by
``--config`` or the ``TIRAIR_CONFIG`` environment variable. Exit status is 0
on success, 1 when some items failed (their errors are in the report) and 2
on configuration errors.
"""

import argparse
import datetime
import itertools
import json
import os
import sys
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import __version__
from .errors import ConfigurationError, TirairError
from .io import read_series_file, write_csv, write_series_file
from .irreversibility import DEFAULT_METHOD, DEFAULT_SUM_MODE, METHODS, SUM_MODES, des, irreversibility
from .ordinal import TIE_MODES, EmbeddingConfig
from .series import DEFAULT_SEED, MODELS, TimeSeries, center, default_spec, generate
from .stats import ALPHA, mann_whitney_u, summarize, wilcoxon_signed_rank
from .surrogate import DEFAULT_MASTER_SEED, DEFAULT_SURROGATES, MIN_SURROGATES, surrogate_tests

ENV_CONFIG = "TIRAIR_CONFIG"
EXIT_OK, EXIT_PARTIAL, EXIT_CONFIG = 0, 1, 2

DEFAULTS = {
    "m": "3",
    "tau": "1",
    "metric": "tir,air,des",
    "tie_mode": "smallest_index",
    "method": DEFAULT_METHOD,
    "sum_mode": DEFAULT_SUM_MODE,
    "tolerance": "0",
    "surrogates": str(DEFAULT_SURROGATES),
    "seed": str(DEFAULT_MASTER_SEED),
    "format": "json",
    "workers": "1",
}
METRICS = ("TIR", "AIR", "DES")


def load_config(path) -> Dict[str, str]:
    """Parse a flat ``key=value`` file; ``#`` starts a comment."""
    out = {}
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigurationError(f"cannot read config file {path}: {exc}") from None
    for no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigurationError(f"{path}:{no}: expected key=value, got {raw!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in DEFAULTS:
            raise ConfigurationError(f"{path}:{no}: unknown key {key!r}")
        out[key] = value
    return out


def _int_list(text: str, name: str) -> List[int]:
    try:
        values = [int(v) for v in str(text).split(",") if v.strip()]
    except ValueError:
        raise ConfigurationError(f"--{name} expects comma-separated integers, got {text!r}") from None
    if not values:
        raise ConfigurationError(f"--{name} is empty")
    return values


def resolve_settings(args) -> dict:
    """Merge flags over config file over built-in defaults and validate."""
    cfg_path = getattr(args, "config", None) or os.environ.get(ENV_CONFIG)
    cfg = load_config(cfg_path) if cfg_path else {}
    raw = {}
    for key, default in DEFAULTS.items():
        flag = getattr(args, key, None)
        raw[key] = str(flag) if flag is not None else cfg.get(key, default)

    metrics = [t.strip().upper() for t in raw["metric"].split(",") if t.strip()]
    bad = [t for t in metrics if t not in METRICS]
    if bad or not metrics:
        raise ConfigurationError(f"--metric must list items of {', '.join(m.lower() for m in METRICS)}, got {raw['metric']!r}")
    for key, allowed in (("tie_mode", TIE_MODES), ("method", METHODS), ("sum_mode", SUM_MODES), ("format", ("json", "csv"))):
        if raw[key] not in allowed:
            raise ConfigurationError(f"--{key.replace('_', '-')} must be one of {allowed}, got {raw[key]!r}")
    try:
        tolerance = float(raw["tolerance"])
        surrogates = int(raw["surrogates"])
        seed = int(raw["seed"])
        workers = int(raw["workers"])
    except ValueError as exc:
        raise ConfigurationError(f"bad numeric setting: {exc}") from None
    grid = []
    for m, tau in itertools.product(_int_list(raw["m"], "m"), _int_list(raw["tau"], "tau")):
        grid.append(EmbeddingConfig(m, tau, raw["tie_mode"], tolerance))
    return {
        "grid": grid,
        "metrics": metrics,
        "tie_mode": raw["tie_mode"],
        "method": raw["method"],
        "sum_mode": raw["sum_mode"],
        "tolerance": tolerance,
        "surrogates": surrogates,
        "seed": seed,
        "workers": workers,
        "format": raw["format"],
        "config_file": str(cfg_path) if cfg_path else None,
    }


def job_echo(command: str, settings: dict, inputs: Sequence[str]) -> dict:
    echo = {
        "command": command,
        "inputs": [str(p) for p in inputs],
        "embedding_grid": [[c.m, c.tau] for c in settings["grid"]],
        "metrics": settings["metrics"],
        "tie_mode": settings["tie_mode"],
        "tolerance": settings["tolerance"],
        "method": settings["method"],
        "sum_mode": settings["sum_mode"],
        "centering": "mean subtracted from every input series",
        "config_file": settings["config_file"],
    }
    if command == "surrogate-test":
        echo.update(n_surrogates=settings["surrogates"], master_seed=settings["seed"], surrogate="iAAFT")
    if command == "batch":
        echo.update(test_alternative="two-sided", alpha=ALPHA)
    return echo


def _header(args, command: str, settings: dict, inputs) -> dict:
    doc = {"tool": "tirair", "version": __version__}
    if not args.no_timestamp:
        doc["generated_at"] = datetime.datetime.now(datetime.timezone.utc).isoformat(timespec="seconds")
    doc["job"] = job_echo(command, settings, inputs)
    return doc


def _emit_json(doc: dict, out: Optional[str]):
    text = json.dumps(doc, indent=2) + "\n"
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _csv_base(out: Optional[str]) -> Path:
    if not out:
        raise ConfigurationError("--format csv needs --out PATH (used as the file-name prefix)")
    base = Path(out)
    return base.with_suffix("") if base.suffix else base


def _load_inputs(paths: Sequence[str], errors: list) -> List[Tuple[str, str, np.ndarray]]:
    """``(source, name, samples)`` for every readable series; failures go to ``errors``."""
    loaded = []
    for path in paths:
        try:
            for name, samples in read_series_file(path):
                loaded.append((str(path), name, samples))
        except (OSError, TirairError) as exc:
            errors.append({"source": str(path), "error": str(exc)})
    return loaded


def analyze_series(samples: np.ndarray, settings: dict, include_distribution: bool = False) -> Tuple[list, list]:
    """Every requested metric at every grid point; returns (results, errors)."""
    raw = TimeSeries(samples)
    centered = center(raw)
    results, errors = [], []
    for cfg in settings["grid"]:
        entry = {"m": cfg.m, "tau": cfg.tau}
        for metric in settings["metrics"]:
            try:
                if metric == "DES":
                    entry["DES"] = des(raw, cfg.tau, settings["tolerance"])
                else:
                    rep = irreversibility(centered, cfg, metric, settings["method"], settings["sum_mode"])
                    entry[metric] = rep.as_dict(include_distribution)
            except TirairError as exc:
                errors.append({"m": cfg.m, "tau": cfg.tau, "metric": metric, "error": str(exc)})
        results.append(entry)
    return results, errors


def cmd_generate(args) -> int:
    overrides = {}
    for item in args.param or []:
        if "=" not in item:
            raise ConfigurationError(f"--param expects name=value, got {item!r}")
        k, v = item.split("=", 1)
        try:
            overrides[k.strip()] = float(v)
        except ValueError:
            raise ConfigurationError(f"--param {k}: not a number: {v!r}") from None
    for name in ("dt", "transient", "delta"):
        value = getattr(args, name)
        if value is not None:
            overrides[name] = value
    if args.initial:
        try:
            overrides["initial"] = tuple(float(v) for v in args.initial.split(","))
        except ValueError:
            raise ConfigurationError(f"--initial expects comma-separated numbers, got {args.initial!r}") from None
    if args.component:
        overrides["component"] = args.component
    seed = args.seed if args.seed is not None else DEFAULT_SEED
    spec = default_spec(args.model, length=args.length, seed=seed, **overrides)
    series = generate(spec)
    if args.out:
        write_series_file(args.out, series.samples)
        print(f"# {series.provenance}", file=sys.stderr)
    else:
        for v in series.samples:
            sys.stdout.write(repr(float(v)) + "\n")
    return EXIT_OK


def cmd_analyze(args) -> int:
    settings = resolve_settings(args)
    doc = _header(args, "analyze", settings, args.inputs)
    errors: list = []
    reports = []
    for source, name, samples in _load_inputs(args.inputs, errors):
        results, errs = analyze_series(samples, settings, args.include_distribution or settings["format"] == "csv")
        reports.append({
            "name": name,
            "source": source,
            "length": int(samples.size),
            "original_mean": TimeSeries(samples).mean,
            "centered": True,
            "results": results,
            "errors": errs,
        })
        errors += [dict(e, source=source, name=name) for e in errs]
    doc["series"] = reports
    doc["errors"] = errors
    if settings["format"] == "csv":
        _analysis_csv(_csv_base(args.out), reports)
    else:
        _emit_json(doc, args.out)
    return EXIT_PARTIAL if errors else EXIT_OK


def _analysis_csv(base: Path, reports: list):
    totals, pairs, dist = [], [], []
    for rep in reports:
        for res in rep["results"]:
            for metric in METRICS:
                if metric not in res:
                    continue
                if metric == "DES":
                    totals.append([rep["name"], res["m"], res["tau"], metric, res[metric]])
                    continue
                r = res[metric]
                totals.append([rep["name"], res["m"], res["tau"], metric, r["total"]])
                for pc in r["pairs"]:
                    pairs.append([rep["name"], res["m"], res["tau"], metric, pc["pattern"], pc["counterpart"], pc["p"], pc["q"], pc["contribution"]])
            # one distribution per (series, m, tau); identical across metrics
            r = res.get("TIR") or res.get("AIR")
            if r and "distribution" in r:
                for key, prob in r["distribution"].items():
                    dist.append([rep["name"], res["m"], res["tau"], key, prob])
    write_csv(f"{base}_totals.csv", ["series", "m", "tau", "metric", "value"], totals)
    write_csv(f"{base}_pairs.csv", ["series", "m", "tau", "metric", "pattern", "counterpart", "p", "q", "contribution"], pairs)
    write_csv(f"{base}_distribution.csv", ["series", "m", "tau", "pattern", "probability"], dist)


def cmd_surrogate_test(args) -> int:
    settings = resolve_settings(args)
    kinds = [k for k in settings["metrics"] if k != "DES"]
    if not kinds:
        raise ConfigurationError("surrogate-test needs --metric tir and/or air")
    if settings["surrogates"] < MIN_SURROGATES:
        raise ConfigurationError(f"--surrogates must be at least {MIN_SURROGATES}, got {settings['surrogates']}")
    doc = _header(args, "surrogate-test", settings, args.inputs)
    errors: list = []
    out = []
    for source, name, samples in _load_inputs(args.inputs, errors):
        entry = {"name": name, "source": source, "length": int(samples.size), "results": []}
        for cfg in settings["grid"]:
            try:
                res = surrogate_tests(
                    samples, cfg, kinds, settings["surrogates"], settings["seed"],
                    method=settings["method"], sum_mode=settings["sum_mode"], workers=settings["workers"],
                )
            except TirairError as exc:
                errors.append({"source": source, "name": name, "m": cfg.m, "tau": cfg.tau, "error": str(exc)})
                continue
            entry["results"].append({"m": cfg.m, "tau": cfg.tau, **{k: r.as_dict() for k, r in res.items()}})
        out.append(entry)
    doc["series"] = out
    doc["errors"] = errors
    if settings["format"] == "csv":
        base = _csv_base(args.out)
        bands, ensemble = [], []
        for entry in out:
            for res in entry["results"]:
                for k in kinds:
                    r = res[k]
                    bands.append([entry["name"], res["m"], res["tau"], k, r["original"], r["p2_5"], r["p97_5"], r["verdict"]])
                    ensemble += [[entry["name"], res["m"], res["tau"], k, i, v] for i, v in enumerate(r["surrogate_values"])]
        write_csv(f"{base}_bands.csv", ["series", "m", "tau", "metric", "original", "p2_5", "p97_5", "verdict"], bands)
        write_csv(f"{base}_ensemble.csv", ["series", "m", "tau", "metric", "index", "value"], ensemble)
    else:
        _emit_json(doc, args.out)
    return EXIT_PARTIAL if errors else EXIT_OK


def discover_groups(dirs: Sequence[str]) -> Dict[str, List[Path]]:
    """Map group name to its sorted data files.

    A single directory holding only subdirectories is treated as a parent
    whose subdirectories are the groups; otherwise each argument is a group.
    """
    paths = [Path(d) for d in dirs]
    for p in paths:
        if not p.is_dir():
            raise ConfigurationError(f"not a directory: {p}")
    if len(paths) == 1:
        children = sorted(c for c in paths[0].iterdir() if not c.name.startswith("."))
        if children and all(c.is_dir() for c in children):
            paths = children
    groups = {}
    for p in paths:
        files = sorted(f for f in p.iterdir() if f.is_file() and not f.name.startswith("."))
        if not files:
            raise ConfigurationError(f"group directory {p} contains no files")
        groups[p.name] = files
    if not groups:
        raise ConfigurationError("no input groups found")
    return groups


def _group_values(files: list, cfg: EmbeddingConfig, metric: str) -> List[float]:
    vals = []
    for f in files:
        for res in f.get("results", []):
            if res["m"] == cfg.m and res["tau"] == cfg.tau and metric in res:
                vals.append(res[metric])
    return vals


def cmd_batch(args) -> int:
    settings = resolve_settings(args)
    groups = discover_groups(args.dirs)
    doc = _header(args, "batch", settings, args.dirs)
    errors: list = []
    per_group = {}
    for gname, files in groups.items():
        entries = []
        for source, name, samples in _load_inputs(files, errors):
            results, errs = analyze_series(samples, settings)
            flat = []
            for res in results:
                row = {"m": res["m"], "tau": res["tau"]}
                for metric in settings["metrics"]:
                    if metric in res:
                        row[metric] = res[metric] if metric == "DES" else res[metric]["total"]
                flat.append(row)
            entries.append({"name": name, "source": source, "length": int(samples.size), "results": flat, "errors": errs})
            errors += [dict(e, source=source, name=name) for e in errs]
        per_group[gname] = entries

    summaries = []
    for cfg in settings["grid"]:
        for metric in settings["metrics"]:
            for gname, files in per_group.items():
                vals = _group_values(files, cfg, metric)
                row = {"group": gname, "m": cfg.m, "tau": cfg.tau, "metric": metric, "n": len(vals)}
                try:
                    row["mean"], row["standard_error"] = summarize(vals)
                except TirairError as exc:
                    row["error"] = str(exc)
                summaries.append(row)

    tests = []
    names = list(per_group)
    for cfg in settings["grid"]:
        for metric in settings["metrics"]:
            for g1, g2 in itertools.combinations(names, 2):
                a = _group_values(per_group[g1], cfg, metric)
                b = _group_values(per_group[g2], cfg, metric)
                row = {"a": [g1], "b": [g2], "m": cfg.m, "tau": cfg.tau, "metric": metric}
                try:
                    row.update(mann_whitney_u(a, b).as_dict())
                except TirairError as exc:
                    row["error"] = str(exc)
                tests.append(row)
            for related in args.related or []:
                members = [g.strip() for g in related.split(",") if g.strip()]
                unknown = [g for g in members if g not in per_group]
                if unknown:
                    raise ConfigurationError(f"--related names unknown groups: {unknown}")
                for g1, g2 in itertools.combinations(members, 2):
                    row = {"a": [g1], "b": [g2], "m": cfg.m, "tau": cfg.tau, "metric": metric}
                    try:
                        row.update(wilcoxon_signed_rank(_group_values(per_group[g1], cfg, metric),
                                                        _group_values(per_group[g2], cfg, metric)).as_dict())
                    except TirairError as exc:
                        row["error"] = str(exc)
                    tests.append(row)

    doc["groups"] = per_group
    doc["summaries"] = summaries
    doc["tests"] = tests
    doc["errors"] = errors
    if settings["format"] == "csv":
        base = _csv_base(args.out)
        values = [[g, f["name"], r["m"], r["tau"], k, r[k]]
                  for g, files in per_group.items() for f in files for r in f["results"]
                  for k in settings["metrics"] if k in r]
        write_csv(f"{base}_values.csv", ["group", "series", "m", "tau", "metric", "value"], values)
        write_csv(f"{base}_summary.csv", ["group", "m", "tau", "metric", "n", "mean", "standard_error"],
                  [[s["group"], s["m"], s["tau"], s["metric"], s["n"], s.get("mean"), s.get("standard_error")] for s in summaries])
        write_csv(f"{base}_tests.csv", ["a", "b", "m", "tau", "metric", "method", "statistic", "z", "p_value"],
                  [["+".join(t["a"]), "+".join(t["b"]), t["m"], t["tau"], t["metric"], t.get("method"), t.get("statistic"), t.get("z"), t.get("p_value")] for t in tests])
    else:
        _emit_json(doc, args.out)
    return EXIT_PARTIAL if errors else EXIT_OK


def cmd_compare(args) -> int:
    try:
        report = json.loads(Path(args.report).read_text())
        groups = report["groups"]
    except (OSError, ValueError, KeyError) as exc:
        raise ConfigurationError(f"cannot read batch report {args.report}: {exc}") from None
    metric = args.metric.upper()
    if metric not in METRICS:
        raise ConfigurationError(f"--metric must be one of tir, air, des, got {args.metric!r}")
    cfg = EmbeddingConfig(args.m, args.tau)
    sides = []
    for spec in (args.a, args.b):
        names = [g.strip() for g in spec.split(",") if g.strip()]
        unknown = [g for g in names if g not in groups]
        if unknown or not names:
            raise ConfigurationError(f"unknown groups {unknown or spec!r}; report has {sorted(groups)}")
        sides.append((names, [v for g in names for v in _group_values(groups[g], cfg, metric)]))
    (a_names, a_vals), (b_names, b_vals) = sides
    test = wilcoxon_signed_rank if args.test == "wilcoxon" else mann_whitney_u
    result = test(a_vals, b_vals)
    doc = {"tool": "tirair", "version": __version__}
    if not args.no_timestamp:
        doc["generated_at"] = datetime.datetime.now(datetime.timezone.utc).isoformat(timespec="seconds")
    doc["job"] = {"command": "compare", "report": str(args.report), "a": a_names, "b": b_names,
                  "metric": metric, "m": args.m, "tau": args.tau, "alpha": ALPHA}
    doc["summaries"] = {"+".join(a_names): dict(zip(("mean", "standard_error"), summarize(a_vals))),
                        "+".join(b_names): dict(zip(("mean", "standard_error"), summarize(b_vals)))}
    doc["test"] = dict(result.as_dict(), significant=result.significant())
    _emit_json(doc, args.out)
    return EXIT_OK


def _add_shared(p: argparse.ArgumentParser, surrogates: bool = False):
    p.add_argument("--m", help="window length(s), comma separated (default 3)")
    p.add_argument("--tau", help="delay(s), comma separated (default 1)")
    p.add_argument("--metric", help="comma-separated subset of tir,air,des")
    p.add_argument("--tie-mode", dest="tie_mode", help="smallest_index (default) or largest_index")
    p.add_argument("--method", help="forward_backward (default) or symmetric_pairs")
    p.add_argument("--sum-mode", dest="sum_mode", help="larger_first (default) or bidirectional")
    p.add_argument("--tolerance", help="absolute equality tolerance for ties and DES (default 0)")
    p.add_argument("--surrogates", help="number of iAAFT surrogates (default 100)")
    p.add_argument("--seed", help="master seed for surrogate ensembles")
    p.add_argument("--workers", help="worker processes for surrogate ensembles (default 1)")
    p.add_argument("--format", help="json (default) or csv")
    p.add_argument("--out", help="output file (json) or file-name prefix (csv); default stdout")
    p.add_argument("--config", help=f"flat key=value config file (default: ${ENV_CONFIG})")
    p.add_argument("--no-timestamp", action="store_true", help="omit the generated_at field")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tirair", description=__doc__.split("\n\n")[0].strip())
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="write a model series, one value per line")
    g.add_argument("--model", required=True, choices=MODELS)
    g.add_argument("--length", type=int, default=50400)
    g.add_argument("--seed", type=int, help="seed for ar1/pink/uniform")
    g.add_argument("--dt", type=float, help="Lorenz RK4 step (default 0.01)")
    g.add_argument("--transient", type=int, help="Lorenz steps discarded before output (default 0)")
    g.add_argument("--delta", type=float, help="AR(1) coefficient (default 0.3)")
    g.add_argument("--component", choices=("x", "y", "z"), help="Henon/Lorenz component (default x)")
    g.add_argument("--initial", help="initial state, comma separated")
    g.add_argument("--param", action="append", help="model parameter override name=value (repeatable)")
    g.add_argument("--out", help="output file (default stdout)")
    g.set_defaults(func=cmd_generate)

    a = sub.add_parser("analyze", help="TIR/AIR/DES of one or more series files")
    a.add_argument("inputs", nargs="+")
    a.add_argument("--include-distribution", action="store_true", help="add joint-pattern probabilities to the report")
    _add_shared(a)
    a.set_defaults(func=cmd_analyze)

    s = sub.add_parser("surrogate-test", help="iAAFT percentile-band test of TIR/AIR")
    s.add_argument("inputs", nargs="+")
    _add_shared(s)
    s.set_defaults(func=cmd_surrogate_test)

    b = sub.add_parser("batch", help="analyze groups of series files and compare the groups")
    b.add_argument("dirs", nargs="+", help="group directories, or one parent of group directories")
    b.add_argument("--related", action="append",
                   help="comma-separated groups with paired segments (Wilcoxon, files matched in sorted order)")
    _add_shared(b)
    b.set_defaults(func=cmd_batch)

    c = sub.add_parser("compare", help="rank test between pooled groups of a batch report")
    c.add_argument("report")
    c.add_argument("--a", required=True, help="comma-separated group names")
    c.add_argument("--b", required=True, help="comma-separated group names")
    c.add_argument("--metric", default="air")
    c.add_argument("--m", type=int, default=3)
    c.add_argument("--tau", type=int, default=1)
    c.add_argument("--test", choices=("mwu", "wilcoxon"), default="mwu")
    c.add_argument("--out")
    c.add_argument("--no-timestamp", action="store_true")
    c.set_defaults(func=cmd_compare)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigurationError as exc:
        print(f"tirair: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except TirairError as exc:
        print(f"tirair: error: {exc}", file=sys.stderr)
        return EXIT_PARTIAL


if __name__ == "__main__":
    sys.exit(main())
