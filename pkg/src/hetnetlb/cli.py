"""Experiment harness: config parsing, scheme-by-seed grids, CSV emitters.

The config file is INI-style (sections in brackets, ``key = value`` lines,
``#`` comments); every key has a default, so an empty file runs the
standard desk-scale experiment. Outputs are plain CSVs so any plotting
tool can reproduce the comparison figures.
"""

from __future__ import annotations

import argparse
import concurrent.futures
import configparser
import os
import sys
import time
from dataclasses import dataclass, field, fields, replace

import numpy as np

from . import baselines, metrics, netmodel, oracle
from .joint import JointParams, juapcmser_solve
from .netmodel import ScenarioConfig, generate_scenario
from .powerctl import PowerCtlParams
from .uamser import UamserParams, uamser_solve

SCHEMES = ("MARA", "AUF", "UAMSER", "JUAPCMSER")
_CDF_POINTS = 101


class ConfigError(ValueError):
    """Invalid experiment configuration; message names the offending key."""


@dataclass
class ExperimentConfig:
    scenario: ScenarioConfig = field(default_factory=ScenarioConfig)
    schemes: tuple = SCHEMES
    seeds: tuple = tuple(range(20))
    uamser: UamserParams = field(default_factory=UamserParams)
    powerctl: PowerCtlParams = field(default_factory=PowerCtlParams)
    joint: JointParams = field(default_factory=JointParams)
    out_dir: str = "out"
    jobs: int = 1
    validate: bool = False
    emit_metrics: bool = True
    emit_cdf: bool = True
    emit_convergence: bool = True
    emit_validation: bool = False
    oracle_budget: oracle.OracleBudget = field(
        default_factory=oracle.OracleBudget)

    def __post_init__(self):
        if not self.schemes:
            raise ConfigError("at least one scheme is required")
        if not self.seeds:
            raise ConfigError("at least one seed is required")
        self.joint = replace(self.joint, uamser=self.uamser,
                             powerctl=self.powerctl)


@dataclass
class RunRecord:
    scheme: str
    seed: int
    jain: float
    avg_rate: float
    avg_ee: float
    macro_load: float
    pico_load: float
    objective: float
    outer_iters: int
    wall_ms: float   # informational only; never written to CSV outputs

    CSV_FIELDS = ("scheme", "seed", "jain", "avg_rate", "avg_ee",
                  "macro_load", "pico_load", "objective", "outer_iters")


def parse_seed_spec(text):
    """Seed list from 'a..b' (inclusive) or a comma-separated list."""
    text = text.strip()
    if ".." in text:
        lo, hi = text.split("..", 1)
        return tuple(range(int(lo), int(hi) + 1))
    return tuple(int(part) for part in text.split(",") if part.strip())


def _key_line(path, key):
    try:
        with open(path) as fh:
            for i, line in enumerate(fh, start=1):
                if line.split("=")[0].split(":")[0].strip() == key:
                    return i
    except OSError:
        pass
    return None


def _convert(path, section, key, text, kind):
    try:
        if kind is bool:
            lowered = text.strip().lower()
            if lowered in ("1", "true", "yes", "on"):
                return True
            if lowered in ("0", "false", "no", "off"):
                return False
            raise ValueError("not a boolean")
        if kind is int:
            return int(float(text)) if "e" in text.lower() else int(text)
        return kind(text)
    except ValueError:
        line = _key_line(path, key)
        where = f" (line {line})" if line else ""
        raise ConfigError(
            f"[{section}] {key} = {text!r}: expected {kind.__name__}{where}"
        ) from None


_SECTION_TARGETS = {
    "scenario": ScenarioConfig,
    "uamser": UamserParams,
    "powerctl": PowerCtlParams,
    "joint": JointParams,
}
_EXPERIMENT_KEYS = {"schemes": str, "seeds": str, "jobs": int,
                    "validate": bool}
_OUTPUT_KEYS = {"dir": str, "emit_metrics": bool, "emit_cdf": bool,
                "emit_convergence": bool, "emit_validation": bool}


def parse_config(path) -> ExperimentConfig:
    """Parse and validate an experiment config file; missing keys keep
    their defaults, unknown keys or malformed values are diagnostics."""
    parser = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    try:
        with open(path) as fh:
            parser.read_file(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from None
    except configparser.Error as exc:
        raise ConfigError(f"malformed config: {exc}") from None

    config = ExperimentConfig()
    for section in parser.sections():
        if section in _SECTION_TARGETS:
            target = getattr(config, section)
            known = {f.name: f.type for f in fields(target)
                     if f.name not in ("uamser", "powerctl")}
            for key, text in parser.items(section):
                if key not in known:
                    line = _key_line(path, key)
                    where = f" (line {line})" if line else ""
                    raise ConfigError(f"[{section}] unknown key "
                                      f"{key!r}{where}")
                kind = int if known[key] == "int" else float
                setattr(target, key, _convert(path, section, key, text,
                                              kind))
        elif section == "experiment":
            for key, text in parser.items(section):
                if key not in _EXPERIMENT_KEYS:
                    raise ConfigError(f"[experiment] unknown key {key!r}")
                if key == "schemes":
                    config.schemes = _parse_schemes(text)
                elif key == "seeds":
                    config.seeds = parse_seed_spec(text)
                else:
                    setattr(config, key, _convert(path, section, key, text,
                                                  _EXPERIMENT_KEYS[key]))
        elif section == "outputs":
            for key, text in parser.items(section):
                if key not in _OUTPUT_KEYS:
                    raise ConfigError(f"[outputs] unknown key {key!r}")
                name = "out_dir" if key == "dir" else key
                setattr(config, name, _convert(path, section, key, text,
                                               _OUTPUT_KEYS[key]))
        else:
            raise ConfigError(f"unknown section [{section}]")

    _validate_ranges(config)
    config.__post_init__()
    return config


def _parse_schemes(text):
    out = []
    for part in text.replace(",", " ").split():
        name = part.strip().upper()
        if name not in SCHEMES:
            raise ConfigError(f"unknown scheme {part!r}; choose from "
                              f"{', '.join(SCHEMES)}")
        if name not in out:
            out.append(name)
    if not out:
        raise ConfigError("schemes list is empty")
    return tuple(out)


def _validate_ranges(config):
    sc = config.scenario
    positives = ("isd_m", "bandwidth_hz", "min_distance_m",
                 "macro_circuit_w", "pico_circuit_w", "macro_kappa",
                 "pico_kappa", "shadowing_std_db")
    for name in positives:
        if getattr(sc, name) <= 0:
            raise ConfigError(f"[scenario] {name} must be positive")
    if sc.macro_sites < 1:
        raise ConfigError("[scenario] macro_sites must be >= 1")
    if sc.picos_per_macro < 0:
        raise ConfigError("[scenario] picos_per_macro must be >= 0")
    if sc.users_per_macro < 1:
        raise ConfigError("[scenario] users_per_macro must be >= 1")
    if config.jobs < 1:
        raise ConfigError("[experiment] jobs must be >= 1")


def _solve_scheme(scheme, scenario, config):
    """Returns (x, p, outer_iters, convergence_rows)."""
    p_max = np.array(scenario.p_max, dtype=np.float64)
    rows = []
    if scheme == "MARA":
        return baselines.mara(scenario, p_max), p_max, 0, rows
    if scheme == "AUF":
        return baselines.auf(scenario, p_max), p_max, 0, rows
    if scheme == "UAMSER":
        result = uamser_solve(scenario, p_max, config.uamser)
        rows = [("UAMSER", "UA", t + 1, value)
                for t, value in enumerate(result.objective_trace)]
        return result.x, p_max, result.iterations, rows
    if scheme == "JUAPCMSER":
        result = juapcmser_solve(scenario, config.joint)
        rows = [("JUAPCMSER", "OL", t + 1, value)
                for t, value in enumerate(result.outer_trace)]
        ua_iter = pc_iter = 0
        for ua in result.association_traces:
            for value in ua.objective_trace:
                ua_iter += 1
                rows.append(("JUAPCMSER", "UA", ua_iter, value))
        for trace in result.inner_traces:
            for _, _, value in trace:
                pc_iter += 1
                rows.append(("JUAPCMSER", "PC", pc_iter, value))
        return result.x, result.p, result.outer_iterations, rows
    raise ConfigError(f"unknown scheme {scheme!r}")


def _run_seed(config, seed):
    """All requested schemes on one seed; returns picklable plain data."""
    scenario = generate_scenario(config.scenario, seed)
    records, samples, macro_samples, conv_rows = [], {}, {}, []
    failures = []
    validation_row = None

    for scheme in config.schemes:
        start = time.perf_counter()
        try:
            x, p, outer_iters, rows = _solve_scheme(scheme, scenario, config)
        except Exception as exc:   # solver hard failure: flush marker row
            failures.append((scheme, seed, repr(exc)))
            continue
        wall_ms = (time.perf_counter() - start) * 1000.0
        report = metrics.summarize(scenario, x, p)
        records.append(RunRecord(
            scheme=scheme, seed=seed, jain=report.jain,
            avg_rate=report.avg_rate, avg_ee=report.avg_ee,
            macro_load=report.tier_loads.get("macro", 0.0),
            pico_load=report.tier_loads.get("pico", 0.0),
            objective=netmodel.sum_effective_rates(scenario, p, x),
            outer_iters=outer_iters, wall_ms=wall_ms))
        samples[scheme] = report.rate_samples
        macro_samples[scheme] = report.macro_rate_samples
        conv_rows.extend((scheme, seed, loop, it, value)
                         for scheme, loop, it, value in rows)

    if config.validate:
        validation_row = _validate_seed(config, scenario, seed)
    return records, samples, macro_samples, conv_rows, failures, \
        validation_row


def _validate_seed(config, scenario, seed):
    p_max = np.array(scenario.p_max, dtype=np.float64)
    try:
        _, best = oracle.brute_force_association(scenario, p_max,
                                                 config.oracle_budget)
    except oracle.OracleBudgetError:
        return None
    result = uamser_solve(scenario, p_max, config.uamser)
    heuristic = netmodel.sum_effective_rates(scenario, p_max, result.x)
    gap_pct = 100.0 * (best - heuristic) / best if best > 0 else 0.0
    return (seed, best, heuristic, gap_pct)


def _fmt(value):
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, float):
        return f"{value:.9g}"
    return str(value)


def _write_csv(path, header, rows):
    with open(path, "w", newline="") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(v) for v in row) + "\n")


def _cdf_rows(samples_by_scheme, schemes):
    pooled = np.concatenate([samples_by_scheme[s] for s in schemes
                             if len(samples_by_scheme[s])])
    grid = np.linspace(0.0, float(pooled.max()), _CDF_POINTS)
    rows = []
    for scheme in schemes:
        if len(samples_by_scheme[scheme]) == 0:
            continue
        for rate, frac in metrics.rate_cdf(samples_by_scheme[scheme], grid):
            rows.append((scheme, rate, frac))
    return rows


def emit_plotdata(records, out_dir, samples=None, macro_samples=None,
                  conv_rows=None, validation_rows=None, flags=None):
    """Write the CSV artifact set; numeric cells carry 9 significant digits
    and rows are sorted so output bytes are reproducible."""
    flags = flags or {}
    os.makedirs(out_dir, exist_ok=True)
    written = []
    schemes = sorted({r.scheme for r in records})

    if flags.get("metrics", True):
        path = os.path.join(out_dir, "metrics.csv")
        rows = [tuple(getattr(r, f) for f in RunRecord.CSV_FIELDS)
                for r in sorted(records, key=lambda r: (r.scheme, r.seed))]
        for scheme in schemes:
            members = [r for r in records if r.scheme == scheme]
            rows.append((scheme, "mean") + tuple(
                float(np.mean([getattr(r, f) for r in members]))
                for f in RunRecord.CSV_FIELDS[2:]))
        _write_csv(path, RunRecord.CSV_FIELDS, rows)
        written.append(path)

        path = os.path.join(out_dir, "tier_loads.csv")
        rows = [(r.scheme, r.seed, r.macro_load, r.pico_load)
                for r in sorted(records, key=lambda r: (r.scheme, r.seed))]
        for scheme in schemes:
            members = [r for r in records if r.scheme == scheme]
            rows.append((scheme, "mean",
                         float(np.mean([r.macro_load for r in members])),
                         float(np.mean([r.pico_load for r in members]))))
        _write_csv(path, ("scheme", "seed", "macro_load", "pico_load"),
                   rows)
        written.append(path)

    if flags.get("cdf", True) and samples:
        for name, pool in (("cdf_all.csv", samples),
                           ("cdf_macro.csv", macro_samples)):
            path = os.path.join(out_dir, name)
            _write_csv(path, ("scheme", "rate", "cdf"),
                       _cdf_rows(pool, schemes))
            written.append(path)

    if flags.get("convergence", True) and conv_rows is not None:
        path = os.path.join(out_dir, "convergence.csv")
        _write_csv(path, ("scheme", "seed", "loop", "iter", "value"),
                   sorted(conv_rows,
                          key=lambda r: (r[0], r[1], r[2], r[3])))
        written.append(path)

    if flags.get("validation", False) and validation_rows is not None:
        path = os.path.join(out_dir, "validation.csv")
        _write_csv(path, ("seed", "oracle_objective", "heuristic_objective",
                          "gap_pct"), sorted(validation_rows))
        written.append(path)

    return written


def run_experiment(config: ExperimentConfig) -> int:
    """Run the (scheme x seed) grid and write the CSV artifacts.

    Exit status: 0 on success, 2 if any solver failed (partial outputs are
    still written, with failure marker rows in metrics.csv).
    """
    all_records, conv_rows, failures, validation_rows = [], [], [], []
    samples = {s: [] for s in config.schemes}
    macro_samples = {s: [] for s in config.schemes}

    if config.jobs > 1:
        with concurrent.futures.ProcessPoolExecutor(config.jobs) as pool:
            results = list(pool.map(_run_seed, [config] * len(config.seeds),
                                    config.seeds))
    else:
        results = [_run_seed(config, seed) for seed in config.seeds]

    for records, seed_samples, seed_macro, rows, fails, vrow in results:
        all_records.extend(records)
        conv_rows.extend(rows)
        failures.extend(fails)
        if vrow is not None:
            validation_rows.append(vrow)
        for scheme, arr in seed_samples.items():
            samples[scheme].append(arr)
        for scheme, arr in seed_macro.items():
            macro_samples[scheme].append(arr)

    pooled = {s: np.concatenate(v) if v else np.array([])
              for s, v in samples.items()}
    pooled_macro = {s: np.concatenate(v) if v else np.array([])
                    for s, v in macro_samples.items()}

    emit_plotdata(
        all_records, config.out_dir, samples=pooled,
        macro_samples=pooled_macro, conv_rows=conv_rows,
        validation_rows=validation_rows if config.validate else None,
        flags={"metrics": config.emit_metrics, "cdf": config.emit_cdf,
               "convergence": config.emit_convergence,
               "validation": config.validate or config.emit_validation})

    if failures:
        path = os.path.join(config.out_dir, "metrics.csv")
        if config.emit_metrics and os.path.exists(path):
            with open(path, "a") as fh:
                for scheme, seed, err in sorted(failures):
                    fh.write(f"# FAILED,{scheme},{seed},{err}\n")
        for scheme, seed, err in failures:
            print(f"solver failure: {scheme} seed {seed}: {err}",
                  file=sys.stderr)
        return 2
    return 0


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="hetnetlb",
        description="Two-tier network association/power-control experiments")
    parser.add_argument("--config", help="experiment config file (INI)")
    parser.add_argument("--out", help="output directory")
    parser.add_argument("--jobs", type=int, help="parallel seed workers")
    parser.add_argument("--seeds", help="seed list, e.g. 0..19 or 1,2,5")
    parser.add_argument("--schemes",
                        help="comma-separated subset of " + ",".join(SCHEMES))
    parser.add_argument("--validate", action="store_true",
                        help="compare against the exhaustive oracle "
                             "(tiny instances only)")
    args = parser.parse_args(argv)

    try:
        config = parse_config(args.config) if args.config \
            else ExperimentConfig()
        if args.out:
            config.out_dir = args.out
        if args.jobs:
            config.jobs = args.jobs
        if args.seeds:
            config.seeds = parse_seed_spec(args.seeds)
        if args.schemes:
            config.schemes = _parse_schemes(args.schemes)
        if args.validate:
            config.validate = True
        _validate_ranges(config)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1

    return run_experiment(config)


if __name__ == "__main__":
    sys.exit(main())
