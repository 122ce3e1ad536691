"""Command-line entry point: config parsing, dispatch, report emission.

Exit codes: 0 when every requested check passes, 1 on usage or
configuration errors (one-line diagnostic naming the offending key),
2 when a statistical verification fails.

All outputs are deterministic functions of (command, settings, seed):
JSON is written with sorted keys and shortest-repr floats, CSV uses
shortest-repr floats, and no report carries wall-clock information, so
output trees are byte-identical across runs and worker counts.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from dataclasses import replace

from . import besov, dyadic, empirical, gaussian, montecarlo
from .errors import AggregationError, BesovEmpiricaError, ParameterError
from .sampling import UNIFORM_STREAM, SeedSpec, sample_uniform

WORKERS_ENV_VAR = "BESOV_EMPIRICA_WORKERS"

#: Gaussian part of the default verification suite.
ROYNETTE_SUITE_LEVEL = 14


class UsageError(BesovEmpiricaError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# ---------------------------------------------------------------------------
# Config handling
# ---------------------------------------------------------------------------

_CONFIG_FIELDS = {
    "process": ("process", str),
    "n": ("n", int),
    "j_max": ("J", int),
    "replicates": ("R", int),
    "p": ("p", float),
    "alpha": ("alpha", float),
    "seed": ("seed", int),
    "sandwich_confidence": ("sandwich_confidence", float),
    "roynette_confidence": ("roynette_confidence", float),
    "roynette_band_halfwidth": ("roynette_band_halfwidth", float),
    "coverage_threshold": ("coverage_threshold", float),
    "coverage_se_multiplier": ("coverage_se_multiplier", float),
    "coverage_max_level": ("coverage_max_level", int),
    "oracle_se_multiplier": ("oracle_se_multiplier", float),
    "concentration_se_multiplier": ("concentration_se_multiplier", float),
    "n_values": ("n_values", tuple),
    "j_min": ("j_min", int),
    "workers": ("workers", int),
    "chunk_size": ("chunk_size", int),
}


def _load_config_file(path) -> dict:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ParameterError("config", f"cannot read config file: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ParameterError("config", f"config file is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise ParameterError("config", "config file must hold a JSON object")
    return data


def _experiment_config(args, defaults: dict | None = None) -> montecarlo.ExperimentConfig:
    """Merge command defaults, config-file settings, and flags (flags win)."""
    settings = dict(defaults or {})
    if getattr(args, "config", None):
        for key, value in _load_config_file(args.config).items():
            if key not in _CONFIG_FIELDS:
                raise ParameterError(key, "unknown configuration key")
            field, caster = _CONFIG_FIELDS[key]
            settings[field] = tuple(value) if caster is tuple else caster(value)
    for flag, field in (
        ("n", "n"),
        ("j_max", "J"),
        ("replicates", "R"),
        ("p", "p"),
        ("alpha", "alpha"),
        ("seed", "seed"),
        ("workers", "workers"),
    ):
        value = getattr(args, flag, None)
        if value is not None:
            settings[field] = value
    if "workers" not in settings:
        env = os.environ.get(WORKERS_ENV_VAR)
        if env is not None:
            try:
                settings["workers"] = int(env)
            except ValueError as exc:
                raise ParameterError(
                    "workers", f"{WORKERS_ENV_VAR} must be an integer (got {env!r})"
                ) from exc
    return montecarlo.ExperimentConfig(**settings)


def _out_dir(args) -> str:
    out = args.out or "reports"
    os.makedirs(out, exist_ok=True)
    return out


def _write_json(path, doc) -> None:
    with open(path, "w") as fh:
        json.dump(doc, fh, sort_keys=True, indent=2)
        fh.write("\n")


def _write_csv(path, header, rows) -> None:
    def cell(value):
        return repr(float(value)) if isinstance(value, float) else value

    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            writer.writerow([cell(v) for v in row])


def read_report_csv(path) -> list:
    """Generic loader for any CSV emitted here: a list of row dicts."""
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


# ---------------------------------------------------------------------------
# Plot-data emission
# ---------------------------------------------------------------------------

PROFILE_HEADER = ["j", "level_statistic", "running_sup", "tail_min"]


def emit_plot_data(obj, path) -> None:
    """Write plot-ready CSV rows for a profile or a report.

    ``tail_min`` in profile rows is the suffix minimum from level j
    upward, so the scalar tail minimum is the value at the tail window
    start.  ``None`` or an empty row list writes the profile header only.
    """
    if obj is None or (isinstance(obj, (list, tuple)) and len(obj) == 0):
        _write_csv(path, PROFILE_HEADER, [])
        return
    if isinstance(obj, besov.LevelProfile):
        rows = [
            [j, float(obj.levels[j]), float(obj.running_sup[j]), float(obj.suffix_min[j])]
            for j in range(len(obj.levels))
        ]
        _write_csv(path, PROFILE_HEADER, rows)
        return
    if isinstance(obj, montecarlo.ConcentrationReport):
        rows = [
            [r["n"], r["j"], r["frequency"], r["bound"], r["se"], r["passed"]]
            for r in obj.rows
        ]
        _write_csv(path, ["n", "j", "frequency", "bound", "se", "pass"], rows)
        return
    if isinstance(obj, montecarlo.SandwichReport):
        header = ["j", "in_band_frequency", "mean_statistic", "sd_statistic"]
        rows = [
            [j, obj.in_band_freq[j], obj.mean_stat[j], obj.sd_stat[j]]
            for j in range(len(obj.in_band_freq))
        ]
        if obj.kind == "roynette":
            header.append("target")
            for row in rows:
                row.append(obj.target)
        _write_csv(path, header, rows)
        return
    if isinstance(obj, montecarlo.MomentReport):
        header = ["j", "k", "mean_alpha", "se_alpha", "mean_g", "se_g", "mean_h", "se_h"]
        rows = []
        for j in sorted(obj.cell_stats):
            stats = obj.cell_stats[j]
            for k0 in range(len(stats["mean_g"])):
                rows.append(
                    [
                        j,
                        k0 + 1,
                        stats["mean_alpha"][k0],
                        stats["se_alpha"][k0],
                        stats["mean_g"][k0],
                        stats["se_g"][k0],
                        stats["mean_h"][k0],
                        stats["se_h"][k0],
                    ]
                )
        _write_csv(path, header, rows)
        return
    raise ParameterError("plot_data", f"no plot emitter for {type(obj).__name__}")


def _emit_moment_levels_csv(report: montecarlo.MomentReport, path) -> None:
    keys = [
        "mean_h_pooled",
        "se_h_pooled",
        "mean_h2_pooled",
        "se_h2_pooled",
        "mean_pair",
        "se_pair",
        "var_g_pooled",
        "se_var_g_pooled",
        "mean_sum_g",
        "se_sum_g",
        "var_sum_g",
        "se_var_sum_g",
    ]
    rows = [
        [j] + [report.level_stats[key][j] for key in keys]
        for j in range(report.config.J + 1)
    ]
    _write_csv(path, ["j"] + keys, rows)


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------


def _cmd_simulate_empirical(args) -> int:
    seed = args.seed if args.seed is not None else 42
    n = args.n if args.n is not None else 100
    j_max = args.j_max if args.j_max is not None else 10
    sample = sample_uniform(n, SeedSpec(seed, 0, UNIFORM_STREAM))
    tri = empirical.empirical_coefficients(sample, j_max, source=args.source)
    sup = empirical.sup_distance(empirical.continuous_ecdf(sample))
    out = args.out or "coeffs.json"
    dyadic.save_triangle_json(
        tri, out, metadata={"n": n, "seed": seed, "source": args.source, "sup_distance": sup}
    )
    print(f"wrote {out}")
    return 0


def _cmd_simulate_bm(args) -> int:
    seed = args.seed if args.seed is not None else 42
    j_max = args.j_max if args.j_max is not None else 10
    path = gaussian.brownian_motion(j_max, SeedSpec(seed, 0))
    if args.bridge:
        path = gaussian.brownian_bridge(path)
    out = args.out or "path.json"
    dyadic.save_path_json(
        path.path,
        out,
        extra={
            "kind": path.kind,
            "seed": seed,
            "triangle": dyadic.triangle_to_dict(path.triangle),
        },
    )
    print(f"wrote {out}")
    return 0


def _cmd_coeffs(args) -> int:
    path_values = dyadic.load_path_json(args.path)
    tri = dyadic.extract_coefficients(path_values)
    out = args.out or "coeffs.json"
    dyadic.save_triangle_json(tri, out, metadata={"source_level": path_values.J})
    print(f"wrote {out}")
    return 0


def _cmd_norm(args) -> int:
    tri, _ = dyadic.load_triangle_json(args.coeffs)
    params = besov.BesovParams(
        p=args.p if args.p is not None else 2.0,
        alpha=args.alpha if args.alpha is not None else 0.5,
    )
    value = besov.besov_norm(tri, params)
    if args.profile:
        emit_plot_data(besov.little_o_profile(tri, params), args.profile)
    if args.out:
        _write_json(
            args.out, {"norm": value, "p": params.p, "alpha": params.alpha, "j_max": tri.J}
        )
    print(repr(value))
    return 0


def _run_and_emit(kind: str, cfg: montecarlo.ExperimentConfig, out_dir: str):
    if kind == "moments":
        report = montecarlo.run_moment_experiment(cfg)
        _write_json(os.path.join(out_dir, "moments.json"), report.as_dict())
        emit_plot_data(report, os.path.join(out_dir, "moments_cells.csv"))
        _emit_moment_levels_csv(report, os.path.join(out_dir, "moments_levels.csv"))
    elif kind == "concentration":
        report = montecarlo.run_concentration_experiment(cfg)
        _write_json(os.path.join(out_dir, "concentration.json"), report.as_dict())
        emit_plot_data(report, os.path.join(out_dir, "concentration.csv"))
    elif kind == "sandwich":
        report = montecarlo.run_sandwich_experiment(cfg)
        _write_json(os.path.join(out_dir, "sandwich.json"), report.as_dict())
        emit_plot_data(report, os.path.join(out_dir, "sandwich.csv"))
    elif kind == "roynette":
        report = montecarlo.run_roynette_experiment(cfg)
        _write_json(os.path.join(out_dir, "roynette.json"), report.as_dict())
        emit_plot_data(report, os.path.join(out_dir, "roynette.csv"))
    else:  # pragma: no cover - internal dispatch
        raise ValueError(kind)
    return report


def _cmd_verify(kind: str, args) -> int:
    defaults = {"process": "brownian"} if kind == "roynette" else {}
    cfg = _experiment_config(args, defaults)
    out_dir = _out_dir(args)
    report = _run_and_emit(kind, cfg, out_dir)
    status = "PASS" if report.passed else "FAIL"
    print(f"verify-{kind}: {status}")
    return 0 if report.passed else 2


def _cmd_verify_all(args) -> int:
    cfg = _experiment_config(args)
    out_dir = _out_dir(args)
    results = {}
    for kind in ("moments", "concentration", "sandwich"):
        report = _run_and_emit(kind, replace(cfg, process="empirical-step"), out_dir)
        results[kind] = report.passed
        print(f"verify-{kind}: {'PASS' if report.passed else 'FAIL'}")
    gauss_cfg = replace(
        cfg, process="brownian", J=max(cfg.J, ROYNETTE_SUITE_LEVEL), alpha=0.5
    )
    report = _run_and_emit("roynette", gauss_cfg, out_dir)
    results["roynette"] = report.passed
    print(f"verify-roynette: {'PASS' if report.passed else 'FAIL'}")
    passed = all(results.values())
    _write_json(
        os.path.join(out_dir, "summary.json"),
        {"passed": passed, "components": results, "seed": cfg.seed},
    )
    print(f"verify-all: {'PASS' if passed else 'FAIL'}")
    return 0 if passed else 2


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------


def _add_common_flags(sub, replicates=True):
    sub.add_argument("--seed", type=int, default=None, help="master seed (unsigned 64-bit)")
    sub.add_argument("--n", type=int, default=None, help="sample size")
    sub.add_argument("--j-max", dest="j_max", type=int, default=None, help="max level")
    if replicates:
        sub.add_argument("--replicates", type=int, default=None, help="replicate count")
        sub.add_argument("--p", type=float, default=None, help="integrability exponent")
        sub.add_argument("--alpha", type=float, default=None, help="smoothness parameter")
        sub.add_argument("--config", default=None, help="JSON config file (flags win)")
        sub.add_argument("--workers", type=int, default=None, help="worker process count")
    sub.add_argument("--out", default=None, help="output file or directory")


def build_parser() -> _Parser:
    parser = _Parser(prog="besov-empirica", description=__doc__)
    subs = parser.add_subparsers(dest="command", required=True)

    sub = subs.add_parser("simulate-empirical", help="emit empirical-process coefficients")
    _add_common_flags(sub, replicates=False)
    sub.add_argument("--source", choices=("step", "continuous"), default="step")
    sub.set_defaults(handler=_cmd_simulate_empirical)

    sub = subs.add_parser("simulate-bm", help="emit a Brownian path and its coefficients")
    _add_common_flags(sub, replicates=False)
    sub.add_argument("--bridge", action="store_true", help="tie the path down at 1")
    sub.set_defaults(handler=_cmd_simulate_bm)

    sub = subs.add_parser("coeffs", help="extract coefficients from a stored path")
    sub.add_argument("--path", required=True, help="path JSON produced by simulate-bm")
    sub.add_argument("--out", default=None)
    sub.set_defaults(handler=_cmd_coeffs)

    sub = subs.add_parser("norm", help="sequence-space norm of stored coefficients")
    sub.add_argument("--coeffs", required=True, help="triangle JSON")
    sub.add_argument("--p", type=float, default=None)
    sub.add_argument("--alpha", type=float, default=None)
    sub.add_argument("--profile", default=None, help="write the level profile CSV here")
    sub.add_argument("--out", default=None, help="write a JSON summary here")
    sub.set_defaults(handler=_cmd_norm)

    for kind in ("moments", "concentration", "sandwich", "roynette"):
        sub = subs.add_parser(f"verify-{kind}")
        _add_common_flags(sub)
        sub.set_defaults(handler=lambda args, kind=kind: _cmd_verify(kind, args))

    sub = subs.add_parser("verify-all", help="run the default verification suite")
    _add_common_flags(sub)
    sub.set_defaults(handler=_cmd_verify_all)
    return parser


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    try:
        return args.handler(args)
    except ParameterError as exc:
        print(f"error: {exc.key}: {exc.message}", file=sys.stderr)
        return 1
    except (BesovEmpiricaError, AggregationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
