"""Monte Carlo experiments over replicated processes, with deterministic
chunked aggregation and exact-oracle cross checks.

A replicate is one fresh sample (or synthesized path) and its full
coefficient triangle; replicates are independent work units addressed by
``stream_index``, grouped into fixed-size chunks whose boundaries depend
only on the replicate count.  Partial results are reduced strictly in
chunk order, so the output is bit-identical no matter how many worker
processes ran the chunks or in which order they finished.

For the step empirical process all band and deviation events reduce to
integer comparisons on the per-level score sums (``2*sum_h <= n`` etc.),
so event counts carry no rounding at all.
"""

from __future__ import annotations

import math
import multiprocessing
from dataclasses import dataclass, replace

import numpy as np

from .besov import BesovParams, level_statistic, tail_window_start
from .empirical import (
    empirical_coefficients,
    halfcell_counts,
    signed_sums_by_level,
    step_coefficient_scale,
)
from .errors import AggregationError, ParameterError
from .gaussian import MAX_SYNTH_LEVEL, brownian_bridge, brownian_motion
from .oracle import enumeration_oracle, oracle_applicable
from .sampling import GAUSSIAN_STREAM, UNIFORM_STREAM, SeedSpec, sample_uniform

PROCESSES = ("empirical-step", "empirical-continuous", "brownian", "bridge")

#: Oracle blocks are attached for levels up to this cap when enumerable.
ORACLE_LEVEL_CAP = 3

#: int64 safety for sums of H**2 (worst case n**4 per level).
MAX_MOMENT_SAMPLE = 20_000


@dataclass(frozen=True)
class ExperimentConfig:
    """Settings shared by every experiment runner."""

    process: str = "empirical-step"
    n: int = 100
    J: int = 12
    R: int = 2000
    p: float = 2.0
    alpha: float = 0.5
    seed: int = 42
    sandwich_confidence: float = 0.95
    roynette_confidence: float = 0.99
    roynette_band_halfwidth: float = 0.1
    coverage_threshold: float = 0.99
    coverage_se_multiplier: float = 3.0
    coverage_max_level: int = 8
    oracle_se_multiplier: float = 4.0
    concentration_se_multiplier: float = 3.0
    n_values: tuple = ()
    j_min: int = 0
    workers: int = 1
    chunk_size: int = 100

    def __post_init__(self):
        if self.process not in PROCESSES:
            raise ParameterError("process", f"must be one of {PROCESSES} (got {self.process!r})")
        if self.n < 2:
            raise ParameterError("n", f"must be >= 2 (got {self.n})")
        if self.J < 6:
            raise ParameterError("j_max", f"must be >= 6 (got {self.J})")
        if self.R < 100:
            raise ParameterError("replicates", f"must be >= 100 (got {self.R})")
        if not 0 <= self.seed < (1 << 64):
            raise ParameterError("seed", f"must be an unsigned 64-bit integer (got {self.seed})")
        BesovParams(p=self.p, alpha=self.alpha)
        for key in ("sandwich_confidence", "roynette_confidence"):
            value = getattr(self, key)
            if not 0.0 < value < 1.0:
                raise ParameterError(key, f"must lie in (0, 1) (got {value})")
        if self.roynette_band_halfwidth <= 0.0:
            raise ParameterError("roynette_band_halfwidth", "must be positive")
        if not 0.0 < self.coverage_threshold <= 1.0:
            raise ParameterError("coverage_threshold", "must lie in (0, 1]")
        for key in ("coverage_se_multiplier", "oracle_se_multiplier", "concentration_se_multiplier"):
            if getattr(self, key) <= 0.0:
                raise ParameterError(key, "must be positive")
        if not 0 <= self.j_min <= self.J:
            raise ParameterError("j_min", f"must lie in [0, {self.J}] (got {self.j_min})")
        object.__setattr__(self, "n_values", tuple(int(v) for v in self.n_values))
        for v in self.n_values:
            if v < 2:
                raise ParameterError("n_values", f"sample sizes must be >= 2 (got {v})")
        if self.workers < 1:
            raise ParameterError("workers", f"must be >= 1 (got {self.workers})")
        if self.chunk_size < 1:
            raise ParameterError("chunk_size", f"must be >= 1 (got {self.chunk_size})")

    def as_dict(self) -> dict:
        return {
            "process": self.process,
            "n": self.n,
            "j_max": self.J,
            "replicates": self.R,
            "p": self.p,
            "alpha": self.alpha,
            "seed": self.seed,
            "sandwich_confidence": self.sandwich_confidence,
            "roynette_confidence": self.roynette_confidence,
            "roynette_band_halfwidth": self.roynette_band_halfwidth,
            "coverage_threshold": self.coverage_threshold,
            "coverage_se_multiplier": self.coverage_se_multiplier,
            "coverage_max_level": self.coverage_max_level,
            "oracle_se_multiplier": self.oracle_se_multiplier,
            "concentration_se_multiplier": self.concentration_se_multiplier,
            "n_values": list(self.n_values),
            "j_min": self.j_min,
        }


def chebyshev_deviation_bound(n: int, j: int) -> float:
    """The bound ``4 * (3 - 3/n) / 2**j`` on P(|2**-j sum G - 1| >= 1/2)."""
    return 4.0 * (3.0 - 3.0 / n) / (1 << j)


# ---------------------------------------------------------------------------
# Chunked execution and ordered aggregation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ChunkResult:
    """Partial result covering replicates ``start .. start + count - 1``."""

    start: int
    count: int
    payload: dict


def aggregate(parts, total: int, reducers: dict) -> dict:
    """Reduce chunk partials in replicate-index order.

    ``reducers`` maps payload key to ``"sum"`` (elementwise add) or
    ``"stack"`` (concatenate along axis 0).  The partials must cover
    replicates ``0..total-1`` exactly once.
    """
    ordered = sorted(parts, key=lambda part: part.start)
    expected = 0
    for part in ordered:
        if part.start != expected:
            raise AggregationError(
                f"replicate coverage broken at {expected} (next partial starts at {part.start})"
            )
        expected = part.start + part.count
    if expected != total:
        raise AggregationError(f"partials cover {expected} replicates, expected {total}")

    out = {}
    for key, mode in reducers.items():
        chunks = [part.payload[key] for part in ordered]
        if mode == "sum":
            acc = np.array(chunks[0], copy=True)
            for chunk in chunks[1:]:
                acc += chunk
            out[key] = acc
        elif mode == "stack":
            out[key] = np.concatenate(chunks, axis=0)
        else:
            raise ValueError(f"unknown reducer {mode!r}")
    return out


def _chunk_specs(R: int, chunk_size: int):
    return [(start, min(chunk_size, R - start)) for start in range(0, R, chunk_size)]


def _chunk_entry(name: str, cfg: ExperimentConfig, start: int, count: int) -> ChunkResult:
    return _CHUNK_FUNCTIONS[name](cfg, start, count)


def run_chunked(name: str, cfg: ExperimentConfig) -> list:
    """Run all chunks of an experiment, serially or on a process pool."""
    specs = _chunk_specs(cfg.R, cfg.chunk_size)
    if cfg.workers <= 1:
        return [_CHUNK_FUNCTIONS[name](cfg, start, count) for start, count in specs]
    ctx = multiprocessing.get_context("spawn")
    with ctx.Pool(processes=cfg.workers) as pool:
        return pool.starmap(
            _chunk_entry, [(name, cfg, start, count) for start, count in specs]
        )


# ---------------------------------------------------------------------------
# Chunk kernels
# ---------------------------------------------------------------------------


def _moment_chunk(cfg: ExperimentConfig, start: int, count: int) -> ChunkResult:
    J, n = cfg.J, cfg.n
    ncells = (1 << (J + 1)) - 1
    sum_alpha = np.zeros(ncells)
    sum_g = np.zeros(ncells)
    sum_g2 = np.zeros(ncells)
    sum_h = np.zeros(ncells)
    sum_h2 = np.zeros(ncells)
    sh = np.zeros((count, J + 1), dtype=np.int64)
    sh2 = np.zeros((count, J + 1), dtype=np.int64)
    pair = np.full((count, J + 1), np.nan)
    alpha_scale = [step_coefficient_scale(j, n) for j in range(J + 1)]
    g_scale = [(1 << j) / n for j in range(J + 1)]
    for i in range(count):
        sample = sample_uniform(n, SeedSpec(cfg.seed, start + i, UNIFORM_STREAM))
        sums = signed_sums_by_level(halfcell_counts(sample, J), J)
        for j in range(J + 1):
            s = sums[j]
            h = s * s
            hh = h * h
            lo = (1 << j) - 1
            hi = lo + (1 << j)
            g = h * g_scale[j]
            sum_alpha[lo:hi] += s * alpha_scale[j]
            sum_g[lo:hi] += g
            sum_g2[lo:hi] += g * g
            sum_h[lo:hi] += h
            sum_h2[lo:hi] += hh
            sh[i, j] = h.sum()
            sh2[i, j] = hh.sum()
            k_cells = 1 << j
            if k_cells >= 2:
                pair[i, j] = (int(sh[i, j]) ** 2 - int(sh2[i, j])) / (
                    k_cells * (k_cells - 1)
                )
    payload = {
        "cell_sum_alpha": sum_alpha,
        "cell_sum_g": sum_g,
        "cell_sum_g2": sum_g2,
        "cell_sum_h": sum_h,
        "cell_sum_h2": sum_h2,
        "sum_h": sh,
        "sum_h2": sh2,
        "pair_mean": pair,
    }
    return ChunkResult(start=start, count=count, payload=payload)


_MOMENT_REDUCERS = {
    "cell_sum_alpha": "sum",
    "cell_sum_g": "sum",
    "cell_sum_g2": "sum",
    "cell_sum_h": "sum",
    "cell_sum_h2": "sum",
    "sum_h": "stack",
    "sum_h2": "stack",
    "pair_mean": "stack",
}


def _step_levels_chunk(cfg: ExperimentConfig, start: int, count: int) -> ChunkResult:
    J, n = cfg.J, cfg.n
    sh = np.zeros((count, J + 1), dtype=np.int64)
    for i in range(count):
        sample = sample_uniform(n, SeedSpec(cfg.seed, start + i, UNIFORM_STREAM))
        sums = signed_sums_by_level(halfcell_counts(sample, J), J)
        for j in range(J + 1):
            s = sums[j]
            sh[i, j] = (s * s).sum()
    return ChunkResult(start=start, count=count, payload={"sum_h": sh})


def _continuous_levels_chunk(cfg: ExperimentConfig, start: int, count: int) -> ChunkResult:
    J, n = cfg.J, cfg.n
    stat_sq = np.empty((count, J + 1))
    for i in range(count):
        sample = sample_uniform(n, SeedSpec(cfg.seed, start + i, UNIFORM_STREAM))
        tri = empirical_coefficients(sample, J, source="continuous")
        for j in range(J + 1):
            stat_sq[i, j] = float(np.sum(tri.levels[j] ** 2)) / (1 << j)
    return ChunkResult(start=start, count=count, payload={"stat_sq": stat_sq})


def _roynette_chunk(cfg: ExperimentConfig, start: int, count: int) -> ChunkResult:
    J = cfg.J
    params = BesovParams(p=cfg.p, alpha=cfg.alpha)
    stats = np.empty((count, J + 1))
    for i in range(count):
        seed = SeedSpec(cfg.seed, start + i, GAUSSIAN_STREAM)
        gp = brownian_motion(J + 1, seed)
        if cfg.process == "bridge":
            gp = brownian_bridge(gp)
        for j in range(J + 1):
            stats[i, j] = level_statistic(gp.triangle, j, params)
    return ChunkResult(start=start, count=count, payload={"stat": stats})


_CHUNK_FUNCTIONS = {
    "moment": _moment_chunk,
    "step_levels": _step_levels_chunk,
    "continuous_levels": _continuous_levels_chunk,
    "roynette": _roynette_chunk,
}


# ---------------------------------------------------------------------------
# Reports
# ---------------------------------------------------------------------------


def _mean_se(values: np.ndarray):
    R = len(values)
    mean = float(np.mean(values))
    if R < 2:
        return mean, float("nan")
    return mean, float(np.std(values, ddof=1) / math.sqrt(R))


@dataclass
class MomentReport:
    """Estimated moments with standard errors and oracle cross checks."""

    config: ExperimentConfig
    R: int
    cell_stats: dict
    level_stats: dict
    oracle_blocks: list
    coverage: dict
    nominal_variance_mismatch: bool
    passed: bool

    def as_dict(self) -> dict:
        return {
            "report": "moments",
            "config": self.config.as_dict(),
            "results": {
                "replicates": self.R,
                "cell_stats": self.cell_stats,
                "level_stats": self.level_stats,
                "oracle": self.oracle_blocks,
                "coverage": self.coverage,
                "nominal_variance_mismatch": self.nominal_variance_mismatch,
                "passed": self.passed,
            },
        }


def run_moment_experiment(config: ExperimentConfig) -> MomentReport:
    """Estimate every tracked moment of the step-process coefficients."""
    if config.process != "empirical-step":
        raise ParameterError(
            "process", "moment verification is defined for the empirical-step process"
        )
    if config.n > MAX_MOMENT_SAMPLE:
        raise ParameterError("n", f"moment experiment caps n at {MAX_MOMENT_SAMPLE}")
    parts = run_chunked("moment", config)
    data = aggregate(parts, config.R, _MOMENT_REDUCERS)
    J, n, R = config.J, config.n, config.R

    cell_stats = {}
    for j in range(J + 1):
        lo = (1 << j) - 1
        hi = lo + (1 << j)
        mean_alpha = data["cell_sum_alpha"][lo:hi] / R
        mean_g = data["cell_sum_g"][lo:hi] / R
        var_alpha = np.maximum(data["cell_sum_g"][lo:hi] - R * mean_alpha**2, 0.0) / (R - 1)
        var_g = np.maximum(data["cell_sum_g2"][lo:hi] - R * mean_g**2, 0.0) / (R - 1)
        mean_h = data["cell_sum_h"][lo:hi] / R
        var_h = np.maximum(data["cell_sum_h2"][lo:hi] - R * mean_h**2, 0.0) / (R - 1)
        cell_stats[j] = {
            "mean_alpha": mean_alpha.tolist(),
            "se_alpha": np.sqrt(var_alpha / R).tolist(),
            "mean_g": mean_g.tolist(),
            "se_g": np.sqrt(var_g / R).tolist(),
            "mean_h": mean_h.tolist(),
            "se_h": np.sqrt(var_h / R).tolist(),
        }

    level_stats = {
        "mean_h_pooled": [],
        "se_h_pooled": [],
        "mean_h2_pooled": [],
        "se_h2_pooled": [],
        "mean_pair": [],
        "se_pair": [],
        "var_g_pooled": [],
        "se_var_g_pooled": [],
        "mean_sum_g": [],
        "se_sum_g": [],
        "var_sum_g": [],
        "se_var_sum_g": [],
    }
    for j in range(J + 1):
        k_cells = 1 << j
        a = data["sum_h2"][:, j] / k_cells  # per-replicate mean of H**2
        b = data["sum_h"][:, j] / k_cells  # per-replicate mean of H
        mh, se_mh = _mean_se(b)
        mh2, se_mh2 = _mean_se(a)
        level_stats["mean_h_pooled"].append(mh)
        level_stats["se_h_pooled"].append(se_mh)
        level_stats["mean_h2_pooled"].append(mh2)
        level_stats["se_h2_pooled"].append(se_mh2)
        if k_cells >= 2:
            mp, se_mp = _mean_se(data["pair_mean"][:, j])
        else:
            mp, se_mp = float("nan"), float("nan")
        level_stats["mean_pair"].append(mp)
        level_stats["se_pair"].append(se_mp)
        # Var(G) via the plug-in E[H^2] - E[H]^2, delta-method standard error.
        g_scale_sq = ((1 << j) / n) ** 2
        var_h_pooled = mh2 - mh**2
        influence = (a - mh2) - 2.0 * mh * (b - mh)
        se_var_h = float(np.std(influence, ddof=1) / math.sqrt(R))
        level_stats["var_g_pooled"].append(g_scale_sq * var_h_pooled)
        level_stats["se_var_g_pooled"].append(g_scale_sq * se_var_h)
        t = ((1 << j) / n) * data["sum_h"][:, j]
        mt, se_mt = _mean_se(t)
        level_stats["mean_sum_g"].append(mt)
        level_stats["se_sum_g"].append(se_mt)
        vt = float(np.var(t, ddof=1))
        se_vt = float(np.std((t - mt) ** 2, ddof=1) / math.sqrt(R))
        level_stats["var_sum_g"].append(vt)
        level_stats["se_var_sum_g"].append(se_vt)

    oracle_blocks = []
    mismatch = False
    oracle_ok = True
    for j in range(min(J, ORACLE_LEVEL_CAP) + 1):
        if not oracle_applicable(n, j):
            continue
        om = enumeration_oracle(n, j)
        comparisons = []

        def compare(name, estimate, se, exact):
            nonlocal oracle_ok
            within = abs(estimate - float(exact)) <= config.oracle_se_multiplier * se
            oracle_ok = oracle_ok and within
            comparisons.append(
                {
                    "moment": name,
                    "estimate": estimate,
                    "se": se,
                    "oracle": float(exact),
                    "oracle_fraction": str(exact),
                    "within": within,
                }
            )

        compare("e_h", level_stats["mean_h_pooled"][j], level_stats["se_h_pooled"][j], om.e_h)
        compare("e_h2", level_stats["mean_h2_pooled"][j], level_stats["se_h2_pooled"][j], om.e_h2)
        compare("var_g", level_stats["var_g_pooled"][j], level_stats["se_var_g_pooled"][j], om.var_g)
        if om.e_hh is not None:
            compare("e_hh", level_stats["mean_pair"][j], level_stats["se_pair"][j], om.e_hh)
        compare("var_sum_g", level_stats["var_sum_g"][j], level_stats["se_var_sum_g"][j], om.var_sum_g)
        mismatch = mismatch or not om.var_sum_g_matches_nominal
        block = om.as_dict()
        block["comparisons"] = comparisons
        oracle_blocks.append(block)

    max_level = min(config.coverage_max_level, J)
    hits = 0
    total = 0
    for j in range(max_level + 1):
        mean_g = np.asarray(cell_stats[j]["mean_g"])
        se_g = np.asarray(cell_stats[j]["se_g"])
        hits += int(np.sum(np.abs(mean_g - 1.0) <= config.coverage_se_multiplier * se_g))
        total += len(mean_g)
    coverage = {
        "fraction": hits / total,
        "hits": hits,
        "cells": total,
        "max_level": max_level,
        "se_multiplier": config.coverage_se_multiplier,
        "threshold": config.coverage_threshold,
    }
    passed = coverage["fraction"] >= config.coverage_threshold and oracle_ok
    return MomentReport(
        config=config,
        R=R,
        cell_stats=cell_stats,
        level_stats=level_stats,
        oracle_blocks=oracle_blocks,
        coverage=coverage,
        nominal_variance_mismatch=mismatch,
        passed=passed,
    )


@dataclass
class ConcentrationReport:
    """Per-(n, j) deviation frequencies against the ``4 * eps`` bound."""

    config: ExperimentConfig
    R: int
    rows: list
    passed: bool

    def as_dict(self) -> dict:
        return {
            "report": "concentration",
            "config": self.config.as_dict(),
            "results": {"replicates": self.R, "rows": self.rows, "passed": self.passed},
        }


def _level_event_matrix(cfg: ExperimentConfig):
    """Per-replicate squared level statistic and exact event matrices."""
    if cfg.process == "empirical-step":
        parts = run_chunked("step_levels", cfg)
        sh = aggregate(parts, cfg.R, {"sum_h": "stack"})["sum_h"]
        stat_sq = sh / cfg.n
        deviated = (2 * sh <= cfg.n) | (2 * sh >= 3 * cfg.n)
        in_band = (2 * sh >= cfg.n) & (2 * sh <= 3 * cfg.n)
    elif cfg.process == "empirical-continuous":
        parts = run_chunked("continuous_levels", cfg)
        stat_sq = aggregate(parts, cfg.R, {"stat_sq": "stack"})["stat_sq"]
        deviated = np.abs(stat_sq - 1.0) >= 0.5
        in_band = (stat_sq >= 0.5) & (stat_sq <= 1.5)
    else:
        raise ParameterError("process", "this experiment needs an empirical process")
    return stat_sq, deviated, in_band


def run_concentration_experiment(config: ExperimentConfig) -> ConcentrationReport:
    """Check P(|2**-j sum_k G_jk - 1| >= 1/2) against ``4 * (3 - 3/n)/2**j``.

    Covers every sample size in ``config.n_values`` (falling back to
    ``config.n``) and levels ``j_min..J``; a cell passes when its observed
    frequency does not exceed the bound plus the configured multiple of
    the binomial standard error.
    """
    n_list = config.n_values or (config.n,)
    rows = []
    passed = True
    for n in n_list:
        cfg_n = replace(config, n=n, n_values=())
        _, deviated, _ = _level_event_matrix(cfg_n)
        for j in range(config.j_min, config.J + 1):
            freq = float(np.mean(deviated[:, j]))
            bound = chebyshev_deviation_bound(n, j)
            se = math.sqrt(freq * (1.0 - freq) / config.R)
            ok = freq <= bound + config.concentration_se_multiplier * se
            passed = passed and ok
            rows.append(
                {"n": n, "j": j, "frequency": freq, "bound": bound, "se": se, "passed": ok}
            )
    return ConcentrationReport(config=config, R=config.R, rows=rows, passed=passed)


@dataclass
class SandwichReport:
    """Band frequencies plus per-replicate sup and tail-min statistics."""

    kind: str
    config: ExperimentConfig
    R: int
    statistic: str
    band_lo: float
    band_hi: float
    target: float | None
    in_band_freq: list
    mean_stat: list
    sd_stat: list
    sup_stat: np.ndarray
    tail_min_stat: np.ndarray
    sup_stat_sq: np.ndarray
    tail_min_stat_sq: np.ndarray
    tail_start: int
    confidence: float
    passed: bool

    def results_dict(self) -> dict:
        return {
            "replicates": self.R,
            "statistic": self.statistic,
            "band": [self.band_lo, self.band_hi],
            "target": self.target,
            "in_band_frequency": self.in_band_freq,
            "mean_statistic": self.mean_stat,
            "sd_statistic": self.sd_stat,
            "per_replicate": {
                "sup_stat": [float(x) for x in self.sup_stat],
                "tail_min_stat": [float(x) for x in self.tail_min_stat],
                "sup_stat_sq": [float(x) for x in self.sup_stat_sq],
                "tail_min_stat_sq": [float(x) for x in self.tail_min_stat_sq],
            },
            "tail_start": self.tail_start,
            "confidence": self.confidence,
            "passed": self.passed,
        }

    def as_dict(self) -> dict:
        return {
            "report": self.kind,
            "config": self.config.as_dict(),
            "results": self.results_dict(),
        }


def run_sandwich_experiment(config: ExperimentConfig) -> SandwichReport:
    """Frequencies of ``1/2 <= 2**-j sum_k |c_jk|**2 <= 3/2`` per level.

    Passes when the in-band frequency at the top three levels reaches
    ``sandwich_confidence``.  Per-replicate sup and tail-min summaries of
    the (unsquared) level statistic back the finite-norm and
    nonvanishing-tail surrogates.
    """
    if config.J < 10:
        raise ParameterError("j_max", f"sandwich verification needs j_max >= 10 (got {config.J})")
    stat_sq, _, in_band = _level_event_matrix(config)
    stat = np.sqrt(stat_sq)
    tail_start = tail_window_start(config.J)
    freq = [float(np.mean(in_band[:, j])) for j in range(config.J + 1)]
    top = freq[config.J - 2 : config.J + 1]
    passed = all(f >= config.sandwich_confidence for f in top)
    return SandwichReport(
        kind="sandwich",
        config=config,
        R=config.R,
        statistic="squared_level",
        band_lo=0.5,
        band_hi=1.5,
        target=None,
        in_band_freq=freq,
        mean_stat=[float(np.mean(stat[:, j])) for j in range(config.J + 1)],
        sd_stat=[float(np.std(stat[:, j], ddof=1)) for j in range(config.J + 1)],
        sup_stat=stat.max(axis=1),
        tail_min_stat=stat[:, tail_start:].min(axis=1),
        sup_stat_sq=stat_sq.max(axis=1),
        tail_min_stat_sq=stat_sq[:, tail_start:].min(axis=1),
        tail_start=tail_start,
        confidence=config.sandwich_confidence,
        passed=passed,
    )


def absolute_moment_target(p: float) -> float:
    """``(E |N(0,1)|**p) ** (1/p)``: the level-statistic limit for Gaussians."""
    log_moment = 0.5 * p * math.log(2.0) + math.lgamma((p + 1.0) / 2.0) - 0.5 * math.log(math.pi)
    return math.exp(log_moment / p)


def run_roynette_experiment(config: ExperimentConfig) -> SandwichReport:
    """Level statistics ``(2**-j sum |g_jk|**p) ** (1/p)`` of Gaussian paths.

    The statistic concentrates at ``(E |N(0,1)|**p) ** (1/p)``; the report
    tracks the frequency inside ``target +- roynette_band_halfwidth`` per
    level and passes when the top level reaches ``roynette_confidence``.
    Bridge and motion share coefficient triangles, so their reports carry
    identical results for equal seeds.
    """
    if config.process not in ("brownian", "bridge"):
        raise ParameterError("process", "this experiment needs a Gaussian process")
    if config.alpha != 0.5:
        raise ParameterError(
            "alpha", "the Gaussian level statistic uses the alpha = 1/2 weighting"
        )
    if config.J + 1 > MAX_SYNTH_LEVEL:
        raise ParameterError(
            "j_max", f"Gaussian synthesis caps the coefficient level at {MAX_SYNTH_LEVEL - 1}"
        )
    parts = run_chunked("roynette", config)
    stat = aggregate(parts, config.R, {"stat": "stack"})["stat"]
    target = absolute_moment_target(config.p)
    lo = target - config.roynette_band_halfwidth
    hi = target + config.roynette_band_halfwidth
    in_band = (stat >= lo) & (stat <= hi)
    freq = [float(np.mean(in_band[:, j])) for j in range(config.J + 1)]
    tail_start = tail_window_start(config.J)
    stat_sq = stat**2
    passed = freq[config.J] >= config.roynette_confidence
    return SandwichReport(
        kind="roynette",
        config=config,
        R=config.R,
        statistic="level",
        band_lo=lo,
        band_hi=hi,
        target=target,
        in_band_freq=freq,
        mean_stat=[float(np.mean(stat[:, j])) for j in range(config.J + 1)],
        sd_stat=[float(np.std(stat[:, j], ddof=1)) for j in range(config.J + 1)],
        sup_stat=stat.max(axis=1),
        tail_min_stat=stat[:, tail_start:].min(axis=1),
        sup_stat_sq=stat_sq.max(axis=1),
        tail_min_stat_sq=stat_sq[:, tail_start:].min(axis=1),
        tail_start=tail_start,
        confidence=config.roynette_confidence,
        passed=passed,
    )
