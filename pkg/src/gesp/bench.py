"""Deterministic Monte Carlo benchmark harness.

A sweep walks a grid of sampling ratios; every trial derives its own RNG
stream from (base_seed, ratio_index, trial_index) via splitmix64, generates
one signal and one measurement set, and feeds the *same* measurements to
every configured algorithm (paired comparison).  Records are sorted by
(ratio_index, trial_index, algorithm order) before writing, so the output
is a pure function of (config, seed) regardless of thread count.

Wall-clock timing is off by default for exactly that reason; set
record_runtime in the config to populate the runtime_ms column (which then
breaks byte-for-byte reproducibility between runs).
"""

from __future__ import annotations

import json
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from statistics import median

import numpy as np

from .baselines import BASELINE_KINDS, diag_two_step_init, esp_init, truncated_power_init
from .measurement import MeasurementSet, measure, sample_sensing
from .numerics import relative_error
from .pursuit import InitEstimate, PStrategy, gesp
from .signals import SignalModelSpec, SparseSignal, generate

SCHEMA_VERSION = 1

CSV_COLUMNS = (
    "signal_model", "algorithm", "strategy", "n", "k", "m", "ratio",
    "trial_index", "seed", "p_used", "relative_error", "raw_error",
    "support_fraction", "runtime_ms", "error_flag",
)

_MASK64 = (1 << 64) - 1


class ConfigError(ValueError):
    """Invalid benchmark configuration (maps to CLI exit code 1)."""


def splitmix64(x: int) -> int:
    """First output of the splitmix64 generator seeded at x."""
    z = (x + 0x9E3779B97F4A7C15) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return (z ^ (z >> 31)) & _MASK64


def trial_seed(base_seed: int, ratio_index: int, trial_index: int) -> int:
    """Per-trial stream seed; indices only, so scheduling cannot matter."""
    h = splitmix64(base_seed & _MASK64)
    h = splitmix64((h + ratio_index) & _MASK64)
    return splitmix64((h + trial_index) & _MASK64)


@dataclass(frozen=True)
class AlgorithmSpec:
    """One configured algorithm: the pursuit with a strategy, or a baseline."""

    name: str                        # gesp | esp | diag_two_step | truncated_power
    strategy: PStrategy | None = None  # gesp only
    tpm_iters: int = 50              # truncated_power only

    def __post_init__(self):
        if self.name == "gesp":
            if self.strategy is None:
                raise ConfigError("gesp algorithm entry needs a strategy")
        elif self.name not in BASELINE_KINDS:
            raise ConfigError(f"unknown algorithm {self.name!r}")

    @property
    def strategy_label(self) -> str:
        return self.strategy.kind if self.name == "gesp" else ""


@dataclass(frozen=True)
class BenchConfig:
    n: int
    k: int
    ratios: tuple[float, ...]
    trials: int
    base_seed: int
    signal: SignalModelSpec
    algorithms: tuple[AlgorithmSpec, ...]
    threads: int = 1
    out_path: str = "results.csv"
    record_runtime: bool = False

    def __post_init__(self):
        if self.trials < 1:
            raise ConfigError("trials must be >= 1")
        if self.threads < 1:
            raise ConfigError("threads must be >= 1")
        if not self.algorithms:
            raise ConfigError("at least one algorithm is required")
        if not self.ratios:
            raise ConfigError("at least one ratio is required")
        for r in self.ratios:
            if not 0.0 < r <= 2.0:
                raise ConfigError(f"ratio {r} outside (0, 2]")
            if round(r * self.n) < 1:
                raise ConfigError(f"ratio {r} resolves to m = 0 at n = {self.n}")

    def resolved_ratios(self) -> list[tuple[float, int]]:
        """(ratio, m) pairs with duplicate m values dropped, order kept."""
        seen, out = set(), []
        for r in self.ratios:
            m = round(r * self.n)
            if m not in seen:
                seen.add(m)
                out.append((r, m))
        return out


@dataclass(frozen=True)
class TrialRecord:
    signal_model: str
    algorithm: str
    strategy: str
    n: int
    k: int
    m: int
    ratio: float
    trial_index: int
    seed: int
    p_used: int
    relative_error: float
    raw_error: float
    support_fraction: float
    runtime_ms: float
    error_flag: int


@dataclass(frozen=True)
class AggregateStats:
    mean_rel_err: float
    median_rel_err: float
    sd_rel_err: float
    mean_support_frac: float
    median_support_frac: float
    sd_support_frac: float
    count: int


def _parse_algorithm(entry) -> AlgorithmSpec:
    if not isinstance(entry, dict) or "algorithm" not in entry:
        raise ConfigError(f"algorithm entry must be an object with an 'algorithm' key: {entry!r}")
    name = entry["algorithm"]
    if name == "gesp":
        kind = entry.get("strategy")
        if kind is None:
            raise ConfigError("gesp algorithm entry needs a 'strategy' key")
        try:
            if kind == "fixed":
                strategy = PStrategy.fixed(int(entry["p"]))
            elif kind == "known_structure":
                strategy = PStrategy.known_structure(entry.get("variant", "global"))
            else:
                strategy = PStrategy(kind=kind)
        except (KeyError, ValueError) as exc:
            raise ConfigError(f"bad gesp strategy entry {entry!r}: {exc}") from exc
        return AlgorithmSpec(name="gesp", strategy=strategy)
    if name == "truncated_power":
        iters = int(entry.get("iters", 50))
        if iters < 1:
            raise ConfigError("truncated_power iters must be >= 1")
        return AlgorithmSpec(name=name, tpm_iters=iters)
    return AlgorithmSpec(name=name)


def load_config(path) -> BenchConfig:
    """Parse and validate a JSON benchmark configuration."""
    try:
        with open(path) as f:
            raw = json.load(f)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
    return config_from_dict(raw)


def config_from_dict(raw: dict) -> BenchConfig:
    if raw.get("schema_version") != SCHEMA_VERSION:
        raise ConfigError(
            f"unsupported schema_version {raw.get('schema_version')!r}; expected {SCHEMA_VERSION}"
        )
    try:
        n = int(raw["n"])
        k = int(raw["k"])
        sig_raw = raw["signal"]
        signal = SignalModelSpec(
            model=sig_raw["model"],
            n=n,
            k=k,
            decay=float(sig_raw.get("decay", 0.7)),
            target_norm=float(sig_raw.get("target_norm", 1.0)),
        )
        return BenchConfig(
            n=n,
            k=k,
            ratios=tuple(float(r) for r in raw["ratios"]),
            trials=int(raw["trials"]),
            base_seed=int(raw["base_seed"]) & _MASK64,
            signal=signal,
            algorithms=tuple(_parse_algorithm(a) for a in raw["algorithms"]),
            threads=int(raw.get("threads", 1)),
            out_path=str(raw.get("out_path", "results.csv")),
            record_runtime=bool(raw.get("record_runtime", False)),
        )
    except KeyError as exc:
        raise ConfigError(f"config is missing required key {exc}") from exc
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"invalid config value: {exc}") from exc


def build_trial_instance(
    config: BenchConfig, ratio_index: int, trial_index: int
) -> tuple[int, SparseSignal, MeasurementSet]:
    """Signal and measurements for one trial, shared by all algorithms."""
    ratio, m = config.resolved_ratios()[ratio_index]
    seed = trial_seed(config.base_seed, ratio_index, trial_index)
    rng = np.random.default_rng(seed)
    sig = generate(config.signal, rng)
    meas = measure(sig, sample_sensing(config.n, m, rng))
    return seed, sig, meas


def run_algorithm(algo: AlgorithmSpec, meas: MeasurementSet, k: int, sig: SparseSignal) -> InitEstimate:
    if algo.name == "gesp":
        profile = sig.profile if algo.strategy.kind == "known_structure" else None
        return gesp(meas, k, algo.strategy, true_profile=profile)
    if algo.name == "esp":
        return esp_init(meas, k)
    if algo.name == "diag_two_step":
        return diag_two_step_init(meas, k)
    return truncated_power_init(meas, k, algo.tpm_iters)


def _run_trial(config: BenchConfig, ratio_index: int, trial_index: int) -> list[TrialRecord]:
    ratio, m = config.resolved_ratios()[ratio_index]
    seed, sig, meas = build_trial_instance(config, ratio_index, trial_index)
    x = sig.vector
    nx = float(np.linalg.norm(x))
    records = []
    for algo in config.algorithms:
        start = time.perf_counter() if config.record_runtime else 0.0
        try:
            est = run_algorithm(algo, meas, config.k, sig)
            runtime_ms = (time.perf_counter() - start) * 1e3 if config.record_runtime else 0.0
            overlap = np.intersect1d(est.support, sig.support).size
            records.append(TrialRecord(
                signal_model=config.signal.model,
                algorithm=algo.name,
                strategy=algo.strategy_label,
                n=config.n, k=config.k, m=m, ratio=ratio,
                trial_index=trial_index, seed=seed,
                p_used=est.p_used,
                relative_error=relative_error(est.z, x),
                raw_error=float(np.linalg.norm(est.z - x)) / nx,
                support_fraction=overlap / config.k,
                runtime_ms=runtime_ms,
                error_flag=0,
            ))
        except Exception:
            runtime_ms = (time.perf_counter() - start) * 1e3 if config.record_runtime else 0.0
            records.append(TrialRecord(
                signal_model=config.signal.model,
                algorithm=algo.name,
                strategy=algo.strategy_label,
                n=config.n, k=config.k, m=m, ratio=ratio,
                trial_index=trial_index, seed=seed,
                p_used=0,
                relative_error=math.nan,
                raw_error=math.nan,
                support_fraction=math.nan,
                runtime_ms=runtime_ms,
                error_flag=1,
            ))
    return records


def run_sweep(config: BenchConfig) -> list[TrialRecord]:
    """All (ratio, trial, algorithm) records in deterministic order."""
    tasks = [
        (ri, ti)
        for ri in range(len(config.resolved_ratios()))
        for ti in range(config.trials)
    ]
    if config.threads == 1:
        chunks = {task: _run_trial(config, *task) for task in tasks}
    else:
        with ThreadPoolExecutor(max_workers=config.threads) as pool:
            futures = {task: pool.submit(_run_trial, config, *task) for task in tasks}
            chunks = {task: fut.result() for task, fut in futures.items()}
    records = []
    for task in tasks:  # (ratio_index, trial_index) order; algorithms in config order
        records.extend(chunks[task])
    return records


def aggregate(records) -> dict[tuple[str, str, float], AggregateStats]:
    """Per-(algorithm, strategy, ratio) statistics over non-error records.

    Standard deviations are population style (a single record gives 0).
    """
    records = list(records)
    if not records:
        raise ValueError("cannot aggregate an empty record list")
    groups: dict[tuple[str, str, float], list[TrialRecord]] = {}
    for rec in records:
        if rec.error_flag:
            continue
        groups.setdefault((rec.algorithm, rec.strategy, rec.ratio), []).append(rec)
    out = {}
    for key, recs in groups.items():
        rel = np.array([r.relative_error for r in recs])
        sup = np.array([r.support_fraction for r in recs])
        out[key] = AggregateStats(
            mean_rel_err=float(rel.mean()),
            median_rel_err=float(median(rel.tolist())),
            sd_rel_err=float(rel.std()),
            mean_support_frac=float(sup.mean()),
            median_support_frac=float(median(sup.tolist())),
            sd_support_frac=float(sup.std()),
            count=len(recs),
        )
    return out


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def write_csv(records, path) -> None:
    """Records CSV with a fixed column order, 17-significant-digit floats,
    and LF newlines."""
    try:
        with open(path, "w", newline="\n") as f:
            f.write(",".join(CSV_COLUMNS) + "\n")
            for rec in records:
                f.write(",".join((
                    rec.signal_model, rec.algorithm, rec.strategy,
                    str(rec.n), str(rec.k), str(rec.m), _fmt(rec.ratio),
                    str(rec.trial_index), str(rec.seed), str(rec.p_used),
                    _fmt(rec.relative_error), _fmt(rec.raw_error),
                    _fmt(rec.support_fraction), _fmt(rec.runtime_ms),
                    str(rec.error_flag),
                )) + "\n")
            f.flush()
    except OSError as exc:
        raise OSError(f"failed writing records to {path}: {exc}") from exc


def write_plot_data(agg: dict[tuple[str, str, float], AggregateStats], path) -> None:
    """Gnuplot-style blocks, one per algorithm: columns are ratio,
    mean relative error, its sd, and mean support fraction; ratios
    ascending; blocks separated by blank lines."""
    blocks: dict[tuple[str, str], list[tuple[float, AggregateStats]]] = {}
    for (algorithm, strategy, ratio), stats in agg.items():
        blocks.setdefault((algorithm, strategy), []).append((ratio, stats))
    try:
        with open(path, "w", newline="\n") as f:
            for bi, ((algorithm, strategy), rows) in enumerate(blocks.items()):
                if bi:
                    f.write("\n")
                label = f"{algorithm} {strategy}".strip()
                f.write(f"# {label}: ratio mean_rel_err sd_rel_err mean_support_frac\n")
                for ratio, stats in sorted(rows, key=lambda item: item[0]):
                    f.write(" ".join((
                        _fmt(ratio), _fmt(stats.mean_rel_err),
                        _fmt(stats.sd_rel_err), _fmt(stats.mean_support_frac),
                    )) + "\n")
    except OSError as exc:
        raise OSError(f"failed writing plot data to {path}: {exc}") from exc
