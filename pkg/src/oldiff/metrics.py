"""Outcome metrics per run and their aggregation across replications.

Three outcomes per run: final adoption percentage, mean step of first
awareness (information diffusion speed) and mean step of adoption
(product diffusion speed). Lower speed values mean faster diffusion.
Undefined speeds (nobody aware / no adopters) are kept as None and
excluded from aggregation with an explicit exclusion count.
"""

import json
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy import stats

from .engine import RunResult

METRIC_NAMES = ("adoption_percentage", "info_speed", "product_speed")


@dataclass(frozen=True)
class RunMetrics:
    adoption_percentage: float
    info_speed: Optional[float]
    product_speed: Optional[float]


@dataclass(frozen=True)
class MetricSummary:
    mean: Optional[float]
    sd: Optional[float]  # sample standard deviation (n-1); None below 2 values
    n: int  # values aggregated
    excluded: int  # runs dropped because the metric was undefined


@dataclass(frozen=True)
class ExperimentSummary:
    label: str
    replications: int
    metrics: dict  # metric name -> MetricSummary


@dataclass(frozen=True)
class ComparisonResult:
    metric: str
    direction: str  # "a_higher" or "a_lower"
    mean_a: float
    mean_b: float
    mean_diff: float  # mean_a - mean_b
    effect_size: float  # Cohen's d with pooled standard deviation
    p_value: float  # one-sided Welch p for the stated direction
    alpha: float
    supported: bool


def compute_metrics(result: RunResult) -> RunMetrics:
    aware_steps = [s for s in result.aware_step if s is not None]
    adopt_steps = [s for s in result.adopt_step if s is not None]
    adoption = result.adopted_series[-1] / result.n if result.adopted_series else 0.0
    return RunMetrics(
        adoption_percentage=adoption,
        info_speed=float(np.mean(aware_steps)) if aware_steps else None,
        product_speed=float(np.mean(adopt_steps)) if adopt_steps else None,
    )


def aggregate(runs: list, label: str = "") -> ExperimentSummary:
    """Sample mean and standard deviation per metric across replications."""
    if not runs:
        raise ValueError("aggregate requires at least one run")
    summaries = {}
    for name in METRIC_NAMES:
        values = [getattr(r, name) for r in runs if getattr(r, name) is not None]
        mean = float(np.mean(values)) if values else None
        sd = float(np.std(values, ddof=1)) if len(values) >= 2 else None
        summaries[name] = MetricSummary(
            mean=mean, sd=sd, n=len(values), excluded=len(runs) - len(values)
        )
    return ExperimentSummary(label=label, replications=len(runs), metrics=summaries)


def compare(
    summary_a: ExperimentSummary,
    summary_b: ExperimentSummary,
    metric: str,
    direction: str = "a_higher",
    alpha: float = 0.05,
) -> ComparisonResult:
    """Directional Welch comparison of one metric between two experiments."""
    if direction not in ("a_higher", "a_lower"):
        raise ValueError(f"unknown direction {direction!r}")
    ma = summary_a.metrics[metric]
    mb = summary_b.metrics[metric]
    if ma.mean is None or mb.mean is None:
        raise ValueError(f"metric {metric} undefined on one side; comparison unavailable")
    if ma.n < 2 or mb.n < 2 or ma.sd is None or mb.sd is None:
        raise ValueError("comparison needs at least two defined values per side")
    diff = ma.mean - mb.mean
    right_way = diff > 0 if direction == "a_higher" else diff < 0
    if ma.sd == 0.0 and mb.sd == 0.0:
        p_two = 0.0 if diff != 0.0 else 1.0
    else:
        _, p_two = stats.ttest_ind_from_stats(
            ma.mean, ma.sd, ma.n, mb.mean, mb.sd, mb.n, equal_var=False
        )
    p_one = p_two / 2.0 if right_way else 1.0 - p_two / 2.0
    pooled_var = ((ma.n - 1) * ma.sd**2 + (mb.n - 1) * mb.sd**2) / (ma.n + mb.n - 2)
    pooled_sd = math.sqrt(pooled_var)
    if pooled_sd > 0.0:
        effect = diff / pooled_sd
    else:
        effect = 0.0 if diff == 0.0 else math.copysign(math.inf, diff)
    return ComparisonResult(
        metric=metric,
        direction=direction,
        mean_a=ma.mean,
        mean_b=mb.mean,
        mean_diff=diff,
        effect_size=effect,
        p_value=float(p_one),
        alpha=alpha,
        supported=bool(right_way and p_one < alpha),
    )


def summaries_to_dict(summaries: list) -> dict:
    """JSON-ready {label: {metric: {mean, sd, n, excluded}}} mapping."""
    out = {}
    for summary in summaries:
        out[summary.label] = {
            name: {"mean": ms.mean, "sd": ms.sd, "n": ms.n, "excluded": ms.excluded}
            for name, ms in summary.metrics.items()
        }
    return out


def write_summary_json(summaries: list, stream) -> None:
    json.dump(summaries_to_dict(summaries), stream, indent=2)
    stream.write("\n")
