"""Monte-Carlo estimators for chaos, instability, coalescence and decoherence."""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from datetime import UTC, datetime
from enum import StrEnum
from fractions import Fraction
import math
from typing import TYPE_CHECKING, Any

import pandas as pd
from pydantic import BaseModel, ConfigDict, Field, computed_field

from coopnet.analysis.attractors import AttractorInfo, default_step_budget, find_attractor
from coopnet.analysis.joint import joint_cycle_analysis
from coopnet.analysis.sampling import FlipDirection, FlipPairs, UniformStates, sample_rng
from coopnet.errors import BudgetExceededError, DomainError
from coopnet.log import get_logger
from coopnet.netcore.state import State
from coopnet.utils import as_fraction, ceil_fraction, floor_power


if TYPE_CHECKING:
    import os
    from pathlib import Path

    from coopnet.analysis.sampling import PairSampler, StateSampler
    from coopnet.netcore.network import BooleanNetwork


logger = get_logger("analysis.metrics")

WILSON_Z = 1.959963984540054
CSV_COLUMNS = (
    "seed",
    "sample_index",
    "init_state_hex",
    "flipped_bit",
    "transient_a",
    "period_a",
    "transient_b",
    "period_b",
    "coalesced",
    "coalescence_time",
    "max_hamming",
    "frac_ge_threshold",
    "verdict",
)


class Metric(StrEnum):
    CHAOS = "chaos"
    INSTABILITY = "instability"
    COALESCENCE = "coalescence"
    DECOHERENCE = "decoherence"
    ALPHA_Q_DECOHERENCE = "alpha-q-decoherence"


class Verdict(StrEnum):
    SUCCESS = "success"
    FAILURE = "failure"
    INCONCLUSIVE = "inconclusive"


@dataclass
class SampleRecord:
    """Everything observed for one sample; one CSV row."""

    seed: int
    sample_index: int
    init_state_hex: str
    flipped_bit: int | None = None
    transient_a: int | None = None
    period_a: int | None = None
    transient_b: int | None = None
    period_b: int | None = None
    coalesced: bool | None = None
    coalescence_time: int | None = None
    max_hamming: int | None = None
    frac_ge_threshold: Fraction | None = None
    verdict: Verdict = Verdict.INCONCLUSIVE

    @property
    def success(self) -> bool:
        return self.verdict is Verdict.SUCCESS


def wilson_interval(successes: int, samples: int, z: float = WILSON_Z) -> tuple[float, float]:
    """Wilson score interval for a binomial proportion."""
    if samples == 0:
        return 0.0, 1.0
    phat = successes / samples
    denom = 1 + z * z / samples
    centre = (phat + z * z / (2 * samples)) / denom
    half = z * math.sqrt(phat * (1 - phat) / samples + z * z / (4 * samples * samples)) / denom
    return max(0.0, centre - half), min(1.0, centre + half)


class MetricReport(BaseModel):
    """Outcome of one estimator run."""

    model_config = ConfigDict(use_attribute_docstrings=True)

    metric: str
    """Metric name."""

    samples: int
    """Samples drawn, inconclusive ones included."""

    successes: int
    """Samples satisfying the metric's event."""

    inconclusive: int = 0
    """Samples whose step budget ran out; never counted as successes."""

    seed: int
    """Seed of the per-sample PRNG streams."""

    params: dict[str, float | int | str] = Field(default_factory=dict)
    """Metric parameters (c, alpha, q, D, ...)."""

    records: list[Any] = Field(default_factory=list, exclude=True, repr=False)
    """Per-sample records, kept out of serialised summaries."""

    @property
    def estimate(self) -> Fraction:
        return Fraction(self.successes, self.samples) if self.samples else Fraction(0)

    @computed_field  # type: ignore[prop-decorator]
    @property
    def estimate_value(self) -> float:
        return float(self.estimate)

    @computed_field  # type: ignore[prop-decorator]
    @property
    def estimate_exact(self) -> str:
        return str(self.estimate)

    @computed_field  # type: ignore[prop-decorator]
    @property
    def confidence_interval(self) -> tuple[float, float]:
        """95% Wilson interval of the estimate."""
        return wilson_interval(self.successes, self.samples)

    @property
    def inconclusive_rate(self) -> float:
        return self.inconclusive / self.samples if self.samples else 0.0

    @classmethod
    def from_records(
        cls,
        metric: Metric,
        records: list[SampleRecord],
        seed: int,
        params: dict[str, Any],
    ) -> MetricReport:
        successes = sum(1 for r in records if r.verdict is Verdict.SUCCESS)
        inconclusive = sum(1 for r in records if r.verdict is Verdict.INCONCLUSIVE)
        return cls(
            metric=str(metric),
            samples=len(records),
            successes=successes,
            inconclusive=inconclusive,
            seed=seed,
            params=params,
            records=records,
        )


class MetricSummary(BaseModel):
    """Summary document of one analysis run: configuration header plus report."""

    model_config = ConfigDict(use_attribute_docstrings=True)

    created: datetime = Field(default_factory=lambda: datetime.now(UTC))
    """Creation time (UTC)."""

    config: list[dict[str, Any]] = Field(default_factory=list)
    """Every configuration field with value, description and default status."""

    report: MetricReport
    """Estimator outcome."""

    max_inconclusive: float = 0.01
    """Largest tolerated share of budget-exhausted samples."""

    @computed_field  # type: ignore[prop-decorator]
    @property
    def budget_warning(self) -> bool:
        """Whether the share of inconclusive samples exceeds ``max_inconclusive``."""
        return self.report.inconclusive_rate > self.max_inconclusive


def _verdict(success: bool) -> Verdict:
    return Verdict.SUCCESS if success else Verdict.FAILURE


@dataclass(frozen=True)
class MetricTask:
    """Picklable description of how to evaluate any single sample."""

    net: BooleanNetwork
    metric: Metric
    seed: int
    budget: int
    state_sampler: StateSampler
    pair_sampler: PairSampler
    threshold: int = 0
    """Period threshold (chaos) or Hamming threshold (decoherence metrics)."""

    q: Fraction = field(default=Fraction(0))

    def run(self, index: int) -> SampleRecord:
        rng = sample_rng(self.seed, index)
        if self.metric is Metric.CHAOS:
            s = self.state_sampler(rng)
            record = SampleRecord(self.seed, index, State(s, self.net.n).to_hex())
            try:
                info = find_attractor(self.net, State(s, self.net.n), self.budget)
            except BudgetExceededError:
                return record
            record.transient_a, record.period_a = info.transient, info.period
            record.verdict = _verdict(info.period > self.threshold)
            return record

        s, bit, s_star = self.pair_sampler(rng)
        record = SampleRecord(self.seed, index, State(s, self.net.n).to_hex(), flipped_bit=bit)
        try:
            if self.metric is Metric.INSTABILITY:
                self._attractors(record, s, s_star)
            else:
                self._joint(record, s, s_star)
        except BudgetExceededError:
            logger.debug("Sample %d of seed %d exhausted its budget", index, self.seed)
            record.verdict = Verdict.INCONCLUSIVE
        return record

    def _attractors(self, record: SampleRecord, s: int, s_star: int) -> None:
        n = self.net.n
        a: AttractorInfo = find_attractor(self.net, State(s, n), self.budget)
        record.transient_a, record.period_a = a.transient, a.period
        b = find_attractor(self.net, State(s_star, n), self.budget)
        record.transient_b, record.period_b = b.transient, b.period
        record.verdict = _verdict(a.canonical_id != b.canonical_id)

    def _joint(self, record: SampleRecord, s: int, s_star: int) -> None:
        n = self.net.n
        report = joint_cycle_analysis(self.net, State(s, n), State(s_star, n), self.budget)
        record.coalesced = report.coalesced
        record.coalescence_time = report.coalescence_time
        record.max_hamming = report.max_hamming_on_cycle
        record.frac_ge_threshold = report.frac_hamming_ge(self.threshold)
        match self.metric:
            case Metric.COALESCENCE:
                success = report.coalesced
            case Metric.DECOHERENCE:
                success = report.max_hamming_on_cycle >= self.threshold
            case _:
                success = record.frac_ge_threshold >= self.q
        record.verdict = _verdict(success)

    def run_range(self, start: int, stop: int) -> list[SampleRecord]:
        return [self.run(index) for index in range(start, stop)]


def collect_samples(task: MetricTask, samples: int, workers: int = 1) -> list[SampleRecord]:
    """Evaluate samples ``0..samples-1``, ordered by index for any worker count."""
    if samples < 1:
        msg = f"samples must be at least 1, got {samples}"
        raise DomainError(msg)
    if workers <= 1 or samples < 2 * workers:
        return task.run_range(0, samples)
    bounds = [samples * k // workers for k in range(workers + 1)]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        parts = pool.map(task.run_range, bounds[:-1], bounds[1:])
        return [record for part in parts for record in part]


def _run(
    net: BooleanNetwork,
    metric: Metric,
    samples: int,
    seed: int,
    params: dict[str, Any],
    *,
    sampler: StateSampler | None = None,
    pair_sampler: PairSampler | None = None,
    direction: FlipDirection = FlipDirection.TOGGLE,
    threshold: int = 0,
    q: Fraction = Fraction(0),
    budget: int | None = None,
    workers: int = 1,
) -> MetricReport:
    task = MetricTask(
        net=net,
        metric=metric,
        seed=seed,
        budget=default_step_budget() if budget is None else budget,
        state_sampler=sampler or UniformStates(net.n),
        pair_sampler=pair_sampler or FlipPairs(net.n, direction),
        threshold=threshold,
        q=q,
    )
    records = collect_samples(task, samples, workers)
    report = MetricReport.from_records(metric, records, seed, params)
    if report.inconclusive:
        logger.warning(
            "%s: %d of %d samples exhausted the step budget",
            metric,
            report.inconclusive,
            report.samples,
        )
    logger.debug("%s estimate %s over %d samples", metric, report.estimate, samples)
    return report


def estimate_p_c_chaos(
    net: BooleanNetwork,
    c: float | Fraction,
    samples: int,
    seed: int,
    **options: Any,
) -> MetricReport:
    """Fraction of initial states whose attractor is longer than ``c^n``.

    The comparison ``period > c^n`` is done as ``period > floor(c^n)`` with
    ``c`` taken as an exact rational.
    """
    c_exact = as_fraction(c)
    if c_exact <= 1:
        msg = f"c must exceed 1, got {c}"
        raise DomainError(msg)
    threshold = floor_power(c_exact, net.n)
    params = {"c": float(c_exact), "period_threshold": str(threshold)}
    return _run(net, Metric.CHAOS, samples, seed, params, threshold=threshold, **options)


def estimate_instability(
    net: BooleanNetwork,
    samples: int,
    seed: int,
    **options: Any,
) -> MetricReport:
    """Fraction of single-bit flips that change the attractor reached."""
    direction = options.get("direction", FlipDirection.TOGGLE)
    params = {"direction": str(direction)}
    return _run(net, Metric.INSTABILITY, samples, seed, params, **options)


def estimate_coalescence(
    net: BooleanNetwork,
    samples: int,
    seed: int,
    **options: Any,
) -> MetricReport:
    """Fraction of single-bit flips whose two trajectories eventually coincide.

    Draws exactly the same pairs as :func:`estimate_instability` for equal
    seeds and samplers.
    """
    direction = options.get("direction", FlipDirection.TOGGLE)
    params = {"direction": str(direction)}
    return _run(net, Metric.COALESCENCE, samples, seed, params, **options)


def estimate_decoherence(
    net: BooleanNetwork,
    d: int,
    samples: int,
    seed: int,
    **options: Any,
) -> MetricReport:
    """Fraction of flips after which the Hamming distance reaches ``d`` infinitely often."""
    if not 0 < d <= net.n:
        msg = f"D must lie in 1..{net.n}, got {d}"
        raise DomainError(msg)
    params = {"D": d}
    return _run(net, Metric.DECOHERENCE, samples, seed, params, threshold=d, **options)


def estimate_alpha_q_decoherence(
    net: BooleanNetwork,
    alpha: float | Fraction,
    q: float | Fraction,
    samples: int,
    seed: int,
    **options: Any,
) -> MetricReport:
    """Fraction of flips whose long-run share of times with distance ``>= ceil(alpha n)`` is ``>= q``."""  # noqa: E501
    alpha_exact, q_exact = as_fraction(alpha), as_fraction(q)
    if not 0 < alpha_exact <= 1 or not 0 < q_exact <= 1:
        msg = f"alpha and q must lie in (0, 1], got alpha={alpha}, q={q}"
        raise DomainError(msg)
    threshold = ceil_fraction(alpha_exact * net.n)
    params = {"alpha": float(alpha_exact), "q": float(q_exact), "distance_threshold": threshold}
    return _run(
        net,
        Metric.ALPHA_Q_DECOHERENCE,
        samples,
        seed,
        params,
        threshold=threshold,
        q=q_exact,
        **options,
    )


def sample_log_frame(records: list[SampleRecord]) -> pd.DataFrame:
    """Sample records as a frame with nullable integer columns."""

    def ints(name: str) -> pd.arrays.IntegerArray:
        return pd.array([getattr(r, name) for r in records], dtype="Int64")

    return pd.DataFrame({
        "seed": ints("seed"),
        "sample_index": ints("sample_index"),
        "init_state_hex": pd.array([r.init_state_hex for r in records], dtype="string"),
        "flipped_bit": ints("flipped_bit"),
        "transient_a": ints("transient_a"),
        "period_a": ints("period_a"),
        "transient_b": ints("transient_b"),
        "period_b": ints("period_b"),
        "coalesced": pd.array([r.coalesced for r in records], dtype="boolean"),
        "coalescence_time": ints("coalescence_time"),
        "max_hamming": ints("max_hamming"),
        "frac_ge_threshold": [
            math.nan if r.frac_ge_threshold is None else float(r.frac_ge_threshold)
            for r in records
        ],
        "verdict": pd.array([str(r.verdict) for r in records], dtype="string"),
    })[list(CSV_COLUMNS)]


def write_sample_log(records: list[SampleRecord], destination: str | os.PathLike[str]) -> Path:
    """Write one CSV row per sample (6-digit fractions, hex states)."""
    from pathlib import Path

    path = Path(destination)
    sample_log_frame(records).to_csv(path, index=False, float_format="%.6f")
    return path
