"""Command-line front end.

Exit codes: 0 success or certified, 1 refuted, 2 error (including infeasible
construction parameters), 3 finished with too many budget-exhausted samples.
"""

from __future__ import annotations

from contextlib import contextmanager
from enum import IntEnum, StrEnum
import json
from pathlib import Path
from typing import TYPE_CHECKING, Annotated, Any

import pandas as pd
from pydantic import ValidationError
import typer

from coopnet.analysis import (
    CodingStates,
    FlipDirection,
    FlipPairs,
    MetricSummary,
    attractor_census,
    cycle_states,
    estimate_alpha_q_decoherence,
    estimate_coalescence,
    estimate_decoherence,
    estimate_instability,
    estimate_p_c_chaos,
    find_attractor,
    n_alpha_p_threshold,
    q_upper_bound,
    write_sample_log,
)
from coopnet.analysis.attractors import default_step_budget
from coopnet.coding import (
    RobustScheme,
    codebook_text,
    find_friendly_pair,
    robust_codes_count,
)
from coopnet.config import ExperimentConfig, config_header, model_param_fields
from coopnet.constructions import CounterTapeRule, DecoherenceFamilyRule, OscillatingRule
from coopnet.constructions.decoherence import z_threshold
from coopnet.constructions.registry import REGISTRY, build_construction, get_entry
from coopnet.errors import ConstructionError, CoopnetError
from coopnet.log import configure_logging, get_logger
from coopnet.netcore import RuleNetwork, State, WiredNetwork, load_network, save_network, simulate
from coopnet.utils import as_fraction
from coopnet.verify import (
    check_cooperativity_global,
    check_cooperativity_local,
    degree_profile,
)


if TYPE_CHECKING:
    from collections.abc import Iterator

    from coopnet.analysis import MetricReport
    from coopnet.netcore import BooleanNetwork


logger = get_logger("cli")

DEFAULT_SAMPLES = 1000
PARAM_ALIASES = {"len": "length"}
"""Short flag names accepted for construction parameters."""

EXTRA_ARGS = {"allow_extra_args": True, "ignore_unknown_options": True}

app = typer.Typer(
    name="coopnet",
    help="Build, simulate, verify and analyse cooperative Boolean networks.",
    no_args_is_help=True,
)


class ExitCode(IntEnum):
    OK = 0
    REFUTED = 1
    ERROR = 2
    BUDGET_WARNING = 3


class AnalyzeMetric(StrEnum):
    CHAOS = "chaos"
    INSTABILITY = "instability"
    COALESCENCE = "coalescence"
    DECOHERENCE = "decoherence"
    ALPHA_Q_DECOHERENCE = "alpha-q-decoherence"
    CENSUS = "census"
    ATTRACTOR = "attractor"


class SamplerKind(StrEnum):
    UNIFORM = "uniform"
    CODING = "coding"
    Z = "z"


class Check(StrEnum):
    COOPERATIVE_LOCAL = "cooperative-local"
    COOPERATIVE_GLOBAL = "cooperative-global"
    DEGREES = "degrees"


class BoundKind(StrEnum):
    Q_UPPER = "q-upper"
    N_THRESHOLD = "n-threshold"
    FRIENDLY_PAIR = "friendly-pair"
    CODES_COUNT = "codes-count"


@contextmanager
def _reporting_errors() -> Iterator[None]:
    """Turn library errors into a message on stderr and exit code 2."""
    try:
        yield
    except ConstructionError as e:
        condition = f" [{e.condition}]" if e.condition else ""
        typer.echo(f"Infeasible construction{condition}: {e}", err=True)
        if e.witness is not None:
            typer.echo(f"witness: {e.witness}", err=True)
        raise typer.Exit(ExitCode.ERROR) from e
    except KeyError as e:
        typer.echo(f"Error: {e.args[0] if e.args else e}", err=True)
        raise typer.Exit(ExitCode.ERROR) from e
    except (CoopnetError, ValidationError, ValueError, OSError) as e:
        typer.echo(f"Error: {e}", err=True)
        raise typer.Exit(ExitCode.ERROR) from e


def _parse_value(raw: str) -> Any:
    try:
        return json.loads(raw)
    except json.JSONDecodeError:
        if "," in raw:
            return [_parse_value(part) for part in raw.split(",") if part]
        return raw


def parse_extra_params(args: list[str]) -> dict[str, Any]:
    """Turn ``--key value`` and ``--key=value`` tokens into a parameter mapping.

    Values are read as JSON where possible; comma-separated values become lists.
    """
    params: dict[str, Any] = {}
    tokens = iter(args)
    for token in tokens:
        if not token.startswith("--"):
            msg = f"Unexpected argument {token!r}; parameters are given as --name value"
            raise typer.BadParameter(msg)
        key, sep, value = token[2:].partition("=")
        if not sep:
            following = next(tokens, None)
            if following is None:
                msg = f"--{key} needs a value"
                raise typer.BadParameter(msg)
            value = following
        params[PARAM_ALIASES.get(key, key.replace("-", "_"))] = _parse_value(value)
    return params


def describe_network(net: BooleanNetwork) -> list[str]:
    """Dimension and structural facts of a network, one line each."""
    lines = [f"n={net.n}"]
    match net:
        case WiredNetwork():
            profile = degree_profile(net)
            lines.append(
                f"wired: biquadratic={profile.is_biquadratic} "
                f"strict={profile.is_strictly_biquadratic}"
            )
        case RuleNetwork(rule=CounterTapeRule() as rule):
            lines.append(f"moduli={','.join(map(str, rule.moduli))} m={rule.scheme.m}")
            lines.append(f"lcm={rule.period}")
        case RuleNetwork(rule=OscillatingRule() as rule):
            lines.append(f"L={len(rule.family)} (two complementary cycles)")
        case RuleNetwork(rule=DecoherenceFamilyRule() as rule):
            params = rule.params
            lines.append(f"J={params.window} cycles of length L={params.length}")
            lines.extend(f"feasible {name}: {ok}" for name, ok in params.feasibility().items())
            lines.append(
                "verified: nesting, control-pattern, phase-separation, "
                "cross-phase-incomparability"
            )
            lines.append(f"distance threshold ceil(alpha*N)={z_threshold(params)}")
    return lines


@app.callback()
def main(
    log_level: Annotated[
        str, typer.Option("--log-level", help="Logging level (DEBUG, INFO, WARNING, ...)")
    ] = "WARNING",
) -> None:
    configure_logging(log_level.upper())


@app.command(context_settings=EXTRA_ARGS)
def build(
    ctx: typer.Context,
    name: Annotated[str, typer.Argument(help="Construction name (see `coopnet params`)")],
    out: Annotated[Path | None, typer.Option("--out", "-o", help="Network file")] = None,
    seed: Annotated[int | None, typer.Option(help="Seed for randomized constructions")] = None,
    params_json: Annotated[
        str | None, typer.Option("--params", help="Parameters as a JSON object")
    ] = None,
) -> None:
    """Build a named construction; further ``--name value`` pairs are its parameters."""
    with _reporting_errors():
        entry = get_entry(name)
        params = json.loads(params_json) if params_json else {}
        params |= parse_extra_params(ctx.args)
        needs_seed = "seed" in entry.model.model_fields and not params.keys() & {"seed", "family"}
        if needs_seed and seed is None:
            msg = f"Construction {name!r} draws random choices and needs an explicit --seed"
            raise ValueError(msg)
        net = build_construction(name, params, seed=seed)
        path = save_network(net, out or Path(f"{name}.json"))
    for line in describe_network(net):
        typer.echo(line)
    typer.echo(f"written: {path}")


def _samplers(
    net: BooleanNetwork,
    kind: SamplerKind,
    direction: FlipDirection,
    pairs: bool,
) -> dict[str, Any]:
    rule = net.rule if isinstance(net, RuleNetwork) else None
    match kind:
        case SamplerKind.UNIFORM:
            return {"direction": direction}
        case SamplerKind.CODING if isinstance(rule, CounterTapeRule) and not pairs:
            scheme = rule.scheme
            return {"sampler": CodingStates(rule.moduli, scheme.k, scheme.ell)}
        case SamplerKind.Z if isinstance(rule, DecoherenceFamilyRule) and pairs:
            pair_sampler = FlipPairs(net.n, direction, accept=rule.in_z)
            return {"pair_sampler": pair_sampler, "direction": direction}
    msg = (
        f"Sampler {kind} does not apply here: coding needs a counter tape and a state "
        "metric, z needs a decoherence family and a pair metric"
    )
    raise ValueError(msg)


def _census(
    net: BooleanNetwork,
    config: ExperimentConfig,
    csv_path: Path | None,
) -> None:
    seed = config.require_seed() if config.samples is not None else None
    entries = attractor_census(net, samples=config.samples, seed=seed, budget=config.budget)
    frame = pd.DataFrame({
        "canonical_hex": [e.attractor.canonical_state.to_hex() for e in entries],
        "period": [e.attractor.period for e in entries],
        "count": [e.count for e in entries],
        "max_transient": [e.max_transient for e in entries],
    })
    if csv_path is not None:
        frame.to_csv(csv_path, index=False)
    typer.echo(frame.to_string(index=False))


def _attractor(net: BooleanNetwork, state: str | None, budget: int) -> None:
    s0 = State.from_string(state) if state else State.zeros(net.n)
    info = find_attractor(net, s0, budget)
    typer.echo(f"transient={info.transient} period={info.period}")
    for s in cycle_states(net, info)[:64]:
        typer.echo(s.to_string())


@app.command()
def analyze(
    metric: Annotated[AnalyzeMetric, typer.Argument(help="Metric or analysis kind")],
    net_file: Annotated[Path, typer.Argument(help="Network document")],
    samples: Annotated[int | None, typer.Option(help="Number of samples")] = None,
    seed: Annotated[int | None, typer.Option(help="Seed of the sample streams")] = None,
    c: Annotated[str | None, typer.Option(help="Growth rate for chaos")] = None,
    d: Annotated[int | None, typer.Option("--d", help="Distance for decoherence")] = None,
    alpha: Annotated[str | None, typer.Option(help="Distance fraction")] = None,
    q: Annotated[str | None, typer.Option(help="Required long-run proportion")] = None,
    sampler: Annotated[SamplerKind, typer.Option(help="Initial-state sampler")] = (
        SamplerKind.UNIFORM
    ),
    direction: Annotated[FlipDirection, typer.Option(help="Flip direction")] = (
        FlipDirection.TOGGLE
    ),
    state: Annotated[str | None, typer.Option(help="Initial state (attractor)")] = None,
    budget: Annotated[int | None, typer.Option(help="Step budget per detection")] = None,
    workers: Annotated[int, typer.Option(help="Worker processes")] = 1,
    csv_path: Annotated[Path | None, typer.Option("--csv", help="Per-sample CSV")] = None,
    summary_path: Annotated[
        Path | None, typer.Option("--summary", help="Summary JSON document")
    ] = None,
    max_inconclusive: Annotated[
        float, typer.Option(help="Tolerated share of budget-exhausted samples")
    ] = 0.01,
) -> None:
    """Estimate a metric on a network, or list its attractors."""
    with _reporting_errors():
        net = load_network(net_file)
        params = {
            key: value
            for key, value in {"c": c, "d": d, "alpha": alpha, "q": q}.items()
            if value is not None
        }
        config = ExperimentConfig(
            command="analyze",
            seed=seed,
            network=str(net_file),
            metric=str(metric),
            params=params,
            samples=samples,
            budget=default_step_budget() if budget is None else budget,
            workers=workers,
            sampler=str(sampler),
            direction=str(direction),
            max_inconclusive=max_inconclusive,
            csv_path=None if csv_path is None else str(csv_path),
            summary_path=None if summary_path is None else str(summary_path),
        )
        match metric:
            case AnalyzeMetric.CENSUS:
                _census(net, config, csv_path)
                return
            case AnalyzeMetric.ATTRACTOR:
                _attractor(net, state, config.budget or default_step_budget())
                return
        report = _estimate(net, metric, config, sampler, direction)
        summary = MetricSummary(
            config=config_header(config), report=report, max_inconclusive=max_inconclusive
        )
        if csv_path is not None:
            write_sample_log(report.records, csv_path)
        document = summary.model_dump_json(indent=2)
        if summary_path is not None:
            summary_path.write_text(document + "\n", encoding="utf-8")
    low, high = report.confidence_interval
    typer.echo(
        f"{report.metric}: estimate={report.estimate_value:.6f} ({report.estimate}) "
        f"95% CI=[{low:.6f}, {high:.6f}] samples={report.samples} "
        f"inconclusive={report.inconclusive}"
    )
    if summary_path is None:
        typer.echo(document)
    if summary.budget_warning:
        typer.echo(
            f"warning: {report.inconclusive_rate:.2%} of samples exhausted the step budget",
            err=True,
        )
        raise typer.Exit(ExitCode.BUDGET_WARNING)


def _require(value: Any, flag: str, purpose: str) -> Any:
    if value is None:
        msg = f"{purpose} needs {flag}"
        raise ValueError(msg)
    return value


def _estimate(
    net: BooleanNetwork,
    metric: AnalyzeMetric,
    config: ExperimentConfig,
    sampler: SamplerKind,
    direction: FlipDirection,
) -> MetricReport:
    seed = config.require_seed()
    samples = config.samples or DEFAULT_SAMPLES
    pairs = metric is not AnalyzeMetric.CHAOS
    options = _samplers(net, sampler, direction, pairs) | {
        "budget": config.budget,
        "workers": config.workers,
    }
    params = config.params
    match metric:
        case AnalyzeMetric.CHAOS:
            c = as_fraction(_require(params.get("c"), "--c", "chaos"))
            return estimate_p_c_chaos(net, c, samples, seed, **options)
        case AnalyzeMetric.INSTABILITY:
            return estimate_instability(net, samples, seed, **options)
        case AnalyzeMetric.COALESCENCE:
            return estimate_coalescence(net, samples, seed, **options)
        case AnalyzeMetric.DECOHERENCE:
            d = _require(params.get("d"), "--d", "decoherence")
            return estimate_decoherence(net, d, samples, seed, **options)
        case _:
            alpha = as_fraction(_require(params.get("alpha"), "--alpha", str(metric)))
            q = as_fraction(_require(params.get("q"), "--q", str(metric)))
            return estimate_alpha_q_decoherence(net, alpha, q, samples, seed, **options)


@app.command()
def verify(
    net_file: Annotated[Path, typer.Argument(help="Network document")],
    checks: Annotated[
        list[Check] | None, typer.Option("--check", help="Check to run (repeatable)")
    ] = None,
    strict: Annotated[
        bool, typer.Option(help="Degrees check requires strict bi-quadratic wiring")
    ] = False,
) -> None:
    """Run structural checks and report verdicts with witnesses."""
    with _reporting_errors():
        net = load_network(net_file)
        if not checks:
            checks = list(Check) if isinstance(net, WiredNetwork) else [Check.COOPERATIVE_GLOBAL]
        results: dict[str, dict[str, object]] = {}
        passed = True
        for check in checks:
            if check is Check.COOPERATIVE_GLOBAL:
                certificate = check_cooperativity_global(net)
                results[check] = certificate.to_dict()
                passed &= certificate.is_cooperative
                continue
            if not isinstance(net, WiredNetwork):
                msg = f"Check {check} needs a wired network"
                raise ValueError(msg)
            if check is Check.COOPERATIVE_LOCAL:
                certificate = check_cooperativity_local(net)
                results[check] = certificate.to_dict()
                passed &= certificate.is_cooperative
            else:
                profile = degree_profile(net)
                ok = profile.is_strictly_biquadratic if strict else profile.is_biquadratic
                results[check] = profile.to_dict() | {"pass": ok}
                passed &= ok
    typer.echo(json.dumps({str(k): v for k, v in results.items()}, indent=2))
    if not passed:
        raise typer.Exit(ExitCode.REFUTED)


@app.command()
def bound(
    kind: Annotated[BoundKind, typer.Argument(help="Bound to evaluate")],
    c: Annotated[str | None, typer.Option(help="Growth rate")] = None,
    alpha: Annotated[str | None, typer.Option(help="Distance fraction")] = None,
    p: Annotated[str | None, typer.Option(help="Probability")] = None,
    k: Annotated[int | None, typer.Option(help="Code width")] = None,
) -> None:
    """Evaluate a closed-form bound or count."""
    with _reporting_errors():
        match kind:
            case BoundKind.Q_UPPER:
                c_value = float(as_fraction(_require(c, "--c", kind)))
                value = q_upper_bound(c_value)
                lines = [
                    f"q_upper(c={c}) = {value:.12g}",
                    "formula: 0.75 + ln(c/2) / (2 ln 0.75), clamped to 1 for c <= sqrt(3)",
                ]
            case BoundKind.N_THRESHOLD:
                alpha_q = as_fraction(_require(alpha, "--alpha", kind))
                p_q = as_fraction(_require(p, "--p", kind))
                lines = [
                    f"N = {n_alpha_p_threshold(alpha_q, p_q)}",
                    "formula: smallest N with C(N, k) / 2^N < p * alpha / 2 for all k",
                ]
            case BoundKind.FRIENDLY_PAIR:
                pair = find_friendly_pair(as_fraction(_require(c, "--c", kind)))
                lines = [
                    f"k = {pair.k}",
                    f"epsilon = {pair.epsilon}",
                    f"|C_k| = {robust_codes_count(pair.k)} >= 2^{pair.exponent}",
                    "formula: log2(c) (1 + epsilon) < 1 and |C_k| >= 2^(k / (1 + epsilon))",
                ]
            case BoundKind.CODES_COUNT:
                width = _require(k, "--k", kind)
                lines = [
                    f"|C_{width}| = {robust_codes_count(width)}",
                    "formula: pair weights in {0, 1, 2} summing to k/2",
                ]
    for line in lines:
        typer.echo(line)


@app.command("simulate")
def simulate_command(
    net_file: Annotated[Path, typer.Argument(help="Network document")],
    state: Annotated[str | None, typer.Option(help="Initial state as a 0/1 string")] = None,
    steps: Annotated[int, typer.Option(help="Number of synchronous steps")] = 10,
    hex_output: Annotated[bool, typer.Option("--hex", help="Print states in hex")] = False,
) -> None:
    """Print a trajectory, one state per line."""
    with _reporting_errors():
        net = load_network(net_file)
        s0 = State.from_string(state) if state else State.zeros(net.n)
        trajectory = simulate(net, s0, steps)
    for t, s in enumerate(trajectory):
        typer.echo(f"{t}\t{s.to_hex() if hex_output else s.to_string()}")


@app.command()
def codebook(
    k: Annotated[int, typer.Option(help="Code width")] = 4,
    ell: Annotated[int, typer.Option(help="Blocks per word")] = 1,
    values: Annotated[
        int | None, typer.Option(help="Derive the scheme for this many values (needs --c)")
    ] = None,
    c: Annotated[str | None, typer.Option(help="Growth rate for the derived scheme")] = None,
) -> None:
    """Print the robust codebook of a scheme."""
    with _reporting_errors():
        if values is not None:
            params = find_friendly_pair(as_fraction(_require(c, "--c", "--values")))
            scheme = RobustScheme.for_capacity(values, params)
        else:
            scheme = RobustScheme(k, ell)
        text = codebook_text(scheme)
    typer.echo(text, nl=False)


@app.command()
def params(
    name: Annotated[str | None, typer.Argument(help="Construction name")] = None,
) -> None:
    """List constructions, or the parameters of one."""
    with _reporting_errors():
        if name is None:
            for entry in REGISTRY.values():
                typer.echo(f"{entry.name}\t{entry.description}")
            return
        entry = get_entry(name)
    typer.echo(f"{entry.name}: {entry.description}")
    for field in model_param_fields(entry.model):
        typer.echo(f"  {field.render()}")


if __name__ == "__main__":
    app()
