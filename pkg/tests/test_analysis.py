"""Tests for attractor detection, joint trajectories, bounds and estimators."""

from __future__ import annotations

from fractions import Fraction
import math

import numpy as np
import pandas as pd
import pytest

from coopnet.analysis import (
    CodingStates,
    DetectionMethod,
    FlipDirection,
    FlipPairs,
    Metric,
    MetricSummary,
    UniformStates,
    Verdict,
    attractor_census,
    chain_sum_invariant,
    coalescence_test,
    cycle_states,
    estimate_alpha_q_decoherence,
    estimate_coalescence,
    estimate_decoherence,
    estimate_instability,
    estimate_p_c_chaos,
    find_attractor,
    joint_cycle_analysis,
    n_alpha_p_threshold,
    q_upper_bound,
    write_sample_log,
)
from coopnet.analysis.attractors import brent
from coopnet.analysis.bounds import SQRT3, binomial_condition_holds
from coopnet.analysis.metrics import CSV_COLUMNS, wilson_interval
from coopnet.analysis.sampling import sample_rng
from coopnet.coding import RobustScheme, decode_word
from coopnet.constructions import random_wired_network
from coopnet.errors import BudgetExceededError, DimensionCapError, DomainError, OrderViolationError
from coopnet.netcore import Node, RuleNetwork, State, WiredNetwork
from coopnet.netcore.state import leq


def tail_net() -> RuleNetwork:
    """0 -> 1 -> 2 -> 3 -> 2: transient 2 into a 2-cycle."""
    return RuleNetwork.from_table([1, 2, 3, 2], 2)


def and_or_net() -> WiredNetwork:
    return WiredNetwork.from_tables([((0, 1), "0001"), ((0, 1), "0111")])


def test_brent_on_plain_integers():
    """Transient, period and cycle entry of x -> x + 1 mod 5 started outside the cycle."""
    mu, lam, entry = brent(lambda x: (x + 1) % 5 if x < 5 else 0, 7, 100)  # noqa: PLR2004
    assert (mu, lam, entry) == (1, 5, 0)


def test_find_attractor_transient_and_period():
    """Brent and memo detection agree on transient, period and canonical state."""
    net = tail_net()
    info = find_attractor(net, State.zeros(2))
    assert info.transient == 2  # noqa: PLR2004
    assert info.period == 2  # noqa: PLR2004
    assert info.canonical_id == (2, 2)
    assert find_attractor(net, State.zeros(2), method=DetectionMethod.MEMO) == info
    assert [s.bits for s in cycle_states(net, info)] == [2, 3]


def test_find_attractor_budget():
    """A too small budget raises instead of returning a partial answer."""
    net = RuleNetwork.from_table([1, 2, 3, 0], 2)
    with pytest.raises(BudgetExceededError) as info:
        find_attractor(net, State.zeros(2), budget=2)
    assert info.value.budget == 2  # noqa: PLR2004
    with pytest.raises(BudgetExceededError):
        find_attractor(net, State.zeros(2), budget=2, method=DetectionMethod.MEMO)


def test_step_budget_from_environment(monkeypatch):
    """The default budget can be lowered through the environment."""
    monkeypatch.setenv("COOPNET_STEP_BUDGET", "2")
    with pytest.raises(BudgetExceededError):
        find_attractor(RuleNetwork.from_table([1, 2, 3, 0], 2), State.zeros(2))


def test_exhaustive_census():
    """Fixed points of the AND/OR network with their basin sizes."""
    census = attractor_census(and_or_net())
    assert [entry.attractor.canonical_id for entry in census] == [(0, 1), (2, 1), (3, 1)]
    assert [entry.count for entry in census] == [1, 2, 1]
    assert [entry.max_transient for entry in census] == [0, 1, 0]
    assert sum(entry.count for entry in census) == 4  # noqa: PLR2004


def test_census_of_tail_network():
    """Every state of the tail network drains into one 2-cycle."""
    (entry,) = attractor_census(tail_net())
    assert entry.attractor.period == 2  # noqa: PLR2004
    assert entry.count == 4  # noqa: PLR2004
    assert entry.max_transient == 2  # noqa: PLR2004


def test_census_caps_and_sampling(counter_net):
    """Exhaustive census refuses large n; sampled census needs a seed and counts every sample."""
    with pytest.raises(DimensionCapError):
        attractor_census(WiredNetwork.identity(21))
    with pytest.raises(ValueError, match="seed"):
        attractor_census(counter_net, samples=10)
    census = attractor_census(counter_net, samples=30, seed=5)
    assert sum(entry.count for entry in census) == 30  # noqa: PLR2004
    assert census == attractor_census(counter_net, samples=30, seed=5)


def walk_to_cycle(f, start: int) -> tuple[int, int, frozenset[int]]:
    """Transient, period and cycle set by remembering every visited state."""
    seen: dict[int, int] = {}
    x = start
    while x not in seen:
        seen[x] = len(seen)
        x = f(x)
    transient = seen[x]
    cycle = frozenset(state for state, time in seen.items() if time >= transient)
    return transient, len(seen) - transient, cycle


@pytest.mark.parametrize("seed", range(4))
def test_find_attractor_matches_state_enumeration(seed: int):
    """Both detection methods agree with a plain visited-set walk on random networks."""
    rng = np.random.default_rng(seed)
    for _ in range(50):
        n = int(rng.integers(2, 13))
        net = random_wired_network(n, int(rng.integers(0, min(n, 3) + 1)), rng)
        start = int(rng.integers(1 << n))
        transient, period, cycle = walk_to_cycle(net.successor(), start)
        info = find_attractor(net, State(start, n))
        assert (info.transient, info.period, info.canonical) == (transient, period, min(cycle))
        assert find_attractor(net, State(start, n), method=DetectionMethod.MEMO) == info


@pytest.mark.parametrize(("seed", "n"), [(0, 8), (1, 9), (2, 10)])
def test_canonical_id_identifies_cycles(seed: int, n: int):
    """Two states share a cycle identifier exactly when they reach the same cycle."""
    rng = np.random.default_rng(seed)
    net = random_wired_network(n, 2, rng)
    f = net.successor()
    labels = set()
    for bits in range(1 << n):
        _, _, cycle = walk_to_cycle(f, bits)
        labels.add((find_attractor(net, State(bits, n)).canonical_id, cycle))
    assert len({label for label, _ in labels}) == len(labels)
    assert len({cycle for _, cycle in labels}) == len(labels)


@pytest.mark.parametrize("seed", range(5))
def test_joint_statistics_do_not_depend_on_cycle_phase(seed: int):
    """Starting anywhere on the joint cycle rotates the distances and keeps every share."""
    n = 8
    rng = np.random.default_rng(seed)
    net = random_wired_network(n, 2, rng)
    f = net.successor()
    s, s_star = int(rng.integers(1 << n)), int(rng.integers(1 << n))
    report = joint_cycle_analysis(net, State(s, n), State(s_star, n))
    for _ in range(report.joint_transient):
        s, s_star = f(s), f(s_star)
    for shift in range(report.joint_period):
        rotated = joint_cycle_analysis(net, State(s, n), State(s_star, n))
        assert rotated.joint_transient == 0
        assert rotated.distances == report.distances[shift:] + report.distances[:shift]
        for threshold in range(n + 2):
            assert rotated.frac_hamming_ge(threshold) == report.frac_hamming_ge(threshold)
        s, s_star = f(s), f(s_star)


def test_joint_analysis_of_constant_network():
    """A constant network merges any pair after one step."""
    net = WiredNetwork.constant(3)
    report = joint_cycle_analysis(net, State.from_string("000"), State.from_string("100"))
    assert report.coalesced
    assert report.coalescence_time == 1
    assert report.joint_transient == 1
    assert report.distances == (0,)


def test_joint_analysis_of_identity_network():
    """The identity keeps the initial distance forever."""
    net = WiredNetwork.identity(3)
    report = joint_cycle_analysis(net, State.from_string("000"), State.from_string("100"))
    assert not report.coalesced
    assert report.coalescence_time is None
    assert report.joint_period == 1
    assert report.max_hamming_on_cycle == 1
    assert report.frac_hamming_ge(1) == 1
    assert report.frac_hamming_ge(2) == 0


def test_joint_period_is_lcm_of_phase_shifted_cycles():
    """Two trajectories on the same 4-cycle at different phases never coincide."""
    net = RuleNetwork.from_table([1, 2, 3, 0], 2)
    report = joint_cycle_analysis(net, State(0, 2), State(1, 2))
    assert report.joint_period == 4  # noqa: PLR2004
    assert not report.coalesced
    assert report.frac_hamming_ge(1) == 1
    assert report.frac_hamming_ge(2) == Fraction(1, 2)


def test_coalescence_test_requires_ordered_pair():
    """Only strictly ordered pairs are accepted."""
    net = and_or_net()
    with pytest.raises(ValueError, match="s0 < s0"):
        coalescence_test(net, State.from_string("10"), State.from_string("01"))
    with pytest.raises(ValueError, match="s0 < s0"):
        coalescence_test(net, State.from_string("10"), State.from_string("10"))


def test_coalescence_test_on_cooperative_network():
    """00 < 10 under AND/OR: 10 goes to 01, not 00, so the pair stays apart."""
    report = coalescence_test(and_or_net(), State.from_string("00"), State.from_string("10"))
    assert not report.coalesced
    report = coalescence_test(and_or_net(), State.from_string("10"), State.from_string("11"))
    assert not report.coalesced
    assert report.distances == (1,)


def test_coalescence_test_detects_lost_order():
    """A negation reverses the order of the pair."""
    net = WiredNetwork(1, (Node((0,), "10"),))
    with pytest.raises(OrderViolationError):
        coalescence_test(net, State(0, 1), State(1, 1))


def test_chain_sum_invariant(decofam_net):
    """Images of a flip chain stay nested and their distances sum to at most n."""
    chain = chain_sum_invariant(and_or_net(), (0, 1), 1)
    assert chain.distances == (1, 1)
    assert chain.total == 2  # noqa: PLR2004
    assert chain.jump_counts([1, 2]) == {1: 2, 2: 0}
    rng = np.random.default_rng(3)
    permutation = [int(x) for x in rng.permutation(decofam_net.n)]
    for t in (0, 1, 5):
        assert chain_sum_invariant(decofam_net, permutation, t).total <= decofam_net.n


@pytest.mark.parametrize("seed", range(50))
def test_chain_sum_bounds_on_random_cooperative_networks(seed: int):
    """Distances sum to at most n and at most 1/alpha jumps reach alpha * n."""
    n = 10
    rng = np.random.default_rng(seed)
    wired = random_wired_network(n, int(rng.integers(1, 4)), rng, monotone=True)
    net = RuleNetwork.from_table(wired.transition_table().tolist(), n)
    for _ in range(100):
        permutation = [int(x) for x in rng.permutation(n)]
        for t in range(1, 21):
            chain = chain_sum_invariant(net, permutation, t)
            assert len(chain.distances) == n
            assert chain.total <= n
            for alpha in (Fraction(3, 10), Fraction(1, 2)):
                assert chain.jumps_at_least(math.ceil(alpha * n)) <= math.floor(1 / alpha)


def test_chain_sum_beyond_machine_words():
    """Wide networks step the chain with Python integers."""
    chain = chain_sum_invariant(WiredNetwork.identity(70), list(range(70)), 3)
    assert chain.distances == (1,) * 70
    assert chain.total == 70  # noqa: PLR2004


def test_chain_sum_rejects_bad_input():
    """Non-permutations and non-cooperative networks are refused."""
    with pytest.raises(ValueError, match="permutation"):
        chain_sum_invariant(and_or_net(), (0, 0), 1)
    net = WiredNetwork(1, (Node((0,), "10"),))
    with pytest.raises(OrderViolationError):
        chain_sum_invariant(net, (0,), 1)


def test_q_upper_bound():
    """The bound is 0.75 at c = 2, 1 up to sqrt(3) and decreasing in between."""
    assert q_upper_bound(2) == pytest.approx(0.75)
    assert q_upper_bound(1.5) == 1.0
    assert q_upper_bound(math.sqrt(3)) == 1.0
    assert 0.75 < q_upper_bound(1.9) < q_upper_bound(1.8) < 1  # noqa: PLR2004
    for c in (1, 0.5, 2.1):
        with pytest.raises(DomainError):
            q_upper_bound(c)


def test_q_upper_bound_strictly_decreases_past_sqrt3():
    """On a fine grid of [sqrt(3), 2] every step lowers the bound."""
    values = [q_upper_bound(float(c)) for c in np.linspace(SQRT3, 2, 100)]
    assert values[0] == pytest.approx(1.0)
    assert values[-1] == pytest.approx(0.75)
    assert all(b < a for a, b in zip(values, values[1:]))


def test_n_alpha_p_threshold():
    """Smallest dimension with every binomial ratio below p * alpha / 2."""
    assert n_alpha_p_threshold(1, 1) == 3  # noqa: PLR2004
    assert n_alpha_p_threshold(2, 1) == 1
    assert n_alpha_p_threshold(Fraction(1, 2), Fraction(1, 2)) > 3  # noqa: PLR2004
    with pytest.raises(DomainError):
        n_alpha_p_threshold(0, 1)
    with pytest.raises(DomainError):
        n_alpha_p_threshold(1, 1.5)


def binomial_ratios_below(n: int, bound: Fraction) -> bool:
    return all(Fraction(math.comb(n, k), 1 << n) < bound for k in range(1, n + 1))


@pytest.mark.parametrize("seed", range(20))
def test_n_alpha_p_threshold_is_minimal(seed: int):
    """The threshold satisfies the condition for every k and the dimension below it does not."""
    rng = np.random.default_rng(seed)
    alpha = Fraction(int(rng.integers(30, 101)), 100)
    p = Fraction(int(rng.integers(30, 101)), 100)
    threshold = n_alpha_p_threshold(alpha, p)
    assert binomial_condition_holds(threshold, alpha, p)
    assert binomial_ratios_below(threshold, p * alpha / 2)
    if threshold > 1:
        assert not binomial_condition_holds(threshold - 1, alpha, p)
        assert not binomial_ratios_below(threshold - 1, p * alpha / 2)


def test_flip_pair_directions():
    """Up-flips raise the chosen bit, down-flips lower it."""
    for index in range(20):
        rng = np.random.default_rng([1, index])
        s, bit, s_star = FlipPairs(8, FlipDirection.UP)(rng)
        assert not s >> bit & 1
        assert s_star == s | 1 << bit
        assert leq(State(s, 8), State(s_star, 8))
        s, bit, s_star = FlipPairs(8, FlipDirection.DOWN)(np.random.default_rng([1, index]))
        assert s_star == s & ~(1 << bit)


def test_flip_pairs_rejection_limit():
    """A predicate nothing satisfies ends the draw with an error."""
    sampler = FlipPairs(4, accept=lambda _: False, max_tries=5)
    with pytest.raises(DomainError, match="No acceptable"):
        sampler(np.random.default_rng(0))


def test_samplers_are_reproducible():
    """Equal seeds give equal draws."""
    first = UniformStates(40)(np.random.default_rng([9, 3]))
    second = UniformStates(40)(np.random.default_rng([9, 3]))
    assert first == second
    assert 0 <= first < 1 << 40


def test_coding_states_hold_valid_digits():
    """Each block of a coding state decodes to a digit below its modulus."""
    moduli = (5, 4)
    scheme = RobustScheme(4, 2)
    sampler = CodingStates(moduli, 4, 2)
    for index in range(20):
        bits = sampler(np.random.default_rng([2, index]))
        for b, modulus in enumerate(moduli):
            block = State(bits >> (b * scheme.m) & 0xFF, scheme.m)
            digit = decode_word(block, scheme)
            assert digit is not None
            assert digit < modulus


def test_chaos_estimate_on_counter(counter_net):
    """Every coding state of the (5, 4) counter lies on the 20-cycle."""
    report = estimate_p_c_chaos(
        counter_net, 1.05, 40, 11, sampler=CodingStates((5, 4), 4, 2)
    )
    assert report.metric == Metric.CHAOS
    assert report.params["period_threshold"] == "2"
    assert report.estimate == 1
    assert report.inconclusive == 0
    low, high = report.confidence_interval
    assert low < 1
    assert high == pytest.approx(1)


def test_chaos_requires_c_above_one(counter_net):
    with pytest.raises(DomainError):
        estimate_p_c_chaos(counter_net, 1, 10, 0)


def test_exhausted_budget_is_inconclusive(counter_net):
    """Samples that run out of budget are reported, not counted as successes."""
    report = estimate_p_c_chaos(counter_net, 1.05, 10, 0, budget=1)
    assert report.inconclusive == 10  # noqa: PLR2004
    assert report.successes == 0
    summary = MetricSummary(report=report)
    assert summary.budget_warning
    assert summary.model_dump()["budget_warning"] is True
    assert "records" not in summary.model_dump()["report"]


def test_estimates_are_reproducible(decofam_net):
    """Equal seeds give equal sample records."""
    first = estimate_instability(decofam_net, 25, 4)
    second = estimate_instability(decofam_net, 25, 4)
    assert first.records == second.records
    assert first.successes == second.successes


def test_instability_and_coalescence_are_complementary(decofam_net):
    """On a cooperative network a flipped pair coalesces exactly when it keeps its attractor."""
    instability = estimate_instability(decofam_net, 500, 8)
    coalescence = estimate_coalescence(decofam_net, 500, 8)
    for a, b in zip(instability.records, coalescence.records, strict=True):
        assert a.flipped_bit == b.flipped_bit
        assert a.init_state_hex == b.init_state_hex
        assert (a.verdict is Verdict.SUCCESS) != (b.verdict is Verdict.SUCCESS)
    assert instability.inconclusive == coalescence.inconclusive == 0
    assert instability.successes + coalescence.successes == 500  # noqa: PLR2004


def test_decoherence_on_decoherence_family(decofam_net):
    """Flips inside the ruled domain keep the two trajectories on distant attractor phases."""
    sampler = FlipPairs(decofam_net.n, accept=decofam_net.rule.in_z)
    report = estimate_decoherence(decofam_net, 5, 500, 2, pair_sampler=sampler)
    assert report.estimate == 1
    assert report.params == {"D": 5}


def test_flips_inside_ruled_domain_recur_with_cycle_length(decofam_net, decofam_params):
    """Both trajectories enter cycles of length L, so the joint period is L."""
    sampler = FlipPairs(decofam_net.n, accept=decofam_net.rule.in_z)
    for index in range(500):
        s, _, s_star = sampler(sample_rng(2, index))
        report = joint_cycle_analysis(
            decofam_net, State(s, decofam_net.n), State(s_star, decofam_net.n)
        )
        assert report.joint_period == decofam_params.length
        assert report.max_hamming_on_cycle >= 5  # noqa: PLR2004


def test_decoherence_on_oscillating_network(oscillating_net):
    """Most single flips of the oscillating network end on the complementary cycle."""
    report = estimate_decoherence(oscillating_net, 10, 100, 1)
    assert report.estimate_value >= 0.9  # noqa: PLR2004


def test_oscillating_flips_stay_complementary(oscillating_net):
    """Most flipped pairs sit at distance N at every time, on two different 4-cycles."""
    n = oscillating_net.n
    report = estimate_alpha_q_decoherence(oscillating_net, 1, 1, 1000, 11)
    assert report.estimate_value >= 0.9  # noqa: PLR2004
    for record in report.records:
        if record.verdict is not Verdict.SUCCESS:
            continue
        assert record.frac_ge_threshold == 1
        s = State.from_hex(record.init_state_hex, n)
        first = find_attractor(oscillating_net, s)
        second = find_attractor(oscillating_net, s.flip(record.flipped_bit))
        assert first.period == second.period == 4  # noqa: PLR2004
        assert first.canonical_id != second.canonical_id


def test_alpha_q_decoherence_implies_decoherence(decofam_net):
    """A positive share of distant times means the distance is reached at all."""
    alpha_q = estimate_alpha_q_decoherence(decofam_net, 0.25, 0.05, 40, 6)
    plain = estimate_decoherence(decofam_net, 5, 40, 6)
    assert alpha_q.params["distance_threshold"] == 5  # noqa: PLR2004
    for a, b in zip(alpha_q.records, plain.records, strict=True):
        if a.verdict is Verdict.SUCCESS:
            assert b.verdict is Verdict.SUCCESS
        assert a.frac_ge_threshold is not None


def test_estimator_domains(decofam_net):
    """Out-of-range thresholds are refused."""
    with pytest.raises(DomainError):
        estimate_decoherence(decofam_net, 0, 10, 0)
    with pytest.raises(DomainError):
        estimate_decoherence(decofam_net, 21, 10, 0)
    with pytest.raises(DomainError):
        estimate_alpha_q_decoherence(decofam_net, 0, 0.5, 10, 0)
    with pytest.raises(DomainError):
        estimate_instability(decofam_net, 0, 0)


def test_wilson_interval():
    """The interval contains the point estimate and is trivial without samples."""
    assert wilson_interval(0, 0) == (0.0, 1.0)
    low, high = wilson_interval(30, 100)
    assert low < 0.3 < high  # noqa: PLR2004


def test_sample_log(tmp_path, decofam_net):
    """One CSV row per sample with the documented columns."""
    report = estimate_coalescence(decofam_net, 12, 3, direction=FlipDirection.UP)
    path = write_sample_log(report.records, tmp_path / "samples.csv")
    frame = pd.read_csv(path)
    assert tuple(frame.columns) == CSV_COLUMNS
    assert len(frame) == 12  # noqa: PLR2004
    assert frame["sample_index"].tolist() == list(range(12))
    assert set(frame["verdict"]) <= {"success", "failure", "inconclusive"}
