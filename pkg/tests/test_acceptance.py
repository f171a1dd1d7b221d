"""Acceptance checks: every headline result and invariant the package must
reproduce, one test per claim.

Statistical targets run at fixed seeds with the tolerances stated next to
each assertion; the mining check is the long pole and takes a couple of
minutes at full scale.
"""
import json

import numpy as np
import pytest

from regretsim import (
    History,
    LearnerSpec,
    MWLearner,
    NoSwapLearner,
    SimulationConfig,
    adjust_swap_rate,
    battle_of_sexes,
    bimatrix_from_dict,
    build_learner,
    cce_gap,
    ce_gap,
    empirical_distribution,
    external_regret,
    gap_experiment,
    make_auction,
    make_bimatrix,
    mine,
    play_round,
    prisoners_dilemma,
    run_batch,
    swap_regret,
    uniform_distribution,
)
from regretsim.data import instance_path
from regretsim.io import canonical_json, result_document


def batch(game, p1, p2, turns=1000, sims=100, seed=11):
    cfg = SimulationConfig(game, (p1, p2), turns=turns, sims=sims, seed=seed)
    return run_batch(cfg)


def mw(rate):
    return LearnerSpec("mw", rate=rate)


def noswap(rate):
    return LearnerSpec("noswap", rate=rate)


UNIFORM = LearnerSpec("uniform")


def load_instance(name):
    return bimatrix_from_dict(json.load(open(instance_path(name))), name=name)


def test_prisoners_dilemma_utility_table():
    game = prisoners_dilemma()
    both_mw = batch(game, mw(0.5), mw(0.5)).overall_mean_utility
    assert both_mw == pytest.approx([0.11, 0.11], abs=0.02)
    mw_unif = batch(game, mw(0.5), UNIFORM).overall_mean_utility
    assert mw_unif == pytest.approx([0.55, 0.06], abs=0.03)
    both_unif = batch(game, UNIFORM, UNIFORM).overall_mean_utility
    assert both_unif == pytest.approx([0.50, 0.50], abs=0.03)


def test_second_price_utility_table():
    game = make_auction("second", name="spa")
    mw_unif = batch(game, mw(0.5), UNIFORM).overall_mean_utility
    assert mw_unif == pytest.approx([0.50, 0.01], abs=0.03)
    both_mw = batch(game, mw(0.5), mw(0.5)).overall_mean_utility
    assert both_mw == pytest.approx([0.02, 0.02], abs=0.03)
    ns_mw = batch(game, noswap(0.5), mw(0.5)).overall_mean_utility
    assert ns_mw == pytest.approx([0.01, 0.41], abs=0.05)
    # An MW player earns less against another MW player than against a
    # no-swap player.
    assert both_mw[0] < ns_mw[1]


def test_first_price_utility_table():
    game = make_auction("first", name="fpa")
    both_mw = batch(game, mw(0.5), mw(0.5)).overall_mean_utility
    assert both_mw == pytest.approx([0.07, 0.07], abs=0.03)
    both_ns = batch(game, noswap(0.5), noswap(0.5)).overall_mean_utility
    assert both_ns == pytest.approx([0.14, 0.14], abs=0.03)
    mw_ns = batch(game, mw(0.5), noswap(0.5)).overall_mean_utility
    assert mw_ns[0] > both_mw[0]


def test_battle_of_sexes_mw_advantage():
    game = battle_of_sexes()
    result = batch(game, mw(0.5), noswap(0.5), sims=1000).overall_mean_utility
    assert result[0] - result[1] >= 0.15


def test_battle_of_sexes_rate_equalization():
    game = battle_of_sexes()
    result = batch(game, mw(0.5), noswap(0.75), sims=1000).overall_mean_utility
    assert abs(result[0] - result[1]) <= 0.05


def test_rate_adjustment_exact_values():
    assert adjust_swap_rate(0.1, 20) == 1.0 - 0.9 ** 20
    assert adjust_swap_rate(0.5, 2) == 0.75
    assert adjust_swap_rate(0.2, 7) == 1.0 - 0.8 ** 7


def test_bundled_instance_gaps():
    rate = adjust_swap_rate(0.2, 7)
    favors_mw = load_instance("gap_mw_favored_7x7")
    report = gap_experiment(favors_mw, 0.2, rate, sims=100, turns=1000, seed=11)
    assert report.gap <= -0.05
    favors_noswap = load_instance("gap_noswap_favored_7x7")
    report = gap_experiment(favors_noswap, 0.2, rate, sims=100, turns=1000, seed=11)
    assert report.gap >= 0.05


def test_mining_random_games_flags_almost_nothing():
    reports = mine([2, 3, 4, 5], 50, threshold=0.1, seed=0)
    assert len(reports) == 200
    flagged = [r for r in reports if r.flagged]
    assert len(flagged) <= 2  # at most 1% of 200


def synthetic_history(rng, turns, n_actions):
    cf = rng.random((turns, n_actions))
    acts = rng.integers(0, n_actions, size=turns)
    actions = np.zeros((turns, 2), dtype=np.int64)
    actions[:, 0] = acts
    return History(
        actions=actions,
        utilities=np.column_stack([cf[np.arange(turns), acts], np.zeros(turns)]),
        counterfactuals=(cf, np.zeros((turns, 2))),
    )


def expected_play_swap_regret(game, specs, player, turns, seed):
    """Drive one simulation and measure the no-swap player's swap regret on
    its played distributions, alongside its inner copies' regrets."""
    rng = np.random.default_rng(np.random.SeedSequence(seed))
    learners = [build_learner(s, k) for s, k in zip(specs, game.action_counts)]
    target = learners[player]
    k = game.action_counts[player]
    rewired = np.zeros((k, k))
    own = np.zeros(k)
    for t in range(turns):
        p = target.distribution()
        rec = play_round(game, learners, rng, turn=t)
        cf = rec.counterfactuals[player]
        rewired += p[:, None] * cf[None, :]
        own += p * cf
    swap = (rewired - own[:, None]).max(axis=-1).sum()
    lo, hi = game.utility_bounds
    inner = target.inner_external_regrets().sum() * (hi - lo)
    return swap, inner


def test_property_suite():
    # Stationary residual at most 1e-10 on every emitted no-swap distribution.
    seven = load_instance("gap_mw_favored_7x7")
    rng = np.random.default_rng(np.random.SeedSequence(2))
    learners = [MWLearner(2, 0.5), NoSwapLearner(2, 0.5)]
    pd = prisoners_dilemma()
    for t in range(400):
        ns = learners[1]
        q = ns.inner_weights / ns.inner_weights.sum(axis=1, keepdims=True)
        p = ns.distribution()
        assert np.abs(p @ q - p).max() <= 1e-10
        play_round(pd, learners, rng, turn=t)
    rng = np.random.default_rng(np.random.SeedSequence(3))
    learners = [MWLearner(7, 0.2), NoSwapLearner(7, adjust_swap_rate(0.2, 7))]
    for t in range(200):
        ns = learners[1]
        q = ns.inner_weights / ns.inner_weights.sum(axis=1, keepdims=True)
        p = ns.distribution()
        assert np.abs(p @ q - p).max() <= 1e-10
        play_round(seven, learners, rng, turn=t)

    # Rescaling the weight vector by powers of two moves neither the
    # distribution nor the argmax by a single bit.
    rng = np.random.default_rng(5)
    learner = MWLearner(6, 0.4)
    for _ in range(50):
        learner.update(rng.random(6))
    reference = learner.distribution()
    base = learner.weights.copy()
    for scale in (2.0 ** -300, 2.0 ** 200):
        learner.weights = base * scale
        assert np.array_equal(learner.distribution(), reference)
        assert learner.distribution().argmax() == reference.argmax()

    # Swap regret dominates external regret on random histories.
    rng = np.random.default_rng(7)
    for _ in range(1000):
        k = int(rng.integers(2, 6))
        turns = int(rng.integers(1, 30))
        hist = synthetic_history(rng, turns, k)
        assert swap_regret(hist, 0) >= external_regret(hist, 0) - 1e-12

    # The correlated gap dominates the coarse gap on random joint
    # distributions.
    rng = np.random.default_rng(99)
    for _ in range(1000):
        k1 = int(rng.integers(2, 5))
        k2 = int(rng.integers(2, 5))
        game = make_bimatrix(rng.random((k1, k2)), rng.random((k1, k2)))
        dist = rng.random((k1, k2))
        dist /= dist.sum()
        assert ce_gap(game, dist) >= cce_gap(game, dist) - 1e-12

    # The reduction's regret bound, per simulation: the no-swap player's
    # swap regret over its played distributions is at most the summed
    # external regrets of its inner copies (up to the stationary residual
    # accumulated across turns).
    for sim in range(20):
        swap, inner = expected_play_swap_regret(
            pd, (mw(0.5), noswap(0.5)), player=1, turns=1000, seed=(11, sim)
        )
        assert swap <= inner + 1e-6
    rate = adjust_swap_rate(0.2, 7)
    for sim in range(8):
        swap, inner = expected_play_swap_regret(
            seven, (mw(0.2), noswap(rate)), player=1, turns=1000, seed=(7, sim)
        )
        assert swap <= inner + 1e-6

    # Slowdown identity: from a fresh start the reduction applies exactly
    # the update a plain MW learner would see with the loss split N ways.
    rng = np.random.default_rng(9)
    for n in (2, 4):
        loss = rng.random(n)
        reduction = NoSwapLearner(n, 0.3)
        reduction.distribution()
        reduction.update(loss)
        plain = MWLearner(n, 0.3)
        plain.update(loss / n)
        for j in range(n):
            assert np.array_equal(reduction.inner_weights[j], plain.weights)
    loss = rng.random(3)
    reduction = NoSwapLearner(3, 0.3)
    reduction.distribution()
    reduction.update(loss)
    plain = MWLearner(3, 0.3)
    plain.update(uniform_distribution(3)[0] * loss)
    for j in range(3):
        assert np.array_equal(reduction.inner_weights[j], plain.weights)

    # Identical seeded runs serialize to identical bytes.
    def run_once():
        cfg = SimulationConfig(
            prisoners_dilemma(), (mw(0.5), noswap(0.5)), turns=100, sims=5, seed=42
        )
        return canonical_json(result_document(run_batch(cfg)))

    assert run_once() == run_once()


def test_self_play_approaches_equilibrium():
    game = prisoners_dilemma()
    mw_result = batch(game, mw(0.5), mw(0.5))
    dist = empirical_distribution(mw_result.final_heatmap)
    assert cce_gap(game, dist) < 0.05
    ns_result = batch(game, noswap(0.5), noswap(0.5))
    dist = empirical_distribution(ns_result.final_heatmap)
    assert ce_gap(game, dist) < 0.05
