import itertools
import math

import numpy as np
import pytest

from relaycontracts import (
    OfferMatrix,
    SelectionMethod,
    SelectionProblem,
    best_snr_baseline,
    capacity,
    exhaustive_optimum,
    knapsack_01,
    offers_from_csv,
    offers_to_csv,
    overall_heuristic,
    relaxed_upper_bound,
    selection_to_csv,
    sscpa,
    total_spend,
    weight_profile,
    weighted_split_selection,
)


def offers_1d(gammas, transfers):
    g = np.asarray(gammas, dtype=float)[:, None]
    t = np.asarray(transfers, dtype=float)[:, None]
    return OfferMatrix(g, t)


def brute_force_value(gammas, transfers, budget):
    """Max total SNR over all subsets with exact transfer sums <= budget."""
    best = 0.0
    m = len(gammas)
    for mask in range(1 << m):
        picks = [i for i in range(m) if mask >> i & 1]
        if sum(transfers[i] for i in picks) <= budget:
            best = max(best, sum(gammas[i] for i in picks))
    return best


def brute_force_selection(offers, budget):
    """Exhaustive optimum capacity over per-cell inclusion, for tiny instances."""
    cells = [(m, n) for m in range(offers.m) for n in range(offers.n) if offers.snr[m, n] > 0]
    best = 0.0
    for included in itertools.product((0, 1), repeat=len(cells)):
        spend = sum(offers.transfer[c] for c, b in zip(cells, included) if b)
        if spend > budget:
            continue
        snr_per_n = [0.0] * offers.n
        for (m, n), b in zip(cells, included):
            if b:
                snr_per_n[n] += offers.snr[m, n]
        best = max(best, sum(math.log2(1.0 + s) for s in snr_per_n))
    return best


def random_offers(rng, m_max=5, n_max=4):
    m = int(rng.integers(1, m_max + 1))
    n = int(rng.integers(1, n_max + 1))
    snr = rng.uniform(0.2, 25.0, (m, n))
    transfer = rng.uniform(0.05, 2.5, (m, n))
    null = rng.random((m, n)) < 0.2
    snr[null] = 0.0
    transfer[null] = 0.0
    return OfferMatrix(snr, transfer)


# -- capacity / spend -------------------------------------------------------


def test_capacity_examples():
    offers = offers_1d([1.0, 2.0], [0.1, 0.2])
    assert capacity(offers, [()]) == 0.0
    assert capacity(offers, [(0, 1)]) == pytest.approx(2.0)  # log2(4)
    two = OfferMatrix(np.array([[1.0, 3.0]]), np.array([[0.1, 0.1]]))
    assert capacity(two, [(0,), (0,)]) == pytest.approx(1.0 + 2.0)


def test_capacity_rejects_bad_subsets():
    offers = offers_1d([1.0], [0.1])
    with pytest.raises(ValueError):
        capacity(offers, [(1,)])
    with pytest.raises(ValueError):
        capacity(offers, [(0, 0)])
    with pytest.raises(ValueError):
        capacity(offers, [(0,), (0,)])


def test_total_spend_examples():
    offers = offers_1d([10.0, 6.0, 5.0], [2.0, 1.0, 1.0])
    assert total_spend(offers, [()]) == 0.0
    assert total_spend(offers, [(0,)]) == pytest.approx(2.0)
    assert total_spend(offers, [(1, 2)]) == pytest.approx(2.0)


# -- knapsack ---------------------------------------------------------------


def test_knapsack_small_instance():
    chosen = knapsack_01(np.array([10.0, 6.0, 5.0]), np.array([2.0, 1.0, 1.0]), 2.0, 10)
    assert chosen == [1, 2]
    assert brute_force_value([10, 6, 5], [2, 1, 1], 2.0) == 11.0


def test_knapsack_zero_budget_and_single_item():
    assert knapsack_01(np.array([4.0]), np.array([1.0]), 0.0, 10) == []
    assert knapsack_01(np.array([4.0]), np.array([1.0]), 5.0, 10) == [0]


def test_knapsack_matches_brute_force_on_unit_multiples():
    rng = np.random.default_rng(31)
    resolution = 1000
    for _ in range(50):
        m = int(rng.integers(1, 11))
        gammas = rng.uniform(0.1, 30.0, m)
        transfers = rng.integers(1, 3000, m) / resolution
        budget = float(rng.integers(0, 6000)) / resolution
        chosen = knapsack_01(gammas, transfers, budget, resolution)
        assert sum(transfers[i] for i in chosen) <= budget + 1e-12
        value = sum(gammas[i] for i in chosen)
        assert value == pytest.approx(
            brute_force_value(gammas.tolist(), transfers.tolist(), budget), abs=1e-9
        )


def test_knapsack_survives_float_products():
    # 0.007 * 1000 = 7.000000000000001 must still count as 7 units
    chosen = knapsack_01(np.array([1.0]), np.array([0.007]), 0.007, 1000)
    assert chosen == [0]


# -- weight profiles and splits ---------------------------------------------


def test_weight_profiles():
    offers = OfferMatrix(
        np.array([[6.0, 3.0], [2.0, 1.0]]), np.array([[2.0, 1.0], [2.0, 1.0]])
    )
    assert np.allclose(weight_profile(offers, SelectionMethod.ESW), [1.0, 1.0])
    assert np.allclose(weight_profile(offers, SelectionMethod.ASW), [2.0, 2.0])
    assert np.allclose(weight_profile(offers, SelectionMethod.NSW), [2.0, 2.0])
    with pytest.raises(ValueError):
        weight_profile(offers, SelectionMethod.SSCPA)


def test_weight_profile_handles_empty_subcarrier():
    offers = OfferMatrix(np.array([[5.0, 0.0]]), np.array([[1.0, 0.0]]))
    assert np.allclose(weight_profile(offers, SelectionMethod.NSW), [5.0, 0.0])
    assert np.allclose(weight_profile(offers, SelectionMethod.ASW), [5.0, 0.0])


def test_equal_split_matches_per_subcarrier_knapsack():
    snr = np.array([[10.0, 10.0], [6.0, 6.0], [5.0, 5.0]])
    transfer = np.array([[2.0, 2.0], [1.0, 1.0], [1.0, 1.0]])
    problem = SelectionProblem(OfferMatrix(snr, transfer), 4.0, 10)
    res = weighted_split_selection(problem, SelectionMethod.ESW)
    for n in range(2):
        assert list(res.subsets[n]) == knapsack_01(snr[:, n], transfer[:, n], 2.0, 10)
    assert res.subsets == ((1, 2), (1, 2))
    assert res.capacity == pytest.approx(2.0 * math.log2(12.0))


def test_single_subcarrier_split_equals_full_knapsack():
    rng = np.random.default_rng(5)
    for kind in (SelectionMethod.ESW, SelectionMethod.ASW, SelectionMethod.NSW):
        gammas = rng.uniform(0.5, 20.0, 6)
        transfers = rng.uniform(0.1, 2.0, 6)
        problem = SelectionProblem(offers_1d(gammas, transfers), 3.0, 1000)
        res = weighted_split_selection(problem, kind)
        assert list(res.subsets[0]) == knapsack_01(gammas, transfers, 3.0, 1000)


def test_all_null_offers_give_empty_result():
    offers = OfferMatrix(np.zeros((2, 2)), np.zeros((2, 2)))
    problem = SelectionProblem(offers, 5.0)
    for kind in (SelectionMethod.ASW, SelectionMethod.NSW):
        res = weighted_split_selection(problem, kind)
        assert res.capacity == 0.0
        assert res.subsets == ((), ())


# -- SSCPA -------------------------------------------------------------------


def test_sscpa_hand_trace():
    # sub 0: relay0 (4, 2), relay1 (3, 1); sub 1: relay0 (2, 1)
    snr = np.array([[4.0, 2.0], [3.0, 0.0]])
    transfer = np.array([[2.0, 1.0], [1.0, 0.0]])
    res = sscpa(SelectionProblem(OfferMatrix(snr, transfer), 3.0))
    assert res.subsets == ((1,), (0,))
    assert res.spend == pytest.approx(2.0)
    assert res.capacity == pytest.approx(math.log2(4.0) + math.log2(3.0))


def test_sscpa_zero_budget_and_single_offer():
    offers = offers_1d([4.0], [1.0])
    assert sscpa(SelectionProblem(offers, 0.0)).subsets == ((),)
    assert sscpa(SelectionProblem(offers, 2.0)).subsets == ((0,),)


def test_sscpa_tie_breaks_to_lowest_relay():
    offers = offers_1d([4.0, 4.0], [1.0, 1.0])
    res = sscpa(SelectionProblem(offers, 1.0))
    assert res.subsets == ((0,),)


# -- overall heuristic and baseline -------------------------------------------


def test_overall_dominates_each_candidate():
    rng = np.random.default_rng(13)
    for _ in range(25):
        problem = SelectionProblem(random_offers(rng), float(rng.uniform(0.2, 6.0)))
        overall = overall_heuristic(problem)
        candidates = [
            weighted_split_selection(problem, k)
            for k in (SelectionMethod.ESW, SelectionMethod.ASW, SelectionMethod.NSW)
        ] + [sscpa(problem)]
        assert overall.method is SelectionMethod.OVERALL
        best = max(c.capacity for c in candidates)
        assert overall.capacity == pytest.approx(best, abs=1e-12)
        for cand in candidates:
            assert overall.capacity >= cand.capacity - 1e-12


def test_overall_single_subcarrier_is_dp_exact():
    gammas = [10.0, 6.0, 5.0]
    transfers = [2.0, 1.0, 1.0]
    problem = SelectionProblem(offers_1d(gammas, transfers), 2.0, 10)
    res = overall_heuristic(problem)
    assert res.capacity == pytest.approx(math.log2(12.0))


def test_best_snr_greedy_trace():
    snr = np.array([[10.0, 0.0], [0.0, 9.0]])
    transfer = np.array([[5.0, 0.0], [0.0, 1.0]])
    res = best_snr_baseline(SelectionProblem(OfferMatrix(snr, transfer), 1.0))
    assert res.subsets == ((), (1,))
    assert res.spend == pytest.approx(1.0)


def test_best_snr_zero_budget():
    res = best_snr_baseline(SelectionProblem(offers_1d([5.0], [1.0]), 0.0))
    assert res.capacity == 0.0


def test_best_snr_can_beat_the_overall_heuristic():
    # The four candidate heuristics do not dominate the greedy baseline
    # pointwise.  Here one relay offers a cheap pair, a star pair, and a
    # mid-priced pair on three subcarriers: the greedy skips the cheap pair
    # and affords both others, while SSCPA commits to the cheap pair on its
    # first visit and every budget split strands money in slices.
    snr = np.array([[2.102, 21.761, 2.256]])
    transfer = np.array([[0.824, 1.511, 1.407]])
    problem = SelectionProblem(OfferMatrix(snr, transfer), 3.509)
    greedy = best_snr_baseline(problem)
    overall = overall_heuristic(problem)
    assert greedy.subsets == ((), (0,), (0,))
    assert greedy.capacity > overall.capacity
    # feasibility and oracle dominance still hold for both
    exact = exhaustive_optimum(problem).capacity
    assert greedy.capacity <= exact + 1e-9
    assert overall.capacity <= exact + 1e-9


def test_best_snr_never_beats_exhaustive():
    rng = np.random.default_rng(41)
    for _ in range(25):
        offers = random_offers(rng, m_max=4, n_max=3)
        budget = float(rng.uniform(0.2, 4.0))
        problem = SelectionProblem(offers, budget)
        assert (
            best_snr_baseline(problem).capacity
            <= exhaustive_optimum(problem).capacity + 1e-9
        )


# -- relaxed bound -------------------------------------------------------------


def test_relaxed_bound_with_slack_budget_is_exact():
    rng = np.random.default_rng(8)
    offers = random_offers(rng)
    total = float(offers.transfer.sum())
    problem = SelectionProblem(offers, total + 1.0)
    everything = [
        [m for m in range(offers.m) if offers.snr[m, n] > 0] for n in range(offers.n)
    ]
    assert relaxed_upper_bound(problem) == pytest.approx(
        capacity(offers, everything), abs=1e-12
    )


def test_relaxed_bound_single_fractional_offer():
    gamma, t = 7.0, 0.8
    problem = SelectionProblem(offers_1d([gamma], [t]), t / 2.0)
    bound = relaxed_upper_bound(problem)
    exact = math.log2(1.0 + gamma / 2.0)
    assert exact - 1e-12 <= bound <= exact + 2e-6


def test_relaxed_bound_dominates_exhaustive():
    rng = np.random.default_rng(23)
    for _ in range(20):
        offers = random_offers(rng, m_max=3, n_max=2)
        budget = float(rng.uniform(0.1, 3.0))
        problem = SelectionProblem(offers, budget)
        assert relaxed_upper_bound(problem) >= exhaustive_optimum(problem).capacity - 1e-9


def test_relaxed_bound_zero_budget():
    problem = SelectionProblem(offers_1d([5.0], [1.0]), 0.0)
    assert relaxed_upper_bound(problem) == pytest.approx(0.0, abs=1e-9)


# -- exhaustive oracle ---------------------------------------------------------


def test_exhaustive_matches_brute_force_and_knapsack():
    gammas = [10.0, 6.0, 5.0]
    transfers = [2.0, 1.0, 1.0]
    problem = SelectionProblem(offers_1d(gammas, transfers), 2.0)
    res = exhaustive_optimum(problem)
    assert res.capacity == pytest.approx(math.log2(12.0))
    chosen = knapsack_01(np.array(gammas), np.array(transfers), 2.0, 1000)
    assert res.capacity == pytest.approx(
        math.log2(1.0 + sum(gammas[i] for i in chosen))
    )


def test_exhaustive_agrees_with_independent_enumeration():
    rng = np.random.default_rng(53)
    for _ in range(15):
        offers = random_offers(rng, m_max=3, n_max=3)
        budget = float(rng.uniform(0.2, 3.0))
        problem = SelectionProblem(offers, budget)
        assert exhaustive_optimum(problem).capacity == pytest.approx(
            brute_force_selection(offers, budget), abs=1e-9
        )


def test_exhaustive_takes_everything_under_huge_budget():
    rng = np.random.default_rng(61)
    offers = random_offers(rng, m_max=3, n_max=3)
    res = exhaustive_optimum(SelectionProblem(offers, 1e9))
    everything = [
        tuple(m for m in range(offers.m) if offers.snr[m, n] > 0)
        for n in range(offers.n)
    ]
    assert res.subsets == tuple(everything)


def test_exhaustive_refuses_large_instances():
    offers = OfferMatrix(np.ones((3, 7)), np.ones((3, 7)))
    with pytest.raises(ValueError):
        exhaustive_optimum(SelectionProblem(offers, 1.0))


# -- global properties ---------------------------------------------------------


def test_every_method_respects_budget_exactly():
    rng = np.random.default_rng(71)
    for _ in range(40):
        offers = random_offers(rng)
        budget = float(rng.uniform(0.0, 5.0))
        problem = SelectionProblem(offers, budget)
        results = [
            weighted_split_selection(problem, SelectionMethod.ESW),
            weighted_split_selection(problem, SelectionMethod.ASW),
            weighted_split_selection(problem, SelectionMethod.NSW),
            sscpa(problem),
            overall_heuristic(problem),
            best_snr_baseline(problem),
        ]
        if offers.m * offers.n <= 20:
            results.append(exhaustive_optimum(problem))
        for res in results:
            assert res.spend <= budget
            assert res.spend == pytest.approx(
                total_spend(offers, res.subsets), abs=1e-9
            )


def test_split_heuristics_monotone_in_budget():
    # Weight profiles do not depend on the budget, so every per-subcarrier
    # knapsack sees a non-decreasing budget and the split capacities are
    # monotone; the overall heuristic is bounded below by the monotone ESW.
    rng = np.random.default_rng(83)
    budgets = np.linspace(0.0, 8.0, 17)
    for _ in range(10):
        offers = random_offers(rng, m_max=6, n_max=4)
        esw, asw, nsw, overall = [], [], [], []
        for budget in budgets:
            problem = SelectionProblem(offers, float(budget))
            esw.append(weighted_split_selection(problem, SelectionMethod.ESW).capacity)
            asw.append(weighted_split_selection(problem, SelectionMethod.ASW).capacity)
            nsw.append(weighted_split_selection(problem, SelectionMethod.NSW).capacity)
            overall.append(overall_heuristic(problem).capacity)
        for series in (esw, asw, nsw):
            assert np.all(np.diff(series) >= -1e-12)
        assert np.all(np.array(overall) >= np.array(esw) - 1e-12)


def test_sscpa_is_not_monotone_in_budget():
    # Known non-monotone case: just enough extra budget makes SSCPA grab the
    # single highest-efficiency offer, which exhausts the budget and starves
    # the other subcarriers.  The split heuristics keep the overall result
    # from collapsing, but SSCPA alone can lose capacity as the budget grows.
    snr = np.array([[13.0, 0.0, 0.0], [3.0, 3.0, 3.0]])
    transfer = np.array([[1.0, 0.0, 0.0], [0.3, 0.3, 0.3]])
    offers = OfferMatrix(snr, transfer)
    tight = sscpa(SelectionProblem(offers, 0.9))
    loose = sscpa(SelectionProblem(offers, 1.0))
    assert tight.capacity == pytest.approx(3.0 * math.log2(4.0))
    assert loose.capacity == pytest.approx(math.log2(14.0))
    assert loose.capacity < tight.capacity
    assert (
        overall_heuristic(SelectionProblem(offers, 1.0)).capacity
        >= tight.capacity - 1e-12
    )


# -- CSV wire formats ----------------------------------------------------------


def test_offers_csv_round_trip():
    rng = np.random.default_rng(91)
    offers = random_offers(rng)
    again = offers_from_csv(offers_to_csv(offers))
    assert np.allclose(offers.snr, again.snr)
    assert np.allclose(offers.transfer, again.transfer)


def test_offers_csv_reports_bad_line():
    text = "m,n,gamma_linear,transfer\n0,0,1.5,0.2\n0,x,2,0.1\n"
    with pytest.raises(ValueError, match="line 3"):
        offers_from_csv(text)
    with pytest.raises(ValueError, match="line 1"):
        offers_from_csv("nope\n")


def test_selection_csv_layout():
    offers = offers_1d([10.0, 6.0, 5.0], [2.0, 1.0, 1.0])
    problem = SelectionProblem(offers, 2.0, 10)
    res = overall_heuristic(problem)
    text = selection_to_csv([res], bounds={"Relaxed": 3.7})
    lines = text.strip().split("\n")
    assert lines[0] == "method,n,selected_m_list,capacity,spend"
    assert lines[1].startswith("Overall,0,1;2,")
    assert lines[-1] == "Relaxed,,,3.7,"


def test_offer_matrix_validation():
    with pytest.raises(ValueError):
        OfferMatrix(np.array([[0.0]]), np.array([[1.0]]))  # null with payment
    with pytest.raises(ValueError):
        OfferMatrix(np.array([[-1.0]]), np.array([[0.0]]))
    with pytest.raises(ValueError):
        SelectionProblem(offers_1d([1.0], [1.0]), -1.0)
