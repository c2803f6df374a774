"""Budget-constrained relay selection from accepted contract offers.

Given the per-relay, per-subcarrier contract pairs the source has collected,
selecting relays to maximize total capacity under one overall budget is a
nonlinear non-separable knapsack problem.  This module provides the
budget-splitting heuristics and the sequential allocation heuristic the
source actually runs, a best-SNR greedy baseline, a fractional-relaxation
upper bound, and an exhaustive oracle for small instances.
"""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass
from enum import Enum

import numpy as np

__all__ = [
    "OfferMatrix",
    "SelectionMethod",
    "SelectionProblem",
    "SelectionResult",
    "capacity",
    "total_spend",
    "knapsack_01",
    "weight_profile",
    "weighted_split_selection",
    "sscpa",
    "overall_heuristic",
    "best_snr_baseline",
    "relaxed_upper_bound",
    "exhaustive_optimum",
    "offers_to_csv",
    "offers_from_csv",
    "selection_to_csv",
]

_UNIT_SNAP = 1e-9  # guards ceil/floor against float noise in t * resolution


class SelectionMethod(str, Enum):
    ESW = "ESW"
    ASW = "ASW"
    NSW = "NSW"
    SSCPA = "SSCPA"
    OVERALL = "Overall"
    BEST_SNR = "BestSNR"
    EXHAUSTIVE = "Exhaustive"


_SPLIT_KINDS = (SelectionMethod.ESW, SelectionMethod.ASW, SelectionMethod.NSW)


@dataclass(frozen=True)
class OfferMatrix:
    """Accepted contract pairs per (relay, subcarrier); zeros mean no offer."""

    snr: np.ndarray
    transfer: np.ndarray

    def __post_init__(self) -> None:
        snr = np.ascontiguousarray(self.snr, dtype=float)
        transfer = np.ascontiguousarray(self.transfer, dtype=float)
        if snr.ndim != 2 or snr.shape != transfer.shape:
            raise ValueError("snr and transfer must be equal-shape 2-D arrays")
        if np.any(snr < 0.0) or np.any(transfer < 0.0):
            raise ValueError("offers must be non-negative")
        if np.any((snr == 0.0) & (transfer > 0.0)):
            raise ValueError("null offers must carry zero transfer")
        snr.setflags(write=False)
        transfer.setflags(write=False)
        object.__setattr__(self, "snr", snr)
        object.__setattr__(self, "transfer", transfer)

    @property
    def m(self) -> int:
        return self.snr.shape[0]

    @property
    def n(self) -> int:
        return self.snr.shape[1]


@dataclass(frozen=True)
class SelectionProblem:
    offers: OfferMatrix
    budget: float
    resolution: int = 1000

    def __post_init__(self) -> None:
        if self.budget < 0.0:
            raise ValueError("budget must be non-negative")
        if self.resolution < 1:
            raise ValueError("resolution must be a positive unit count")


@dataclass(frozen=True)
class SelectionResult:
    subsets: tuple[tuple[int, ...], ...]
    capacity: float
    spend: float
    method: SelectionMethod


def _check_subsets(offers: OfferMatrix, subsets: Sequence[Sequence[int]]) -> None:
    if len(subsets) != offers.n:
        raise ValueError(f"expected {offers.n} subsets, got {len(subsets)}")
    for sub in subsets:
        if any(m < 0 or m >= offers.m for m in sub):
            raise ValueError("relay index out of range")
        if len(set(sub)) != len(sub):
            raise ValueError("relay index repeated within a subcarrier")


def capacity(offers: OfferMatrix, subsets: Sequence[Sequence[int]]) -> float:
    """Total capacity sum_n log2(1 + sum of selected SNRs), bits/symbol."""
    _check_subsets(offers, subsets)
    return float(
        sum(
            math.log2(1.0 + sum(offers.snr[m, n] for m in sub))
            for n, sub in enumerate(subsets)
        )
    )


def total_spend(offers: OfferMatrix, subsets: Sequence[Sequence[int]]) -> float:
    """Total transfers paid for the selection."""
    _check_subsets(offers, subsets)
    return float(
        sum(sum(offers.transfer[m, n] for m in sub) for n, sub in enumerate(subsets))
    )


def _result(
    offers: OfferMatrix,
    subsets: Sequence[Sequence[int]],
    method: SelectionMethod,
) -> SelectionResult:
    clean = tuple(tuple(sorted(sub)) for sub in subsets)
    return SelectionResult(
        subsets=clean,
        capacity=capacity(offers, clean),
        spend=total_spend(offers, clean),
        method=method,
    )


def _empty_result(offers: OfferMatrix, method: SelectionMethod) -> SelectionResult:
    return _result(offers, [()] * offers.n, method)


def knapsack_01(
    snr_col: np.ndarray,
    transfer_col: np.ndarray,
    sub_budget: float,
    resolution: int,
) -> list[int]:
    """Exact 0-1 knapsack on one subcarrier's offers, discretized to money units.

    Transfers round up and the budget rounds down at `resolution` units per
    1.0 of money, so the selection never overdraws the true budget.  Returns
    the selected relay indices in ascending order.
    """
    gammas = np.asarray(snr_col, dtype=float)
    transfers = np.asarray(transfer_col, dtype=float)
    if gammas.shape != transfers.shape or gammas.ndim != 1:
        raise ValueError("snr and transfer columns must be equal-length vectors")
    if sub_budget < 0.0:
        raise ValueError("sub-budget must be non-negative")

    units = int(math.floor(sub_budget * resolution + _UNIT_SNAP))
    weights = np.ceil(transfers * resolution - _UNIT_SNAP).astype(np.int64)
    weights = np.maximum(weights, 0)
    usable = np.nonzero((gammas > 0.0) & (weights <= units))[0]
    if usable.size == 0:
        return []

    best = np.zeros(units + 1)
    took = np.zeros((usable.size, units + 1), dtype=bool)
    for i, item in enumerate(usable):
        w = int(weights[item])
        g = gammas[item]
        if w == 0:
            cand = best + g
        else:
            cand = np.empty(units + 1)
            cand[:w] = -1.0
            cand[w:] = best[:-w] + g
        take = cand > best
        took[i] = take
        best = np.where(take, cand, best)

    chosen: list[int] = []
    remaining = units
    for i in range(usable.size - 1, -1, -1):
        if took[i, remaining]:
            chosen.append(int(usable[i]))
            remaining -= int(weights[usable[i]])
    chosen.reverse()
    return chosen


def _efficiency(offers: OfferMatrix) -> np.ndarray:
    """SNR per unit transfer; zero-transfer entries count as zero efficiency."""
    with np.errstate(divide="ignore", invalid="ignore"):
        eff = np.where(offers.transfer > 0.0, offers.snr / offers.transfer, 0.0)
    return eff


def weight_profile(offers: OfferMatrix, kind: SelectionMethod) -> np.ndarray:
    """Per-subcarrier budget weights: equal, mean-efficiency, or net-efficiency."""
    if kind not in _SPLIT_KINDS:
        raise ValueError(f"no weight profile for method {kind}")
    if kind is SelectionMethod.ESW:
        return np.ones(offers.n)
    if kind is SelectionMethod.ASW:
        if offers.m == 0:
            return np.zeros(offers.n)
        return _efficiency(offers).sum(axis=0) / offers.m
    sum_t = offers.transfer.sum(axis=0)
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(sum_t > 0.0, offers.snr.sum(axis=0) / sum_t, 0.0)


def weighted_split_selection(
    problem: SelectionProblem, kind: SelectionMethod
) -> SelectionResult:
    """Split the budget by a weight profile, then solve one knapsack per subcarrier.

    Unspent per-subcarrier remainders are not redistributed.
    """
    offers = problem.offers
    weights = weight_profile(offers, kind)
    total = weights.sum()
    if total <= 0.0:
        return _empty_result(offers, kind)
    subsets = [
        knapsack_01(
            offers.snr[:, n],
            offers.transfer[:, n],
            weights[n] * problem.budget / total,
            problem.resolution,
        )
        for n in range(offers.n)
    ]
    return _result(offers, subsets, kind)


def sscpa(problem: SelectionProblem) -> SelectionResult:
    """Sequential allocation: round-robin the subcarriers, each visit taking
    the most efficient unallocated offer that fits the remaining budget;
    stops once a full pass allocates nothing."""
    offers = problem.offers
    if offers.m == 0:
        return _empty_result(offers, SelectionMethod.SSCPA)
    eff = _efficiency(offers)
    remaining = problem.budget
    allocated = np.zeros(offers.snr.shape, dtype=bool)
    subsets: list[list[int]] = [[] for _ in range(offers.n)]
    while True:
        progress = False
        for n in range(offers.n):
            pickable = (
                ~allocated[:, n]
                & (offers.snr[:, n] > 0.0)
                & (offers.transfer[:, n] <= remaining)
            )
            if not pickable.any():
                continue
            column = np.where(pickable, eff[:, n], -1.0)
            m = int(np.argmax(column))
            allocated[m, n] = True
            subsets[n].append(m)
            remaining -= offers.transfer[m, n]
            progress = True
        if not progress:
            break
    return _result(offers, subsets, SelectionMethod.SSCPA)


def overall_heuristic(problem: SelectionProblem) -> SelectionResult:
    """Best of the ESW/ASW/NSW splits and SSCPA; ties keep the earlier method."""
    candidates = [weighted_split_selection(problem, kind) for kind in _SPLIT_KINDS]
    candidates.append(sscpa(problem))
    best = max(candidates, key=lambda r: r.capacity)
    return SelectionResult(
        subsets=best.subsets,
        capacity=best.capacity,
        spend=best.spend,
        method=SelectionMethod.OVERALL,
    )


def best_snr_baseline(problem: SelectionProblem) -> SelectionResult:
    """Greedy by raw SNR across all offers, skipping what no longer fits."""
    offers = problem.offers
    ms, ns = np.nonzero(offers.snr > 0.0)
    order = np.lexsort((ms, ns, -offers.snr[ms, ns]))
    remaining = problem.budget
    subsets: list[list[int]] = [[] for _ in range(offers.n)]
    for idx in order:
        m, n = int(ms[idx]), int(ns[idx])
        t = offers.transfer[m, n]
        if t <= remaining:
            subsets[n].append(m)
            remaining -= t
    return _result(offers, subsets, SelectionMethod.BEST_SNR)


def _waterfill_rows(
    eff: np.ndarray,
    cum_snr: np.ndarray,
    cum_transfer: np.ndarray,
    base_snr: np.ndarray,
    lam: float,
):
    """Per-subcarrier box-constrained maximizer of log2(1+b+s) - lam*spend.

    Offers arrive sorted by efficiency; each is bought in full while the
    marginal value at the accumulated SNR exceeds lam times its price, the
    marginal offer fractionally.  Returns (snr bought, money spent) per row.
    """
    stop = eff / (lam * math.log(2.0)) - 1.0 - base_snr[:, None]
    prev_snr = np.concatenate([np.zeros((cum_snr.shape[0], 1)), cum_snr[:, :-1]], axis=1)
    prev_spend = np.concatenate(
        [np.zeros((cum_transfer.shape[0], 1)), cum_transfer[:, :-1]], axis=1
    )
    over = cum_snr > stop
    first = np.where(over.any(axis=1), over.argmax(axis=1), cum_snr.shape[1] - 1)
    rows = np.arange(cum_snr.shape[0])
    full_all = ~over.any(axis=1)

    snr_at = np.where(full_all, cum_snr[rows, first], prev_snr[rows, first])
    spend_at = np.where(full_all, cum_transfer[rows, first], prev_spend[rows, first])
    gamma_b = cum_snr[rows, first] - prev_snr[rows, first]
    t_b = cum_transfer[rows, first] - prev_spend[rows, first]
    room = np.clip(stop[rows, first] - prev_snr[rows, first], 0.0, gamma_b)
    with np.errstate(divide="ignore", invalid="ignore"):
        frac = np.where(gamma_b > 0.0, room / gamma_b, 0.0)
    frac = np.where(full_all, 0.0, frac)
    return snr_at + frac * gamma_b * ~full_all, spend_at + frac * t_b * ~full_all


def relaxed_upper_bound(problem: SelectionProblem) -> float:
    """Upper bound on the selection optimum from the fractional relaxation.

    Solves max sum_n log2(1 + sum_m x*snr) over 0 <= x <= 1 and the budget
    by bisecting the budget multiplier; the inner problem water-fills each
    subcarrier in efficiency order.  The returned dual value is always a
    valid bound; bisection stops at duality gap 1e-6 or 200 iterations.
    """
    offers = problem.offers
    budget = problem.budget
    free = (offers.transfer == 0.0) & (offers.snr > 0.0)
    base_snr = np.where(free, offers.snr, 0.0).sum(axis=0)
    base_cap = float(np.log2(1.0 + base_snr).sum())

    buyable = (offers.transfer > 0.0) & (offers.snr > 0.0)
    if not buyable.any():
        return base_cap
    if float(offers.transfer.sum()) <= budget:
        return float(
            np.log2(1.0 + base_snr + np.where(buyable, offers.snr, 0.0).sum(axis=0)).sum()
        )

    # Rows sorted by efficiency, padded with worthless items so every
    # subcarrier has the same width; padding never gets bought.
    eff = np.where(buyable, _efficiency(offers), 0.0)
    snr = np.where(buyable, offers.snr, 0.0)
    transfer = np.where(buyable, offers.transfer, 0.0)
    order = np.argsort(-eff, axis=0)
    eff = np.take_along_axis(eff, order, axis=0).T
    cum_snr = np.cumsum(np.take_along_axis(snr, order, axis=0).T, axis=1)
    cum_transfer = np.cumsum(np.take_along_axis(transfer, order, axis=0).T, axis=1)

    lam_max = float(eff.max()) / math.log(2.0) + 1.0
    lo, hi = 0.0, lam_max
    dual_best = math.inf
    primal_best = base_cap
    for _ in range(200):
        lam = 0.5 * (lo + hi)
        snr_rows, spend_rows = _waterfill_rows(eff, cum_snr, cum_transfer, base_snr, lam)
        value = float(np.log2(1.0 + base_snr + snr_rows).sum())
        spent = float(spend_rows.sum())
        dual_best = min(dual_best, value - lam * spent + lam * budget)
        if spent <= budget:
            primal_best = max(primal_best, value)
            hi = lam
        else:
            lo = lam
        if dual_best - primal_best <= 1e-6:
            break
    return dual_best


def exhaustive_optimum(problem: SelectionProblem) -> SelectionResult:
    """Brute-force optimum over all inclusion vectors; refuses M*N > 20."""
    offers = problem.offers
    if offers.m * offers.n > 20:
        raise ValueError(
            f"instance too large for exhaustive search: M*N = {offers.m * offers.n} > 20"
        )
    ms, ns = np.nonzero(offers.snr > 0.0)
    cells = list(zip(ms.tolist(), ns.tolist()))
    count = len(cells)
    gamma_cells = offers.snr[ms, ns] if count else np.empty(0)
    t_cells = offers.transfer[ms, ns] if count else np.empty(0)

    best_cap = -1.0
    best_mask = 0
    chunk = 1 << 16
    for start in range(0, 1 << count, chunk):
        stop = min(start + chunk, 1 << count)
        masks = np.arange(start, stop, dtype=np.int64)
        bits = ((masks[:, None] >> np.arange(count)) & 1).astype(float)
        spends = bits @ t_cells if count else np.zeros(len(masks))
        caps = np.zeros(len(masks))
        for n in range(offers.n):
            idx = np.nonzero(ns == n)[0]
            if idx.size:
                caps += np.log2(1.0 + bits[:, idx] @ gamma_cells[idx])
        caps[spends > problem.budget] = -np.inf
        i = int(np.argmax(caps))
        if caps[i] > best_cap:
            best_cap = float(caps[i])
            best_mask = start + i

    subsets: list[list[int]] = [[] for _ in range(offers.n)]
    for i, (m, n) in enumerate(cells):
        if (best_mask >> i) & 1:
            subsets[n].append(m)
    return _result(offers, subsets, SelectionMethod.EXHAUSTIVE)


# -- CSV wire formats ------------------------------------------------------


def offers_to_csv(offers: OfferMatrix) -> str:
    lines = ["m,n,gamma_linear,transfer"]
    for m in range(offers.m):
        for n in range(offers.n):
            lines.append(
                f"{m},{n},{offers.snr[m, n]:.12g},{offers.transfer[m, n]:.12g}"
            )
    return "\n".join(lines) + "\n"


def offers_from_csv(text: str) -> OfferMatrix:
    """Parse the offers wire format; raises ValueError naming the bad line."""
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0].strip() != "m,n,gamma_linear,transfer":
        raise ValueError("line 1: expected header 'm,n,gamma_linear,transfer'")
    entries: list[tuple[int, int, float, float]] = []
    for lineno, line in enumerate(lines[1:], start=2):
        parts = line.split(",")
        if len(parts) != 4:
            raise ValueError(f"line {lineno}: expected 4 comma-separated fields")
        try:
            m, n = int(parts[0]), int(parts[1])
            g, t = float(parts[2]), float(parts[3])
        except ValueError as exc:
            raise ValueError(f"line {lineno}: {exc}") from None
        if m < 0 or n < 0:
            raise ValueError(f"line {lineno}: negative relay or subcarrier index")
        entries.append((m, n, g, t))
    if not entries:
        return OfferMatrix(np.zeros((0, 0)), np.zeros((0, 0)))
    m_max = max(e[0] for e in entries) + 1
    n_max = max(e[1] for e in entries) + 1
    snr = np.zeros((m_max, n_max))
    transfer = np.zeros((m_max, n_max))
    for m, n, g, t in entries:
        snr[m, n] = g
        transfer[m, n] = t
    return OfferMatrix(snr, transfer)


def selection_to_csv(results: Sequence[SelectionResult], bounds: dict | None = None) -> str:
    """Rows (method, n, selected_m_list, capacity, spend); capacity and spend
    are the method's totals.  `bounds` adds subset-free rows, e.g. the
    relaxed upper bound."""
    lines = ["method,n,selected_m_list,capacity,spend"]
    for res in results:
        for n, sub in enumerate(res.subsets):
            picks = ";".join(str(m) for m in sub)
            lines.append(
                f"{res.method.value},{n},{picks},{res.capacity:.12g},{res.spend:.12g}"
            )
    for name, value in (bounds or {}).items():
        lines.append(f"{name},,,{value:.12g},")
    return "\n".join(lines) + "\n"
