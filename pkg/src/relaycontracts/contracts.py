"""Contract menu synthesis and auditing for relay agents.

A contract is a pair (snr, transfer): the destination SNR a relay promises
on one subcarrier and the payment it receives for delivering it.  Under
complete information the source extracts all relay surplus (first-best);
under asymmetric information it screens relay types with a menu that
distorts SNR downward below the top type and concedes information rent
(second-best).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .distributions import TypeDistribution, TypeGrid

__all__ = [
    "ContractPair",
    "ContractMenu",
    "MenuAudit",
    "RentReport",
    "source_utility",
    "relay_utility",
    "first_best_contract",
    "first_best_menu",
    "second_best_menu",
    "continuous_second_best_snr",
    "continuous_schedule",
    "select_best_contract",
    "verify_menu",
    "information_rent",
    "snr_to_db",
    "menu_to_csv",
]

_TWO_LN2 = 2.0 * math.log(2.0)
MONEY_TOL = 1e-9


def source_utility(snr: float) -> float:
    """Half-duplex Shannon utility of one relayed subcarrier, bits/symbol."""
    return 0.5 * math.log2(1.0 + snr)


def snr_to_db(snr_linear: float) -> float:
    return 10.0 * math.log10(snr_linear) if snr_linear > 0.0 else float("-inf")


@dataclass(frozen=True)
class ContractPair:
    snr: float
    transfer: float

    def __post_init__(self) -> None:
        if self.snr < 0.0 or self.transfer < 0.0:
            raise ValueError("contract SNR and transfer must be non-negative")


@dataclass(frozen=True)
class ContractMenu:
    """K contract pairs, one per designed type of `grid`, at cost coefficient c.

    Construction does not enforce monotonicity or incentive compatibility;
    `verify_menu` reports them, so deliberately broken menus can be audited.
    """

    pairs: tuple[ContractPair, ...]
    grid: TypeGrid
    cost_coeff: float
    pooled: bool = False

    def __post_init__(self) -> None:
        if len(self.pairs) != self.grid.k:
            raise ValueError(
                f"menu has {len(self.pairs)} pairs for {self.grid.k} types"
            )
        if self.cost_coeff <= 0.0:
            raise ValueError("cost coefficient must be positive")

    @property
    def snrs(self) -> np.ndarray:
        return np.array([p.snr for p in self.pairs])

    @property
    def transfers(self) -> np.ndarray:
        return np.array([p.transfer for p in self.pairs])


@dataclass(frozen=True)
class MenuAudit:
    """Truth table of the IR/IC constraint system for one menu."""

    ir_satisfied: tuple[bool, ...]
    ir_binding_at_bottom: bool
    ic_matrix: np.ndarray
    adjacent_ic_binding: tuple[bool, ...]
    monotone: bool

    @property
    def all_ok(self) -> bool:
        return (
            all(self.ir_satisfied)
            and self.ir_binding_at_bottom
            and bool(self.ic_matrix.all())
            and all(self.adjacent_ic_binding)
            and self.monotone
        )


@dataclass(frozen=True)
class RentReport:
    """Surplus each designed type earns from its own pair."""

    rents: np.ndarray


def relay_utility(pair: ContractPair, theta: float, cost_coeff: float) -> float:
    """Relay profit t - c*snr/theta from honoring `pair` at true type theta."""
    if theta <= 0.0:
        raise ValueError("relay type must be positive")
    if cost_coeff <= 0.0:
        raise ValueError("cost coefficient must be positive")
    return pair.transfer - cost_coeff * pair.snr / theta


def _snr_from_marginal_cost(chat: float) -> float:
    """Maximizer of 0.5*log2(1+g) - chat*g over g >= 0.

    Shared by the first-best contract and the top of the second-best menu so
    the no-distortion-at-the-top identity holds bitwise.
    """
    return max(1.0 / (_TWO_LN2 * chat) - 1.0, 0.0)


def first_best_contract(theta: float, cost_coeff: float) -> ContractPair:
    """Complete-information contract: efficient SNR, zero relay surplus."""
    if theta <= 0.0:
        raise ValueError("relay type must be positive")
    if cost_coeff <= 0.0:
        raise ValueError("cost coefficient must be positive")
    snr = _snr_from_marginal_cost(cost_coeff / theta)
    return ContractPair(snr, cost_coeff * snr / theta)


def first_best_menu(grid: TypeGrid, cost_coeff: float) -> ContractMenu:
    """First-best pair at every grid type (not incentive compatible)."""
    pairs = tuple(first_best_contract(d, cost_coeff) for d in grid.deltas)
    return ContractMenu(pairs, grid, cost_coeff)


def _pava_nonincreasing(weights_num: np.ndarray, weights_den: np.ndarray):
    """Pool adjacent violators of the ratio sequence num/den (non-increasing).

    Blocks carry (sum num, sum den, count); a block with zero denominator has
    ratio +inf, so it can only survive unpooled at the head of the sequence.
    Returns (block ratios, block lengths).
    """
    blocks: list[list[float]] = []

    def ratio(b: list[float]) -> float:
        return b[0] / b[1] if b[1] > 0.0 else math.inf

    for num, den in zip(weights_num, weights_den):
        blocks.append([num, den, 1])
        while len(blocks) >= 2 and ratio(blocks[-2]) < ratio(blocks[-1]):
            num2, den2, cnt2 = blocks.pop()
            blocks[-1][0] += num2
            blocks[-1][1] += den2
            blocks[-1][2] += cnt2
    return [ratio(b) for b in blocks], [b[2] for b in blocks]


def second_best_menu(grid: TypeGrid, cost_coeff: float) -> ContractMenu:
    """Optimal screening menu for asymmetric information over `grid`.

    Each SNR below the top maximizes the type's expected virtual surplus,
    where the virtual marginal cost inflates c/delta_k by the aggregated
    hazard weight of all higher types; the top type gets its efficient SNR.
    Transfers follow the binding downward-adjacent-IC recursion from the
    bottom type's binding IR.  If the pointwise maximizers are not monotone
    the menu is projected onto the monotone cone by weighted pool-adjacent-
    violators and flagged `pooled`.
    """
    if cost_coeff <= 0.0:
        raise ValueError("cost coefficient must be positive")
    deltas = grid.deltas
    k = grid.k

    own_mass = grid.probs.sum(axis=1)
    tail_mass = own_mass[::-1].cumsum()[::-1]  # mass at type k or above, all subcarriers

    # Rows with an empty tail never bind anything: they duplicate the last
    # live pair below.  The bottom row is always live (tail_mass[0] == N).
    n_live = int(np.nonzero(tail_mass > 0.0)[0][-1]) + 1

    # Virtual marginal cost weight of gamma_k in the reduced objective:
    # W_k = c * (tail_k/delta_k - tail_{k+1}/delta_{k+1}), with empty tail above K.
    tail_next = np.append(tail_mass[1:], 0.0)
    delta_next = np.append(deltas[1:], deltas[-1])
    virtual_w = cost_coeff * (tail_mass / deltas - tail_next / delta_next)

    # The top live type never pools (its ratio c/delta is a strict minimum),
    # so project only the rows below it and append the efficient top.
    ratios, lengths = _pava_nonincreasing(
        virtual_w[: n_live - 1], own_mass[: n_live - 1]
    )
    chat = np.repeat(ratios, lengths) if ratios else np.empty(0)
    gammas = np.empty(k)
    gammas[: n_live - 1] = [_snr_from_marginal_cost(c) for c in chat]
    gammas[n_live - 1] = _snr_from_marginal_cost(cost_coeff / deltas[n_live - 1])
    gammas[n_live:] = gammas[n_live - 1]
    pooled = len(ratios) < n_live - 1 or n_live < k

    transfers = np.empty(k)
    transfers[0] = cost_coeff * gammas[0] / deltas[0]
    if k > 1:
        transfers[1:] = cost_coeff * np.diff(gammas) / deltas[1:]
    transfers = transfers.cumsum()

    pairs = tuple(ContractPair(g, t) for g, t in zip(gammas, transfers))
    return ContractMenu(pairs, grid, cost_coeff, pooled=pooled)


def continuous_second_best_snr(
    theta: float, dist: TypeDistribution, cost_coeff: float
) -> float:
    """Pointwise maximizer of the continuous screening objective at theta.

    The hazard-rate term (1-F)/f inflates the marginal cost; at the top of
    the support it vanishes and the schedule meets the first-best SNR.
    """
    if cost_coeff <= 0.0:
        raise ValueError("cost coefficient must be positive")
    if theta < dist.low or theta > dist.high:
        raise ValueError(f"type {theta} outside support [{dist.low}, {dist.high}]")
    if theta <= 0.0:
        raise ValueError("relay type must be positive")
    density = dist.pdf(theta)
    if density <= 0.0:
        raise ValueError(f"type density vanishes at {theta}")
    hazard = (1.0 - dist.cdf(theta)) / density
    chat = cost_coeff / theta + cost_coeff * hazard / theta**2
    return _snr_from_marginal_cost(chat)


def continuous_schedule(
    dist: TypeDistribution, cost_coeff: float, num: int = 1000
):
    """Sample the continuous schedule on a grid and check monotonicity.

    Returns (thetas, snrs, monotone).  A non-monotone schedule would need
    the ironing construction, which this library does not provide; a
    warning flags the condition for the caller.
    """
    thetas = np.linspace(dist.low, dist.high, num)
    snrs = np.array(
        [continuous_second_best_snr(t, dist, cost_coeff) for t in thetas]
    )
    monotone = bool(np.all(np.diff(snrs) >= -1e-12))
    if not monotone:
        warnings.warn(
            "continuous schedule is not monotone on the sampled grid; "
            "pointwise maximization is not the optimal schedule here",
            stacklevel=2,
        )
    return thetas, snrs, monotone


def select_best_contract(menu: ContractMenu, theta: float) -> int | None:
    """Index of the relay's preferred pair at true type theta, or None.

    None means every pair yields strictly negative utility, so the relay
    keeps the null contract (0, 0).  Ties break toward the lowest index.
    """
    if theta <= 0.0:
        raise ValueError("relay type must be positive")
    utilities = menu.transfers - menu.cost_coeff * menu.snrs / theta
    best = int(np.argmax(utilities))
    return None if utilities[best] < 0.0 else best


def verify_menu(menu: ContractMenu, tol: float = MONEY_TOL) -> MenuAudit:
    """Evaluate every IR and IC inequality of `menu` at money tolerance tol."""
    gammas = menu.snrs
    transfers = menu.transfers
    deltas = menu.grid.deltas
    c = menu.cost_coeff

    # utilities[k, j]: type k's profit from taking pair j
    utilities = transfers[None, :] - c * gammas[None, :] / deltas[:, None]
    own = np.diag(utilities)

    ir = own >= -tol
    ic = own[:, None] >= utilities - tol
    np.fill_diagonal(ic, True)
    adjacent = np.abs(own[1:] - utilities[np.arange(1, len(deltas)), np.arange(len(deltas) - 1)]) <= tol
    monotone = bool(np.all(np.diff(gammas) >= 0.0))

    return MenuAudit(
        ir_satisfied=tuple(bool(x) for x in ir),
        ir_binding_at_bottom=bool(abs(own[0]) <= tol),
        ic_matrix=ic,
        adjacent_ic_binding=tuple(bool(x) for x in adjacent),
        monotone=monotone,
    )


def information_rent(menu: ContractMenu) -> RentReport:
    """Per-type surplus t_k - c*gamma_k/delta_k under truthful selection."""
    rents = menu.transfers - menu.cost_coeff * menu.snrs / menu.grid.deltas
    return RentReport(rents=rents)


def menu_to_csv(menu: ContractMenu) -> str:
    """Deterministic tabular dump: k, delta, gamma_linear, gamma_db, transfer, rent."""
    rents = information_rent(menu).rents
    lines = ["k,delta,gamma_linear,gamma_db,transfer,rent"]
    for i, pair in enumerate(menu.pairs):
        lines.append(
            f"{i + 1},{menu.grid.deltas[i]:.12g},{pair.snr:.12g},"
            f"{snr_to_db(pair.snr):.4f},{pair.transfer:.12g},{rents[i]:.12g}"
        )
    return "\n".join(lines) + "\n"
