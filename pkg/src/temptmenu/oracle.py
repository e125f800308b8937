"""Brute-force verification of analytic menus against a price grid.

``grid_best_contract`` enumerates every subset of alternatives up to the
menu-size cap and every combination of grid prices, replays the consumer
choice rule, and reports the most profitable accepted menu.  It knows
nothing about the analytic constructions except, optionally, their
candidate prices, which can be injected into the grid so the analytic
optimum is itself enumerated.

Two search modes return the identical exact grid optimum (see
``_kernels``); ``auto`` picks the literal enumeration on small grids and
the bracketed search on large ones.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from . import _kernels
from .model import (
    CHOICE_TIE_TOL,
    Contract,
    ContractKind,
    CostFunction,
    Offer,
    PiecewiseLinearCost,
    ProblemInstance,
    accepts,
    actual_choice,
    overall_utilities,
    perceived_utilities,
    realized_outcome,
)
from .solver import (
    PRICE_TOL,
    Solution,
    compromising_contract,
    decoy_price,
    indulging_contract,
)

MAX_GRID_POINTS = 10_000
"""Desk-scale guard: base grid points per alternative."""

_SIZE_KIND = {
    1: ContractKind.COMMITMENT,
    2: ContractKind.INDULGING,
    3: ContractKind.COMPROMISING,
}

_EXHAUSTIVE_WORK_LIMIT = 20_000_000
"""Tuple count up to which ``mode="auto"`` keeps the literal enumeration."""


class GridTooLarge(ValueError):
    """The requested price grid exceeds the desk-scale guard."""


@dataclass(frozen=True)
class GridSpec:
    """Price grid for the brute-force search.

    Grid points are ``price_min + i*price_step`` rounded to 12 decimals,
    so decimal steps produce the decimal prices one would write by hand.
    ``include_analytic_prices`` injects every analytic candidate price
    (utility values, indulging, decoy and compromise prices) into the
    matching alternative's grid, which makes the analytic optimum itself
    part of the enumeration.
    """

    price_step: float
    price_min: float
    price_max: float
    max_menu_size: int = 3
    include_analytic_prices: bool = True

    def __post_init__(self):
        if not (math.isfinite(self.price_step) and self.price_step > 0):
            raise ValueError(f"price_step must be > 0, got {self.price_step}")
        if not self.price_min < self.price_max:
            raise ValueError(
                f"need price_min < price_max, got [{self.price_min}, {self.price_max}]"
            )
        if not 1 <= int(self.max_menu_size) <= 3:
            raise ValueError(f"max_menu_size must be in 1..3, got {self.max_menu_size}")
        steps = (self.price_max - self.price_min) / self.price_step
        if steps > MAX_GRID_POINTS + 1e-9:
            raise GridTooLarge(
                f"{steps:.0f} grid steps per alternative exceeds the guard of "
                f"{MAX_GRID_POINTS}; widen price_step or narrow the range"
            )

    def base_points(self) -> np.ndarray:
        n = int(math.floor((self.price_max - self.price_min) / self.price_step + 1e-9))
        pts = self.price_min + self.price_step * np.arange(n + 1)
        return np.round(pts, 12)


def _analytic_candidates(inst: ProblemInstance, tol: float) -> list[list[float]]:
    """Per-alternative analytic candidate prices, in instance order."""
    bait = inst.least_tempting
    decoy = inst.most_tempting
    out: list[list[float]] = []
    for x in inst.alternatives:
        cand = [x.u]
        if x.id != bait.id:
            cand.append(indulging_contract(x, inst, tol=tol).contract.offers[0].price)
            if x.id != decoy.id:
                cand.append(
                    compromising_contract(x, inst, tol=tol).contract.offers[0].price
                )
        if x.id == decoy.id and bait.id != decoy.id:
            cand.append(decoy_price(inst, tol=tol))
        out.append(cand)
    return out


def _price_arrays(inst: ProblemInstance, grid: GridSpec, tol: float) -> list[np.ndarray]:
    base = grid.base_points()
    extras = (
        _analytic_candidates(inst, tol)
        if grid.include_analytic_prices
        else [[] for _ in inst.alternatives]
    )
    return [
        np.unique(np.concatenate([base, np.asarray(extra, dtype=np.float64)]))
        for extra in extras
    ]


def _cost_params(cost_fn: CostFunction) -> tuple[int, float, float, float]:
    if isinstance(cost_fn, PiecewiseLinearCost):
        return (0, cost_fn.l, cost_fn.k, cost_fn.w)
    return (1, cost_fn.alpha, cost_fn.gamma, 0.0)


def _best_over_subsets(
    inst: ProblemInstance,
    prices: list[np.ndarray],
    sizes: range,
    mode: str,
    backend: str,
    tie_tol: float,
):
    """Scan subsets in deterministic order; returns (profit, subset, idx_tuple)."""
    cost = _cost_params(inst.cost_fn)
    alts = inst.alternatives
    best = None
    for size in sizes:
        for subset in combinations(range(len(alts)), size):
            u = tuple(alts[i].u for i in subset)
            v = tuple(alts[i].v for i in subset)
            c = tuple(alts[i].c for i in subset)
            res = _kernels.search_subset(
                u, v, c, [prices[i] for i in subset], cost, tie_tol, mode, backend
            )
            if res is None:
                continue
            profit, idx = res
            if best is None or profit > best[0]:
                best = (profit, subset, idx)
    return best


def grid_best_contract(
    inst: ProblemInstance,
    grid: GridSpec,
    *,
    mode: str = "auto",
    backend: str | None = None,
    tol: float = PRICE_TOL,
    tie_tol: float = CHOICE_TIE_TOL,
) -> Solution | None:
    """Max-profit menu over the grid, or None if walking away beats every menu.

    The result is deterministic given the grid: ties are resolved by the
    total order (profit, subset of alternatives, price-index tuple), and
    the two search modes and both kernel backends agree exactly.  The
    winning menu is replayed through the choice rule; the returned
    solution's intended offer is the replayed choice and its welfare the
    replayed welfare (residuals do not apply and are empty).
    """
    if mode not in ("auto", "exhaustive", "bracketed"):
        raise ValueError(f"unknown mode {mode!r}")
    backend = _kernels.resolve_backend(backend)
    prices = _price_arrays(inst, grid, tol)
    if mode == "auto":
        n = len(inst.alternatives)
        work = sum(
            math.prod(len(prices[i]) for i in subset)
            for size in range(1, grid.max_menu_size + 1)
            for subset in combinations(range(n), size)
        )
        mode = "exhaustive" if work <= _EXHAUSTIVE_WORK_LIMIT else "bracketed"
    best = _best_over_subsets(
        inst, prices, range(1, grid.max_menu_size + 1), mode, backend, tie_tol
    )
    if best is None or best[0] < 0.0:
        return None
    profit, subset, idx = best
    offers = tuple(
        Offer(inst.alternatives[i], float(prices[i][j])) for i, j in zip(subset, idx)
    )
    kind = _SIZE_KIND[len(offers)]
    probe = Contract(offers, 0, kind)
    chosen = actual_choice(probe, inst.cost_fn, tie_tol)
    intended = next(i for i, o in enumerate(offers) if o is chosen)
    contract = Contract(offers, intended, kind)
    outcome = realized_outcome(contract, inst.cost_fn, tie_tol)
    if outcome.chosen is None or abs(outcome.profit - profit) > 1e-9:
        raise AssertionError(
            f"kernel/model disagreement on menu {offers}: kernel profit {profit}, "
            f"replay {outcome.profit}"
        )
    return Solution(
        contract, outcome.profit, outcome.welfare, chosen.alternative, kind, ()
    )


def oversize_menu_search(
    inst: ProblemInstance,
    grid: GridSpec,
    menu_size: int = 4,
    *,
    tie_tol: float = CHOICE_TIE_TOL,
    tol: float = PRICE_TOL,
    work_limit: int = 20_000_000,
) -> float:
    """Diagnostic: best profit over menus of exactly ``menu_size`` offers.

    Supports sizes beyond the three-offer cap on tiny grids, to check
    empirically that a fourth offer adds nothing.  Returns the best
    profit (0.0 when every such menu is rejected); menus themselves are
    not reported.
    """
    if menu_size < 2 or menu_size > len(inst.alternatives):
        raise ValueError(f"menu_size {menu_size} not supported for this instance")
    prices = _price_arrays(inst, grid, tol)
    cost = _cost_params(inst.cost_fn)
    alts = inst.alternatives
    best = 0.0
    for subset in combinations(range(len(alts)), menu_size):
        work = math.prod(len(prices[i]) for i in subset)
        if work > work_limit:
            raise GridTooLarge(
                f"{work} price tuples for subset {subset}; shrink the grid"
            )
        u = np.array([alts[i].u for i in subset])
        v = np.array([alts[i].v for i in subset])
        c = np.array([alts[i].c for i in subset])
        res = _kernels._np_exhaustive(
            u, v, c, [prices[i] for i in subset], cost, tie_tol
        )
        if res is not None and res[0] > best:
            best = res[0]
    return best


# -- solution replay ---------------------------------------------------------


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    value: float | None = None
    note: str = ""


@dataclass(frozen=True)
class VerificationReport:
    """Outcome of replaying a solution through the consumer model."""

    passed: bool
    checks: tuple[CheckResult, ...] = field(default_factory=tuple)

    @property
    def failures(self) -> tuple[CheckResult, ...]:
        return tuple(c for c in self.checks if not c.passed)

    def summary(self) -> str:
        lines = []
        for c in self.checks:
            status = "ok" if c.passed else "FAIL"
            value = "" if c.value is None else f" ({c.value:.3g})"
            note = f" - {c.note}" if c.note else ""
            lines.append(f"  [{status}] {c.name}{value}{note}")
        verdict = "pass" if self.passed else "FAIL"
        return f"verification: {verdict}\n" + "\n".join(lines)


def verify_solution(
    sol: Solution,
    inst: ProblemInstance,
    *,
    choice_slack: float = 1e-8,
    participation_slack: float = 1e-8,
    residual_tol: float = PRICE_TOL,
    profit_tol: float = 1e-9,
    epsilon_discount: float = 0.0,
    tie_tol: float = CHOICE_TIE_TOL,
) -> VerificationReport:
    """Replay a solution's menu and check every claim it makes.

    ``epsilon_discount`` shaves the intended offer's price before the
    replay; with a strictly positive discount the intended offer must be
    chosen outright, without leaning on the seller-favorable tie-break.
    """
    eps = epsilon_discount
    offers = list(sol.contract.offers)
    intended = sol.contract.intended
    if eps:
        o = offers[intended]
        offers[intended] = Offer(o.alternative, o.price - eps)
    contract = Contract(tuple(offers), intended, sol.contract.kind)
    cost = inst.cost_fn

    perceived = perceived_utilities(contract)
    overall = overall_utilities(contract, cost)
    chosen = actual_choice(contract, cost, tie_tol)
    checks = []

    checks.append(
        CheckResult("accepted", accepts(contract, tie_tol), max(perceived))
    )
    checks.append(
        CheckResult(
            "participation_binds",
            max(perceived) >= -participation_slack,
            max(perceived),
            "perceived value of the best offer at signing",
        )
    )
    gap = overall[intended] - max(overall)
    checks.append(
        CheckResult(
            "intended_not_dominated",
            gap >= -choice_slack,
            gap,
            "intended offer's utility gap to the consumption-time best",
        )
    )
    checks.append(
        CheckResult(
            "intended_chosen",
            chosen.alternative.id == sol.sold.id,
            None,
            f"consumer picks {chosen.alternative.id}",
        )
    )
    margin = contract.offers[intended].margin
    checks.append(
        CheckResult(
            "profit_consistent",
            abs(margin - (sol.profit - eps)) <= profit_tol,
            margin,
        )
    )
    welfare_tol = 1e-9 + 10.0 * eps
    checks.append(
        CheckResult(
            "welfare_consistent",
            abs(overall[intended] - sol.welfare) <= welfare_tol,
            overall[intended],
        )
    )
    worst = max(sol.residuals) if sol.residuals else 0.0
    checks.append(
        CheckResult("residuals_small", worst <= residual_tol, worst)
    )
    return VerificationReport(all(c.passed for c in checks), tuple(checks))
