"""Analytic contract construction and willpower-regime classification.

Three menu designs are priced for each candidate product ``x``:

* commitment: sell ``x`` alone at its utility value;
* indulging: pair ``x`` with the least-tempting alternative as bait, price
  ``x`` at the root of ``p = u(x) + phi(v(x) - p - e_bait)``;
* compromising: add the most-tempting alternative as a never-consumed
  decoy whose price solves the same fixed point, then price ``x`` so the
  consumer is exactly indifferent to the decoy.

All three pricing equations have strictly increasing residuals, so a
bracketed bisection pins each root to ``PRICE_TOL``.  For the
piecewise-linear cost family every price also has a closed form, which is
the default evaluation path (and is cross-checked against bisection in
the test suite).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from .model import (
    Alternative,
    Contract,
    ContractKind,
    CostFunction,
    Offer,
    PiecewiseLinearCost,
    ProblemInstance,
    overall_utilities,
    phi_eval,
)

PRICE_TOL = 1e-10
"""Default absolute residual tolerance for the implicit price equations."""

REVENUE_TIE_TOL = 1e-9
"""Profit gap below which two contract designs count as revenue-equivalent."""


class BracketFailure(RuntimeError):
    """No sign change found for a price equation; a model assumption is broken."""


class NotCompromisable(ValueError):
    """Raised when asked to build a three-offer menu around the bait or the decoy."""


@dataclass(frozen=True)
class Solution:
    """A priced contract and its bookkeeping.

    ``welfare`` is the intended offer's consumption-time utility (at a
    returned optimum all offers are tied, so this equals the replayed
    welfare).  ``residuals`` holds the absolute residuals of the implicit
    price equations used in the construction, in construction order.
    """

    contract: Contract
    profit: float
    welfare: float
    sold: Alternative
    kind: ContractKind
    residuals: tuple[float, ...]


def solve_monotone_price(
    residual: Callable[[float], float],
    lo: float,
    hi: float,
    *,
    tol: float = PRICE_TOL,
    max_expansions: int = 60,
) -> float:
    """Root of a continuous, strictly increasing residual by bisection.

    ``[lo, hi]`` is a bracket hint; if it does not straddle the root the
    bracket is widened geometrically (doubling) up to ``max_expansions``
    times before giving up.  Returns a price with ``|residual| <= tol``.
    """
    if hi < lo:
        lo, hi = hi, lo
    r_lo = residual(lo)
    r_hi = residual(hi)
    width = max(hi - lo, 1.0)
    for _ in range(max_expansions):
        if r_lo <= 0.0 <= r_hi:
            break
        if r_lo > 0.0:
            lo -= width
            r_lo = residual(lo)
        if r_hi < 0.0:
            hi += width
            r_hi = residual(hi)
        width *= 2.0
    else:
        raise BracketFailure(
            f"no sign change in [{lo}, {hi}] after {max_expansions} expansions; "
            "the pricing equation is not behaving monotonically"
        )
    if abs(r_lo) <= tol:
        return lo
    if abs(r_hi) <= tol:
        return hi
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        r_mid = residual(mid)
        if abs(r_mid) <= tol:
            return mid
        if r_mid < 0.0:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-16 * max(1.0, abs(mid)):
            return mid
    raise BracketFailure(f"bisection stalled above tolerance {tol}")


# -- closed forms for the piecewise-linear family ---------------------------
#
# The shared sub-expressions below are reused verbatim by the regime
# classifier so that prices predicted from the willpower ranges match the
# direct construction bit for bit.


def _shallow_price(u: float, v: float, e_bait: float, l: float) -> float:
    # resisted temptation at the root stays below the kink
    return (u + l * (v - e_bait)) / (1.0 + l)


def _steep_price(u: float, v: float, e_bait: float, k: float) -> float:
    # willpower-free part of the above-kink compromise price
    return (u + k * v - k * e_bait) / (1.0 + k)


def _pw_self_tempting_price(
    u: float, v: float, e_bait: float, cost: PiecewiseLinearCost
) -> tuple[float, str]:
    """Closed-form root of ``p = u + phi(v - p - e_bait)`` with its region.

    Prices an offer that is itself the most tempting item on the menu
    (the sold offer in an indulging contract, or the decoy).  The root's
    resisted gap is ``(e - e_bait) / (1 + l)``, so the kink is crossed
    exactly when ``e - e_bait > (1 + l) w``.
    """
    if (v - u) - e_bait <= (1.0 + cost.l) * cost.w:
        return _shallow_price(u, v, e_bait, cost.l), "shallow"
    price = (u + cost.k * (v - e_bait - cost.w) + cost.l * cost.w) / (1.0 + cost.k)
    return price, "steep"


def _pw_compromise_price(
    x: Alternative, e_bait: float, decoy: Alternative, cost: PiecewiseLinearCost
) -> tuple[float, str]:
    """Closed-form compromise price of ``x`` with its region.

    Three regions:

    * ``shallow``: the decoy's gap to the bait fits under the kink, the
      decoy adds nothing, and the price collapses to the indulging one;
    * ``mixed``: the decoy sits above the kink but resisting the decoy
      from ``x`` stays below it; the price falls linearly in willpower;
    * ``steep``: both gaps are above the kink and willpower drops out.

    The mixed expression is arranged so that at the region boundary it is
    bit-for-bit equal to the steep one.
    """
    l, k, w = cost.l, cost.k, cost.w
    if decoy.e - e_bait <= (1.0 + l) * w:
        return _shallow_price(x.u, x.v, e_bait, l), "shallow"
    steep = _steep_price(x.u, x.v, e_bait, k)
    if decoy.e - x.e <= (1.0 + l) * w:
        boundary = (decoy.e - x.e) / (1.0 + l)
        return steep + (k - l) / (1.0 + k) * (boundary - w), "mixed"
    return steep, "steep"


@dataclass(frozen=True)
class ClosedFormPrices:
    """Piecewise-linear closed-form prices for selling ``x``, with regions."""

    indulging_price: float
    indulging_region: str
    decoy_price: float
    decoy_region: str
    compromise_price: float
    compromise_region: str


def piecewise_closed_forms(x: Alternative, inst: ProblemInstance) -> ClosedFormPrices:
    """Evaluate the displayed case formulas for every price at once.

    The formulas are evaluated unconditionally (even for ``x`` equal to
    the bait or the decoy, where the corresponding contract degenerates);
    applicability is enforced by the contract constructors.
    """
    cost = inst.cost_fn
    if not isinstance(cost, PiecewiseLinearCost):
        raise ValueError("closed forms exist only for the piecewise-linear cost family")
    bait_e = inst.least_tempting.e
    decoy = inst.most_tempting
    p_ind, r_ind = _pw_self_tempting_price(x.u, x.v, bait_e, cost)
    p_z, r_z = _pw_self_tempting_price(decoy.u, decoy.v, bait_e, cost)
    p_comp, r_comp = _pw_compromise_price(x, bait_e, decoy, cost)
    return ClosedFormPrices(p_ind, r_ind, p_z, r_z, p_comp, r_comp)


# -- contract constructors ---------------------------------------------------


def _resolve_method(method: str, cost: CostFunction) -> str:
    if method == "auto":
        return "closed" if isinstance(cost, PiecewiseLinearCost) else "bisect"
    if method not in ("closed", "bisect"):
        raise ValueError(f"unknown method {method!r}")
    if method == "closed" and not isinstance(cost, PiecewiseLinearCost):
        raise ValueError("closed-form prices exist only for the piecewise-linear family")
    return method


def _self_tempting_price(
    u: float, v: float, e_bait: float, cost: CostFunction, tol: float, method: str
) -> tuple[float, float]:
    """Root of ``p = u + phi(v - p - e_bait)`` and its absolute residual."""

    def g(p: float) -> float:
        return p - u - phi_eval(cost, (v - e_bait) - p)

    if _resolve_method(method, cost) == "closed":
        price = _pw_self_tempting_price(u, v, e_bait, cost)[0]
    else:
        hi = u + phi_eval(cost, max((v - e_bait) - u, 0.0))
        price = solve_monotone_price(g, u, hi, tol=tol)
    return price, abs(g(price))


def _intended_welfare(contract: Contract, cost: CostFunction) -> float:
    return overall_utilities(contract, cost)[contract.intended]


def commitment_contract(x: Alternative) -> Solution:
    """Sell ``x`` alone at its utility value; the consumer keeps zero surplus."""
    contract = Contract((Offer(x, x.u),), 0, ContractKind.COMMITMENT)
    return Solution(contract, x.u - x.c, 0.0, x, ContractKind.COMMITMENT, ())


def indulging_contract(
    x: Alternative,
    inst: ProblemInstance,
    *,
    tol: float = PRICE_TOL,
    method: str = "auto",
) -> Solution:
    """Sell ``x`` above its utility value next to a bait priced at cost-of-entry.

    The bait is the least-tempting alternative, priced at its own utility
    value so the naive signer expects to pick it for free.  Degenerate
    case: if ``x`` is the bait itself the construction collapses and the
    commitment solution is returned instead (flagged by its kind).
    """
    bait = inst.least_tempting
    if x.id == bait.id:
        return commitment_contract(x)
    price, residual = _self_tempting_price(x.u, x.v, bait.e, inst.cost_fn, tol, method)
    contract = Contract((Offer(x, price), Offer(bait, bait.u)), 0, ContractKind.INDULGING)
    welfare = _intended_welfare(contract, inst.cost_fn)
    return Solution(contract, price - x.c, welfare, x, ContractKind.INDULGING, (residual,))


def decoy_price(
    inst: ProblemInstance, *, tol: float = PRICE_TOL, method: str = "auto"
) -> float:
    """Price of the most tempting alternative pinned by the bait's free entry.

    Unique root of ``p = u + phi(v - p - e_bait)`` for the most tempting
    alternative; in a compromising menu it is never consumed, it only
    raises everyone else's self-control bill.
    """
    bait = inst.least_tempting
    decoy = inst.most_tempting
    return _self_tempting_price(decoy.u, decoy.v, bait.e, inst.cost_fn, tol, method)[0]


def compromising_contract(
    x: Alternative,
    inst: ProblemInstance,
    *,
    tol: float = PRICE_TOL,
    method: str = "auto",
) -> Solution:
    """Sell ``x`` flanked by the bait and a maximally tempting decoy.

    The decoy price solves its own fixed point; the compromise price then
    makes the consumer exactly indifferent between ``x`` and the decoy:
    ``p = u(x) + p_decoy - u(decoy) - phi(v(decoy) - p_decoy - v(x) + p)``.
    All participation and choice constraints bind at the returned prices.
    """
    bait = inst.least_tempting
    decoy = inst.most_tempting
    if x.id in (bait.id, decoy.id):
        raise NotCompromisable(
            f"cannot build a three-offer menu selling {x.id}: it already plays "
            "the bait or decoy role"
        )
    cost = inst.cost_fn
    p_decoy, res_decoy = _self_tempting_price(decoy.u, decoy.v, bait.e, cost, tol, method)
    anchor = x.u + p_decoy - decoy.u
    shift = decoy.v - p_decoy - x.v

    def g(p: float) -> float:
        return p - anchor + phi_eval(cost, shift + p)

    if _resolve_method(method, cost) == "closed":
        price = _pw_compromise_price(x, bait.e, decoy, cost)[0]
    else:
        lo = anchor - phi_eval(cost, max(shift + anchor, 0.0))
        price = solve_monotone_price(g, lo, anchor, tol=tol)
    contract = Contract(
        (Offer(x, price), Offer(bait, bait.u), Offer(decoy, p_decoy)),
        0,
        ContractKind.COMPROMISING,
    )
    welfare = _intended_welfare(contract, cost)
    return Solution(
        contract, price - x.c, welfare, x, ContractKind.COMPROMISING,
        (res_decoy, abs(g(price))),
    )


def _decoy_is_idle(inst: ProblemInstance) -> bool:
    """True when the cost is linear over every gap the decoy can create.

    In that regime the compromising and indulging designs are
    revenue-equivalent and the two-offer menu is reported.  (A tie also
    occurs at zero willpower, where the cost is linear at the steep
    slope; there the three-offer menu is kept, because the equally
    profitable designs differ in realized welfare and the sweep
    invariants pin the selection.)
    """
    cost = inst.cost_fn
    if isinstance(cost, PiecewiseLinearCost):
        gap = inst.most_tempting.e - inst.least_tempting.e
        return gap <= (1.0 + cost.l) * cost.w
    return cost.gamma == 1.0


def best_contract_for(
    x: Alternative,
    inst: ProblemInstance,
    *,
    tol: float = PRICE_TOL,
    method: str = "auto",
) -> Solution:
    """Max-profit design for selling ``x``, skipping degenerate constructions.

    When the compromising and indulging designs are revenue-equivalent
    (within ``REVENUE_TIE_TOL``) and the decoy is genuinely idle, the
    indulging one is reported.
    """
    best = commitment_contract(x)
    if x.id == inst.least_tempting.id:
        return best
    ind = indulging_contract(x, inst, tol=tol, method=method)
    if ind.profit > best.profit:
        best = ind
    if x.id != inst.most_tempting.id:
        comp = compromising_contract(x, inst, tol=tol, method=method)
        if comp.profit > best.profit + REVENUE_TIE_TOL or (
            comp.profit > best.profit - REVENUE_TIE_TOL and not _decoy_is_idle(inst)
        ):
            best = comp
    return best


def optimal_contract(
    inst: ProblemInstance, *, tol: float = PRICE_TOL, method: str = "auto"
) -> Solution:
    """Profit-maximizing contract over all products; ties go to the lowest index."""
    best: Solution | None = None
    for x in inst.alternatives:
        sol = best_contract_for(x, inst, tol=tol, method=method)
        if best is None or sol.profit > best.profit:
            best = sol
    assert best is not None
    return best


# -- willpower-regime classification ----------------------------------------


@dataclass(frozen=True)
class WillpowerRegime:
    """Predicted optimal sale for a piecewise-linear instance, by willpower range.

    ``thresholds`` are the willpower levels splitting the four ranges, in
    increasing order: up to the first the steep-regime product sells at a
    willpower-free price; past the last the decoy is useless and the best
    indulging contract takes over.  ``case_index`` is 1..4.
    """

    case_index: int
    sold: Alternative
    price: float
    kind: ContractKind
    thresholds: tuple[float, float, float]
    steep_product: Alternative
    shallow_product: Alternative


def _regime_argmax(inst: ProblemInstance, slope: float) -> Alternative:
    """Maximizer of ``(u + slope*v)/(1+slope) - c``; ties to the lowest index.

    The tie-break matches ``optimal_contract``'s, so predictions stay
    consistent with direct maximization on tied instances.
    """
    best = None
    best_val = -float("inf")
    for a in inst.alternatives:
        val = (a.u + slope * a.v) / (1.0 + slope) - a.c
        if val > best_val:
            best, best_val = a, val
    assert best is not None
    return best


def classify_willpower_regime(
    inst: ProblemInstance, *, tol: float = PRICE_TOL, method: str = "auto"
) -> WillpowerRegime:
    """Which product the optimal contract sells, read off the willpower ranges.

    Case 2 (willpower strictly between the steep and shallow product
    thresholds) has no closed form; the prediction there simply reports
    the direct maximization.  Prices in cases 1, 3 and 4 reuse the exact
    closed-form expressions of the constructors, so agreement with
    ``optimal_contract`` is exact rather than merely within tolerance.
    """
    cost = inst.cost_fn
    if not isinstance(cost, PiecewiseLinearCost):
        raise ValueError("willpower ranges are defined for the piecewise-linear family")
    bait = inst.least_tempting
    decoy = inst.most_tempting
    steep = _regime_argmax(inst, cost.k)
    shallow = _regime_argmax(inst, cost.l)
    scale = 1.0 + cost.l
    thresholds = (
        (decoy.e - steep.e) / scale,
        (decoy.e - shallow.e) / scale,
        (decoy.e - bait.e) / scale,
    )
    w = cost.w
    if w <= thresholds[0]:
        case, sold = 1, steep
        price = _steep_price(steep.u, steep.v, bait.e, cost.k)
        kind = ContractKind.COMPROMISING
    elif w < thresholds[1]:
        sol = optimal_contract(inst, tol=tol, method=method)
        case, sold, price, kind = 2, sol.sold, sol.contract.intended_offer.price, sol.kind
    elif w < thresholds[2]:
        case, sold = 3, shallow
        price = _pw_compromise_price(shallow, bait.e, decoy, cost)[0]
        kind = ContractKind.COMPROMISING
    else:
        case, sold = 4, shallow
        price = _shallow_price(shallow.u, shallow.v, bait.e, cost.l)
        kind = ContractKind.INDULGING
    return WillpowerRegime(case, sold, price, kind, thresholds, steep, shallow)
