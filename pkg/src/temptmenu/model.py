"""Domain types and the naive consumer's menu-choice behavior.

An alternative carries a long-run utility value ``u``, an in-the-moment
temptation value ``v`` and a production cost ``c`` (all in money units).
A contract is a small menu of priced alternatives.  The consumer signs a
contract believing he will later pick the offer with the best ``u - p``;
when the time comes he instead pays a convex self-control penalty for
resisting the most tempting offer in the menu, which can drag his choice
toward tempting, overpriced items.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

CHOICE_TIE_TOL = 1e-9
"""Overall-utility gap below which menu offers count as tied.

Optimal menus make the consumer exactly indifferent, so floating-point
replay needs a tie window; ties are resolved in the seller's favor
(highest price - cost, then lowest menu position).
"""


class AssumptionViolated(ValueError):
    """An instance breaks a uniqueness assumption the solver relies on.

    Carries the ids of the offending alternatives in ``tied``.
    """

    def __init__(self, message: str, tied: tuple[str, ...] = ()):
        super().__init__(message)
        self.tied = tied


def _require_finite(name: str, value: float) -> float:
    value = float(value)
    if not math.isfinite(value):
        raise ValueError(f"{name} must be a finite real, got {value!r}")
    return value


@dataclass(frozen=True)
class Alternative:
    """One product: long-run value ``u``, temptation value ``v``, cost ``c``."""

    id: str
    u: float
    v: float
    c: float

    def __post_init__(self):
        for name in ("u", "v", "c"):
            object.__setattr__(self, name, _require_finite(name, getattr(self, name)))

    @property
    def e(self) -> float:
        """Excess temptation: how much more tempting than valuable."""
        return self.v - self.u


def excess_temptation(alternative: Alternative) -> float:
    """Temptation value minus utility value of an alternative."""
    return alternative.v - alternative.u


@dataclass(frozen=True)
class PiecewiseLinearCost:
    """Self-control cost with slope ``l`` below the willpower kink ``w`` and ``k`` above.

    Requires ``k > 1 > l > 0`` and ``w >= 0``: resisting small temptation
    gaps is cheap per unit, but beyond the willpower stock the marginal
    cost exceeds one money unit per unit of resisted temptation.
    """

    l: float
    k: float
    w: float

    def __post_init__(self):
        for name in ("l", "k", "w"):
            object.__setattr__(self, name, _require_finite(name, getattr(self, name)))
        if not (self.k > 1.0 > self.l > 0.0):
            raise ValueError(f"need k > 1 > l > 0, got k={self.k}, l={self.l}")
        if self.w < 0.0:
            raise ValueError(f"willpower w must be >= 0, got {self.w}")

    def phi(self, t: float) -> float:
        if t <= 0.0:
            return 0.0
        if t <= self.w:
            return self.l * t
        return self.k * (t - self.w) + self.l * self.w


@dataclass(frozen=True)
class PowerCost:
    """Self-control cost ``alpha * t**gamma``; strictly convex iff ``gamma > 1``."""

    alpha: float
    gamma: float

    def __post_init__(self):
        for name in ("alpha", "gamma"):
            object.__setattr__(self, name, _require_finite(name, getattr(self, name)))
        if self.alpha <= 0.0:
            raise ValueError(f"alpha must be > 0, got {self.alpha}")
        if self.gamma < 1.0:
            raise ValueError(f"gamma must be >= 1, got {self.gamma}")

    def phi(self, t: float) -> float:
        if t <= 0.0:
            return 0.0
        return self.alpha * t**self.gamma


CostFunction = PiecewiseLinearCost | PowerCost


def phi_eval(cost_fn: CostFunction, t: float) -> float:
    """Self-control cost of resisting a temptation gap ``t``.

    Negative arguments are clamped to zero: in the choice rule the gap is
    nonnegative by construction, but root-finders probe freely.
    """
    return cost_fn.phi(t)


@dataclass(frozen=True)
class Offer:
    """A priced alternative inside a contract."""

    alternative: Alternative
    price: float

    def __post_init__(self):
        object.__setattr__(self, "price", _require_finite("price", self.price))

    @property
    def margin(self) -> float:
        """Seller's profit if this offer is the one consumed."""
        return self.price - self.alternative.c


class ContractKind(str, enum.Enum):
    COMMITMENT = "commitment"
    INDULGING = "indulging"
    COMPROMISING = "compromising"


_KIND_SIZE = {
    ContractKind.COMMITMENT: 1,
    ContractKind.INDULGING: 2,
    ContractKind.COMPROMISING: 3,
}


@dataclass(frozen=True)
class Contract:
    """A menu of one to three offers with a designated intended sale."""

    offers: tuple[Offer, ...]
    intended: int
    kind: ContractKind

    def __post_init__(self):
        object.__setattr__(self, "offers", tuple(self.offers))
        if not 1 <= len(self.offers) <= 3:
            raise ValueError(f"contract must hold 1..3 offers, got {len(self.offers)}")
        ids = [o.alternative.id for o in self.offers]
        if len(set(ids)) != len(ids):
            raise ValueError(f"offers must reference distinct alternatives, got {ids}")
        if not 0 <= self.intended < len(self.offers):
            raise ValueError(f"intended index {self.intended} out of range")
        if _KIND_SIZE[self.kind] != len(self.offers):
            raise ValueError(
                f"{self.kind.value} contract must hold {_KIND_SIZE[self.kind]} "
                f"offer(s), got {len(self.offers)}"
            )

    @property
    def intended_offer(self) -> Offer:
        return self.offers[self.intended]


def perceived_utilities(contract: Contract) -> tuple[float, ...]:
    """``u - p`` per offer: what the naive signer expects to get."""
    return tuple(o.alternative.u - o.price for o in contract.offers)


def overall_utilities(contract: Contract, cost_fn: CostFunction) -> tuple[float, ...]:
    """Consumption-time utility per offer, net of the self-control cost.

    The cost argument is the gap to the menu's most tempting offer,
    ``max(v - p) - (v_i - p_i)``, which is nonnegative for every offer.
    """
    temptations = [o.alternative.v - o.price for o in contract.offers]
    m = max(temptations)
    return tuple(
        (o.alternative.u - o.price) - cost_fn.phi(m - t)
        for o, t in zip(contract.offers, temptations)
    )


def _pick(contract: Contract, scores: tuple[float, ...], tie_tol: float) -> int:
    """Index of the winning offer: best score, ties to the seller's favor."""
    best = max(scores)
    pick = -1
    pick_margin = -math.inf
    for i, s in enumerate(scores):
        if s >= best - tie_tol and contract.offers[i].margin > pick_margin:
            pick = i
            pick_margin = contract.offers[i].margin
    return pick


def perceived_choice(contract: Contract, tie_tol: float = CHOICE_TIE_TOL) -> Offer:
    """The offer the naive consumer believes he will pick (max ``u - p``)."""
    return contract.offers[_pick(contract, perceived_utilities(contract), tie_tol)]


def actual_choice(
    contract: Contract, cost_fn: CostFunction, tie_tol: float = CHOICE_TIE_TOL
) -> Offer:
    """The offer actually consumed under the self-control cost."""
    return contract.offers[_pick(contract, overall_utilities(contract, cost_fn), tie_tol)]


def accepts(contract: Contract, tie_tol: float = CHOICE_TIE_TOL) -> bool:
    """Whether the consumer signs: perceived choice must be worth >= 0 (ties accept)."""
    o = perceived_choice(contract, tie_tol)
    return o.alternative.u - o.price >= 0.0


@dataclass(frozen=True)
class Outcome:
    """Realized result of offering a contract; ``chosen`` is None on rejection."""

    profit: float
    welfare: float
    chosen: Offer | None


def realized_outcome(
    contract: Contract, cost_fn: CostFunction, tie_tol: float = CHOICE_TIE_TOL
) -> Outcome:
    """Replay a contract: seller profit and the consumer's realized utility.

    A rejected contract yields the outside option, normalized to (0, 0).
    """
    if not accepts(contract, tie_tol):
        return Outcome(0.0, 0.0, None)
    scores = overall_utilities(contract, cost_fn)
    i = _pick(contract, scores, tie_tol)
    return Outcome(contract.offers[i].margin, scores[i], contract.offers[i])


def _unique_extremum(
    alternatives: tuple[Alternative, ...], values: list[float], maximize: bool, what: str
) -> Alternative:
    best = max(values) if maximize else min(values)
    tied = [a for a, v in zip(alternatives, values) if v == best]
    if len(tied) > 1:
        ids = tuple(a.id for a in tied)
        raise AssumptionViolated(
            f"{what} is not unique: alternatives {', '.join(ids)} are tied", ids
        )
    return tied[0]


@dataclass(frozen=True)
class ProblemInstance:
    """A finite set of alternatives plus the consumer's self-control cost.

    Validation enforces the model's genericity assumptions and names the
    offending alternatives when they fail: the ``u - c`` and ``v - c``
    maximizers must be unique and distinct, and the excess-temptation
    maximizer and minimizer must be unique.  Ties are exact floating-point
    ties; a silent tie-break here would make every downstream result
    assumption-dependent.
    """

    alternatives: tuple[Alternative, ...]
    cost_fn: CostFunction

    def __post_init__(self):
        object.__setattr__(self, "alternatives", tuple(self.alternatives))
        if not self.alternatives:
            raise ValueError("instance needs at least one alternative")
        ids = [a.id for a in self.alternatives]
        if len(set(ids)) != len(ids):
            dupes = tuple(sorted({i for i in ids if ids.count(i) > 1}))
            raise ValueError(f"duplicate alternative ids: {', '.join(dupes)}")
        if self.u_efficient.id == self.v_efficient.id:
            raise AssumptionViolated(
                f"the u - c and v - c maximizers coincide ({self.u_efficient.id}); "
                "the pricing problem is degenerate",
                (self.u_efficient.id,),
            )
        self.least_tempting  # noqa: B018 - validates uniqueness
        self.most_tempting  # noqa: B018

    @property
    def u_efficient(self) -> Alternative:
        """Unique maximizer of u - c: the efficient product under long-run value."""
        return _unique_extremum(
            self.alternatives, [a.u - a.c for a in self.alternatives], True,
            "the u - c maximizer",
        )

    @property
    def v_efficient(self) -> Alternative:
        """Unique maximizer of v - c: the efficient product under temptation value."""
        return _unique_extremum(
            self.alternatives, [a.v - a.c for a in self.alternatives], True,
            "the v - c maximizer",
        )

    @property
    def least_tempting(self) -> Alternative:
        """Unique excess-temptation minimizer; the natural bait offer."""
        return _unique_extremum(
            self.alternatives, [a.e for a in self.alternatives], False,
            "the excess-temptation minimizer",
        )

    @property
    def most_tempting(self) -> Alternative:
        """Unique excess-temptation maximizer; the natural decoy offer."""
        return _unique_extremum(
            self.alternatives, [a.e for a in self.alternatives], True,
            "the excess-temptation maximizer",
        )

    def __len__(self) -> int:
        return len(self.alternatives)
