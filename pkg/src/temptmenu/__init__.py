"""Optimal menu pricing against naive consumers with convex self-control costs."""

from .model import (
    CHOICE_TIE_TOL,
    Alternative,
    AssumptionViolated,
    Contract,
    ContractKind,
    CostFunction,
    Offer,
    Outcome,
    PiecewiseLinearCost,
    PowerCost,
    ProblemInstance,
    accepts,
    actual_choice,
    excess_temptation,
    overall_utilities,
    perceived_choice,
    perceived_utilities,
    phi_eval,
    realized_outcome,
)
from .oracle import (
    GridSpec,
    GridTooLarge,
    VerificationReport,
    grid_best_contract,
    oversize_menu_search,
    verify_solution,
)
from .solver import (
    PRICE_TOL,
    BracketFailure,
    ClosedFormPrices,
    NotCompromisable,
    Solution,
    WillpowerRegime,
    best_contract_for,
    classify_willpower_regime,
    commitment_contract,
    compromising_contract,
    decoy_price,
    indulging_contract,
    optimal_contract,
    piecewise_closed_forms,
    solve_monotone_price,
)
from .statics import SweepRecord, contract_curve, sweep_willpower

__version__ = "0.1.0"

__all__ = [
    "Alternative",
    "AssumptionViolated",
    "BracketFailure",
    "CHOICE_TIE_TOL",
    "ClosedFormPrices",
    "Contract",
    "ContractKind",
    "CostFunction",
    "GridSpec",
    "GridTooLarge",
    "NotCompromisable",
    "Offer",
    "Outcome",
    "PRICE_TOL",
    "PiecewiseLinearCost",
    "PowerCost",
    "ProblemInstance",
    "Solution",
    "SweepRecord",
    "VerificationReport",
    "WillpowerRegime",
    "accepts",
    "actual_choice",
    "best_contract_for",
    "classify_willpower_regime",
    "commitment_contract",
    "compromising_contract",
    "contract_curve",
    "decoy_price",
    "excess_temptation",
    "grid_best_contract",
    "indulging_contract",
    "optimal_contract",
    "overall_utilities",
    "oversize_menu_search",
    "perceived_choice",
    "perceived_utilities",
    "phi_eval",
    "piecewise_closed_forms",
    "realized_outcome",
    "solve_monotone_price",
    "sweep_willpower",
    "verify_solution",
    "__version__",
]
