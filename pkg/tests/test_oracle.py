"""Brute-force grid search: mode/backend equivalence and solution replay."""

import dataclasses

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from temptmenu import (
    Alternative,
    GridSpec,
    GridTooLarge,
    Offer,
    PiecewiseLinearCost,
    ProblemInstance,
    Solution,
    grid_best_contract,
    optimal_contract,
    oversize_menu_search,
    verify_solution,
)
from temptmenu._kernels import resolve_backend
from helpers import random_pw_instance, running_instance, with_power_cost

MODES = ("exhaustive", "bracketed")
BACKENDS = ("numba", "numpy")


def menu_prices(sol):
    return tuple(o.price for o in sol.contract.offers)


def menu_ids(sol):
    return tuple(o.alternative.id for o in sol.contract.offers)


# -- grid specification ---------------------------------------------------------


def test_grid_spec_validation():
    with pytest.raises(ValueError):
        GridSpec(price_step=0.0, price_min=0.0, price_max=1.0)
    with pytest.raises(ValueError):
        GridSpec(price_step=0.1, price_min=2.0, price_max=1.0)
    with pytest.raises(ValueError):
        GridSpec(price_step=0.1, price_min=0.0, price_max=1.0, max_menu_size=4)
    with pytest.raises(GridTooLarge):
        GridSpec(price_step=1e-4, price_min=0.0, price_max=20.0)


def test_grid_points_are_decimal_exact():
    grid = GridSpec(price_step=0.01, price_min=0.0, price_max=20.0)
    pts = grid.base_points()
    assert len(pts) == 2001
    assert pts[0] == 0.0
    assert pts[-1] == 20.0
    assert 10.0 in pts and 12.0 in pts


def test_backend_resolution():
    assert resolve_backend("numpy") == "numpy"
    assert resolve_backend("auto") in ("numba", "numpy")
    with pytest.raises(ValueError):
        resolve_backend("cuda")


def test_backend_env_flag(monkeypatch, running):
    monkeypatch.setenv("TEMPTMENU_BACKEND", "numpy")
    assert resolve_backend() == "numpy"
    grid = GridSpec(price_step=1.0, price_min=0.0, price_max=20.0)
    sol = grid_best_contract(running, grid)  # runs on the numpy fallback
    assert sol.profit == 7.0
    monkeypatch.setenv("TEMPTMENU_BACKEND", "auto")
    assert resolve_backend() in ("numba", "numpy")


def test_missing_numba_falls_back_to_numpy(monkeypatch):
    import temptmenu._kernels as kernels

    monkeypatch.setattr(kernels, "HAVE_NUMBA", False)
    assert kernels.resolve_backend("auto") == "numpy"
    with pytest.raises(RuntimeError, match="numba"):
        kernels.resolve_backend("numba")


# -- equivalence of modes and backends -------------------------------------------


@pytest.mark.parametrize("mode", MODES)
@pytest.mark.parametrize("backend", BACKENDS)
@pytest.mark.parametrize("analytic", (True, False))
def test_all_paths_agree_on_running_instance(running, mode, backend, analytic):
    grid = GridSpec(
        price_step=0.25, price_min=0.0, price_max=20.0,
        include_analytic_prices=analytic,
    )
    sol = grid_best_contract(running, grid, mode=mode, backend=backend)
    reference = grid_best_contract(running, grid, mode="exhaustive", backend="numpy")
    assert sol.profit == reference.profit == 7.0
    assert menu_prices(sol) == menu_prices(reference)
    assert menu_ids(sol) == menu_ids(reference)


@given(
    seed=st.integers(0, 10_000),
    step=st.sampled_from([0.4, 0.65, 1.0]),
    w=st.floats(0.0, 12.0),
)
@settings(max_examples=25, deadline=None)
def test_modes_and_backends_agree_on_random_instances(seed, step, w):
    rng = np.random.default_rng(seed)
    inst = random_pw_instance(rng, n=3, w=w)
    grid = GridSpec(price_step=step, price_min=0.0, price_max=22.0)
    results = [
        grid_best_contract(inst, grid, mode=mode, backend=backend)
        for mode in MODES
        for backend in BACKENDS
    ]
    reference = results[0]
    for sol in results[1:]:
        if reference is None:
            assert sol is None
            continue
        assert sol.profit == reference.profit
        assert menu_prices(sol) == menu_prices(reference)
        assert menu_ids(sol) == menu_ids(reference)


def test_power_cost_paths_agree(running):
    inst = with_power_cost(running)
    grid = GridSpec(price_step=0.5, price_min=0.0, price_max=20.0)
    sols = [
        grid_best_contract(inst, grid, mode=m, backend=b)
        for m in MODES for b in BACKENDS
    ]
    for sol in sols[1:]:
        assert sol.profit == pytest.approx(sols[0].profit, abs=1e-12)
        assert menu_ids(sol) == menu_ids(sols[0])


# -- oracle vs analytic optimum ----------------------------------------------------


def test_analytic_menu_is_enumerated_and_credited(running):
    grid = GridSpec(price_step=0.25, price_min=0.0, price_max=20.0)
    sol = grid_best_contract(running, grid)
    analytic = optimal_contract(running)
    assert sol.profit >= analytic.profit - 1e-9
    assert sol.profit <= analytic.profit + 1e-9
    assert sol.sold.id == "B"


def test_grid_only_profit_within_discretization_loss(running):
    step = 0.125
    grid = GridSpec(
        price_step=step, price_min=0.0, price_max=20.0, include_analytic_prices=False
    )
    sol = grid_best_contract(running, grid)
    analytic = optimal_contract(running)
    assert analytic.profit - 3.0 * step <= sol.profit <= analytic.profit + 1e-9


def test_oracle_never_beats_analytic_on_random_instances():
    rng = np.random.default_rng(99)
    for _ in range(8):
        inst = random_pw_instance(rng, n=3)
        analytic = optimal_contract(inst)
        grid = GridSpec(price_step=0.5, price_min=0.0, price_max=22.0)
        sol = grid_best_contract(inst, grid)
        assert sol is not None
        assert analytic.profit - 1e-9 <= sol.profit <= analytic.profit + 1e-9
        replay = verify_solution(
            dataclasses.replace(sol, residuals=()), inst, choice_slack=1e-7
        )
        assert replay.passed, replay.summary()


def test_refinement_on_nested_grids(running):
    profits = []
    for step in (1.0, 0.5, 0.25):
        grid = GridSpec(
            price_step=step, price_min=0.0, price_max=20.0,
            include_analytic_prices=False,
        )
        profits.append(grid_best_contract(running, grid).profit)
    assert profits == sorted(profits)


def test_deterministic_across_repeat_runs(running):
    grid = GridSpec(price_step=0.3, price_min=0.0, price_max=18.0)
    a = grid_best_contract(running, grid)
    b = grid_best_contract(running, grid)
    assert menu_prices(a) == menu_prices(b)
    assert a.profit == b.profit


def test_all_rejected_returns_none(running):
    # every grid price sits above every utility value, so no menu is signed
    grid = GridSpec(
        price_step=0.5, price_min=15.0, price_max=20.0,
        include_analytic_prices=False,
    )
    assert grid_best_contract(running, grid, mode="exhaustive") is None
    assert grid_best_contract(running, grid, mode="bracketed") is None


def test_unprofitable_market_returns_none():
    inst = ProblemInstance(
        (
            Alternative("A", 2.0, 3.0, 9.0),
            Alternative("B", 3.0, 2.0, 8.9),
        ),
        PiecewiseLinearCost(l=0.5, k=2.0, w=1.0),
    )
    grid = GridSpec(price_step=0.25, price_min=0.0, price_max=12.0)
    assert grid_best_contract(inst, grid) is None


def test_menu_size_caps_respected(running):
    grid = GridSpec(price_step=0.25, price_min=0.0, price_max=20.0, max_menu_size=1)
    sol = grid_best_contract(running, grid)
    assert len(sol.contract.offers) == 1
    assert sol.profit == pytest.approx(5.0)  # best commitment: A at 10
    grid2 = GridSpec(price_step=0.25, price_min=0.0, price_max=20.0, max_menu_size=2)
    sol2 = grid_best_contract(running, grid2)
    assert len(sol2.contract.offers) == 2
    assert sol2.profit == pytest.approx(6.5)  # indulging B at 11.5


def test_fourth_offer_adds_nothing():
    rng = np.random.default_rng(5)
    inst = random_pw_instance(rng, n=4)
    grid = GridSpec(price_step=1.0, price_min=0.0, price_max=22.0)
    best3 = grid_best_contract(inst, grid)
    best4 = oversize_menu_search(inst, grid, menu_size=4)
    assert best4 <= best3.profit + 1e-9


def _python_reference_best(inst, prices_by_alt):
    """Literal menu enumeration through the public model API."""
    from itertools import combinations, product

    from temptmenu import Contract, ContractKind, realized_outcome

    kind_by_size = {
        1: ContractKind.COMMITMENT,
        2: ContractKind.INDULGING,
        3: ContractKind.COMPROMISING,
    }
    best = None
    for size in (1, 2, 3):
        for subset in combinations(range(len(inst.alternatives)), size):
            for prices in product(*(prices_by_alt[i] for i in subset)):
                offers = tuple(
                    Offer(inst.alternatives[i], float(p))
                    for i, p in zip(subset, prices)
                )
                menu = Contract(offers, 0, kind_by_size[size])
                out = realized_outcome(menu, inst.cost_fn)
                if out.chosen is None:
                    continue
                if best is None or out.profit > best:
                    best = out.profit
    return best


@given(seed=st.integers(0, 10_000))
@settings(max_examples=10, deadline=None)
def test_kernels_match_python_reference_oracle(seed):
    rng = np.random.default_rng(seed)
    inst = random_pw_instance(rng, n=3)
    grid = GridSpec(
        price_step=2.5, price_min=0.0, price_max=17.5,
        include_analytic_prices=False,
    )
    pts = list(grid.base_points())
    reference = _python_reference_best(inst, [pts] * 3)
    for mode in MODES:
        for backend in BACKENDS:
            sol = grid_best_contract(inst, grid, mode=mode, backend=backend)
            if reference is None or reference < 0.0:
                assert sol is None
            else:
                assert sol.profit == reference


# -- solution replay ----------------------------------------------------------------


def test_verify_passes_on_analytic_optimum(running):
    report = verify_solution(optimal_contract(running), running)
    assert report.passed
    assert not report.failures
    assert "pass" in report.summary()


def test_verify_names_the_violated_condition(running):
    sol = optimal_contract(running)
    offers = list(sol.contract.offers)
    bumped = Offer(offers[0].alternative, offers[0].price + 0.01)
    broken = dataclasses.replace(
        sol,
        contract=dataclasses.replace(sol.contract, offers=(bumped, *offers[1:])),
    )
    report = verify_solution(broken, running)
    assert not report.passed
    names = {c.name for c in report.failures}
    assert "intended_not_dominated" in names or "participation_binds" in names


def test_verify_commitment_trivially(running):
    from temptmenu import commitment_contract

    report = verify_solution(commitment_contract(running.alternatives[0]), running)
    assert report.passed


def test_verify_epsilon_discount_breaks_knife_edge(running):
    sol = optimal_contract(running)
    report = verify_solution(sol, running, epsilon_discount=1e-9)
    assert report.passed
    # with the discount the intended offer wins outright
    report_strict = verify_solution(sol, running, epsilon_discount=1e-9, tie_tol=0.0)
    assert any(c.name == "intended_chosen" and c.passed for c in report_strict.checks)


def test_verify_rejects_wrong_profit_claim(running):
    sol = optimal_contract(running)
    broken = dataclasses.replace(sol, profit=sol.profit + 0.5)
    report = verify_solution(broken, running)
    assert {c.name for c in report.failures} == {"profit_consistent"}
