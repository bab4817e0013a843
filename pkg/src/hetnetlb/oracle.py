"""Exhaustive references for tiny instances: association enumeration and a
power grid search. Rates are recomputed here from scalar primitives so the
oracle shares no vectorized solver path."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from . import netmodel


class OracleBudgetError(RuntimeError):
    """Requested enumeration exceeds the configured budget."""


@dataclass
class OracleBudget:
    max_assoc_combos: int = 200_000   # cap on N^K assignments
    power_grid_points: int = 64       # per-BS grid resolution


def _scalar_rates(scenario, p):
    # independent of the kernel path on purpose
    rates = np.empty((scenario.n_bs, scenario.n_users))
    for n in range(scenario.n_bs):
        for k in range(scenario.n_users):
            rates[n, k] = netmodel.achievable_rate(
                netmodel.sinr(scenario, p, n, k))
    return rates


def _assignment_objective(rates, assignment, n_bs):
    counts = [0] * n_bs
    for n in assignment:
        counts[n] += 1
    total = 0.0
    for k, n in enumerate(assignment):
        total += rates[n, k] / counts[n]
    return total


def brute_force_association(scenario, p, budget: OracleBudget | None = None):
    """Maximize the sum of effective rates over all N^K assignments.

    Returns ``(association, objective)``; ties go to the lexicographically
    smallest assignment. Refuses instances beyond the budget rather than
    truncating.
    """
    budget = budget or OracleBudget()
    n_bs, n_users = scenario.n_bs, scenario.n_users
    combos = n_bs ** n_users
    if combos > budget.max_assoc_combos:
        raise OracleBudgetError(
            f"{n_bs}^{n_users} = {combos} assignments exceed the budget "
            f"of {budget.max_assoc_combos}")
    rates = _scalar_rates(scenario, p)
    best_assignment, best_value = None, -np.inf
    for assignment in itertools.product(range(n_bs), repeat=n_users):
        value = _assignment_objective(rates, assignment, n_bs)
        if value > best_value:
            best_assignment, best_value = assignment, value
    x = netmodel.association_from_assignment(
        np.array(best_assignment), n_bs)
    return x, float(best_value)


def grid_search_power(scenario, x, grid_points=None,
                      budget: OracleBudget | None = None):
    """Best power vector for a fixed association on a per-BS uniform grid
    over (0, p_max], evaluated on the true sum of effective rates.

    Restricted to N <= 3; ties go to the first grid point in enumeration
    order.
    """
    budget = budget or OracleBudget()
    if grid_points is None:
        grid_points = budget.power_grid_points
    n_bs = scenario.n_bs
    if n_bs > 3:
        raise OracleBudgetError(
            f"power grid search supports N <= 3, got N = {n_bs}")
    x = netmodel.check_association(x, scenario.n_users)
    y = netmodel.loads(x)
    served = y > 0
    grids = [np.linspace(pm / grid_points, pm, grid_points)
             for pm in scenario.p_max]
    best_p, best_value = None, -np.inf
    for combo in itertools.product(*grids):
        p = np.array(combo)
        # direct evaluation, no shared kernel: signal and interference per user
        signal = p[:, None] * scenario.gains
        interference = signal.sum(axis=0)[None, :] - signal
        rates = np.log2(1.0 + signal / (interference + scenario.noise_w))
        value = float(((x[served] * rates[served]).sum(axis=1)
                       / y[served]).sum())
        if value > best_value:
            best_p, best_value = p, value
    return best_p, best_value
