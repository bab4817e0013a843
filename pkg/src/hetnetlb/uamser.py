"""One-layer association solver maximizing the sum of effective rates.

The binary association problem is handled through a parameterized system in
multipliers (mu, omega): each iteration re-selects serving BSs from the
current multiplier utilities, then pulls the multipliers toward the closed
forms of the new association with a damped Newton-type step and normalizes
mu. The iteration stops when the system residuals vanish (the multipliers
exactly reproduce their closed forms), when the association revisits a
previous state (the trajectory is then periodic, so the objective trace has
stagnated), or at the iteration cap.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import netmodel


class LineSearchStall(RuntimeError):
    """Backtracking exponent exceeded the hard cap."""


class DegenerateState(RuntimeError):
    """Multiplier sum collapsed to zero; cannot normalize."""


_LINE_SEARCH_CAP = 64


@dataclass
class UamserParams:
    xi: float = 0.5               # backtracking base
    eps: float = 1e-3             # sufficient-decrease constant
    t1_max: int = 200             # iteration cap
    residual_tol: float = 1e-9    # max-abs residual declaring the system solved
    objective_tol: float = 1e-9   # relative objective stagnation tolerance

    def __post_init__(self):
        if not 0 < self.xi < 1:
            raise ValueError("xi must lie in (0, 1)")
        if not 0 < self.eps < 1:
            raise ValueError("eps must lie in (0, 1)")
        if self.t1_max < 1:
            raise ValueError("t1_max must be >= 1")


@dataclass
class MultiplierState:
    mu: np.ndarray                # (N, K), >= 0
    omega: np.ndarray             # (N, K), >= 0, bits/s/Hz


@dataclass
class UamserResult:
    x: np.ndarray
    multipliers: MultiplierState
    objective: float              # parameterized objective at the returned x
    objective_trace: list = field(default_factory=list)
    residual_trace: list = field(default_factory=list)
    iterations: int = 0
    converged: bool = False
    reason: str = ""              # residual-zero | objective-stagnant |
                                  # cap-hit | line-search-stall


def init_multipliers(x0, rates) -> MultiplierState:
    """Closed-form multipliers of an association: mu = x/(1+load),
    omega = rates/(1+load), with the load taken per BS."""
    x0 = np.asarray(x0)
    denom = (1.0 + x0.sum(axis=1))[:, None]
    return MultiplierState(mu=x0 / denom, omega=np.asarray(rates) / denom)


def select_bs(multipliers: MultiplierState, tie_break="lowest-index"):
    """Each user picks the BS maximizing omega minus that BS's mu-omega
    penalty; exact ties go to the lowest BS index."""
    if tie_break != "lowest-index":
        raise ValueError(f"unknown tie-break policy {tie_break!r}")
    penalty = (multipliers.mu * multipliers.omega).sum(axis=1)
    utilities = multipliers.omega - penalty[:, None]
    # argmax returns the first (lowest) index on ties
    choice = np.argmax(utilities, axis=0)
    return netmodel.association_from_assignment(choice, utilities.shape[0])


def residuals(multipliers: MultiplierState, x, rates):
    """System residuals (phi, varphi) and per-BS step scaling chi."""
    x = np.asarray(x)
    load1 = (1.0 + x.sum(axis=1))[:, None]
    phi = multipliers.mu * load1 - x
    varphi = multipliers.omega * load1 - np.asarray(rates)
    chi = 1.0 / load1[:, 0]
    return phi, varphi, chi


def _squared_norm(phi, varphi):
    return float((phi * phi).sum() + (varphi * varphi).sum())


def line_search(multipliers: MultiplierState, x, rates,
                params: UamserParams):
    """Smallest backtracking exponent m whose damped step satisfies the
    sufficient-decrease inequality on the squared residual norm."""
    phi, varphi, chi = residuals(multipliers, x, rates)
    norm0 = _squared_norm(phi, varphi)
    x = np.asarray(x)
    rates = np.asarray(rates)
    load1 = (1.0 + x.sum(axis=1))[:, None]
    for m in range(_LINE_SEARCH_CAP + 1):
        step = params.xi ** m
        mu_c = multipliers.mu - step * chi[:, None] * phi
        om_c = multipliers.omega - step * chi[:, None] * varphi
        cand = _squared_norm(mu_c * load1 - x, om_c * load1 - rates)
        if cand <= (1.0 - params.eps * step) * norm0:
            return m
    raise LineSearchStall(
        f"no admissible step within {_LINE_SEARCH_CAP} backtracks")


def update_multipliers(multipliers: MultiplierState, x, rates, m,
                       params: UamserParams) -> MultiplierState:
    """Damped Newton-type step toward the closed forms of ``x``, clamped at
    zero, with mu renormalized to unit global sum."""
    phi, varphi, chi = residuals(multipliers, x, rates)
    step = params.xi ** m
    mu = np.maximum(multipliers.mu - step * chi[:, None] * phi, 0.0)
    omega = np.maximum(multipliers.omega - step * chi[:, None] * varphi, 0.0)
    total = mu.sum()
    if total <= 0.0:
        raise DegenerateState("multiplier sum is zero after the update")
    return MultiplierState(mu=mu / total, omega=omega)


def parameterized_objective(multipliers: MultiplierState, x):
    """Objective of the multiplier-parameterized selection problem at ``x``."""
    penalty = (multipliers.mu * multipliers.omega).sum(axis=1)
    return float((np.asarray(x) * (multipliers.omega - penalty[:, None]))
                 .sum())


def uamser_solve(scenario, p, params: UamserParams | None = None,
                 x0=None) -> UamserResult:
    """Run the association iteration at fixed transmit powers.

    ``x0`` defaults to the max-achievable-rate association. When the
    iteration enters a cycle the returned association is the best-objective
    state of the detected orbit (earliest on ties), which makes the result
    deterministic; at the cap the last state is returned.
    """
    params = params or UamserParams()
    rates = netmodel.rate_matrix(scenario, p)
    n_bs, n_users = rates.shape
    if x0 is None:
        # max-achievable-rate association: feasible, cheap, reproducible
        x0 = netmodel.association_from_assignment(
            np.argmax(rates, axis=0), n_bs)
    x0 = netmodel.check_association(x0, n_users)

    state = init_multipliers(x0, rates)
    seen = {}
    history = []                  # (x, objective) per iteration
    objective_trace = []
    residual_trace = []

    def result(x, reason, converged, objective):
        return UamserResult(
            x=x, multipliers=state, objective=objective,
            objective_trace=objective_trace, residual_trace=residual_trace,
            iterations=len(objective_trace), converged=converged,
            reason=reason)

    for t in range(1, params.t1_max + 1):
        x = select_bs(state)
        phi, varphi, _ = residuals(state, x, rates)
        res_norm = max(np.abs(phi).max(), np.abs(varphi).max())
        objective = parameterized_objective(state, x)
        objective_trace.append(objective)
        residual_trace.append(float(res_norm))
        history.append((x, objective))

        if res_norm <= params.residual_tol:
            return result(x, "residual-zero", True, objective)

        key = netmodel.assignment_of(x).tobytes()
        if key in seen:
            # the trajectory is periodic from the first occurrence on, so
            # the objective trace repeats: report stagnation and return the
            # orbit's best-objective state (earliest on ties)
            first = seen[key]
            if abs(objective - history[first - 1][1]) <= \
                    params.objective_tol * max(1.0, abs(objective)):
                orbit = history[first - 1:t - 1]
                best_x, best_f = max(orbit, key=lambda entry: entry[1])
                return result(best_x, "objective-stagnant", True, best_f)
        seen[key] = t

        try:
            m = line_search(state, x, rates, params)
        except LineSearchStall:
            return result(x, "line-search-stall", False, objective)
        state = update_multipliers(state, x, rates, m, params)

    x, objective = history[-1]
    return result(x, "cap-hit", False, objective)
