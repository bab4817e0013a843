"""Fixed-point power control for a fixed association.

Each BS repeatedly sets its power to (number of served users weighted by
eta) over an interference price, projected onto [0, p_max]. The update map
is two-sided scalable, so the fixed point is unique and the iteration
converges from any feasible start; iterations begin at p_max.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels, netmodel


@dataclass
class PowerCtlParams:
    t2_max: int = 100            # inner-loop iteration cap
    p_tol: float = 1e-4          # relative max power change declaring a fixed point

    def __post_init__(self):
        if self.t2_max < 1:
            raise ValueError("t2_max must be >= 1")
        if self.p_tol <= 0:
            raise ValueError("p_tol must be positive")


def eta(x):
    """Per-BS user shares: x / load for serving BSs, zero rows for empty
    ones. Nonempty rows sum to one."""
    x = np.asarray(x, dtype=np.float64)
    y = x.sum(axis=1)
    out = np.zeros_like(x)
    served = y > 0
    out[served] = x[served] / y[served, None]
    return out


def gamma_term(p, eta_mat, gains, sigma2, n, k, m):
    """Single interference-pricing term: eta[n,k] * gains[m,k] over the
    interference-plus-noise seen by user k from its serving BS n."""
    if eta_mat[n, k] == 0.0:
        return 0.0
    denom = sigma2
    for j in range(len(p)):
        if j != n:
            denom += p[j] * gains[j, k]
    return eta_mat[n, k] * gains[m, k] / denom


def hbar(p, eta_mat, gains, sigma2, m):
    """Interference price of BS m: the sum of gamma terms over every other
    BS and every user (plain loops, used as a cross-check in tests)."""
    total = 0.0
    n_bs, n_users = gains.shape
    for n in range(n_bs):
        if n == m:
            continue
        for k in range(n_users):
            total += gamma_term(p, eta_mat, gains, sigma2, n, k, m)
    return total


def power_update(p, eta_mat, gains, sigma2, p_max):
    """One simultaneous update of every BS power.

    Empty BSs (zero eta row) go to zero power; a BS whose interference
    price is zero gains without bound and is pinned at its p_max; all other
    values are clamped to [0, p_max].
    """
    prices = _kernels.hbar_all(p, eta_mat, gains, sigma2)
    numer = np.asarray(eta_mat).sum(axis=1)
    p_max = np.asarray(p_max, dtype=np.float64)
    with np.errstate(divide="ignore", invalid="ignore"):
        raw = numer / prices
    return np.where(numer == 0.0, 0.0,
                    np.where(prices == 0.0, p_max,
                             np.clip(raw, 0.0, p_max)))


def power_control_solve(x, scenario, params: PowerCtlParams | None = None,
                        p0=None):
    """Iterate the power update to its fixed point.

    Returns ``(p, trace)`` where trace rows are
    ``(iteration, max_relative_change, objective)`` with the objective the
    sum of effective rates at the current powers.
    """
    params = params or PowerCtlParams()
    x = netmodel.check_association(x, scenario.n_users)
    eta_mat = eta(x)
    p = np.array(scenario.p_max if p0 is None else p0, dtype=np.float64)
    trace = []
    for t in range(1, params.t2_max + 1):
        p_next = power_update(p, eta_mat, scenario.gains, scenario.noise_w,
                              scenario.p_max)
        scale = max(float(p_next.max()), 1e-300)
        rel_change = float(np.abs(p_next - p).max()) / scale
        p = p_next
        trace.append((t, rel_change,
                      netmodel.sum_effective_rates(scenario, p, x)))
        if rel_change <= params.p_tol:
            break
    return p, trace
