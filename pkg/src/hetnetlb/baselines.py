"""Reference association schemes: max-achievable-rate and log-utility."""

from __future__ import annotations

import math

import numpy as np

from . import netmodel


def mara(scenario, p):
    """Max-achievable-rate association: each user picks the BS with the
    highest achievable rate (ties to the lowest BS index)."""
    rates = netmodel.rate_matrix(scenario, p)
    return netmodel.association_from_assignment(
        np.argmax(rates, axis=0), scenario.n_bs)


def _load_entropy(y):
    # y * log(y), with the empty-BS term zero
    return y * math.log(y) if y > 0 else 0.0


def log_utility(rates, x):
    """Sum over users of log(rate / serving load); users whose rate is zero
    toward every BS are excluded."""
    x = np.asarray(x)
    y = netmodel.loads(x)
    assignment = netmodel.assignment_of(x)
    total = 0.0
    for k, n in enumerate(assignment):
        r = rates[n, k]
        if r > 0.0:
            total += math.log(r) - math.log(y[n])
    return total


def auf(scenario, p, max_passes=50):
    """Log-utility association via greedy single-user improving moves.

    Starts from the max-rate association and sweeps users in index order;
    each user moves to the BS whose reassignment most increases the total
    log utility (ties to the lowest BS index). Stops after a sweep with no
    moves or after ``max_passes`` sweeps. Users with zero rate toward every
    BS keep their max-rate choice and are excluded from the utility.
    """
    rates = netmodel.rate_matrix(scenario, p)
    n_bs, n_users = rates.shape
    assignment = np.argmax(rates, axis=0)
    y = np.bincount(assignment, minlength=n_bs).astype(np.int64)
    with np.errstate(divide="ignore"):
        log_rates = np.where(rates > 0.0, np.log(np.maximum(rates, 1e-300)),
                             -np.inf)
    movable = np.isfinite(log_rates).any(axis=0)

    for _ in range(max_passes):
        moved = 0
        for k in range(n_users):
            if not movable[k]:
                continue
            old = assignment[k]
            best_gain, best_bs = 1e-12, old
            for n in range(n_bs):
                if n == old or not np.isfinite(log_rates[n, k]):
                    continue
                gain = (log_rates[n, k] - log_rates[old, k]
                        - (_load_entropy(y[n] + 1) - _load_entropy(y[n]))
                        - (_load_entropy(y[old] - 1) - _load_entropy(y[old])))
                if gain > best_gain:
                    best_gain, best_bs = gain, n
            if best_bs != old:
                assignment[k] = best_bs
                y[old] -= 1
                y[best_bs] += 1
                moved += 1
        if moved == 0:
            break
    return netmodel.association_from_assignment(assignment, n_bs)
