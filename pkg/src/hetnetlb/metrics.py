"""Reported quantities: load-balance index, tier loads, rate CDFs, energy
efficiency."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import netmodel
from .netmodel import Tier


@dataclass
class MetricsReport:
    jain: float                      # load-balance index in [1/N, 1]
    tier_loads: dict                 # tier name -> mean users per BS of that tier
    rate_samples: np.ndarray         # per-user effective rates, bits/s/Hz
    macro_rate_samples: np.ndarray   # subset served by the macro tier
    avg_rate: float
    ee_samples: np.ndarray           # per-user bits/s/Hz per watt
    avg_ee: float


def jain_index(y):
    """Load-balance index (sum y)^2 / (N * sum y^2); 1 means even loads."""
    y = np.asarray(y, dtype=np.float64)
    total_sq = float((y * y).sum())
    if total_sq == 0.0:
        raise ValueError("all-zero load vector")
    return float(y.sum()) ** 2 / (len(y) * total_sq)


def energy_efficiency(r_nk, bs, p_n):
    """Effective rate over the serving BS's power draw kappa*p + circuit."""
    if p_n < 0:
        raise ValueError("power must be nonnegative")
    denom = bs.kappa * p_n + bs.p_circuit
    if denom <= 0.0:
        raise ValueError("nonpositive power consumption")
    return r_nk / denom


def rate_cdf(samples, grid):
    """Empirical CDF of ``samples`` evaluated at the sorted ``grid``."""
    samples = np.sort(np.asarray(samples, dtype=np.float64))
    if samples.size == 0:
        raise ValueError("need at least one sample")
    counts = np.searchsorted(samples, np.asarray(grid, dtype=np.float64),
                             side="right")
    return [(float(g), float(c) / samples.size)
            for g, c in zip(np.asarray(grid), counts)]


def summarize(scenario, x, p) -> MetricsReport:
    """All per-run metrics for one (association, power) pair."""
    x = netmodel.check_association(x, scenario.n_users)
    rates = netmodel.rate_matrix(scenario, p)
    y = netmodel.loads(x)
    assignment = netmodel.assignment_of(x)
    users = np.arange(scenario.n_users)

    effective = rates[assignment, users] / y[assignment]
    served_power = np.asarray(p)[assignment]
    ee = effective / (scenario.kappa[assignment] * served_power
                      + scenario.p_circuit[assignment])
    served_tier = scenario.tiers[assignment]

    tier_loads = {}
    for tier in (Tier.MACRO, Tier.PICO):
        members = scenario.tiers == int(tier)
        if members.any():
            tier_loads[tier.name.lower()] = float(y[members].mean())

    return MetricsReport(
        jain=jain_index(y),
        tier_loads=tier_loads,
        rate_samples=effective,
        macro_rate_samples=effective[served_tier == int(Tier.MACRO)],
        avg_rate=float(effective.mean()),
        ee_samples=ee,
        avg_ee=float(ee.mean()),
    )
