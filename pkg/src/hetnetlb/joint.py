"""Joint association and power control by alternating the two solvers.

Each outer round re-associates users at the current powers (warm-started
from the previous association) and then drives the powers to the fixed
point for the new association, restarting the inner iteration from p_max.
The outer loop stops when the sum of effective rates stabilizes.

The result carries the last iterate, which is what the alternation
produces; the best-objective pair seen across rounds is exposed alongside
because the objective is not guaranteed to improve monotonically (power
control trades raw sum rate for balance).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import netmodel
from .powerctl import PowerCtlParams, power_control_solve
from .uamser import UamserParams, uamser_solve


@dataclass
class JointParams:
    t3_max: int = 30             # outer-loop cap
    f_tol: float = 1e-6          # relative objective stabilization tolerance
    uamser: UamserParams = field(default_factory=UamserParams)
    powerctl: PowerCtlParams = field(default_factory=PowerCtlParams)

    def __post_init__(self):
        if self.t3_max < 1:
            raise ValueError("t3_max must be >= 1")
        if self.f_tol <= 0:
            raise ValueError("f_tol must be positive")


@dataclass
class JointResult:
    x: np.ndarray                # last outer iterate
    p: np.ndarray
    objective: float             # sum of effective rates at (p, x)
    best_x: np.ndarray = None    # best-objective pair seen across rounds
    best_p: np.ndarray = None
    best_objective: float = -np.inf
    outer_trace: list = field(default_factory=list)
    inner_traces: list = field(default_factory=list)
    association_traces: list = field(default_factory=list)
    outer_iterations: int = 0
    converged: bool = False


def juapcmser_solve(scenario, params: JointParams | None = None
                    ) -> JointResult:
    params = params or JointParams()
    p = np.array(scenario.p_max, dtype=np.float64)
    x = None
    result = JointResult(x=None, p=None, objective=-np.inf)
    previous = None
    for t3 in range(1, params.t3_max + 1):
        ua = uamser_solve(scenario, p, params.uamser, x0=x)
        x = ua.x
        p, pc_trace = power_control_solve(x, scenario, params.powerctl)
        objective = netmodel.sum_effective_rates(scenario, p, x)

        result.outer_trace.append(objective)
        result.inner_traces.append(pc_trace)
        result.association_traces.append(ua)
        result.outer_iterations = t3
        if objective > result.best_objective:
            result.best_objective = objective
            result.best_x, result.best_p = x.copy(), p.copy()
        if previous is not None and \
                abs(objective - previous) <= params.f_tol * abs(previous):
            result.converged = True
            break
        previous = objective

    result.x, result.p = x, p
    result.objective = result.outer_trace[-1]
    return result
