"""Load-balancing user association and power control for two-tier
heterogeneous cellular networks."""

from ._kernels import BACKEND
from .baselines import auf, mara
from .joint import JointParams, JointResult, juapcmser_solve
from .metrics import (MetricsReport, energy_efficiency, jain_index,
                      rate_cdf, summarize)
from .netmodel import (BaseStation, NetworkScenario, ScenarioConfig, Tier,
                       User, achievable_rate, channel_gain,
                       generate_scenario, loads, noise_power, pathloss_db,
                       rate_matrix, sinr, sum_effective_rates)
from .oracle import (OracleBudget, OracleBudgetError,
                     brute_force_association, grid_search_power)
from .powerctl import (PowerCtlParams, eta, power_control_solve,
                       power_update)
from .uamser import (MultiplierState, UamserParams, UamserResult,
                     init_multipliers, line_search, residuals, select_bs,
                     uamser_solve, update_multipliers)

__version__ = "0.1.0"
