"""Two-tier cellular deployment model: geometry, channels, rates and loads.

Macro base stations sit on a hexagonal grid; pico base stations and users
are dropped uniformly inside each macrocell. Channel gains combine a
tier-specific 3GPP distance pathloss with frozen log-normal shadowing, so a
scenario is a pure function of (config, seed).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import IntEnum

import numpy as np

from . import _kernels

# 3GPP pathloss constants, distance in kilometers
_MACRO_PL_OFFSET = 128.1
_MACRO_PL_SLOPE = 37.6
_PICO_PL_OFFSET = 140.7
_PICO_PL_SLOPE = 36.7


class Tier(IntEnum):
    MACRO = 0
    PICO = 1


def dbm_to_watts(dbm):
    return 10.0 ** ((dbm - 30.0) / 10.0)


@dataclass
class ScenarioConfig:
    """Deployment and radio parameters with standard two-tier defaults."""

    macro_sites: int = 7            # hexagonal grid sites
    picos_per_macro: int = 4
    users_per_macro: int = 30
    isd_m: float = 1000.0           # inter-site distance between macro BSs
    macro_power_dbm: float = 46.0
    pico_power_dbm: float = 30.0
    macro_circuit_w: float = 10.0
    pico_circuit_w: float = 0.1
    macro_kappa: float = 4.0        # power-amplifier coefficient
    pico_kappa: float = 2.0
    psd_dbm_hz: float = -174.0      # noise power spectral density
    bandwidth_hz: float = 10e6
    shadowing_std_db: float = 8.0
    min_distance_m: float = 10.0    # pathloss distance floor


@dataclass
class BaseStation:
    id: int
    tier: Tier
    position: np.ndarray            # (x, y) meters
    p_max: float                    # watts
    kappa: float
    p_circuit: float                # watts

    def __post_init__(self):
        self.position = np.asarray(self.position, dtype=np.float64)
        if self.p_max <= 0:
            raise ValueError(f"BS {self.id}: p_max must be positive")
        if self.kappa < 1:
            raise ValueError(f"BS {self.id}: kappa must be >= 1")
        if self.p_circuit < 0:
            raise ValueError(f"BS {self.id}: p_circuit must be >= 0")


@dataclass
class User:
    id: int
    position: np.ndarray

    def __post_init__(self):
        self.position = np.asarray(self.position, dtype=np.float64)


@dataclass
class NetworkScenario:
    """Immutable deployment snapshot shared by all solvers.

    Per-BS parameter vectors (p_max, kappa, p_circuit, tiers) are derived
    from ``bss`` at construction; arrays are marked read-only.
    """

    bss: list
    users: list
    gains: np.ndarray               # (N, K), linear
    noise_w: float
    bandwidth_hz: float
    seed: int
    p_max: np.ndarray = field(init=False)
    kappa: np.ndarray = field(init=False)
    p_circuit: np.ndarray = field(init=False)
    tiers: np.ndarray = field(init=False)

    def __post_init__(self):
        self.gains = np.asarray(self.gains, dtype=np.float64)
        n_bs, n_users = len(self.bss), len(self.users)
        if self.gains.shape != (n_bs, n_users):
            raise ValueError(
                f"gains shape {self.gains.shape} != ({n_bs}, {n_users})")
        if not np.all(np.isfinite(self.gains)) or np.any(self.gains <= 0):
            raise ValueError("gains must be strictly positive and finite")
        if self.noise_w <= 0:
            raise ValueError("noise_w must be positive")
        self.p_max = np.array([b.p_max for b in self.bss])
        self.kappa = np.array([b.kappa for b in self.bss])
        self.p_circuit = np.array([b.p_circuit for b in self.bss])
        self.tiers = np.array([int(b.tier) for b in self.bss])
        for arr in (self.gains, self.p_max, self.kappa, self.p_circuit,
                    self.tiers):
            arr.flags.writeable = False

    @property
    def n_bs(self):
        return len(self.bss)

    @property
    def n_users(self):
        return len(self.users)


def hex_grid_centers(n_sites, isd_m):
    """Centers of ``n_sites`` hexagonal-grid sites, spiral order from origin.

    Adjacent sites are exactly ``isd_m`` apart.
    """
    centers = [(0.0, 0.0)]
    ring = 1
    while len(centers) < n_sites:
        for corner in range(6):
            angle = math.pi / 6 + corner * math.pi / 3
            cx = ring * isd_m * math.cos(angle)
            cy = ring * isd_m * math.sin(angle)
            walk = math.pi / 6 + (corner + 2) * math.pi / 3
            dx, dy = isd_m * math.cos(walk), isd_m * math.sin(walk)
            for step in range(ring):
                if len(centers) >= n_sites:
                    break
                centers.append((cx + step * dx, cy + step * dy))
            if len(centers) >= n_sites:
                break
        ring += 1
    return np.array(centers, dtype=np.float64)


# hexagon edge normals point at the six neighbor directions; three axes
# suffice because the test is symmetric
_HEX_AXES = [(math.cos(math.pi / 6 + i * math.pi / 3),
              math.sin(math.pi / 6 + i * math.pi / 3)) for i in range(3)]


def point_in_hexagon(point, center, isd_m):
    """True if ``point`` lies in the hexagonal cell around ``center``."""
    dx = point[0] - center[0]
    dy = point[1] - center[1]
    apothem = isd_m / 2.0
    return all(abs(dx * ax + dy * ay) <= apothem for ax, ay in _HEX_AXES)


def _draw_in_hexagon(rng, center, isd_m):
    # rejection sampling from the bounding square of the hexagon
    radius = isd_m / math.sqrt(3.0)
    while True:
        pt = center + rng.uniform(-radius, radius, 2)
        if point_in_hexagon(pt, center, isd_m):
            return pt


def generate_scenario(config: ScenarioConfig, seed: int) -> NetworkScenario:
    """Build a deterministic two-tier scenario from (config, seed)."""
    if config.macro_sites < 1:
        raise ValueError("need at least one macro site")
    if config.users_per_macro * config.macro_sites < 1:
        raise ValueError("need at least one user")
    if config.picos_per_macro < 0:
        raise ValueError("picos_per_macro must be >= 0")

    rng = np.random.default_rng(seed)
    centers = hex_grid_centers(config.macro_sites, config.isd_m)

    p_macro = dbm_to_watts(config.macro_power_dbm)
    p_pico = dbm_to_watts(config.pico_power_dbm)
    bss = [BaseStation(i, Tier.MACRO, c, p_macro, config.macro_kappa,
                       config.macro_circuit_w)
           for i, c in enumerate(centers)]
    for center in centers:
        for _ in range(config.picos_per_macro):
            pos = _draw_in_hexagon(rng, center, config.isd_m)
            bss.append(BaseStation(len(bss), Tier.PICO, pos, p_pico,
                                   config.pico_kappa, config.pico_circuit_w))

    users = []
    for center in centers:
        for _ in range(config.users_per_macro):
            pos = _draw_in_hexagon(rng, center, config.isd_m)
            users.append(User(len(users), pos))

    bs_pos = np.array([b.position for b in bss])
    user_pos = np.array([u.position for u in users])
    dist_km = np.linalg.norm(bs_pos[:, None, :] - user_pos[None, :, :],
                             axis=2) / 1000.0
    min_km = config.min_distance_m / 1000.0
    tiers = np.array([int(b.tier) for b in bss])
    pl = np.empty_like(dist_km)
    for n in range(len(bss)):
        pl[n] = [pathloss_db(Tier(tiers[n]), d, min_km) for d in dist_km[n]]
    shadow = rng.normal(0.0, config.shadowing_std_db, pl.shape)
    gains = channel_gain(pl, shadow)

    return NetworkScenario(
        bss=bss,
        users=users,
        gains=gains,
        noise_w=noise_power(config.psd_dbm_hz, config.bandwidth_hz),
        bandwidth_hz=config.bandwidth_hz,
        seed=seed,
    )


def pathloss_db(tier: Tier, distance_km: float, min_distance_km=0.01):
    """Tier-specific distance pathloss in dB, distance in kilometers.

    Distances below ``min_distance_km`` are floored to it.
    """
    d = max(distance_km, min_distance_km)
    if d <= 0:
        raise ValueError("distance must be positive after flooring")
    if tier == Tier.MACRO:
        return _MACRO_PL_OFFSET + _MACRO_PL_SLOPE * math.log10(d)
    return _PICO_PL_OFFSET + _PICO_PL_SLOPE * math.log10(d)


def channel_gain(pl_db, shadow_db):
    """Linear channel gain 10^(-(pathloss + shadowing)/10)."""
    return 10.0 ** (-(np.asarray(pl_db) + np.asarray(shadow_db)) / 10.0)


def noise_power(psd_dbm_hz, bandwidth_hz):
    """Receiver noise power in watts from a PSD in dBm/Hz and a bandwidth."""
    if bandwidth_hz <= 0:
        raise ValueError("bandwidth must be positive")
    return 10.0 ** ((psd_dbm_hz + 10.0 * math.log10(bandwidth_hz) - 30.0)
                    / 10.0)


def sinr(scenario: NetworkScenario, p, n, k):
    """SINR of user ``k`` served by BS ``n`` under power vector ``p``."""
    interference = 0.0
    for j in range(scenario.n_bs):
        if j != n:
            interference += p[j] * scenario.gains[j, k]
    return p[n] * scenario.gains[n, k] / (interference + scenario.noise_w)


def achievable_rate(sinr_val):
    """Spectral efficiency log2(1 + SINR) in bits/s/Hz."""
    return math.log2(1.0 + sinr_val)


def rate_matrix(scenario: NetworkScenario, p):
    """Achievable-rate matrix for all (BS, user) pairs (kernel-backed)."""
    return _kernels.rate_matrix(p, scenario.gains, scenario.noise_w)


def check_association(x, n_users=None):
    """Validate a binary association matrix (each column sums to one)."""
    x = np.asarray(x)
    if x.ndim != 2:
        raise ValueError("association matrix must be 2-D")
    if n_users is not None and x.shape[1] != n_users:
        raise ValueError(f"expected {n_users} columns, got {x.shape[1]}")
    if not np.isin(x, (0, 1)).all():
        raise ValueError("association matrix must be binary")
    if not (x.sum(axis=0) == 1).all():
        raise ValueError("each user must be associated with exactly one BS")
    return x


def association_from_assignment(assignment, n_bs):
    """Binary association matrix from a per-user serving-BS index vector."""
    assignment = np.asarray(assignment, dtype=np.int64)
    x = np.zeros((n_bs, assignment.size), dtype=np.int64)
    x[assignment, np.arange(assignment.size)] = 1
    return x


def assignment_of(x):
    """Per-user serving-BS index vector from an association matrix."""
    return np.argmax(np.asarray(x), axis=0)


def loads(x):
    """Per-BS user counts (row sums of the association matrix)."""
    return np.asarray(x).sum(axis=1)


def effective_rate(r_nk, y_n):
    """Long-term per-user rate: achievable rate over the serving-BS load."""
    if y_n < 1:
        raise ValueError("effective rate undefined for an empty BS")
    return r_nk / y_n


def sum_effective_rates(scenario: NetworkScenario, p, x):
    """Sum over users of achievable rate divided by serving-BS load."""
    x = np.asarray(x)
    rates = rate_matrix(scenario, p)
    y = loads(x)
    served = y > 0
    per_bs = (x[served] * rates[served]).sum(axis=1) / y[served]
    return float(per_bs.sum())
