import numpy as np
import pytest

from hetnetlb import netmodel
from hetnetlb.netmodel import (BaseStation, NetworkScenario, ScenarioConfig,
                               Tier, User, generate_scenario)


def toy_scenario(gains, p_max=None, noise_w=0.25, tiers=None,
                 kappa=None, p_circuit=None):
    """Scenario with explicit gains for hand-computed cases."""
    gains = np.asarray(gains, dtype=np.float64)
    n_bs, n_users = gains.shape
    p_max = np.ones(n_bs) if p_max is None else np.asarray(p_max, float)
    tiers = [Tier.MACRO] * n_bs if tiers is None else tiers
    kappa = np.full(n_bs, 4.0) if kappa is None else np.asarray(kappa)
    p_circuit = (np.full(n_bs, 10.0) if p_circuit is None
                 else np.asarray(p_circuit))
    bss = [BaseStation(n, tiers[n], (float(n) * 100.0, 0.0), p_max[n],
                       kappa[n], p_circuit[n]) for n in range(n_bs)]
    users = [User(k, (float(k), 10.0)) for k in range(n_users)]
    return NetworkScenario(bss=bss, users=users, gains=gains,
                           noise_w=noise_w, bandwidth_hz=10e6, seed=0)


def tiny_scenario(rng, **overrides):
    """Random small two-tier drop: 1 macro site, 1-2 picos, 3-6 users."""
    cfg = ScenarioConfig(
        macro_sites=1,
        picos_per_macro=int(rng.integers(1, 3)),
        users_per_macro=int(rng.integers(3, 7)),
        **overrides,
    )
    return generate_scenario(cfg, int(rng.integers(0, 2**31)))


def random_association(rng, n_bs, n_users):
    return netmodel.association_from_assignment(
        rng.integers(0, n_bs, n_users), n_bs)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
