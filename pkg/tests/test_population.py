"""Tests for initial population construction."""

import numpy as np
import pytest

from oldiff.network import ConfigurationError, NetworkParams, designate_leaders, generate_ba
from oldiff.population import ConsumerAgent, PopulationParams, init_population


@pytest.fixture(scope="module")
def network():
    return generate_ba(NetworkParams(n=500, m=2), np.random.default_rng(0))


def test_initial_state(network):
    leaders = designate_leaders(network, 0.10)
    agents = init_population(network, leaders, PopulationParams(), np.random.default_rng(1))
    assert len(agents) == network.n
    for i, agent in enumerate(agents):
        assert agent.id == i
        assert agent.is_opinion_leader == (i in leaders)
        assert not agent.aware and not agent.adopted and not agent.quality_certain
        assert agent.perceived_quality is None
        assert 0.0 <= agent.quality_threshold <= 1.0
        assert 0.0 <= agent.beta <= 1.0


def test_leader_utility_threshold_capped(network):
    leaders = designate_leaders(network, 0.10)
    params = PopulationParams(max_ol_utility=0.8)
    for seed in range(5):
        agents = init_population(network, leaders, params, np.random.default_rng(seed))
        for agent in agents:
            if agent.is_opinion_leader:
                assert 0.0 <= agent.utility_threshold <= 0.8
            else:
                assert 0.0 <= agent.utility_threshold <= 1.0


def test_attribute_means_track_params(network):
    # pool many seeds so sample means sit close to the configured ones
    leaders = designate_leaders(network, 0.10)
    params = PopulationParams(avg_ni_ol=0.51, avg_ni_nl=0.6, max_ol_utility=0.8)
    ol_beta, nl_beta, ol_u, nl_u, q = [], [], [], [], []
    for seed in range(20):
        for agent in init_population(network, leaders, params, np.random.default_rng(seed)):
            q.append(agent.quality_threshold)
            if agent.is_opinion_leader:
                ol_beta.append(agent.beta)
                ol_u.append(agent.utility_threshold)
            else:
                nl_beta.append(agent.beta)
                nl_u.append(agent.utility_threshold)
    assert abs(np.mean(ol_beta) - 0.51) < 0.02
    assert abs(np.mean(nl_beta) - 0.60) < 0.02
    assert abs(np.mean(ol_u) - 0.40) < 0.02  # U(0, 0.8)
    assert abs(np.mean(nl_u) - 0.50) < 0.02
    assert abs(np.mean(q) - 0.50) < 0.02


def test_no_leader_baseline_uses_higher_conformity(network):
    params = PopulationParams(beta_no_ol=0.75, dev_ni_nl=0.2)
    betas = []
    for seed in range(20):
        agents = init_population(network, set(), params, np.random.default_rng(seed))
        betas.extend(agent.beta for agent in agents)
        assert not any(agent.is_opinion_leader for agent in agents)
    assert abs(np.mean(betas) - 0.745) < 0.02  # clamping at 1 pulls mean slightly down


def test_betas_clamped_to_unit_interval(network):
    # huge deviation forces draws outside [0,1]; they must be clamped
    params = PopulationParams(dev_ni_ol=5.0, dev_ni_nl=5.0)
    leaders = designate_leaders(network, 0.10)
    agents = init_population(network, leaders, params, np.random.default_rng(2))
    betas = [agent.beta for agent in agents]
    assert all(0.0 <= b <= 1.0 for b in betas)
    assert any(b == 0.0 for b in betas) and any(b == 1.0 for b in betas)


def test_population_deterministic(network):
    leaders = designate_leaders(network, 0.10)
    a = init_population(network, leaders, PopulationParams(), np.random.default_rng(7))
    b = init_population(network, leaders, PopulationParams(), np.random.default_rng(7))
    assert a == b


def test_params_validation():
    PopulationParams().validate()
    with pytest.raises(ConfigurationError):
        PopulationParams(max_ol_utility=1.5).validate()
    with pytest.raises(ConfigurationError):
        PopulationParams(avg_ni_ol=-0.1).validate()
    with pytest.raises(ConfigurationError):
        PopulationParams(dev_ni_nl=-0.2).validate()


def test_rejects_out_of_range_leaders(network):
    with pytest.raises(ConfigurationError):
        init_population(network, {network.n}, PopulationParams(), np.random.default_rng(0))


def test_agent_dataclass_defaults():
    agent = ConsumerAgent(
        id=3, is_opinion_leader=True, quality_threshold=0.4, utility_threshold=0.2, beta=0.5
    )
    assert not agent.aware and not agent.adopted
    assert agent.perceived_quality is None and not agent.quality_certain
