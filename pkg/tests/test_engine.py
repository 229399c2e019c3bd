"""Tests for the diffusion engine: channels, utility, phases, determinism."""

import io

import numpy as np
import pytest

from oldiff.engine import (
    ActivationOrder,
    AwarenessChannel,
    EngineConfig,
    ExecutionFlow,
    ModelConfig,
    SimulationState,
    WOM_ANY_AWARE,
    adoption_phase_agent,
    become_aware,
    is_trusted_source,
    run,
    simulate,
    step,
    upgrade_knowledge,
    utility,
    wom_contact,
    write_timeseries_csv,
)
from oldiff.network import ConfigurationError, SocialNetwork
from oldiff.population import ConsumerAgent


def make_agent(i=0, ol=False, qt=0.5, ut=0.5, beta=0.5, **kw):
    return ConsumerAgent(
        id=i, is_opinion_leader=ol, quality_threshold=qt, utility_threshold=ut, beta=beta, **kw
    )


def path_network(n):
    adjacency = [[] for _ in range(n)]
    for i in range(n - 1):
        adjacency[i].append(i + 1)
        adjacency[i + 1].append(i)
    return SocialNetwork(n=n, adjacency=adjacency, edge_count=n - 1)


# ---------------------------------------------------------------- channels


def test_become_aware_mass_media_follower_gets_random_perception():
    config = EngineConfig(product_quality=0.3)
    rng = np.random.default_rng(0)
    expected = float(np.random.default_rng(0).random())
    agent = make_agent()
    become_aware(agent, AwarenessChannel.MASS_MEDIA, config, rng)
    assert agent.aware and not agent.quality_certain
    assert agent.perceived_quality == expected


def test_become_aware_judging_leader_recognizes_quality():
    config = EngineConfig(product_quality=0.3, ol_judges_better=True)
    agent = make_agent(ol=True)
    become_aware(agent, AwarenessChannel.MASS_MEDIA, config, np.random.default_rng(0))
    assert agent.aware and agent.quality_certain and agent.perceived_quality == 0.3


def test_become_aware_non_judging_leader_is_like_follower():
    config = EngineConfig(product_quality=0.3, ol_judges_better=False)
    agent = make_agent(ol=True)
    become_aware(agent, AwarenessChannel.MASS_MEDIA, config, np.random.default_rng(0))
    assert agent.aware and not agent.quality_certain


def test_become_aware_trusted_wom_transfers_quality_to_anyone():
    config = EngineConfig(product_quality=0.3)
    agent = make_agent()
    become_aware(agent, AwarenessChannel.WOM_TRUSTED, config, np.random.default_rng(0))
    assert agent.quality_certain and agent.perceived_quality == 0.3


def test_become_aware_noop_when_already_aware():
    config = EngineConfig(product_quality=0.3)
    agent = make_agent(aware=True, perceived_quality=0.9)
    become_aware(agent, AwarenessChannel.WOM_TRUSTED, config, np.random.default_rng(0))
    assert agent.perceived_quality == 0.9 and not agent.quality_certain


def test_trusted_sources_are_the_quality_certain():
    assert not is_trusted_source(make_agent(aware=True))
    assert is_trusted_source(make_agent(aware=True, quality_certain=True, perceived_quality=0.5))


def test_upgrade_knowledge_from_trusted_neighbor():
    config = EngineConfig(product_quality=0.4)
    agent = make_agent(aware=True, perceived_quality=0.9)
    trusted = make_agent(i=1, aware=True, quality_certain=True, perceived_quality=0.4)
    upgrade_knowledge(agent, [make_agent(i=2, aware=True), trusted], config)
    assert agent.quality_certain and agent.perceived_quality == 0.4


def test_upgrade_knowledge_requires_trusted_neighbor():
    config = EngineConfig(product_quality=0.4)
    agent = make_agent(aware=True, perceived_quality=0.9)
    upgrade_knowledge(agent, [make_agent(i=1, aware=True, perceived_quality=0.2)], config)
    assert not agent.quality_certain and agent.perceived_quality == 0.9


def test_wom_contact_default_needs_trusted_source():
    config = EngineConfig(product_quality=0.4)
    rng = np.random.default_rng(0)
    agent = make_agent()
    wom_contact(agent, [make_agent(i=1, aware=True, perceived_quality=0.2)], config, rng)
    assert not agent.aware  # merely-aware neighbors don't spread awareness
    trusted = make_agent(i=2, aware=True, quality_certain=True, perceived_quality=0.4)
    wom_contact(agent, [trusted], config, rng)
    assert agent.aware and agent.quality_certain


def test_wom_contact_any_aware_mode():
    config = EngineConfig(product_quality=0.4, wom_awareness=WOM_ANY_AWARE)
    agent = make_agent()
    wom_contact(agent, [make_agent(i=1, aware=True, perceived_quality=0.2)], config,
                np.random.default_rng(0))
    assert agent.aware and not agent.quality_certain  # plain channel: no quality transfer


# ----------------------------------------------------------------- utility


def test_utility_weights_social_against_perception():
    agent = make_agent(beta=0.25, aware=True, perceived_quality=0.8)
    neighbors = [
        make_agent(i=1, adopted=True, aware=True),
        make_agent(i=2),
        make_agent(i=3),
        make_agent(i=4, adopted=True, aware=True),
    ]
    # 0.25 * 2/4 + 0.75 * 0.8
    assert utility(agent, neighbors) == pytest.approx(0.725)
    assert utility(agent, neighbors, social=1.0) == pytest.approx(0.25 + 0.6)


def test_utility_threshold_preference_mode():
    agent = make_agent(beta=0.4, qt=0.6, aware=True, perceived_quality=0.7)
    assert utility(agent, [], preference="threshold") == pytest.approx(0.6)
    agent.perceived_quality = 0.5
    assert utility(agent, [], preference="threshold") == pytest.approx(0.0)
    agent.perceived_quality = 0.6  # boundary counts as clearing the bar
    assert utility(agent, [], preference="threshold") == pytest.approx(0.6)


def test_utility_isolated_agent_has_no_social_term():
    agent = make_agent(beta=0.9, aware=True, perceived_quality=1.0)
    assert utility(agent, []) == pytest.approx(0.1)


def test_utility_stays_in_unit_interval():
    rng = np.random.default_rng(0)
    for _ in range(200):
        agent = make_agent(beta=float(rng.random()), aware=True,
                           perceived_quality=float(rng.random()))
        neighbors = [make_agent(i=1, adopted=bool(rng.random() < 0.5), aware=True)
                     for _ in range(int(rng.integers(0, 5)))]
        assert 0.0 <= utility(agent, neighbors) <= 1.0


def test_utility_undefined_for_unaware():
    with pytest.raises(ValueError):
        utility(make_agent(), [])


def test_adoption_is_strict_and_absorbing():
    config = EngineConfig(product_quality=0.5)
    agent = make_agent(ut=0.25, beta=0.5, aware=True, perceived_quality=0.5)
    adoption_phase_agent(agent, [], config)  # utility 0.25, not > 0.25
    assert not agent.adopted
    agent.utility_threshold = 0.24
    adoption_phase_agent(agent, [], config)
    assert agent.adopted and agent.quality_certain and agent.perceived_quality == 0.5
    adoption_phase_agent(agent, [], config)
    assert agent.adopted


def test_adoption_requires_awareness():
    agent = make_agent(ut=0.0)
    adoption_phase_agent(agent, [], EngineConfig())
    assert not agent.adopted


# ------------------------------------------------------------------- steps


def test_step_counts_and_first_event_records():
    net = path_network(3)
    agents = [make_agent(i=i, ut=0.1, beta=0.0) for i in range(3)]
    agents[0].aware = True
    agents[0].quality_certain = True
    agents[0].perceived_quality = 0.9
    config = EngineConfig(steps=3, product_quality=0.9, mass_media=0.0)
    state = SimulationState(network=net, agents=agents)
    step(state, config, np.random.default_rng(0))
    # trusted chain reaches everyone in one sequential in-place sweep
    assert state.aware_series == [3] and state.adopted_series == [3]
    assert state.aware_step == [1, 1, 1] and state.adopt_step == [1, 1, 1]


def test_phase_major_adoption_is_synchronous():
    # chain where live adoption would cascade within one step
    net = path_network(3)
    agents = [make_agent(i=i, ut=0.4, beta=1.0, aware=True,
                         quality_certain=True, perceived_quality=0.5) for i in range(3)]
    agents[0].adopted = True
    config = EngineConfig(product_quality=0.5, mass_media=0.0)
    state = SimulationState(network=net, agents=agents)
    step(state, config, np.random.default_rng(0))
    # only agent 1 sees an adopter in the frozen snapshot
    assert [a.adopted for a in agents] == [True, True, False]
    step(state, config, np.random.default_rng(0))
    assert [a.adopted for a in agents] == [True, True, True]


def test_agent_major_adoption_is_live():
    net = path_network(3)
    agents = [make_agent(i=i, ut=0.4, beta=1.0, aware=True,
                         quality_certain=True, perceived_quality=0.5) for i in range(3)]
    agents[0].adopted = True
    config = EngineConfig(product_quality=0.5, mass_media=0.0,
                          execution_flow=ExecutionFlow.AGENT_MAJOR)
    state = SimulationState(network=net, agents=agents)
    step(state, config, np.random.default_rng(0))
    # agent 2 activates after agent 1 already adopted this step
    assert [a.adopted for a in agents] == [True, True, True]


def test_mass_media_reach_is_ceiling_of_fraction():
    net = path_network(10)
    config = EngineConfig(product_quality=0.5, mass_media=0.25, wom_awareness="trusted")
    agents = [make_agent(i=i, ut=1.0) for i in range(10)]
    state = SimulationState(network=net, agents=agents)
    step(state, config, np.random.default_rng(0))
    aware = sum(a.aware for a in agents)
    # ceil(0.25 * 10) = 3 seeds; uncertain seeds spread nothing further
    assert aware == 3


def test_simulation_deterministic_and_zero_steps():
    model = ModelConfig(seed=123)
    a = run(model)
    b = run(model)
    assert a.aware_series == b.aware_series
    assert a.adopted_series == b.adopted_series
    assert a.aware_step == b.aware_step
    assert a.adopt_step == b.adopt_step
    assert a.agents == b.agents
    from dataclasses import replace

    empty = run(ModelConfig(seed=123, engine=EngineConfig(steps=0)))
    assert empty.aware_series == [] and empty.adopted_series == []
    different = run(replace(model, seed=124))
    assert different.aware_series != a.aware_series


@pytest.mark.parametrize("flow", list(ExecutionFlow))
@pytest.mark.parametrize("order", list(ActivationOrder))
def test_all_flow_order_combinations_run(flow, order):
    config = ModelConfig(
        engine=EngineConfig(steps=10, execution_flow=flow, activation_order=order),
        seed=5,
    )
    result = run(config)
    assert len(result.aware_series) == 10
    assert 0 < result.aware_series[-1] <= result.n


def test_shuffled_order_differs_from_sequential():
    base = EngineConfig(steps=15)
    a = run(ModelConfig(engine=base, seed=9))
    from dataclasses import replace

    b = run(ModelConfig(engine=replace(base, activation_order=ActivationOrder.SHUFFLED), seed=9))
    assert a.aware_step != b.aware_step


def test_state_rejects_mismatched_population():
    net = path_network(3)
    with pytest.raises(ConfigurationError):
        SimulationState(network=net, agents=[make_agent()])


def test_config_validation():
    EngineConfig().validate()
    for bad in (
        EngineConfig(steps=-1),
        EngineConfig(product_quality=1.2),
        EngineConfig(mass_media=-0.1),
        EngineConfig(wom_awareness="nope"),
        EngineConfig(preference="nope"),
    ):
        with pytest.raises(ConfigurationError):
            bad.validate()
    with pytest.raises(ConfigurationError):
        simulate(path_network(2), [make_agent(), make_agent(i=1)],
                 EngineConfig(steps=-3), np.random.default_rng(0))


def test_write_timeseries_csv():
    result = run(ModelConfig(seed=1, engine=EngineConfig(steps=4)))
    buf = io.StringIO()
    write_timeseries_csv(result, buf)
    lines = buf.getvalue().strip().splitlines()
    assert lines[0] == "step,aware,adopted"
    assert len(lines) == 5
    for t, line in enumerate(lines[1:], start=1):
        step_no, aware, adopted = map(int, line.split(","))
        assert step_no == t
        assert aware == result.aware_series[t - 1]
        assert adopted == result.adopted_series[t - 1]
