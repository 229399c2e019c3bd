"""Discrete-time diffusion engine: mass media, word of mouth, adoption.

A simulation is a fixed number of steps over a static network. Each step
either runs the three phases population-wide in sequence (phase-major) or
lets each agent run all three behaviours on its activation turn
(agent-major). Activation order is ascending id or a fresh shuffle per
step. Word-of-mouth updates are applied in place, so later-activated
agents see the awareness gained by earlier ones within the same step.
"""

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Union

import numpy as np

from .network import (
    ConfigurationError,
    NetworkParams,
    SocialNetwork,
    designate_leaders,
    generate_ba,
)
from .population import ConsumerAgent, PopulationParams, init_population


class ExecutionFlow(str, Enum):
    PHASE_MAJOR = "phase-major"
    AGENT_MAJOR = "agent-major"


class ActivationOrder(str, Enum):
    SEQUENTIAL = "sequential"
    SHUFFLED = "shuffled"


class AwarenessChannel(Enum):
    MASS_MEDIA = "mass-media"
    WOM_TRUSTED = "wom-trusted"
    WOM_PLAIN = "wom-plain"


# How word of mouth spreads awareness to unaware agents:
#   "trusted"   - only neighbors certain of the true quality make you aware
#   "any-aware" - any aware neighbor does; a trusted one also transfers quality
WOM_TRUSTED_ONLY = "trusted"
WOM_ANY_AWARE = "any-aware"

# Individual-preference term of the utility:
#   "perceived" - the perceived quality itself
#   "threshold" - 1 if perceived quality clears the agent's quality threshold, else 0
PREF_PERCEIVED = "perceived"
PREF_THRESHOLD = "threshold"


@dataclass(frozen=True)
class EngineConfig:
    steps: int = 25
    product_quality: float = 0.5
    mass_media: float = 0.01
    ol_judges_better: bool = True
    execution_flow: ExecutionFlow = ExecutionFlow.PHASE_MAJOR
    activation_order: ActivationOrder = ActivationOrder.SEQUENTIAL
    wom_awareness: str = WOM_TRUSTED_ONLY
    preference: str = PREF_PERCEIVED

    def validate(self) -> None:
        if self.steps < 0:
            raise ConfigurationError(f"steps must be >= 0, got {self.steps}")
        if not 0.0 <= self.product_quality <= 1.0:
            raise ConfigurationError(f"product quality must be in [0, 1], got {self.product_quality}")
        if not 0.0 <= self.mass_media <= 1.0:
            raise ConfigurationError(f"mass media coefficient must be in [0, 1], got {self.mass_media}")
        if self.wom_awareness not in (WOM_TRUSTED_ONLY, WOM_ANY_AWARE):
            raise ConfigurationError(f"unknown wom_awareness mode {self.wom_awareness!r}")
        if self.preference not in (PREF_PERCEIVED, PREF_THRESHOLD):
            raise ConfigurationError(f"unknown preference mode {self.preference!r}")


@dataclass(frozen=True)
class ModelConfig:
    """Everything a single run needs, including the seed."""

    network: NetworkParams = NetworkParams()
    population: PopulationParams = PopulationParams()
    engine: EngineConfig = EngineConfig()
    leader_fraction: float = 0.10
    seed: Union[int, tuple] = 0


@dataclass
class RunResult:
    """Per-step series and per-agent first-event records for one run."""

    n: int
    aware_series: list
    adopted_series: list
    aware_step: list  # 1-based step of first awareness, or None
    adopt_step: list  # 1-based step of adoption, or None
    agents: list
    degrees: list


@dataclass
class SimulationState:
    network: SocialNetwork
    agents: list
    t: int = 0
    aware_series: list = field(default_factory=list)
    adopted_series: list = field(default_factory=list)
    aware_step: list = field(init=False)
    adopt_step: list = field(init=False)
    neighbor_agents: list = field(init=False)

    def __post_init__(self):
        n = self.network.n
        if len(self.agents) != n:
            raise ConfigurationError("agent count does not match network size")
        self.aware_step = [None] * n
        self.adopt_step = [None] * n
        self.neighbor_agents = [
            [self.agents[j] for j in self.network.adjacency[i]] for i in range(n)
        ]


def become_aware(
    agent: ConsumerAgent,
    channel: AwarenessChannel,
    config: EngineConfig,
    rng: np.random.Generator,
) -> None:
    """Make an unaware agent aware via the given channel (no-op if aware).

    Trusted word of mouth transfers the true quality to anyone. Judging
    opinion leaders recognize the true quality on any channel; everyone
    else gets a random perceived quality and stays uncertain.
    """
    if agent.aware:
        return
    judges = agent.is_opinion_leader and config.ol_judges_better
    if channel is AwarenessChannel.WOM_TRUSTED or judges:
        agent.perceived_quality = config.product_quality
        agent.quality_certain = True
    else:
        agent.perceived_quality = float(rng.random())
        agent.quality_certain = False
    agent.aware = True


def is_trusted_source(agent: ConsumerAgent) -> bool:
    """Trusted word-of-mouth sources are exactly the quality-certain agents.

    That set is seeded by judging opinion leaders and adopters; knowledge
    then chains outward because trusted word of mouth makes its recipients
    certain too.
    """
    return agent.quality_certain


def upgrade_knowledge(agent: ConsumerAgent, neighbors: list, config: EngineConfig) -> None:
    """Aware-but-uncertain agents learn the true quality from a trusted neighbor."""
    if not agent.aware or agent.quality_certain:
        return
    for nb in neighbors:
        if is_trusted_source(nb):
            agent.perceived_quality = config.product_quality
            agent.quality_certain = True
            return


def wom_contact(
    agent: ConsumerAgent,
    neighbors: list,
    config: EngineConfig,
    rng: np.random.Generator,
) -> None:
    """One agent's word-of-mouth turn: gain awareness or quality knowledge."""
    if not agent.aware:
        if any(is_trusted_source(nb) for nb in neighbors):
            become_aware(agent, AwarenessChannel.WOM_TRUSTED, config, rng)
        elif config.wom_awareness == WOM_ANY_AWARE and any(nb.aware for nb in neighbors):
            become_aware(agent, AwarenessChannel.WOM_PLAIN, config, rng)
    elif not agent.quality_certain:
        upgrade_knowledge(agent, neighbors, config)


def _preference_term(agent: ConsumerAgent, preference: str) -> float:
    if preference == PREF_THRESHOLD:
        return 1.0 if agent.perceived_quality >= agent.quality_threshold else 0.0
    return agent.perceived_quality


def utility(
    agent: ConsumerAgent,
    neighbors: list,
    preference: str = PREF_PERCEIVED,
    social: Optional[float] = None,
) -> float:
    """Weighted sum of normative and informational terms, in [0, 1].

    Normative term: fraction of neighbors that adopted (pass `social` to
    evaluate against a frozen snapshot instead of the live neighbor
    states). Informational term: the agent's perceived quality, or its
    thresholded 0/1 form under the "threshold" preference mode.
    """
    if not agent.aware:
        raise ValueError("utility is only defined for aware agents")
    if social is None:
        if neighbors:
            social = sum(1 for nb in neighbors if nb.adopted) / len(neighbors)
        else:
            social = 0.0
    return agent.beta * social + (1.0 - agent.beta) * _preference_term(agent, preference)


def adoption_phase_agent(
    agent: ConsumerAgent,
    neighbors: list,
    config: EngineConfig,
    social: Optional[float] = None,
) -> None:
    """Adopt if aware and utility strictly exceeds the utility threshold.

    Adoption is absorbing; adopters learn the true quality and become
    trusted sources.
    """
    if agent.aware and not agent.adopted:
        if utility(agent, neighbors, config.preference, social) > agent.utility_threshold:
            agent.adopted = True
            agent.perceived_quality = config.product_quality
            agent.quality_certain = True


def step(state: SimulationState, config: EngineConfig, rng: np.random.Generator) -> None:
    """Advance the simulation one step and record the counts."""
    agents = state.agents
    neighbor_agents = state.neighbor_agents
    n = state.network.n
    state.t += 1

    if config.activation_order is ActivationOrder.SHUFFLED:
        order = [int(i) for i in rng.permutation(n)]
    else:
        order = range(n)

    if config.execution_flow is ExecutionFlow.PHASE_MAJOR:
        reach = math.ceil(config.mass_media * n)
        if reach:
            for i in rng.choice(n, size=reach, replace=False):
                become_aware(agents[int(i)], AwarenessChannel.MASS_MEDIA, config, rng)
        for i in order:
            wom_contact(agents[i], neighbor_agents[i], config, rng)
        # adoption decisions within one step are simultaneous: every agent
        # sees the adopter set as it stood when the phase began
        frozen_social = [
            (sum(1 for nb in neighbor_agents[i] if nb.adopted) / len(neighbor_agents[i]))
            if neighbor_agents[i]
            else 0.0
            for i in range(n)
        ]
        for i in order:
            adoption_phase_agent(agents[i], neighbor_agents[i], config, frozen_social[i])
    else:
        mm = config.mass_media
        for i in order:
            agent = agents[i]
            if mm > 0.0 and rng.random() < mm:
                become_aware(agent, AwarenessChannel.MASS_MEDIA, config, rng)
            wom_contact(agent, neighbor_agents[i], config, rng)
            adoption_phase_agent(agent, neighbor_agents[i], config)

    aware = adopted = 0
    for i, agent in enumerate(agents):
        if agent.aware:
            aware += 1
            if state.aware_step[i] is None:
                state.aware_step[i] = state.t
        if agent.adopted:
            adopted += 1
            if state.adopt_step[i] is None:
                state.adopt_step[i] = state.t
    state.aware_series.append(aware)
    state.adopted_series.append(adopted)


def simulate(
    network: SocialNetwork,
    agents: list,
    config: EngineConfig,
    rng: np.random.Generator,
) -> RunResult:
    """Run `config.steps` steps over an already-built network and population."""
    config.validate()
    state = SimulationState(network=network, agents=agents)
    for _ in range(config.steps):
        step(state, config, rng)
    return RunResult(
        n=network.n,
        aware_series=state.aware_series,
        adopted_series=state.adopted_series,
        aware_step=state.aware_step,
        adopt_step=state.adopt_step,
        agents=agents,
        degrees=[len(neighbors) for neighbors in network.adjacency],
    )


def run(config: ModelConfig) -> RunResult:
    """Build network, leaders, and population from the seed, then simulate."""
    config.engine.validate()
    rng = np.random.default_rng(config.seed)
    network = generate_ba(config.network, rng)
    leaders = designate_leaders(network, config.leader_fraction)
    agents = init_population(network, leaders, config.population, rng)
    return simulate(network, agents, config.engine, rng)


def write_timeseries_csv(result: RunResult, stream) -> None:
    """CSV export of the per-step series, steps numbered from 1."""
    stream.write("step,aware,adopted\n")
    for t, (aware, adopted) in enumerate(zip(result.aware_series, result.adopted_series), start=1):
        stream.write(f"{t},{aware},{adopted}\n")
