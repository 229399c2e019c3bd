"""Heterogeneous consumer population with leader/follower asymmetries."""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .network import ConfigurationError, SocialNetwork


@dataclass(slots=True)
class ConsumerAgent:
    """Mutable per-agent state.

    perceived_quality is present iff the agent is aware; quality_certain
    marks agents that know the true product quality and therefore act as
    trusted word-of-mouth sources.
    """

    id: int
    is_opinion_leader: bool
    quality_threshold: float
    utility_threshold: float
    beta: float  # weight of normative (social) influence; informational weight is 1 - beta
    aware: bool = False
    adopted: bool = False
    perceived_quality: Optional[float] = None
    quality_certain: bool = False


@dataclass(frozen=True)
class PopulationParams:
    """Distribution parameters for agent attributes (base-model defaults)."""

    max_ol_utility: float = 0.8
    avg_ni_ol: float = 0.51
    dev_ni_ol: float = 0.2
    avg_ni_nl: float = 0.6
    dev_ni_nl: float = 0.2
    beta_no_ol: float = 0.75  # normative-influence mean when no leaders exist

    def validate(self) -> None:
        for name in ("max_ol_utility", "avg_ni_ol", "avg_ni_nl", "beta_no_ol"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ConfigurationError(f"{name} must be in [0, 1], got {value}")
        for name in ("dev_ni_ol", "dev_ni_nl"):
            value = getattr(self, name)
            if value < 0.0:
                raise ConfigurationError(f"{name} must be >= 0, got {value}")


def init_population(
    network: SocialNetwork,
    leaders: set,
    params: PopulationParams,
    rng: np.random.Generator,
) -> list:
    """Create the initial agent population.

    Everyone starts unaware and non-adopted. Quality thresholds are U(0,1)
    for all agents. Utility thresholds are U(0,1) for followers and
    U(0, max_ol_utility) for leaders. Normative-influence weights are normal
    draws per role, clamped into [0,1]; with no leaders at all, every agent
    draws from N(beta_no_ol, dev_ni_nl).
    """
    params.validate()
    if not leaders <= set(range(network.n)):
        raise ConfigurationError("leader set contains indices outside the network")
    no_leaders = not leaders
    agents = []
    for i in range(network.n):
        is_leader = i in leaders
        quality_threshold = float(rng.random())
        if is_leader:
            utility_threshold = float(rng.random()) * params.max_ol_utility
        else:
            utility_threshold = float(rng.random())
        if no_leaders:
            beta = rng.normal(params.beta_no_ol, params.dev_ni_nl)
        elif is_leader:
            beta = rng.normal(params.avg_ni_ol, params.dev_ni_ol)
        else:
            beta = rng.normal(params.avg_ni_nl, params.dev_ni_nl)
        beta = min(1.0, max(0.0, float(beta)))
        agents.append(
            ConsumerAgent(
                id=i,
                is_opinion_leader=is_leader,
                quality_threshold=quality_threshold,
                utility_threshold=utility_threshold,
                beta=beta,
            )
        )
    return agents
