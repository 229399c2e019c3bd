"""Agent-based simulator of innovation diffusion with opinion leaders."""

from .engine import (
    ActivationOrder,
    AwarenessChannel,
    EngineConfig,
    ExecutionFlow,
    ModelConfig,
    RunResult,
    run,
    simulate,
)
from .experiments import BatchConfig, hypothesis_report, preset, reproduce, run_batch
from .metrics import (
    ExperimentSummary,
    RunMetrics,
    aggregate,
    compare,
    compute_metrics,
)
from .network import (
    ConfigurationError,
    NetworkParams,
    SocialNetwork,
    designate_leaders,
    generate_ba,
)
from .population import ConsumerAgent, PopulationParams, init_population

__all__ = [
    "ActivationOrder",
    "AwarenessChannel",
    "BatchConfig",
    "ConfigurationError",
    "ConsumerAgent",
    "EngineConfig",
    "ExecutionFlow",
    "ExperimentSummary",
    "ModelConfig",
    "NetworkParams",
    "PopulationParams",
    "RunMetrics",
    "RunResult",
    "SocialNetwork",
    "aggregate",
    "compare",
    "compute_metrics",
    "designate_leaders",
    "generate_ba",
    "hypothesis_report",
    "init_population",
    "preset",
    "reproduce",
    "run",
    "run_batch",
    "simulate",
]
