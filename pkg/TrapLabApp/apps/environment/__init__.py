from apps.environment.environment import Environment, load_environment, save_environment
from apps.environment.weights import (
    LimitWeights,
    assign_weights,
    coupled_environment,
    coupling_discrepancy,
    normalizer_c,
    sample_limit_weights,
    sample_pareto_weights,
)

__all__ = [
    "Environment",
    "LimitWeights",
    "assign_weights",
    "coupled_environment",
    "coupling_discrepancy",
    "load_environment",
    "normalizer_c",
    "sample_limit_weights",
    "sample_pareto_weights",
    "save_environment",
]
