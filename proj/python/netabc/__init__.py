"""Network epidemic simulation and simulated-annealing ABC inference."""

from ._core import (
    GraphDistance,
    InvalidParameter,
    Model,
    Network,
    ParseError,
    PathTable,
    SigmoidConfig,
    Trace,
    UnreachableError,
    bayes_estimate,
    discrepancy,
    generate_ba,
    generate_er,
    infection_at_last_exposure_prob,
    infer,
    load_edge_list,
    p_infect,
    simulate_complex,
    simulate_simple,
    summarize,
)

__all__ = [
    "GraphDistance",
    "InvalidParameter",
    "Model",
    "Network",
    "ParseError",
    "PathTable",
    "SigmoidConfig",
    "Trace",
    "UnreachableError",
    "bayes_estimate",
    "discrepancy",
    "generate_ba",
    "generate_er",
    "infection_at_last_exposure_prob",
    "infer",
    "load_edge_list",
    "p_infect",
    "simulate_complex",
    "simulate_simple",
    "summarize",
]
