from apps.walks.simulate import (
    EscapeEstimate,
    JumpChain,
    escape_probability_mc,
    hitting_sample,
    hitting_vertex,
    simulate,
    simulate_lazy,
)
from apps.walks.trace import CycleRecord, TraceStats, excursion_decomposition, trace_extract, y_process_params

__all__ = [
    "CycleRecord",
    "EscapeEstimate",
    "JumpChain",
    "TraceStats",
    "escape_probability_mc",
    "excursion_decomposition",
    "hitting_sample",
    "hitting_vertex",
    "simulate",
    "simulate_lazy",
    "trace_extract",
    "y_process_params",
]
