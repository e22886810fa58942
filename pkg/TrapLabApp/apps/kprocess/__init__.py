from apps.kprocess.params import INFINITY, KParams, embed_state, load_kparams, save_kparams
from apps.kprocess.probe import ProbeReport, ProbeRow, check_tail_condition, convergence_probe
from apps.kprocess.sampler import (
    KTrajectory,
    finite_chain,
    hitting_law,
    hitting_law_exact,
    sample_kprocess,
    trace_on,
)

__all__ = [
    "INFINITY",
    "KParams",
    "KTrajectory",
    "ProbeReport",
    "ProbeRow",
    "check_tail_condition",
    "convergence_probe",
    "embed_state",
    "finite_chain",
    "hitting_law",
    "hitting_law_exact",
    "load_kparams",
    "sample_kprocess",
    "save_kparams",
    "trace_on",
]
