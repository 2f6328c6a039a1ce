"""Experiment harness: instance generation, benchmark experiments, reports."""
from .config import ConfigError, ExperimentConfig, config_from_doc
from .experiments import (exp_commutator_bmo, exp_lipschitz_p, exp_logn,
                          exp_vector)
from .reports import ReportRow, rows_to_csv, write_json
from .suite import run_suite

__all__ = [
    "ConfigError", "ExperimentConfig", "config_from_doc",
    "exp_commutator_bmo", "exp_lipschitz_p", "exp_logn", "exp_vector",
    "ReportRow", "rows_to_csv", "write_json", "run_suite",
]
