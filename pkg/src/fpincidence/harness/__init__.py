"""Experiment harness: configs, generators, runs and reports."""

from .config import ExperimentConfig, load_config, parse_config_text
from .generators import generate, instances, trial_rng
from .report import Report, emit, parse_csv
from .runner import ReportRow, run, to_report

__all__ = ["ExperimentConfig", "load_config", "parse_config_text", "generate", "instances", "trial_rng",
           "Report", "emit", "parse_csv", "ReportRow", "run", "to_report"]
