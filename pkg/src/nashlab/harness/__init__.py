"""Experiment orchestration: specs, runners, rate fits and the CLI."""
from .experiments import Assertion, ExperimentSpec, bundled_specs, resolve_spec, run
from .fitting import RateFit, compare_to_budget, fit_rate

__all__ = ["Assertion", "ExperimentSpec", "RateFit", "bundled_specs", "compare_to_budget", "fit_rate", "resolve_spec", "run"]
