"""Scenario files, the pipeline executor and report formatting."""

from .pipeline import PipelineError, Report, StepEntry, run_pipeline
from .report import format_report
from .scenario import (
    ChannelSpec,
    ErrorCategory,
    PipelineStep,
    ScenarioDocument,
    ScenarioError,
    Settings,
    StateSpec,
    parse_scenario,
    serialize_scenario,
)
