from .config import ConfigError, ExperimentConfig, load_config, parse_intervals
from .report import SummaryReport, emit_report, read_jsonl, summarize, write_jsonl
from .runner import ReplicateRecord, run_experiment, run_replicate

__all__ = [
    "ConfigError",
    "ExperimentConfig",
    "ReplicateRecord",
    "SummaryReport",
    "emit_report",
    "load_config",
    "parse_intervals",
    "read_jsonl",
    "run_experiment",
    "run_replicate",
    "summarize",
    "write_jsonl",
]
