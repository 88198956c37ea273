from src.harness.checkpoint import (
    FORMAT_VERSION,
    Checkpoint,
    CheckpointManifest,
    TensorEntry,
    content_hash,
    load_checkpoint,
    model_hash,
    read_manifest,
    save_checkpoint,
)
from src.harness.datasets import dataset_path, fetch_dataset, load_dataset
from src.harness.experiment import count_parameters, run_experiment
from src.harness.ExperimentConfig import METHODS, ExperimentConfig, Method
from src.harness.messages import FailedRun, JobDone, StopSignal, SweepJob, WorkerReady
from src.harness.results import ResultsRow, emit_results_table, parse_results_csv, sort_rows, write_results
from src.harness.sweep import SweepPlan, load_sweep_plan, run_sweep
from src.harness.SweepCoordinator import SweepCoordinator
from src.harness.SweepWorker import SweepWorker
from src.harness.visualize import excerpt_range, fit_dim_trees, interpretation_report


__all__ = [
    'FORMAT_VERSION', 'Checkpoint', 'CheckpointManifest', 'TensorEntry', 'content_hash', 'load_checkpoint',
    'model_hash', 'read_manifest', 'save_checkpoint',
    'dataset_path', 'fetch_dataset', 'load_dataset',
    'count_parameters', 'run_experiment',
    'METHODS', 'ExperimentConfig', 'Method',
    'FailedRun', 'JobDone', 'StopSignal', 'SweepJob', 'WorkerReady',
    'ResultsRow', 'emit_results_table', 'parse_results_csv', 'sort_rows', 'write_results',
    'SweepPlan', 'load_sweep_plan', 'run_sweep',
    'SweepCoordinator',
    'SweepWorker',
    'excerpt_range', 'fit_dim_trees', 'interpretation_report',
]
