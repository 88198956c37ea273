from src.core.errors import (
    CheckpointError,
    DataError,
    HashMismatchError,
    LabError,
    NumericalError,
    TruncatedBlobError,
    UsageError,
    VersionMismatchError,
)
from src.core.LabSettings import DatasetEntry, LabSettings, load_settings
from src.core.log import configure_logging, fields
from src.core.ParamSet import ParamSet, Tensors
from src.core.RandomSource import RandomSource


__all__ = [
    'CheckpointError', 'DataError', 'HashMismatchError', 'LabError', 'NumericalError', 'TruncatedBlobError',
    'UsageError', 'VersionMismatchError',
    'DatasetEntry', 'LabSettings', 'load_settings',
    'configure_logging', 'fields',
    'ParamSet', 'Tensors',
    'RandomSource',
]
