import logging
import os
from pathlib import Path

import msgspec
from msgspec import Struct, field

from src.core.errors import DataError, UsageError
from src.core.log import fields

logger = logging.getLogger(__name__)

CONFIG_ENV = 'HMM_LSTM_LAB_CONFIG'
DEFAULT_CONFIG = 'lab.toml'


class DatasetEntry(Struct, kw_only=True, frozen=True):
    """
    One registered corpus: a local path, relative to the settings file unless absolute, with an optional download
    ``url`` and an optional pinned ``sha256`` digest of the file.
    """

    path: str
    url: str | None = None
    sha256: str | None = None


class LabSettings(Struct, kw_only=True, frozen=True):
    """
    Process-wide settings: the dataset registry and the defaults of every experiment.
    """

    datasets: dict[str, DatasetEntry] = field(default_factory=dict)
    seed: int = 0
    valid_fraction: float = 0.05
    output_dir: str = 'runs'
    root: str = '.'

    def __post_init__(self):

        if not 0.0 < self.valid_fraction < 1.0:
            raise UsageError(f"valid_fraction must lie strictly between 0 and 1, got {self.valid_fraction}.")

        if self.seed < 0:
            raise UsageError(f"The default seed must be non-negative, got {self.seed}.")

    def resolve(self, path: str) -> Path:
        """
        :param path: A path from the settings file.
        :return: ``path`` anchored at the directory of the settings file when relative.
        """

        candidate = Path(path).expanduser()

        return candidate if candidate.is_absolute() else Path(self.root) / candidate

    def dataset(self, name: str) -> DatasetEntry:
        """
        :raise DataError: If ``name`` is not registered.
        """

        try:
            return self.datasets[name]

        except KeyError:
            raise DataError(f"Unknown dataset {name!r}; registered: {sorted(self.datasets)}.") from None


def load_settings(path: str | Path | None = None) -> LabSettings:
    """
    Loads the ``LabSettings`` from ``path``, else from the file named by ``HMM_LSTM_LAB_CONFIG``, else from
    ``lab.toml`` in the working directory. A missing default file gives the built-in defaults.

    :param path: An explicit settings file.
    :return: The ``LabSettings``.
    :raise DataError: If an explicitly named file is missing or the file is malformed.
    """

    explicit = path if path is not None else os.environ.get(CONFIG_ENV)
    target = Path(explicit if explicit else DEFAULT_CONFIG)

    if not target.is_file():

        if explicit:
            raise DataError(f"The settings file {target} does not exist.")

        logger.debug("No settings file, using defaults.", extra=fields(path=str(target)))

        return LabSettings()

    try:
        settings = msgspec.toml.decode(target.read_bytes(), type=LabSettings)

    except msgspec.ValidationError as exception:
        raise DataError(f"Invalid settings in {target}: {exception}") from exception

    except msgspec.DecodeError as exception:
        raise DataError(f"Cannot decode the settings file {target}: {exception}") from exception

    settings = msgspec.structs.replace(settings, root=str(target.resolve().parent))

    logger.debug("Loaded settings.", extra=fields(path=str(target), datasets=len(settings.datasets)))

    return settings
