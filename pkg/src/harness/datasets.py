import hashlib
import logging
import urllib.error
import urllib.request
from pathlib import Path

from src.core import DataError, LabSettings, UsageError, fields
from src.lstm import EncodedCorpus, encode_corpus

logger = logging.getLogger(__name__)

FETCH_TIMEOUT_S = 60.0
DIGEST_SUFFIX = '.sha256'


def dataset_path(
    source: str,
    settings: LabSettings
) -> Path:
    """
    :param source: A registered dataset name or a file path.
    :param settings: The settings holding the registry.
    :return: The path of the corpus file.
    """

    if source in settings.datasets:
        return settings.resolve(path=settings.datasets[source].path)

    return Path(source).expanduser()


def read_text(path: Path) -> str:
    """
    :raise DataError: If the file is missing, unreadable, empty or not UTF-8.
    """

    try:
        data = path.read_bytes()

    except OSError as exception:
        raise DataError(f"Cannot read the corpus {path}: {exception.strerror or exception}") from exception

    if not data:
        raise DataError(f"The corpus {path} is empty.")

    try:
        return data.decode('utf-8')

    except UnicodeDecodeError as exception:
        raise DataError(f"The corpus {path} is not UTF-8 at byte {exception.start}.") from exception


def load_dataset(
    source: str,
    valid_fraction: float,
    settings: LabSettings,
    max_chars: int | None = None
) -> EncodedCorpus:
    """
    Reads a corpus by registry name or path and encodes it with the last ``valid_fraction`` held out.

    :param source: A registered dataset name or a file path.
    :param valid_fraction: The validation share.
    :param settings: The settings holding the registry.
    :param max_chars: Keep only the first ``max_chars`` characters when given.
    :return: The ``EncodedCorpus``.
    :raise DataError: If the corpus is missing, empty or undecodable.
    """

    path = dataset_path(source=source, settings=settings)
    text = read_text(path=path)

    if max_chars is not None:

        if max_chars < 2:
            raise UsageError(f"max_chars must be at least 2, got {max_chars}.")

        text = text[:max_chars]

    corpus = encode_corpus(text=text, valid_fraction=valid_fraction)

    start, stop = corpus.valid_range

    logger.info("Loaded dataset.", extra=fields(source=source, path=str(path), chars=len(corpus),
                                                vocab=len(corpus.vocab), valid=stop - start))

    return corpus


def file_digest(path: Path) -> str:

    with path.open('rb') as handle:
        return hashlib.file_digest(handle, 'sha256').hexdigest()


def fetch_dataset(
    name: str,
    settings: LabSettings,
    force: bool = False
) -> Path:
    """
    Downloads a registered corpus to its registry path.

    A pinned ``sha256`` is verified and a fresh download removed on a mismatch; otherwise the observed digest is
    written next to the file. An existing file is kept unless ``force`` is set.

    :param name: The registered dataset name.
    :param settings: The settings holding the registry.
    :param force: Download even if the file exists.
    :return: The path of the corpus file.
    :raise DataError: If the dataset has no URL, the download fails or the digest does not match.
    """

    entry = settings.dataset(name=name)
    path = settings.resolve(path=entry.path)

    downloaded = False

    if path.is_file() and not force:
        logger.info("Dataset already present.", extra=fields(name=name, path=str(path)))

    else:

        if entry.url is None:
            raise DataError(f"The dataset {name!r} has no download URL; place the file at {path} by hand.")

        path.parent.mkdir(parents=True, exist_ok=True)
        partial = path.with_name(path.name + '.part')

        try:
            with urllib.request.urlopen(entry.url, timeout=FETCH_TIMEOUT_S) as response:
                partial.write_bytes(response.read())

        except (urllib.error.URLError, OSError) as exception:
            partial.unlink(missing_ok=True)
            raise DataError(f"Cannot download {name!r} from {entry.url}: {exception}") from exception

        partial.replace(path)
        downloaded = True

        logger.info("Downloaded dataset.", extra=fields(name=name, url=entry.url, path=str(path),
                                                        bytes=path.stat().st_size))

    digest = file_digest(path=path)

    if entry.sha256 is not None:

        if digest != entry.sha256.lower():

            if downloaded:
                path.unlink()

            raise DataError(f"The dataset {name!r} at {path} has sha256 {digest}, expected {entry.sha256}.")

    else:
        path.with_name(path.name + DIGEST_SUFFIX).write_text(f"{digest}  {path.name}\n", encoding='utf-8')

    return path
