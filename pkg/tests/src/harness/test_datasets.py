import hashlib
import math
import urllib.error

import msgspec
import pytest

from src.core import DataError, DatasetEntry, UsageError
from src.harness import dataset_path, fetch_dataset, load_dataset
from src.harness.datasets import DIGEST_SUFFIX, read_text

from tests.src.harness.conftest import SAMPLE

PAYLOAD = b'to be or not to be\n' * 10


def _serve(mocker, payload: bytes = PAYLOAD):

    urlopen = mocker.patch('src.harness.datasets.urllib.request.urlopen')
    urlopen.return_value.__enter__.return_value.read.return_value = payload

    return urlopen


def _pinned(settings, sha256: str):

    entry = msgspec.structs.replace(settings.datasets['remote'], sha256=sha256)

    return msgspec.structs.replace(settings, datasets={**settings.datasets, 'remote': entry})


def test_dataset_path(settings, tmp_path):

    assert dataset_path(source='sample', settings=settings) == SAMPLE
    assert dataset_path(source=str(tmp_path / 'x.txt'), settings=settings) == tmp_path / 'x.txt'


def test_read_text_errors(tmp_path):

    with pytest.raises(DataError, match='Cannot read'):
        read_text(path=tmp_path / 'absent.txt')

    (tmp_path / 'empty.txt').write_bytes(b'')

    with pytest.raises(DataError, match='empty'):
        read_text(path=tmp_path / 'empty.txt')

    (tmp_path / 'latin.txt').write_bytes(b'caf\xe9')

    with pytest.raises(DataError, match='byte 3'):
        read_text(path=tmp_path / 'latin.txt')


def test_load_dataset(local_settings):

    corpus = load_dataset(source='tiny', valid_fraction=0.1, settings=local_settings)

    assert len(corpus) == len('hello world, hello lab. ') * 20
    assert corpus.valid_range == (len(corpus) - math.ceil(0.1 * len(corpus)), len(corpus))

    clipped = load_dataset(source='tiny', valid_fraction=0.1, settings=local_settings, max_chars=100)

    assert len(clipped) == 100

    with pytest.raises(UsageError):
        load_dataset(source='tiny', valid_fraction=0.1, settings=local_settings, max_chars=1)


def test_fetch_unpinned(mocker, local_settings, tmp_path):

    urlopen = _serve(mocker=mocker)

    path = fetch_dataset(name='remote', settings=local_settings)

    assert path == tmp_path / 'corpora' / 'remote.txt'
    assert path.read_bytes() == PAYLOAD
    assert urlopen.call_args.args == ('https://example.org/remote.txt',)
    assert (tmp_path / 'corpora' / ('remote.txt' + DIGEST_SUFFIX)).read_text() == \
           f"{hashlib.sha256(PAYLOAD).hexdigest()}  remote.txt\n"


def test_fetch_keeps_existing_file(mocker, local_settings, tmp_path):

    urlopen = _serve(mocker=mocker)

    fetch_dataset(name='remote', settings=local_settings)
    fetch_dataset(name='remote', settings=local_settings)

    assert urlopen.call_count == 1

    fetch_dataset(name='remote', settings=local_settings, force=True)

    assert urlopen.call_count == 2


def test_fetch_pinned(mocker, local_settings):

    _serve(mocker=mocker)

    path = fetch_dataset(name='remote', settings=_pinned(settings=local_settings,
                                                         sha256=hashlib.sha256(PAYLOAD).hexdigest().upper()))

    assert path.read_bytes() == PAYLOAD


def test_fetch_digest_mismatch(mocker, local_settings, tmp_path):

    _serve(mocker=mocker)

    with pytest.raises(DataError, match='sha256'):
        fetch_dataset(name='remote', settings=_pinned(settings=local_settings, sha256='0' * 64))

    assert not (tmp_path / 'corpora' / 'remote.txt').exists()


def test_fetch_failure(mocker, local_settings, tmp_path):

    urlopen = mocker.patch('src.harness.datasets.urllib.request.urlopen')
    urlopen.side_effect = urllib.error.URLError('unreachable')

    with pytest.raises(DataError, match='Cannot download'):
        fetch_dataset(name='remote', settings=local_settings)

    assert list((tmp_path / 'corpora').iterdir()) == []


def test_fetch_without_url(local_settings):

    settings = msgspec.structs.replace(local_settings, datasets={'manual': DatasetEntry(path='manual.txt')})

    with pytest.raises(DataError, match='by hand'):
        fetch_dataset(name='manual', settings=settings)

    with pytest.raises(DataError, match='Unknown dataset'):
        fetch_dataset(name='absent', settings=settings)


def test_bundled_sample_is_pinned(settings):

    assert fetch_dataset(name='sample', settings=settings) == SAMPLE
