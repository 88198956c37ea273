import hashlib
import logging
from pathlib import Path
from typing import Any, NamedTuple

import msgspec
import numpy as np
from msgspec import Struct, field

from src.core import (
    CheckpointError,
    HashMismatchError,
    ParamSet,
    Tensors,
    TruncatedBlobError,
    VersionMismatchError,
    fields,
)
from src.hmm import ContinuousHmmParams, DiscreteHmmParams
from src.hybrid import HybridParams, JointHybridParams
from src.lstm import LstmParams, Vocab

logger = logging.getLogger(__name__)

FORMAT_VERSION = 1

MANIFEST = 'manifest.json'
BLOB = 'tensors.bin'
DTYPE = '<f8'

MODEL_KINDS: dict[str, type[ParamSet]] = {
    cls.KIND: cls for cls in (LstmParams, DiscreteHmmParams, ContinuousHmmParams, HybridParams, JointHybridParams)
}


class TensorEntry(Struct, kw_only=True, frozen=True):
    name: str
    shape: list[int]
    blob: str
    offset: int
    nbytes: int
    dtype: str = DTYPE


class CheckpointManifest(Struct, kw_only=True, frozen=True):
    """
    Describes a checkpoint directory: the model ``kind`` and ``meta``, the vocabulary, an echo of the experiment
    configuration, where every tensor lives, and the sha256 ``content_hash`` of the model.
    ``references`` maps a role, e.g. ``'hmm'``, to the content hash of another checkpoint this model was built on.
    """

    format_version: int
    kind: str
    meta: dict[str, Any]
    tensors: list[TensorEntry]
    content_hash: str
    vocab: list[str] | None = None
    config: dict[str, Any] | None = None
    references: dict[str, str] = field(default_factory=dict)


class _VersionHeader(Struct):
    format_version: int


class Checkpoint(NamedTuple):
    model: ParamSet
    vocab: Vocab | None
    manifest: CheckpointManifest


def _tensor_bytes(value: np.ndarray) -> bytes:

    return np.ascontiguousarray(value, dtype=DTYPE).tobytes()


def content_hash(
    kind: str,
    meta: dict[str, Any],
    tensors: Tensors,
    vocab: list[str] | None
) -> str:
    """
    The sha256 of a model: its kind, meta and vocabulary as sorted-key JSON, then every tensor in name order as its
    name, shape and little-endian float64 bytes.
    """

    digest = hashlib.sha256()
    digest.update(msgspec.json.encode({'kind': kind, 'meta': meta, 'vocab': vocab}, order='sorted'))

    for name in sorted(tensors):
        value = tensors[name]
        digest.update(msgspec.json.encode({'name': name, 'shape': list(value.shape)}))
        digest.update(_tensor_bytes(value=value))

    return digest.hexdigest()


def model_hash(
    model: ParamSet,
    vocab: Vocab | None = None
) -> str:

    return content_hash(kind=model.KIND, meta=model.meta, tensors=model.tensors,
                        vocab=list(vocab.chars) if vocab is not None else None)


def save_checkpoint(
    model: ParamSet,
    directory: Path,
    vocab: Vocab | None = None,
    config: dict[str, Any] | None = None,
    references: dict[str, str] | None = None
) -> str:
    """
    Writes ``model`` into ``directory`` as ``tensors.bin`` plus ``manifest.json``; the manifest is written last, so a
    directory with a manifest always holds complete blobs.

    :param model: The model.
    :param directory: The checkpoint directory, created if needed.
    :param vocab: The vocabulary the model was trained on.
    :param config: The configuration echoed into the manifest.
    :param references: Content hashes of the checkpoints the model depends on, by role.
    :return: The content hash.
    :raise NumericalError: If a tensor holds a NaN or an infinity; nothing is written then.
    """

    model.check_finite()

    directory.mkdir(parents=True, exist_ok=True)

    entries, offset = [], 0
    chars = list(vocab.chars) if vocab is not None else None

    with (directory / BLOB).open('wb') as blob:

        for name, value in model.tensors.items():
            data = _tensor_bytes(value=value)
            blob.write(data)
            entries.append(TensorEntry(name=name, shape=list(value.shape), blob=BLOB, offset=offset,
                                       nbytes=len(data)))
            offset += len(data)

    digest = content_hash(kind=model.KIND, meta=model.meta, tensors=model.tensors, vocab=chars)

    manifest = CheckpointManifest(format_version=FORMAT_VERSION, kind=model.KIND, meta=model.meta, tensors=entries,
                                  content_hash=digest, vocab=chars, config=config, references=references or {})

    partial = directory / (MANIFEST + '.part')
    partial.write_bytes(msgspec.json.format(msgspec.json.encode(manifest), indent=2))
    partial.replace(directory / MANIFEST)

    logger.info("Wrote checkpoint.", extra=fields(kind=model.KIND, path=str(directory), tensors=len(entries),
                                                  bytes=offset, content_hash=digest[:12]))

    return digest


def read_manifest(directory: Path) -> CheckpointManifest:
    """
    :raise CheckpointError: If the manifest is missing or malformed.
    :raise VersionMismatchError: If the manifest declares another format version.
    """

    path = directory / MANIFEST

    try:
        raw = path.read_bytes()

    except OSError as exception:
        raise CheckpointError(f"Cannot read the checkpoint manifest {path}: {exception}") from exception

    try:
        version = msgspec.json.decode(raw, type=_VersionHeader).format_version

    except msgspec.DecodeError as exception:
        raise CheckpointError(f"The manifest {path} declares no format version: {exception}") from exception

    if version != FORMAT_VERSION:
        raise VersionMismatchError(f"The checkpoint {directory} has format version {version}, this library reads "
                                   f"version {FORMAT_VERSION}.")

    try:
        return msgspec.json.decode(raw, type=CheckpointManifest)

    except msgspec.DecodeError as exception:
        raise CheckpointError(f"Malformed checkpoint manifest {path}: {exception}") from exception


def _read_tensors(
    directory: Path,
    manifest: CheckpointManifest
) -> Tensors:

    blobs: dict[str, bytes] = {}
    tensors: Tensors = {}

    for entry in manifest.tensors:

        if entry.dtype != DTYPE:
            raise CheckpointError(f"Tensor {entry.name} has dtype {entry.dtype}, expected {DTYPE}.")

        if entry.blob not in blobs:

            try:
                blobs[entry.blob] = (directory / entry.blob).read_bytes()

            except OSError as exception:
                raise TruncatedBlobError(f"Cannot read the blob {entry.blob} of {directory}: {exception}") \
                    from exception

        expected = int(np.prod(entry.shape, dtype=np.int64)) * 8
        data = blobs[entry.blob]

        if entry.nbytes != expected or entry.offset < 0 or entry.offset + entry.nbytes > len(data):
            raise TruncatedBlobError(f"Tensor {entry.name} declares {entry.nbytes} bytes at offset {entry.offset} of "
                                     f"{entry.blob} ({len(data)} bytes) for shape {tuple(entry.shape)}.")

        tensors[entry.name] = np.frombuffer(data, dtype=DTYPE, count=expected // 8,
                                            offset=entry.offset).reshape(entry.shape).astype(np.float64)

    for name, data in blobs.items():

        used = sum(entry.nbytes for entry in manifest.tensors if entry.blob == name)

        if used != len(data):
            raise TruncatedBlobError(f"The blob {name} of {directory} holds {len(data)} bytes, the manifest "
                                     f"declares {used}.")

    return tensors


def load_checkpoint(
    directory: Path,
    kind: str | None = None
) -> Checkpoint:
    """
    Reads a checkpoint written by ``save_checkpoint()``; nothing is built before the content hash has been verified.

    :param directory: The checkpoint directory.
    :param kind: The model kind the caller expects, if any.
    :return: The ``Checkpoint``.
    :raise VersionMismatchError: If the format version differs.
    :raise TruncatedBlobError: If a blob is shorter or longer than declared.
    :raise HashMismatchError: If the tensors do not hash to the recorded content hash.
    :raise CheckpointError: If the manifest is missing or malformed, or the kind is unknown or unexpected.
    """

    manifest = read_manifest(directory=directory)

    if manifest.kind not in MODEL_KINDS:
        raise CheckpointError(f"Unknown model kind {manifest.kind!r} in {directory}.")

    if kind is not None and manifest.kind != kind:
        raise CheckpointError(f"The checkpoint {directory} holds a {manifest.kind} model, expected {kind}.")

    tensors = _read_tensors(directory=directory, manifest=manifest)
    digest = content_hash(kind=manifest.kind, meta=manifest.meta, tensors=tensors, vocab=manifest.vocab)

    if digest != manifest.content_hash:
        raise HashMismatchError(f"The checkpoint {directory} hashes to {digest}, its manifest records "
                                f"{manifest.content_hash}.")

    model = MODEL_KINDS[manifest.kind].from_tensors(tensors=tensors, meta=manifest.meta)
    vocab = Vocab(chars=manifest.vocab) if manifest.vocab is not None else None

    logger.debug("Loaded checkpoint.", extra=fields(kind=manifest.kind, path=str(directory),
                                                    content_hash=digest[:12]))

    return Checkpoint(model=model, vocab=vocab, manifest=manifest)
