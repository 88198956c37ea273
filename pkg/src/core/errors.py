class LabError(Exception):
    """
    Base class of every error raised by the library.
    Each subclass carries the process ``exit_code`` the command line front door reports for it.
    """

    exit_code = 1


class UsageError(LabError, ValueError):
    """
    Invalid configuration, bad flags, or a violated precondition on sizes and counts.
    """

    exit_code = 1


class DataError(LabError, ValueError):
    """
    Missing, empty or undecodable corpora, ids outside the vocabulary, misaligned inputs.
    """

    exit_code = 2


class NumericalError(LabError, ArithmeticError):
    """
    Non-finite values, impossible observations, non-PSD covariances and other numerical failures.
    """

    exit_code = 3


class CheckpointError(DataError):
    """
    A checkpoint directory that cannot be loaded.
    """


class HashMismatchError(CheckpointError):
    """
    The blobs on disk do not hash to the content hash recorded in the manifest.
    """


class VersionMismatchError(CheckpointError):
    """
    The manifest declares a format version this library cannot read.
    """


class TruncatedBlobError(CheckpointError):
    """
    A tensor blob is shorter (or longer) than the size declared in the manifest.
    """
