from typing import Literal, get_args

from msgspec import Struct

from src.core import UsageError
from src.hmm import DEFAULT_ITERS, HmmKind
from src.lstm import LstmConfig

Method = Literal['lstm', 'discrete_hmm', 'continuous_hmm', 'hybrid', 'joint_hybrid']

METHODS: tuple[str, ...] = get_args(Method)

# fields every method needs besides the dataset
REQUIRED: dict[str, tuple[str, ...]] = {
    'lstm': ('hidden_dim',),
    'discrete_hmm': ('n_hmm',),
    'continuous_hmm': ('hidden_dim', 'n_hmm'),
    'hybrid': ('hidden_dim', 'n_hmm'),
    'joint_hybrid': ('hidden_dim', 'n_hmm'),
}


class ExperimentConfig(Struct, kw_only=True, frozen=True):
    """
    One row of the comparison: a method trained on a dataset with a seed.

    ``dataset`` is a registry name or a file path. ``iters`` is the number of Gibbs iterations of the methods that
    train an HMM and defaults per kind. ``hmm_checkpoint`` reuses a trained discrete HMM in a sequential hybrid instead
    of sampling a new one.
    """

    dataset: str
    method: Method
    hidden_dim: int | None = None
    n_hmm: int | None = None
    seed: int = 0
    epochs: int = 10
    iters: int | None = None
    valid_fraction: float = 0.05
    output_dir: str | None = None
    layers: int = 1
    bptt_len: int = 100
    lr0: float = 1.0
    clip_threshold: float = 5.0
    max_chars: int | None = None
    hmm_checkpoint: str | None = None

    def __post_init__(self):

        missing = [name for name in REQUIRED[self.method] if getattr(self, name) is None]

        if missing:
            raise UsageError(f"The method {self.method!r} requires {', '.join(missing)}.")

        for name in ('hidden_dim', 'n_hmm', 'iters'):
            value = getattr(self, name)

            if value is not None and value < 1:
                raise UsageError(f"{name} must be at least 1, got {value}.")

        if not 0.0 < self.valid_fraction < 1.0:
            raise UsageError(f"valid_fraction must lie strictly between 0 and 1, got {self.valid_fraction}.")

        if self.seed < 0 or self.epochs < 0:
            raise UsageError(f"seed and epochs must be non-negative, got {self.seed} and {self.epochs}.")

        if self.hmm_checkpoint is not None and self.method != 'hybrid':
            raise UsageError("Only the sequential hybrid reuses an HMM checkpoint.")

    def __str__(self):

        return f"{self.__class__.__name__}({self.context()})"

    def context(self) -> str:
        """
        :return: The ``dataset``, ``method``, sizes and ``seed`` as one ``key=value`` string, for error messages.
        """

        return (f"dataset={self.dataset} method={self.method} h={self.hidden_dim} n_hmm={self.n_hmm} "
                f"seed={self.seed}")

    def run_name(self) -> str:

        stem = self.dataset.replace('/', '_').replace('\\', '_').strip('._') or 'corpus'

        return f"{stem}-{self.method}-h{self.hidden_dim or 0}-n{self.n_hmm or 0}-s{self.seed}"

    def lstm_config(self) -> LstmConfig:

        return LstmConfig(hidden_dim=self.hidden_dim, layers=self.layers, bptt_len=self.bptt_len, epochs=self.epochs,
                          lr0=self.lr0, clip_threshold=self.clip_threshold)

    def gibbs_iters(self, kind: HmmKind) -> int:

        return self.iters if self.iters is not None else DEFAULT_ITERS[kind]
