from msgspec import Struct

from src.core import UsageError


class LstmConfig(Struct, kw_only=True, frozen=True):
    """
    Training hyperparameters shared by the plain LSTM and both hybrids.

    The defaults follow the training recipe: 10 epochs of plain SGD starting at a learning rate of 1, halved whenever
    the training perplexity grows by more than 1 between epochs, with the global gradient norm clipped at 5.
    """

    hidden_dim: int
    layers: int = 1
    bptt_len: int = 100
    epochs: int = 10
    lr0: float = 1.0
    clip_threshold: float = 5.0
    init_scale: float = 0.08

    def __post_init__(self):

        if self.hidden_dim < 1 or self.layers < 1 or self.bptt_len < 1:
            raise UsageError(f"hidden_dim, layers and bptt_len must be >= 1, got {self}.")

        if self.epochs < 0 or self.lr0 <= 0.0 or self.clip_threshold <= 0.0 or self.init_scale < 0.0:
            raise UsageError(f"Invalid optimizer settings {self}.")
