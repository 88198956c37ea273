from msgspec import Struct, field


class TrainTrace(Struct, kw_only=True):
    """
    Per-epoch record of a training run: the mean training log likelihood ``l_t`` (nats per character), the learning
    rate used during the epoch, and the validation log likelihood of the final model.
    """

    epoch_ll: list[float] = field(default_factory=list)
    epoch_lr: list[float] = field(default_factory=list)
    halvings: int = 0
    final_valid_ll: float | None = None

    @property
    def epochs(self) -> int:

        return len(self.epoch_ll)
