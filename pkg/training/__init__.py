from training.batches import make_batch
from training.loss import multiloss
from training.trainer import TrainReport, checkpoint_file, train, validation_ber

__all__ = ["TrainReport", "checkpoint_file", "make_batch", "multiloss", "train", "validation_ber"]
