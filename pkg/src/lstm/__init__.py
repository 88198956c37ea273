from src.lstm.EncodedCorpus import EncodedCorpus, Range, encode_corpus
from src.lstm.LstmConfig import LstmConfig
from src.lstm.LstmParams import LstmParams, RecurrentParams
from src.lstm.model import (
    LstmState,
    check_ids,
    clip_gradients,
    eval_loglik,
    extract_hidden_states,
    global_norm,
    lstm_core_backward,
    lstm_core_forward,
    lstm_forward,
    lstm_loss_grad,
    sample_text,
    softmax_cross_entropy,
    zero_state,
)
from src.lstm.train import SgdTrainer, should_halve_lr, train_lstm
from src.lstm.TrainTrace import TrainTrace
from src.lstm.Vocab import Ids, Vocab


__all__ = [
    'EncodedCorpus', 'Range', 'encode_corpus',
    'LstmConfig',
    'LstmParams', 'RecurrentParams',
    'LstmState', 'check_ids', 'clip_gradients', 'eval_loglik', 'extract_hidden_states', 'global_norm',
    'lstm_core_backward', 'lstm_core_forward', 'lstm_forward', 'lstm_loss_grad', 'sample_text',
    'softmax_cross_entropy', 'zero_state',
    'SgdTrainer', 'should_halve_lr', 'train_lstm',
    'TrainTrace',
    'Ids', 'Vocab',
]
