from src.hybrid.evaluate import eval_hybrid
from src.hybrid.HybridParams import HybridParams
from src.hybrid.joint import (
    JointState,
    joint_filter,
    joint_filter_backward,
    joint_hybrid_forward,
    joint_hybrid_loss_grad,
    joint_zero_state,
    softmax_rows_backward,
)
from src.hybrid.JointHybridParams import JointHybridParams
from src.hybrid.sequential import HmmFeatureTrack, hybrid_forward, hybrid_loss_grad, precompute_hmm_track
from src.hybrid.train import train_joint_hybrid, train_sequential_hybrid


__all__ = [
    'eval_hybrid',
    'HybridParams',
    'JointState', 'joint_filter', 'joint_filter_backward', 'joint_hybrid_forward', 'joint_hybrid_loss_grad',
    'joint_zero_state', 'softmax_rows_backward',
    'JointHybridParams',
    'HmmFeatureTrack', 'hybrid_forward', 'hybrid_loss_grad', 'precompute_hmm_track',
    'train_joint_hybrid', 'train_sequential_hybrid',
]
