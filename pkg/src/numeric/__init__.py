from src.numeric.gradcheck import finite_diff_grad, max_relative_error, param_grad_errors
from src.numeric.kmeans import kmeans, squared_distances, within_cluster_sse
from src.numeric.linalg import (
    Matrix,
    Vector,
    log_softmax_rows,
    logsumexp,
    pca_explained_variance,
    row_affine,
    softmax_rows,
)


__all__ = [
    'finite_diff_grad', 'max_relative_error', 'param_grad_errors',
    'kmeans', 'squared_distances', 'within_cluster_sse',
    'Matrix', 'Vector', 'log_softmax_rows', 'logsumexp', 'pca_explained_variance', 'row_affine', 'softmax_rows',
]
