from src.interpret.ColoredText import (
    ColoredText,
    DocumentFormat,
    Swatch,
    cycle_palette,
    load_palette,
    render_colored_text,
    strip_markup,
)
from src.interpret.labels import Labels, cluster_states, hmm_state_labels
from src.interpret.pca import PcaReport, pca_report
from src.interpret.report import build_report
from src.interpret.tree import (
    DEFAULT_MAX_DEPTH,
    DEFAULT_MIN_LEAF,
    DEFAULT_WINDOW,
    RegressionTree,
    TreeLeaf,
    TreeSplit,
    WindowSamples,
    build_window_samples,
    fit_state_dim_tree,
    predict_tree,
    render_tree,
    tree_mse,
)


__all__ = [
    'ColoredText', 'DocumentFormat', 'Swatch', 'cycle_palette', 'load_palette', 'render_colored_text', 'strip_markup',
    'Labels', 'cluster_states', 'hmm_state_labels',
    'PcaReport', 'pca_report',
    'build_report',
    'DEFAULT_MAX_DEPTH', 'DEFAULT_MIN_LEAF', 'DEFAULT_WINDOW', 'RegressionTree', 'TreeLeaf', 'TreeSplit',
    'WindowSamples', 'build_window_samples', 'fit_state_dim_tree', 'predict_tree', 'render_tree', 'tree_mse',
]
