import logging
from typing import Literal, NamedTuple

import msgspec
import numpy as np
from msgspec import Struct

from src.core import UsageError, fields

logger = logging.getLogger(__name__)

TreeFormat = Literal['text', 'dot']

DEFAULT_WINDOW = 5
DEFAULT_MAX_DEPTH = 4
DEFAULT_MIN_LEAF = 50

# gains below this share of the targets' sum of squares are rounding noise
GAIN_TOL = 1e-12

BOUNDARY_SYMBOL = '<bos>'


class WindowSamples(NamedTuple):
    """
    One sample per position: the ``window`` preceding character ids, oldest first (column ``k`` holds offset
    ``k - window``), and the target value. Positions before the start of the text hold the boundary id ``vocab_size``.
    """

    contexts: np.ndarray
    targets: np.ndarray
    window: int
    vocab_size: int

    def __len__(self):

        return int(self.targets.shape[0])


def build_window_samples(
    ids: np.ndarray,
    targets: np.ndarray,
    vocab_size: int,
    window: int = DEFAULT_WINDOW
) -> WindowSamples:
    """
    :param ids: The characters.
    :param targets: The value to predict at every position, e.g. one hidden dimension.
    :param vocab_size: The vocabulary size; also the boundary id.
    :param window: The number of preceding characters.
    :return: The ``WindowSamples``.
    :raise UsageError: If the lengths differ or ``window`` is below 1.
    """

    ids = np.asarray(ids, dtype=np.int64)
    targets = np.asarray(targets, dtype=np.float64)

    if ids.shape != targets.shape:
        raise UsageError(f"{ids.shape[0]} characters for {targets.shape[0]} targets.")

    if window < 1:
        raise UsageError(f"The window must hold at least one character, got {window}.")

    padded = np.concatenate([np.full(window, vocab_size, dtype=np.int64), ids])
    contexts = np.stack([padded[k:k + ids.shape[0]] for k in range(window)], axis=1)

    return WindowSamples(contexts=contexts, targets=targets, window=window, vocab_size=vocab_size)


class TreeLeaf(Struct, tag='leaf', frozen=True):
    value: float
    count: int


class TreeSplit(Struct, tag='split', frozen=True):
    """
    Sends a sample to ``yes`` when the character at ``offset`` (``-window .. -1``) is ``char``, else to ``no``.
    """

    offset: int
    char: int
    count: int
    yes: 'TreeNode'
    no: 'TreeNode'


TreeNode = TreeLeaf | TreeSplit


class RegressionTree(Struct, kw_only=True, frozen=True):

    root: TreeNode
    window: int
    symbols: list[str] | None = None

    def symbol(self, char: int) -> str:

        if self.symbols is None:
            return str(char)

        return self.symbols[char] if char < len(self.symbols) else BOUNDARY_SYMBOL

    def leaves(self) -> list[TreeLeaf]:

        found, stack = [], [self.root]

        while stack:
            node = stack.pop()

            if isinstance(node, TreeLeaf):
                found.append(node)

            else:
                stack.extend((node.no, node.yes))

        return found


def _best_split(
    contexts: np.ndarray,
    targets: np.ndarray,
    symbols: int,
    min_leaf: int
) -> tuple[float, int, int]:
    """
    The split maximizing the reduction of the sum of squared errors; ties go to the lowest offset, then the lowest
    character id.
    """

    count = targets.shape[0]
    total = targets.sum()
    gains = np.full((contexts.shape[1], symbols), -np.inf)

    for k in range(contexts.shape[1]):

        n_yes = np.bincount(contexts[:, k], minlength=symbols).astype(np.float64)
        s_yes = np.bincount(contexts[:, k], weights=targets, minlength=symbols)
        n_no = count - n_yes

        valid = (n_yes >= min_leaf) & (n_no >= min_leaf)

        with np.errstate(divide='ignore', invalid='ignore'):
            gain = s_yes ** 2 / n_yes + (total - s_yes) ** 2 / n_no - total ** 2 / count

        gains[k, valid] = gain[valid]

    best = int(np.argmax(gains))
    k, char = divmod(best, symbols)

    return float(gains[k, char]), k, char


def fit_state_dim_tree(
    samples: WindowSamples,
    max_depth: int = DEFAULT_MAX_DEPTH,
    min_leaf: int = DEFAULT_MIN_LEAF,
    symbols: list[str] | None = None
) -> RegressionTree:
    """
    Greedy CART regression tree over equality tests ``char at offset == c``.
    A node is split on the test with the largest variance reduction among those leaving ``min_leaf`` samples on
    both sides, and becomes a leaf predicting its mean target at ``max_depth`` or when no test reduces the error.

    :param samples: The training samples.
    :param max_depth: The maximum number of tests on a path.
    :param min_leaf: The minimum number of samples in a leaf, at least 1.
    :param symbols: Display strings of the character ids, for rendering.
    :return: The fitted ``RegressionTree``.
    :raise UsageError: If there are fewer than ``2 * min_leaf`` samples.
    """

    if min_leaf < 1 or max_depth < 0:
        raise UsageError(f"Trees need min_leaf >= 1 and max_depth >= 0, got {min_leaf} and {max_depth}.")

    if len(samples) < 2 * min_leaf:
        raise UsageError(f"A tree with min_leaf={min_leaf} needs at least {2 * min_leaf} samples, got {len(samples)}.")

    n_symbols = samples.vocab_size + 1
    tolerance = GAIN_TOL * (float(samples.targets @ samples.targets) + 1.0)

    def grow(index: np.ndarray, depth: int) -> TreeNode:

        targets = samples.targets[index]
        leaf = TreeLeaf(value=float(targets.mean()), count=int(index.shape[0]))

        if depth >= max_depth or index.shape[0] < 2 * min_leaf:
            return leaf

        gain, k, char = _best_split(contexts=samples.contexts[index], targets=targets, symbols=n_symbols,
                                    min_leaf=min_leaf)

        if not gain > tolerance:
            return leaf

        hit = samples.contexts[index, k] == char

        return TreeSplit(offset=k - samples.window, char=char, count=int(index.shape[0]),
                         yes=grow(index=index[hit], depth=depth + 1), no=grow(index=index[~hit], depth=depth + 1))

    tree = RegressionTree(root=grow(index=np.arange(len(samples)), depth=0), window=samples.window, symbols=symbols)

    logger.debug("Fitted a decision tree.", extra=fields(samples=len(samples), leaves=len(tree.leaves()),
                                                         max_depth=max_depth, min_leaf=min_leaf))

    return tree


def predict_tree(
    tree: RegressionTree,
    contexts: np.ndarray
) -> np.ndarray:
    """
    :param tree: The fitted tree.
    :param contexts: ``N x window`` character ids, as in ``WindowSamples``.
    :return: The prediction of every row.
    """

    contexts = np.asarray(contexts, dtype=np.int64)

    if contexts.ndim != 2 or contexts.shape[1] != tree.window:
        raise UsageError(f"Contexts of shape {contexts.shape} do not match a tree over {tree.window} characters.")

    predictions = np.empty(contexts.shape[0])
    stack = [(tree.root, np.arange(contexts.shape[0]))]

    while stack:

        node, index = stack.pop()

        if isinstance(node, TreeLeaf):
            predictions[index] = node.value
            continue

        hit = contexts[index, node.offset + tree.window] == node.char
        stack.append((node.yes, index[hit]))
        stack.append((node.no, index[~hit]))

    return predictions


def tree_mse(
    tree: RegressionTree,
    samples: WindowSamples
) -> float:

    return float(np.mean((predict_tree(tree=tree, contexts=samples.contexts) - samples.targets) ** 2))


def _quoted(text: str) -> str:

    return msgspec.json.encode(text).decode('utf-8')


def render_tree(
    tree: RegressionTree,
    format: TreeFormat = 'text'
) -> str:
    """
    Renders the tree as an indented outline or as a Graphviz ``digraph``.

    :param tree: The tree.
    :param format: ``'text'`` or ``'dot'``.
    :return: The document.
    :raise UsageError: If the format is unknown.
    """

    if format == 'text':

        lines = []

        def outline(node: TreeNode, indent: str, branch: str) -> None:

            if isinstance(node, TreeLeaf):
                lines.append(f"{indent}{branch}value={node.value:.6g} (n={node.count})")
                return

            lines.append(f"{indent}{branch}char[{node.offset}] == {_quoted(tree.symbol(node.char))} (n={node.count})")
            outline(node=node.yes, indent=indent + '  ', branch='yes: ')
            outline(node=node.no, indent=indent + '  ', branch='no: ')

        outline(node=tree.root, indent='', branch='')

        return '\n'.join(lines) + '\n'

    if format == 'dot':

        statements = []
        counter = iter(range(2 ** 31))

        def visit(node: TreeNode) -> int:

            name = next(counter)

            if isinstance(node, TreeLeaf):
                label = f"value={node.value:.6g}\nn={node.count}"
                statements.append(f"  n{name} [label={_quoted(label)}];")
                return name

            label = f"char[{node.offset}] == {_quoted(tree.symbol(node.char))}\nn={node.count}"
            statements.append(f'  n{name} [label={_quoted(label)}];')

            statements.append(f'  n{name} -> n{visit(node=node.yes)} [label="yes"];')
            statements.append(f'  n{name} -> n{visit(node=node.no)} [label="no"];')

            return name

        visit(node=tree.root)

        return 'digraph tree {\n  node [shape=box];\n' + '\n'.join(statements) + '\n}\n'

    raise UsageError(f"Unknown tree format {format!r}.")
