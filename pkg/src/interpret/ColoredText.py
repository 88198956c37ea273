import html
import re
from pathlib import Path
from typing import Literal

import msgspec
import numpy as np
from msgspec import Struct

from src.core import DataError, UsageError

DocumentFormat = Literal['html', 'ansi']

PALETTE_PATH = Path(__file__).with_name('palette.toml')

ANSI_RESET = '\x1b[0m'

# ESC inside the text is written as ESC_MARK + 'e' and a literal ESC_MARK is doubled
ESC_MARK = '\u241b'

_ANSI_CODE = re.compile(r'\x1b\[48;2;\d{1,3};\d{1,3};\d{1,3};38;2;\d{1,3};\d{1,3};\d{1,3}m|\x1b\[0m')
_SPAN_TAG = re.compile(r'</?span[^>]*>')
_PRE_BLOCK = re.compile(r'<pre class="colored">(.*?)</pre>', re.DOTALL)
_ESCAPED = re.compile(f'{ESC_MARK}([{ESC_MARK}e])')


class Swatch(Struct, frozen=True):
    background: str
    font: str

    def rgb(self) -> tuple[tuple[int, int, int], tuple[int, int, int]]:

        def parse(color: str) -> tuple[int, int, int]:
            return int(color[1:3], 16), int(color[3:5], 16), int(color[5:7], 16)

        return parse(self.background), parse(self.font)


class PaletteFile(Struct):
    swatch: list[Swatch]


def load_palette(path: Path = PALETTE_PATH) -> dict[int, Swatch]:
    """
    Reads a palette TOML file, a list of ``[[swatch]]`` tables assigned to labels 0, 1, ... in order.

    :raise DataError: If the file is missing or malformed.
    """

    try:
        swatches = msgspec.toml.decode(path.read_bytes(), type=PaletteFile).swatch

    except (OSError, msgspec.DecodeError) as exception:
        raise DataError(f"Cannot read the palette {path}: {exception}") from exception

    return dict(enumerate(swatches))


def cycle_palette(
    palette: dict[int, Swatch],
    labels: np.ndarray
) -> dict[int, Swatch]:
    """
    Assigns every label in ``labels`` the swatch ``label % len(palette)``, so any label count can be colored.
    """

    swatches = [palette[key] for key in sorted(palette)]

    return {label: swatches[label % len(swatches)] for label in np.unique(labels).tolist()}


class ColoredText:
    """
    ``ColoredText`` class pairing every character of a text with a label (an HMM state or a k-means cluster) and
    every label with a ``Swatch``.
    """

    def __init__(
        self,
        chars: str,
        labels: np.ndarray,
        palette: dict[int, Swatch] | None = None
    ):
        """
        :param chars: The text.
        :param labels: One label per character.
        :param palette: The colors by label; the bundled palette, cycled over the labels, when ``None``.
        :raise DataError: If the lengths differ or a label has no palette entry.
        """

        labels = np.asarray(labels, dtype=np.int64)

        if labels.shape != (len(chars),):
            raise DataError(f"{labels.shape[0]} labels for {len(chars)} characters.")

        if palette is None:
            palette = cycle_palette(palette=load_palette(), labels=labels)

        missing = sorted(set(np.unique(labels).tolist()) - set(palette))

        if missing:
            raise DataError(f"Labels {missing} have no palette entry.")

        # public

        self.chars = chars
        self.labels = labels
        self.palette = palette

    def __str__(self):

        return f"{self.__class__.__name__}(chars={len(self.chars)}, labels={len(set(self.labels.tolist()))})"

    def runs(self) -> list[tuple[int, str]]:
        """
        :return: The maximal runs of equally labelled characters, in order.
        """

        if not self.chars:
            return []

        cuts = np.flatnonzero(np.diff(self.labels)) + 1
        bounds = [0, *cuts.tolist(), len(self.chars)]

        return [(int(self.labels[a]), self.chars[a:b]) for a, b in zip(bounds[:-1], bounds[1:])]


def html_style(
    palette: dict[int, Swatch],
    labels: list[int]
) -> str:

    return '\n'.join(
        f".label-{label} {{ background-color: {palette[label].background}; color: {palette[label].font}; }}"
        for label in labels
    )


def html_fragment(ct: ColoredText) -> str:
    """
    The ``<pre>`` block of a colored text: every run of a label wrapped in a span of class ``label-<id>``.
    """

    spans = ''.join(f'<span class="label-{label}">{html.escape(text, quote=True)}</span>' for label, text in ct.runs())

    return f'<pre class="colored">{spans}</pre>'


def _escape_ansi(text: str) -> str:

    return text.replace(ESC_MARK, ESC_MARK * 2).replace('\x1b', f'{ESC_MARK}e')


def render_colored_text(
    ct: ColoredText,
    format: DocumentFormat = 'html',
    title: str = 'Colored text'
) -> str:
    """
    Renders the text over its label colors.

    ``html`` gives one standalone document with the palette as a style block; ``ansi`` gives 24-bit background and
    font escapes around every run, for terminals, with any ESC of the text written as a visible mark. Newlines are kept
    literally and the output depends only on the input.

    :param ct: The colored text.
    :param format: ``'html'`` or ``'ansi'``.
    :param title: The title of the HTML document.
    :return: The document.
    :raise UsageError: If the format is unknown.
    """

    if format == 'html':

        labels = sorted(set(ct.labels.tolist()))

        return (
            '<!DOCTYPE html>\n<html>\n<head>\n<meta charset="utf-8">\n'
            f'<title>{html.escape(title)}</title>\n'
            f'<style>\npre.colored {{ font-family: monospace; }}\n{html_style(palette=ct.palette, labels=labels)}\n'
            '</style>\n</head>\n<body>\n'
            f'{html_fragment(ct=ct)}\n'
            '</body>\n</html>\n'
        )

    if format == 'ansi':

        parts = []

        for label, text in ct.runs():
            (br, bg, bb), (fr, fg, fb) = ct.palette[label].rgb()
            parts.append(f'\x1b[48;2;{br};{bg};{bb};38;2;{fr};{fg};{fb}m{_escape_ansi(text=text)}{ANSI_RESET}')

        return ''.join(parts)

    raise UsageError(f"Unknown document format {format!r}.")


def strip_markup(
    document: str,
    format: DocumentFormat = 'html'
) -> str:
    """
    Recovers the text from a document of ``render_colored_text()``.

    :raise DataError: If an HTML document holds no colored block.
    :raise UsageError: If the format is unknown.
    """

    if format == 'html':

        block = _PRE_BLOCK.search(document)

        if block is None:
            raise DataError("The document holds no colored text block.")

        return html.unescape(_SPAN_TAG.sub('', block.group(1)))

    if format == 'ansi':
        return _ESCAPED.sub(lambda match: '\x1b' if match.group(1) == 'e' else ESC_MARK, _ANSI_CODE.sub('', document))

    raise UsageError(f"Unknown document format {format!r}.")
