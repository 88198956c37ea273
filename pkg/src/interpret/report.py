import html

from src.interpret.ColoredText import ColoredText, html_fragment, html_style
from src.interpret.pca import PcaReport
from src.interpret.tree import RegressionTree, render_tree


def _colored_section(
    heading: str,
    ct: ColoredText,
    prefix: str
) -> tuple[str, str]:

    labels = sorted(set(ct.labels.tolist()))
    style = html_style(palette=ct.palette, labels=labels).replace('.label-', f'.{prefix} .label-')

    return style, f'<section class="{prefix}">\n<h2>{html.escape(heading)}</h2>\n{html_fragment(ct=ct)}\n</section>'


def _pca_section(report: PcaReport) -> str:

    rows = '\n'.join(
        f'<tr><td>{k}</td><td>{ratio:.6f}</td><td>{total:.6f}</td></tr>'
        for k, (ratio, total) in enumerate(zip(report.ratios, report.cumulative), start=1)
    )

    return (
        '<section class="pca">\n<h2>Principal components of the LSTM states</h2>\n'
        f'<p>{report.components_99} components explain 99% of the variance.</p>\n'
        '<table>\n<tr><th>component</th><th>ratio</th><th>cumulative</th></tr>\n'
        f'{rows}\n</table>\n</section>'
    )


def build_report(
    title: str,
    hmm_text: ColoredText | None = None,
    cluster_text: ColoredText | None = None,
    pca: PcaReport | None = None,
    trees: dict[int, RegressionTree] | None = None
) -> str:
    """
    Assembles one standalone HTML document from the interpretation artifacts that are given: the text colored by
    HMM state, the text colored by LSTM-state cluster, the PCA table and one decision tree per hidden dimension.

    :param title: The document title.
    :param hmm_text: The text labelled with HMM states.
    :param cluster_text: The text labelled with k-means clusters.
    :param pca: The PCA report of the LSTM states.
    :param trees: Decision trees by hidden dimension.
    :return: The HTML document.
    """

    styles = ['pre.colored { font-family: monospace; white-space: pre-wrap; }']
    sections = []

    for heading, ct, prefix in (('Text colored by HMM state', hmm_text, 'hmm'),
                                ('Text colored by LSTM state cluster', cluster_text, 'clusters')):
        if ct is not None:
            style, section = _colored_section(heading=heading, ct=ct, prefix=prefix)
            styles.append(style)
            sections.append(section)

    if pca is not None:
        sections.append(_pca_section(report=pca))

    for dim, tree in sorted((trees or {}).items()):
        sections.append(f'<section class="tree">\n<h2>Decision tree for hidden dimension {dim}</h2>\n'
                        f'<pre>{html.escape(render_tree(tree=tree, format="text"))}</pre>\n</section>')

    return (
        '<!DOCTYPE html>\n<html>\n<head>\n<meta charset="utf-8">\n'
        f'<title>{html.escape(title)}</title>\n<style>\n' + '\n'.join(styles) + '\n</style>\n</head>\n<body>\n'
        f'<h1>{html.escape(title)}</h1>\n' + '\n'.join(sections) + '\n</body>\n</html>\n'
    )
