import numpy as np

from src.interpret import ColoredText, build_report, fit_state_dim_tree, pca_report


def test_full_report(rng, slash_samples):

    text = 'a <b> & c'
    hmm_text = ColoredText(chars=text, labels=np.arange(len(text)) % 3)
    cluster_text = ColoredText(chars=text, labels=np.zeros(len(text)))

    document = build_report(title='States', hmm_text=hmm_text, cluster_text=cluster_text,
                            pca=pca_report(hidden=rng.normal(size=(50, 3))),
                            trees={7: fit_state_dim_tree(samples=slash_samples)})

    assert document.startswith('<!DOCTYPE html>')
    assert document.rstrip().endswith('</html>')
    assert document.count('<pre class="colored">') == 2
    assert '.hmm .label-2' in document
    assert '.clusters .label-0' in document
    assert 'a &lt;b&gt; &amp; c' in document
    assert 'hidden dimension 7' in document
    assert 'components explain 99%' in document


def test_partial_report():

    document = build_report(title='Only HMM', hmm_text=ColoredText(chars='xy', labels=np.array([0, 1])))

    assert 'clusters' not in document
    assert 'pca' not in document
    assert '<h1>Only HMM</h1>' in document
