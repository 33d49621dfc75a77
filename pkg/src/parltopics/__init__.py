"""Topic models and speaker-topic networks for parliamentary speech corpora.

The package turns a line-delimited corpus of attributed speeches into:

* a latent Dirichlet allocation topic model trained by collapsed Gibbs
  sampling (``parltopics.lda``),
* normalized topic-popularity time series, overall and by party
  (``parltopics.aggregate``),
* per-term speaker-topic bipartite networks and their weighted speaker
  projections, analyzed through degree distributions, party assortativity
  against a degree-preserving null model, and modularity communities
  (``parltopics.network``).

``parltopics.cli`` orchestrates the whole pipeline from one configuration
with content-hash stage caching; ``parltopics.report`` renders figures from
the emitted CSV files.
"""

__version__ = "0.1.0"
