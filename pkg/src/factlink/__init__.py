"""factlink: mapping news articles to fact-checked claims.

Ingests articles and fact-checked claims, detects which claims appear in
which articles, classifies article stance toward matched claims, runs a
human annotation workflow for ground-truth labels, and aggregates stance
with claim veracity into article-claim pair veracity labels.
"""

__version__ = "0.1.0"
