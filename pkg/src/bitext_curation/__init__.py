"""Curation and evaluation toolkit for low-resource to Chinese parallel corpora.

Stages: bitext ingestion and re-alignment, surface and LM-based pair scoring,
elite top-K selection, exact-size domain-proportional splitting, QE reward
computation, language-token-prefixed SFT inputs, and MT metrics.
"""

__version__ = "0.1.0"
