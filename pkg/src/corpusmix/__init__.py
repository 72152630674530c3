"""Corpus analysis toolkit: text cleaning, document-term matrices, lexical
statistics, LDA by variational EM with BIC model selection, and
log-likelihood-ratio co-occurrence networks."""

__version__ = "0.1.0"
