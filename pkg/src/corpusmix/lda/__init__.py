from ._kernels import BACKEND
from .model import (
    FitDiagnostics,
    LdaConfig,
    LdaModel,
    ModelSelectionResult,
    bic,
    bic_value,
    doc_topic_mixture,
    elbo,
    fit_lda,
    match_topics,
    n_free_parameters,
    read_model_json,
    select_k,
    topic_terms,
    write_model_json,
)
from .simulate import SyntheticCorpus, sample_block_corpus, sample_corpus

__all__ = [
    "BACKEND", "FitDiagnostics", "LdaConfig", "LdaModel", "ModelSelectionResult",
    "SyntheticCorpus", "bic", "bic_value", "doc_topic_mixture", "elbo", "fit_lda",
    "match_topics", "n_free_parameters", "read_model_json", "sample_block_corpus",
    "sample_corpus",
    "select_k", "topic_terms", "write_model_json",
]
