"""Smoothed LDA fitted by variational EM.

Variational family: q(theta_d) = Dir(gamma_d), q(z_dn) = Mult(phi_dn) and
q(beta_k) = Dir(lam_k). The E-step runs coordinate ascent on (phi, gamma)
per document; the M-step sets ``lam = delta + expected topic-term counts``.
Both steps maximise the same bound, so the ELBO never decreases between EM
iterations. ``beta`` reported on the model is the posterior mean of q(beta).
"""

from __future__ import annotations

import hashlib
import json
import logging
import math
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path
from typing import Sequence

import numpy as np
import scipy.sparse as sp
from scipy.special import digamma, gammaln

from ..dtm import COUNT, DocTermMatrix
from ..errors import DataError, DomainError, NumericalError
from . import _kernels

log = logging.getLogger(__name__)

INIT_JITTER = 0.1


@dataclass(frozen=True)
class LdaConfig:
    k: int
    alpha: float | None = None  # None -> 50 / k
    delta: float = 0.1
    seed: int = 0
    em_max_iter: int = 100
    em_rel_tol: float = 1e-4
    estep_max_iter: int = 50
    estep_rel_tol: float = 1e-6

    def __post_init__(self):
        if self.k < 1:
            raise DomainError("k must be >= 1")
        if self.alpha is not None and not self.alpha > 0:
            raise DomainError("alpha must be positive")
        if not self.delta > 0:
            raise DomainError("delta must be positive")
        if not (self.em_rel_tol > 0 and self.estep_rel_tol > 0):
            raise DomainError("tolerances must be positive")
        if self.em_max_iter < 1 or self.estep_max_iter < 1:
            raise DomainError("iteration caps must be >= 1")

    @property
    def alpha_value(self) -> float:
        return 50.0 / self.k if self.alpha is None else float(self.alpha)


@dataclass
class FitDiagnostics:
    elbo_trace: list[float]
    n_iter: int
    converged: bool
    log_likelihood_bound: float
    backend: str = ""


@dataclass(eq=False)
class LdaModel:
    beta: np.ndarray
    gamma: np.ndarray
    theta: np.ndarray
    lam: np.ndarray
    config: LdaConfig
    diagnostics: FitDiagnostics
    terms: list[str] = field(default_factory=list)
    doc_ids: list[str] = field(default_factory=list)

    @property
    def k(self) -> int:
        return self.beta.shape[0]

    @property
    def n_terms(self) -> int:
        return self.beta.shape[1]

    @classmethod
    def from_variational(cls, lam, gamma, config, diagnostics, terms=(), doc_ids=()):
        lam = np.asarray(lam, dtype=np.float64)
        gamma = np.asarray(gamma, dtype=np.float64)
        return cls(
            beta=lam / lam.sum(axis=1, keepdims=True),
            gamma=gamma,
            theta=gamma / gamma.sum(axis=1, keepdims=True),
            lam=lam,
            config=config,
            diagnostics=diagnostics,
            terms=list(terms),
            doc_ids=list(doc_ids),
        )


def _csr_arrays(dtm: DocTermMatrix):
    m = dtm.matrix
    return (
        np.ascontiguousarray(m.indptr, dtype=np.int64),
        np.ascontiguousarray(m.indices, dtype=np.int64),
        np.ascontiguousarray(m.data, dtype=np.float64),
    )


def _dirichlet_expectation(param):
    return digamma(param) - digamma(param.sum(axis=1, keepdims=True))


def _bound(arrays, gamma, lam, alpha, delta, kernel) -> float:
    indptr, indices, counts = arrays
    k, V = lam.shape
    elog_theta = _dirichlet_expectation(gamma)
    elog_beta = _dirichlet_expectation(lam)
    words = kernel.word_bound(indptr, indices, counts,
                              np.ascontiguousarray(elog_beta), np.ascontiguousarray(elog_theta))
    docs = (
        gamma.shape[0] * (gammaln(k * alpha) - k * gammaln(alpha))
        + np.sum((alpha - gamma) * elog_theta)
        + np.sum(gammaln(gamma))
        - np.sum(gammaln(gamma.sum(axis=1)))
    )
    topics = (
        k * (gammaln(V * delta) - V * gammaln(delta))
        + np.sum((delta - lam) * elog_beta)
        + np.sum(gammaln(lam))
        - np.sum(gammaln(lam.sum(axis=1)))
    )
    return float(words + docs + topics)


def _check_counts(dtm: DocTermMatrix):
    if dtm.weighting != COUNT:
        raise DomainError("LDA needs a count-weighted matrix")
    if dtm.matrix.nnz == 0:
        raise DataError("empty corpus")


def _hash_order(doc_ids: Sequence[str], seed: int) -> list[int]:
    def key(i):
        h = hashlib.blake2b(f"{seed}\x1f{doc_ids[i]}".encode(), digest_size=8)
        return h.digest(), doc_ids[i]
    return sorted(range(len(doc_ids)), key=key)


def _seed_documents(X, doc_ids: Sequence[str], seed: int, k: int) -> list[int]:
    """Pick k distinct rows of X by k-means++ style D^2 sampling.

    Distance is one minus the cosine similarity of term-count vectors.
    Candidates are visited in the order of a hash of (seed, doc id), so the
    choice depends on ids and contents but never on row order.
    """
    order = _hash_order(doc_ids, seed)
    Y = sp.csr_matrix(X[order], dtype=np.float64)
    norms = np.sqrt(np.asarray(Y.multiply(Y).sum(axis=1)).ravel())
    Y = sp.diags(1.0 / norms) @ Y
    rng = np.random.default_rng([seed, k])
    chosen = [0]
    dist = np.full(len(order), np.inf)
    while len(chosen) < k:
        sim = np.asarray((Y @ Y[chosen[-1]].T).todense()).ravel()
        dist = np.minimum(dist, np.clip(1.0 - sim, 0.0, None))
        dist[chosen] = 0.0
        w = dist ** 2
        if w.sum() > 0:
            nxt = int(rng.choice(len(order), p=w / w.sum()))
        else:  # all remaining rows duplicate a seed
            nxt = next(i for i in range(len(order)) if i not in chosen)
        chosen.append(nxt)
    return [order[i] for i in chosen]


def init_lambda(config: LdaConfig, dtm: DocTermMatrix) -> np.ndarray:
    """Initial q(beta) parameters.

    Topic t starts from the term profile of one seed document (chosen by
    :func:`_seed_documents`) blended with
    a Dirichlet(delta) draw from a stream seeded by (seed, t); each topic
    carries an even share of the corpus token mass. Without enough
    non-empty documents the draw is used alone.
    """
    k, (M, V) = config.k, dtm.shape
    X = dtm.matrix
    mass = max(dtm.n_tokens, 1) / k
    lengths = np.diff(X.indptr)
    nonempty = [i for i in range(M) if lengths[i] > 0]
    seeds = None
    if len(nonempty) >= k:
        seeds = [nonempty[j] for j in
                 _seed_documents(X[nonempty], [dtm.rows[i] for i in nonempty], config.seed, k)]
    lam = np.empty((k, V))
    for t in range(k):
        rng = np.random.default_rng([config.seed, t])
        draw = rng.dirichlet(np.full(V, config.delta))
        if seeds is None:
            profile = 0.5 / V + 0.5 * draw
        else:
            counts = X[seeds[t]].toarray().ravel() + 1.0 / V
            profile = (1 - INIT_JITTER) * counts / counts.sum() + INIT_JITTER * draw
        lam[t] = config.delta + mass * profile
    return lam


def fit_lda(dtm: DocTermMatrix, config: LdaConfig, backend: str | None = None) -> LdaModel:
    """Fit LDA to a count matrix by variational EM.

    The outer loop stops when the relative ELBO change drops below
    ``config.em_rel_tol`` or after ``config.em_max_iter`` iterations.
    """
    _check_counts(dtm)
    M, V = dtm.shape
    k = config.k
    if k > V:
        raise DomainError(f"k={k} exceeds vocabulary size V={V}")
    kernel = _kernels.get_backend(backend)
    alpha, delta = config.alpha_value, config.delta
    arrays = _csr_arrays(dtm)
    doc_len = np.asarray(dtm.matrix.sum(axis=1), dtype=np.float64).ravel()

    lam = init_lambda(config, dtm)
    gamma = np.ascontiguousarray(np.repeat((alpha + doc_len / k)[:, None], k, axis=1))

    trace: list[float] = []
    converged = False
    for it in range(1, config.em_max_iter + 1):
        elog_beta = np.ascontiguousarray(_dirichlet_expectation(lam))
        sstats, _ = kernel.estep(*arrays, elog_beta, alpha, gamma,
                                 config.estep_max_iter, config.estep_rel_tol)
        lam = delta + sstats
        bound = _bound(arrays, gamma, lam, alpha, delta, kernel)
        if not (math.isfinite(bound) and np.isfinite(gamma).all() and np.isfinite(lam).all()):
            raise NumericalError(f"numerical failure at EM iteration {it} (k={k})")
        trace.append(bound)
        log.debug("k=%d iter=%d elbo=%.6f", k, it, bound)
        if it > 1 and abs(bound - trace[-2]) < config.em_rel_tol * abs(trace[-2]):
            converged = True
            break

    diag = FitDiagnostics(trace, len(trace), converged, trace[-1],
                          backend=_kernels.backend_name(kernel))
    return LdaModel.from_variational(lam, gamma, config, diag, dtm.vocab.terms, dtm.rows)


def _check_dims(model: LdaModel, dtm: DocTermMatrix):
    if dtm.shape != (model.gamma.shape[0], model.n_terms):
        raise DomainError(
            f"model is {model.gamma.shape[0]} docs x {model.n_terms} terms, "
            f"matrix is {dtm.shape[0]} x {dtm.shape[1]}"
        )


def elbo(model: LdaModel, dtm: DocTermMatrix, backend: str | None = None) -> float:
    """Variational lower bound on log p(corpus | alpha, delta).

    phi is profiled out at its optimum given gamma and lam.
    """
    _check_counts(dtm)
    _check_dims(model, dtm)
    kernel = _kernels.get_backend(backend or model.diagnostics.backend or None)
    return _bound(_csr_arrays(dtm), model.gamma, model.lam,
                  model.config.alpha_value, model.config.delta, kernel)


def n_free_parameters(k: int, n_terms: int) -> int:
    """Topic-term free parameters; document mixtures are integrated out."""
    return k * (n_terms - 1)


def bic_value(bound: float, k: int, n_terms: int, n_obs: int) -> float:
    return -2.0 * bound + n_free_parameters(k, n_terms) * math.log(n_obs)


def bic(model: LdaModel, dtm: DocTermMatrix) -> float:
    """-2 * ELBO + k (V - 1) ln(total tokens)."""
    return bic_value(elbo(model, dtm), model.k, model.n_terms, dtm.n_tokens)


@dataclass
class ModelSelectionResult:
    k_values: list[int]
    bic: list[float]
    best_k: int
    chosen_k: int
    models: dict = field(default_factory=dict, repr=False)
    n_definition: str = "total tokens"
    p_definition: str = "k*(V-1)"

    def model(self, k=None) -> LdaModel:
        return self.models[self.chosen_k if k is None else k]


def select_k(dtm: DocTermMatrix, k_min: int, k_max: int, template: LdaConfig | None = None,
             chosen_k: int | None = None, backend: str | None = None) -> ModelSelectionResult:
    """Fit every k in [k_min, k_max] and pick the smallest BIC.

    Ties go to the smaller k. ``chosen_k`` overrides the pick (it must be in
    range). A template with ``alpha=None`` uses 50/k for each k.
    """
    V = dtm.shape[1]
    if not 1 <= k_min <= k_max <= V:
        raise DomainError(f"need 1 <= k_min <= k_max <= V, got {k_min}, {k_max}, V={V}")
    if template is None:
        template = LdaConfig(k=k_min)
    ks = list(range(k_min, k_max + 1))
    if chosen_k is not None and chosen_k not in ks:
        raise DomainError(f"chosen k={chosen_k} outside {k_min}..{k_max}")
    scores, models = [], {}
    for k in ks:
        try:
            model = fit_lda(dtm, replace(template, k=k), backend=backend)
        except (NumericalError, DomainError) as exc:
            raise type(exc)(f"k={k}: {exc}") from exc
        models[k] = model
        scores.append(bic_value(model.diagnostics.log_likelihood_bound, k, V, dtm.n_tokens))
    best = ks[int(np.argmin(scores))]  # argmin returns the first (smallest k) on ties
    return ModelSelectionResult(ks, scores, best, best if chosen_k is None else chosen_k, models)


def topic_terms(model: LdaModel, n: int) -> list[list[tuple[str, float]]]:
    terms = model.terms or [str(j) for j in range(model.n_terms)]
    out = []
    for row in model.beta:
        ranked = sorted(zip(terms, row.tolist()), key=lambda tp: (-tp[1], tp[0]))
        out.append(ranked[:max(n, 0)])
    return out


def doc_topic_mixture(model: LdaModel) -> list[tuple[str, np.ndarray]]:
    ids = model.doc_ids or [str(i) for i in range(model.theta.shape[0])]
    return list(zip(ids, model.theta))


def match_topics(est_beta, true_beta, top: int = 10):
    """Greedily pair estimated and true topics by cosine similarity.

    Returns ``(mapping, precision)`` where ``mapping[j]`` is the estimated
    topic assigned to true topic ``j`` and ``precision[j]`` the share of the
    estimated topic's top terms that are also top terms of the true topic.
    Terms tied with the true topic's ``top``-th value count as top terms, so
    a topic uniform over a block scores by block membership.
    """
    est = np.asarray(est_beta, dtype=float)
    true = np.asarray(true_beta, dtype=float)
    if est.shape != true.shape:
        raise DomainError(f"shape mismatch: {est.shape} vs {true.shape}")
    k, V = true.shape
    top = min(top, V)
    unit_e = est / np.linalg.norm(est, axis=1, keepdims=True)
    unit_t = true / np.linalg.norm(true, axis=1, keepdims=True)
    sim = unit_t @ unit_e.T
    pairs = sorted(((-sim[j, i], j, i) for j in range(k) for i in range(k)))
    mapping = [-1] * k
    used_est = set()
    for _, j, i in pairs:
        if mapping[j] < 0 and i not in used_est:
            mapping[j] = i
            used_est.add(i)
    precision = []
    for j, i in enumerate(mapping):
        # terms tied with the true top-th value all count as true top terms
        cutoff = np.sort(true[j])[::-1][top - 1]
        t_top = set(np.flatnonzero(true[j] >= cutoff))
        e_top = set(np.argsort(-est[i], kind="stable")[:top])
        precision.append(len(t_top & e_top) / top)
    return mapping, precision


# -- serialisation ------------------------------------------------------------

def model_to_dict(model: LdaModel) -> dict:
    return {
        "config": asdict(model.config) | {"alpha": model.config.alpha_value},
        "vocabulary": list(model.terms),
        "doc_ids": list(model.doc_ids),
        "beta": model.beta.tolist(),
        "lambda": model.lam.tolist(),
        "gamma": model.gamma.tolist(),
        "diagnostics": asdict(model.diagnostics),
    }


def write_model_json(model: LdaModel, path, extra: dict | None = None) -> None:
    payload = model_to_dict(model)
    if extra:
        payload.update(extra)
    Path(path).write_text(json.dumps(payload, indent=1) + "\n", encoding="utf-8")


def read_model_json(path) -> LdaModel:
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    config = LdaConfig(**data["config"])
    diag = FitDiagnostics(**data["diagnostics"])
    return LdaModel.from_variational(data["lambda"], data["gamma"], config, diag,
                                     data["vocabulary"], data["doc_ids"])
