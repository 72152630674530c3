"""Pure numpy implementation of the E-step kernels.

Same contract as the compiled ``_vem`` module. All documents are updated
together over the nonzero entries; a document stops moving once its own
gamma has converged, which reproduces the per-document loop.
"""

import numpy as np
import scipy.sparse as sp
from scipy.special import digamma, logsumexp


def _entry_rows(indptr):
    return np.repeat(np.arange(len(indptr) - 1), np.diff(indptr))


def _phi(elog_beta, dig, rows, indices):
    logp = elog_beta[:, indices].T + dig[rows]
    logp -= logp.max(axis=1, keepdims=True)
    np.exp(logp, out=logp)
    logp /= logp.sum(axis=1, keepdims=True)
    return logp


def estep(indptr, indices, counts, elog_beta, alpha, gamma, max_iter, rel_tol):
    M, K = gamma.shape
    V = elog_beta.shape[1]
    nnz = len(indices)
    rows = _entry_rows(indptr)
    # (M, nnz) selector summing entries into their document
    to_doc = sp.csr_matrix((counts, (rows, np.arange(nnz))), shape=(M, nnz))
    active = np.diff(indptr) > 0
    iters = np.zeros(M, dtype=np.int64)
    dig = digamma(gamma)
    for _ in range(max_iter):
        if not active.any():
            break
        iters[active] += 1
        dig_active = digamma(gamma)
        dig[active] = dig_active[active]
        phi = _phi(elog_beta, dig, rows, indices)
        newg = alpha + to_doc @ phi
        change = np.abs(newg - gamma).sum(axis=1)
        total = gamma.sum(axis=1)
        gamma[active] = newg[active]
        active &= ~(change < rel_tol * total)
    phi = _phi(elog_beta, dig, rows, indices)
    # (V, nnz) selector accumulating into terms
    to_term = sp.csr_matrix((counts, (indices, np.arange(nnz))), shape=(V, nnz))
    sstats = np.ascontiguousarray((to_term @ phi).T)
    return sstats, iters


def word_bound(indptr, indices, counts, elog_beta, elog_theta):
    rows = _entry_rows(indptr)
    x = elog_theta[rows] + elog_beta[:, indices].T
    return float(counts @ logsumexp(x, axis=1))
