# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled variational E-step for smoothed LDA.

Documents arrive in CSR form (indptr, indices, counts). Both kernels visit
documents in index order so accumulated sums are bit-stable across runs.
"""

import numpy as np
cimport numpy as cnp
from libc.math cimport exp, log, fabs

cnp.import_array()


cdef inline double _digamma(double x) nogil:
    # recurrence up to x >= 10, then the asymptotic series
    cdef double r = 0.0, f
    while x < 10.0:
        r -= 1.0 / x
        x += 1.0
    f = 1.0 / (x * x)
    return r + log(x) - 0.5 / x - f * (1.0 / 12 - f * (1.0 / 120 - f * (1.0 / 252
        - f * (1.0 / 240 - f * (1.0 / 132 - f * (691.0 / 32760 - f / 12))))))


def digamma(double x):
    return _digamma(x)


def estep(const cnp.int64_t[::1] indptr, const cnp.int64_t[::1] indices,
          const double[::1] counts, const double[:, ::1] elog_beta,
          double alpha, double[:, ::1] gamma, int max_iter, double rel_tol):
    """Coordinate ascent on (phi, gamma) for every document.

    ``gamma`` is updated in place (warm start). Returns the expected
    topic-term counts, shape (k, V), and the iteration count per document.
    """
    cdef Py_ssize_t M = gamma.shape[0], K = gamma.shape[1], V = elog_beta.shape[1]
    cdef Py_ssize_t d, p, t, w, it, start, stop
    cdef double mx, norm, change, total, c
    sstats_arr = np.zeros((K, V), dtype=np.float64)
    iters_arr = np.zeros(M, dtype=np.int64)
    cdef double[:, ::1] sstats = sstats_arr
    cdef cnp.int64_t[::1] iters = iters_arr
    cdef double[::1] dig = np.empty(K)
    cdef double[::1] newg = np.empty(K)
    cdef double[::1] phi = np.empty(K)

    with nogil:
        for d in range(M):
            start = indptr[d]
            stop = indptr[d + 1]
            if start == stop:
                continue
            it = 0
            while it < max_iter:
                it += 1
                for t in range(K):
                    dig[t] = _digamma(gamma[d, t])
                    newg[t] = alpha
                for p in range(start, stop):
                    w = indices[p]
                    c = counts[p]
                    mx = -1e300
                    for t in range(K):
                        phi[t] = elog_beta[t, w] + dig[t]
                        if phi[t] > mx:
                            mx = phi[t]
                    norm = 0.0
                    for t in range(K):
                        phi[t] = exp(phi[t] - mx)
                        norm += phi[t]
                    for t in range(K):
                        newg[t] += c * phi[t] / norm
                change = 0.0
                total = 0.0
                for t in range(K):
                    change += fabs(newg[t] - gamma[d, t])
                    total += gamma[d, t]
                    gamma[d, t] = newg[t]
                if change < rel_tol * total:
                    break
            iters[d] = it
            # sufficient statistics from the phi that produced the final gamma
            for p in range(start, stop):
                w = indices[p]
                c = counts[p]
                mx = -1e300
                for t in range(K):
                    phi[t] = elog_beta[t, w] + dig[t]
                    if phi[t] > mx:
                        mx = phi[t]
                norm = 0.0
                for t in range(K):
                    phi[t] = exp(phi[t] - mx)
                    norm += phi[t]
                for t in range(K):
                    sstats[t, w] += c * phi[t] / norm
    return sstats_arr, iters_arr


def word_bound(const cnp.int64_t[::1] indptr, const cnp.int64_t[::1] indices,
               const double[::1] counts, const double[:, ::1] elog_beta,
               const double[:, ::1] elog_theta):
    """Sum over tokens of log sum_k exp(E[log theta_dk] + E[log beta_kw])."""
    cdef Py_ssize_t M = elog_theta.shape[0], K = elog_theta.shape[1]
    cdef Py_ssize_t d, p, t, w
    cdef double mx, s, x, total = 0.0, doc
    with nogil:
        for d in range(M):
            doc = 0.0
            for p in range(indptr[d], indptr[d + 1]):
                w = indices[p]
                mx = -1e300
                for t in range(K):
                    x = elog_theta[d, t] + elog_beta[t, w]
                    if x > mx:
                        mx = x
                s = 0.0
                for t in range(K):
                    s += exp(elog_theta[d, t] + elog_beta[t, w] - mx)
                doc += counts[p] * (mx + log(s))
            total += doc
    return total
