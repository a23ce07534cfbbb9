"""Hot numerical kernels.

Every function here is written in the subset of numpy that numba compiles,
so the same source runs jitted or as plain numpy (see ``_accel``). Loops are
kept at the outer level and the inner work is vectorized, which keeps the
unjitted fallback usable.
"""

import numpy as np

from ._accel import njit

LP_OK = 0
LP_INFEASIBLE = 1
LP_UNBOUNDED = 2
LP_ITERATION_LIMIT = 3


@njit
def _pivot(T, basis, r, j):
    T[r, :] = T[r, :] / T[r, j]
    col = T[:, j].copy()
    col[r] = 0.0
    T -= np.outer(col, T[r, :])
    basis[r] = j


@njit
def _run_phase(T, basis, n_enter, tol, max_iter):
    # Bland's rule: lowest-index improving column, lowest-index basic on ties.
    m = T.shape[0] - 1
    last = T.shape[1] - 1
    it = 0
    while it < max_iter:
        cand = np.nonzero(T[m, :n_enter] < -tol)[0]
        if cand.size == 0:
            return LP_OK, it
        j = cand[0]
        colj = T[:m, j]
        best = -1
        best_ratio = np.inf
        for i in range(m):
            if colj[i] > tol:
                ratio = T[i, last] / colj[i]
                if best < 0 or ratio < best_ratio - 1e-12 * (1.0 + abs(best_ratio)):
                    best = i
                    best_ratio = ratio
                elif ratio <= best_ratio + 1e-12 * (1.0 + abs(best_ratio)) and basis[i] < basis[best]:
                    best = i
                    best_ratio = min(ratio, best_ratio)
        if best < 0:
            return LP_UNBOUNDED, it
        _pivot(T, basis, best, j)
        it += 1
    return LP_ITERATION_LIMIT, it


@njit
def simplex_standard(c, A, b, tol, max_iter):
    """Two-phase dense simplex for ``min c.x  s.t.  A x = b, x >= 0``.

    Returns ``(status, x, y, objective, iterations)`` where ``y`` are the
    equality-row duals, so that ``A.T @ y <= c`` and ``b @ y == objective``
    at an optimum.
    """
    m, n = A.shape
    width = n + m + 1
    last = width - 1
    T = np.zeros((m + 1, width))
    sign = np.ones(m)
    basis = np.empty(m, dtype=np.int64)
    for i in range(m):
        if b[i] < 0.0:
            sign[i] = -1.0
        T[i, :n] = sign[i] * A[i, :]
        T[i, n + i] = 1.0
        T[i, last] = sign[i] * b[i]
        basis[i] = n + i

    x = np.zeros(n)
    y = np.zeros(m)

    # phase 1: minimise the sum of artificials
    for i in range(m):
        T[m, :n] -= T[i, :n]
        T[m, last] -= T[i, last]
    status, it1 = _run_phase(T, basis, n, tol, max_iter)
    if status == LP_ITERATION_LIMIT:
        return status, x, y, np.nan, it1
    scale = 1.0
    for i in range(m):
        scale = max(scale, abs(b[i]))
    if -T[m, last] > 1e-9 * scale * max(1, m):
        return LP_INFEASIBLE, x, y, np.nan, it1

    # push remaining zero-level artificials out where a structural column allows
    for i in range(m):
        if basis[i] >= n:
            row = np.abs(T[i, :n])
            k = np.argmax(row) if n > 0 else -1
            if k >= 0 and row[k] > tol:
                _pivot(T, basis, i, k)

    # phase 2
    T[m, :] = 0.0
    T[m, :n] = c
    for i in range(m):
        bi = basis[i]
        if bi < n and c[bi] != 0.0:
            T[m, :] -= c[bi] * T[i, :]
    status, it2 = _run_phase(T, basis, n, tol, max_iter - it1)
    iters = it1 + it2
    if status != LP_OK:
        return status, x, y, np.nan, iters

    for i in range(m):
        if basis[i] < n:
            x[basis[i]] = T[i, last]
    for i in range(m):
        y[i] = -sign[i] * T[m, n + i]
    return LP_OK, x, y, -T[m, last], iters


@njit
def fm_eliminate(A, b, col, tol):
    """One Fourier-Motzkin step on ``A x <= b``: drop variable ``col``."""
    a = A[:, col]
    pos = np.nonzero(a > tol)[0]
    neg = np.nonzero(a < -tol)[0]
    zer = np.nonzero(np.abs(a) <= tol)[0]
    n_out = zer.size + pos.size * neg.size
    out_A = np.empty((n_out, A.shape[1]))
    out_b = np.empty(n_out)
    k = 0
    for i in zer:
        out_A[k] = A[i]
        out_A[k, col] = 0.0
        out_b[k] = b[i]
        k += 1
    if neg.size > 0:
        An = A[neg]
        bn = b[neg]
        wn = -a[neg]
        for p in pos:
            wp = a[p]
            blk_A = An * wp + np.outer(wn, A[p])
            blk_b = bn * wp + wn * b[p]
            for t in range(neg.size):
                s = np.max(np.abs(blk_A[t]))
                if s > 0.0:
                    blk_A[t] /= s
                    blk_b[t] /= s
            out_A[k:k + neg.size] = blk_A
            out_A[k:k + neg.size, col] = 0.0
            out_b[k:k + neg.size] = blk_b
            k += neg.size
    return out_A, out_b


@njit
def weighted_entropy(labels, weights, nbins):
    """Shannon entropy (bits) of a labelled partition with cell weights."""
    acc = np.bincount(labels, weights, nbins)
    h = 0.0
    for k in range(nbins):
        q = acc[k]
        if q > 0.0:
            h -= q * np.log2(q)
    return h


@njit
def mixture_entropy(means, logw, nodes, node_w):
    """Differential entropy (nats) of a unit-covariance isotropic mixture.

    ``means`` is ``(K, r)``; ``nodes``/``node_w`` form a product quadrature
    rule for the standard normal in ``r`` real dimensions. Each component
    expectation ``E[log p(Z)]`` is integrated with the rule centred on it.
    """
    K = means.shape[0]
    Q = nodes.shape[0]
    r = means.shape[1]
    w = np.exp(logw)
    const = -0.5 * r * np.log(2.0 * np.pi)
    L = np.empty((K, Q))
    h = 0.0
    for j in range(K):
        if w[j] == 0.0:
            continue
        Z = nodes + means[j]
        for l in range(K):
            d = Z - means[l]
            L[l] = logw[l] - 0.5 * np.sum(d * d, axis=1)
        top = L[0].copy()
        for l in range(1, K):
            top = np.maximum(top, L[l])
        s = np.zeros(Q)
        for l in range(K):
            s += np.exp(L[l] - top)
        logp = top + np.log(s) + const
        h -= w[j] * np.sum(node_w * logp)
    return h
