"""NumPy implementations of the hot kernels.

These are the import-time fallback when the compiled extension is missing.
They are engineered to return *bit-identical* floats to ``_ckernels``: the
same enumeration order (lexicographic), the same accumulation order
(k-ascending from 0.0), the same rounding primitive (``rint``, i.e. round
half to even), and comparisons on squared distances with a single final
``sqrt``.  tests/test_kernels.py asserts exact equality between backends.
"""

import numpy as np


def labeled_min_sq_dist(points, labels):
    """Minimum squared distance over pairs of points with different labels.

    ``points`` must be (n, d) float64 sorted ascending by column 0; ``labels``
    is (n,) int64.  Returns +inf when no differently-labeled pair exists.

    Uses a neighbor-offset sweep: pair (i, i+k) can only improve the running
    best when the column-0 gap squared is below it, and gaps grow with k.
    """
    points = np.ascontiguousarray(points, dtype=np.float64)
    labels = np.ascontiguousarray(labels, dtype=np.int64)
    n, d = points.shape
    best = np.inf
    x0 = points[:, 0]
    for k in range(1, n):
        dx0 = x0[k:] - x0[:-k]
        active = dx0 * dx0 < best
        if not active.any():
            break
        rows = np.nonzero(active & (labels[k:] != labels[:-k]))[0]
        if rows.size == 0:
            continue
        delta = points[rows + k, 0] - points[rows, 0]
        dsq = delta * delta
        for dim in range(1, d):
            delta = points[rows + k, dim] - points[rows, dim]
            dsq += delta * delta
        m = dsq.min()
        if m < best:
            best = m
    return float(best)


def _subgrid(ranges):
    # integer grid over `ranges` in C (lexicographic) order, one row per tuple
    if not ranges:
        return np.zeros((1, 0), dtype=np.int64)
    mesh = np.meshgrid(*[np.arange(-r, r + 1, dtype=np.int64) for r in ranges],
                       indexing="ij")
    return np.stack([m.ravel() for m in mesh], axis=1)


def linforms_min_real(X, N, hybrid):
    """Exhaustive search of n real linear forms over q in {-N..N}^m \\ {0}.

    classical (hybrid=False): error(q) = max_i |<q, X_i> - rint(<q, X_i>)|.
    hybrid   (hybrid=True):   error(q) = min_p max_i |<q, X_i> - p| with a
    *common* integer p, which is attained at one of rint(mid)-1, rint(mid),
    rint(mid)+1 for mid the Chebyshev midpoint of the form values.

    Returns (error, q, p) with q (m,) int64 and p (n,) int64; ties broken by
    lexicographic order of q (first hit wins).
    """
    X = np.ascontiguousarray(X, dtype=np.float64)
    m, n = X.shape
    sub = _subgrid([N] * (m - 1))
    best = np.inf
    best_q = None
    best_p = None
    for q0 in range(-N, N + 1):
        F = np.zeros((sub.shape[0], n))
        F += q0 * X[0]
        for k in range(1, m):
            F += sub[:, [k - 1]] * X[k]
        if hybrid:
            mid = 0.5 * (F.min(axis=1) + F.max(axis=1))
            c = np.rint(mid)
            E = None
            P = None
            for cand in (c - 1.0, c, c + 1.0):
                Ec = np.abs(F - cand[:, None]).max(axis=1)
                if E is None:
                    E, P = Ec, cand.copy()
                else:
                    upd = Ec < E
                    E[upd] = Ec[upd]
                    P[upd] = cand[upd]
        else:
            E = np.abs(F - np.rint(F)).max(axis=1)
        if q0 == 0 and m >= 1:
            # knock out the all-zero q
            zero_row = (sub.shape[0] - 1) // 2 if m > 1 else 0
            E[zero_row] = np.inf
        row = int(np.argmin(E))
        if E[row] < best:
            best = float(E[row])
            best_q = np.concatenate(([q0], sub[row])).astype(np.int64)
            if hybrid:
                best_p = np.full(n, int(P[row]), dtype=np.int64)
            else:
                best_p = np.rint(F[row]).astype(np.int64)
    return best, best_q, best_p


def linforms_all_real(X, N, hybrid):
    """Per-q errors and sup-norms for the full grid (numpy only, desk scale).

    Returns (errors, norms) flattened in lexicographic q order with the
    all-zero q removed.  Used by the badly-approximable constant scan, which
    needs the whole error field rather than the minimizer.
    """
    X = np.ascontiguousarray(X, dtype=np.float64)
    m, n = X.shape
    grid = _subgrid([N] * m)
    keep = np.any(grid != 0, axis=1)
    grid = grid[keep]
    F = np.zeros((grid.shape[0], n))
    for k in range(m):
        F += grid[:, [k]] * X[k]
    if hybrid:
        mid = 0.5 * (F.min(axis=1) + F.max(axis=1))
        c = np.rint(mid)
        E = None
        for cand in (c - 1.0, c, c + 1.0):
            Ec = np.abs(F - cand[:, None]).max(axis=1)
            E = Ec if E is None else np.minimum(E, Ec)
    else:
        E = np.abs(F - np.rint(F)).max(axis=1)
    norms = np.abs(grid).max(axis=1).astype(np.float64)
    return E, norms


def gaussian_disc(N):
    """Gaussian integers with modulus <= N, (nd, 2) int64, lexicographic."""
    g = _subgrid([N, N])
    keep = g[:, 0] * g[:, 0] + g[:, 1] * g[:, 1] <= N * N
    return np.ascontiguousarray(g[keep])


def linforms_min_complex(Xre, Xim, disc, hybrid):
    """Complex analogue of linforms_min_real over q in disc^m \\ {0}.

    disc is the (nd, 2) output of gaussian_disc; nearest Gaussian integer is
    componentwise rint, and the hybrid common-p search scans the 3x3 Gaussian
    neighborhood of the rounded box center of the form values.  Returns
    (error, q, p) with q (m, 2) and p (n, 2) int64.
    """
    Xre = np.ascontiguousarray(Xre, dtype=np.float64)
    Xim = np.ascontiguousarray(Xim, dtype=np.float64)
    disc = np.ascontiguousarray(disc, dtype=np.int64)
    m, n = Xre.shape
    nd = disc.shape[0]
    if m == 1:
        chunks = [(slice(0, nd), np.zeros((1, 0, 2), dtype=np.int64))]
    else:
        mesh = np.meshgrid(*[np.arange(nd)] * (m - 1), indexing="ij")
        idx = np.stack([mm.ravel() for mm in mesh], axis=1)
        sub = disc[idx]  # (rows, m-1, 2)
        chunks = [(slice(j, j + 1), sub) for j in range(nd)]
    best = np.inf
    best_q = None
    best_p = None
    for lead, sub in chunks:
        a0 = disc[lead, 0].astype(np.float64)
        b0 = disc[lead, 1].astype(np.float64)
        rows = sub.shape[0] if m > 1 else nd
        Fre = np.zeros((rows, n))
        Fim = np.zeros((rows, n))
        if m == 1:
            Fre += a0[:, None] * Xre[0] - b0[:, None] * Xim[0]
            Fim += a0[:, None] * Xim[0] + b0[:, None] * Xre[0]
        else:
            Fre += a0 * Xre[0] - b0 * Xim[0]
            Fim += a0 * Xim[0] + b0 * Xre[0]
            for k in range(1, m):
                ak = sub[:, k - 1, [0]].astype(np.float64)
                bk = sub[:, k - 1, [1]].astype(np.float64)
                Fre += ak * Xre[k] - bk * Xim[k]
                Fim += ak * Xim[k] + bk * Xre[k]
        if hybrid:
            cr = np.rint(0.5 * (Fre.min(axis=1) + Fre.max(axis=1)))
            ci = np.rint(0.5 * (Fim.min(axis=1) + Fim.max(axis=1)))
            E2 = None
            Pr = Pi = None
            for dr in (-1.0, 0.0, 1.0):
                for di in (-1.0, 0.0, 1.0):
                    dre = Fre - (cr + dr)[:, None]
                    dim = Fim - (ci + di)[:, None]
                    Ec = (dre * dre + dim * dim).max(axis=1)
                    if E2 is None:
                        E2, Pr, Pi = Ec, cr + dr, ci + di
                    else:
                        upd = Ec < E2
                        E2[upd] = Ec[upd]
                        Pr[upd] = cr[upd] + dr
                        Pi[upd] = ci[upd] + di
        else:
            dre = Fre - np.rint(Fre)
            dim = Fim - np.rint(Fim)
            E2 = (dre * dre + dim * dim).max(axis=1)
        if m == 1:
            zero = np.nonzero((disc[:, 0] == 0) & (disc[:, 1] == 0))[0]
            E2[zero] = np.inf
        elif disc[lead, 0] == 0 and disc[lead, 1] == 0:
            zrow = np.nonzero(np.all(sub == 0, axis=(1, 2)))[0]
            E2[zrow] = np.inf
        row = int(np.argmin(E2))
        if E2[row] < best:
            best = float(E2[row])
            if m == 1:
                best_q = disc[row].reshape(1, 2).copy()
                frow, firow = Fre[row], Fim[row]
            else:
                best_q = np.concatenate((disc[lead], sub[row])).astype(np.int64)
                frow, firow = Fre[row], Fim[row]
            if hybrid:
                best_p = np.stack(
                    [np.full(n, int(Pr[row])), np.full(n, int(Pi[row]))], axis=1
                ).astype(np.int64)
            else:
                best_p = np.stack(
                    [np.rint(frow), np.rint(firow)], axis=1
                ).astype(np.int64)
    return float(np.sqrt(best)), best_q, best_p
