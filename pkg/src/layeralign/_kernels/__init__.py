"""Hot-kernel backend selection.

The compiled Cython extension is preferred when importable; otherwise the
numpy fallback in ``_pykernels`` is used.  Both produce bit-identical
outputs.  Set LAYERALIGN_PURE_PYTHON=1 to force the fallback (used by the
benchmark and the backend-parity tests).
"""

import os

import numpy as np

from . import _pykernels

try:
    from . import _ckernels as _compiled
except ImportError:  # extension not built
    _compiled = None

if _compiled is not None and not os.environ.get("LAYERALIGN_PURE_PYTHON"):
    _impl = _compiled
    BACKEND = "cython"
else:
    _impl = _pykernels
    BACKEND = "python"

gaussian_disc = _pykernels.gaussian_disc
linforms_all_real = _pykernels.linforms_all_real


def labeled_min_sq_dist(points, labels):
    """Min squared distance between differently-labeled points.

    Sorts lexicographically by coordinates (the sweep kernels require
    ascending column 0), then dispatches to the active backend.  Returns
    +inf when all labels coincide.
    """
    points = np.ascontiguousarray(points, dtype=np.float64)
    if points.ndim != 2:
        raise ValueError("points must be 2-D")
    labels = np.asarray(labels, dtype=np.int64)
    order = np.lexsort(points.T[::-1])
    return _impl.labeled_min_sq_dist(
        np.ascontiguousarray(points[order]), np.ascontiguousarray(labels[order])
    )


def linforms_min_real(X, N, hybrid):
    """Best (error, q, p) for n real linear forms over q in {-N..N}^m \\ {0}."""
    return _impl.linforms_min_real(np.asarray(X, dtype=np.float64), int(N), bool(hybrid))


def linforms_min_complex(X, N, hybrid):
    """Best (error, q, p) for complex forms over Gaussian q with |q|_2 <= N.

    X is a complex (m, n) matrix; the Gaussian-integer disc is enumerated
    identically in both backends.
    """
    X = np.asarray(X, dtype=np.complex128)
    disc = gaussian_disc(int(N))
    return _impl.linforms_min_complex(
        np.ascontiguousarray(X.real), np.ascontiguousarray(X.imag), disc, bool(hybrid)
    )
