"""Compiled-vs-numpy kernel agreement and brute-force cross-checks.

The compiled backend must agree with the numpy fallback bit for bit: same
minimum (float equality, no tolerance), same lexicographically-first witness.
Both are additionally checked against a dumb itertools search on small grids.
"""

import itertools
import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import layeralign._kernels as kernels
from layeralign._kernels import _pykernels as pk

try:
    from layeralign._kernels import _ckernels as ck

    HAVE_C = True
except ImportError:  # pragma: no cover - depends on build environment
    ck = None
    HAVE_C = False

needs_c = pytest.mark.skipif(not HAVE_C, reason="compiled kernels not built")


def _random_system(rng, m, n, field="real"):
    X = rng.uniform(-0.5, 0.5, size=(m, n))
    if field == "complex":
        X = X + 1j * rng.uniform(-0.5, 0.5, size=(m, n))
    return X


# ---------------------------------------------------------------------------
# backend parity (bit-exact)
# ---------------------------------------------------------------------------


@needs_c
@pytest.mark.parametrize("m,n", [(1, 1), (2, 1), (2, 2), (3, 2)])
@pytest.mark.parametrize("hybrid", [False, True])
def test_linforms_real_backends_bit_exact(m, n, hybrid):
    if hybrid and m + 1 <= n:
        pytest.skip("hybrid mode needs m+1 > n")
    rng = np.random.default_rng(1000 + 10 * m + n)
    for _ in range(25):
        X = np.ascontiguousarray(_random_system(rng, m, n))
        e_py, q_py, p_py = pk.linforms_min_real(X, 8, hybrid)
        e_c, q_c, p_c = ck.linforms_min_real(X, 8, hybrid)
        assert e_c == e_py  # float equality on purpose
        np.testing.assert_array_equal(q_c, q_py)
        np.testing.assert_array_equal(p_c, p_py)


@needs_c
@pytest.mark.parametrize("hybrid", [False, True])
def test_linforms_complex_backends_bit_exact(hybrid):
    rng = np.random.default_rng(77)
    disc = pk.gaussian_disc(5)
    for _ in range(15):
        X = _random_system(rng, 2, 1, field="complex")
        Xre = np.ascontiguousarray(X.real)
        Xim = np.ascontiguousarray(X.imag)
        e_py, q_py, p_py = pk.linforms_min_complex(Xre, Xim, disc, hybrid)
        e_c, q_c, p_c = ck.linforms_min_complex(Xre, Xim, disc, hybrid)
        assert e_c == e_py
        np.testing.assert_array_equal(q_c, q_py)
        np.testing.assert_array_equal(p_c, p_py)


@needs_c
def test_labeled_min_sq_dist_backends_bit_exact():
    rng = np.random.default_rng(5)
    for trial in range(20):
        npts = int(rng.integers(10, 300))
        dim = int(rng.integers(1, 4))
        points = rng.standard_normal((npts, dim))
        labels = rng.integers(0, 5, size=npts).astype(np.int64)
        order = np.lexsort(points.T[::-1])
        pts = np.ascontiguousarray(points[order])
        lab = np.ascontiguousarray(labels[order])
        assert ck.labeled_min_sq_dist(pts, lab) == pk.labeled_min_sq_dist(pts, lab)


def test_wrapper_dispatches_and_sorts():
    # the public wrapper owns the sorting; unsorted input must still work
    rng = np.random.default_rng(2)
    points = rng.standard_normal((100, 2))
    labels = rng.integers(0, 3, size=100)
    d = kernels.labeled_min_sq_dist(points, labels)
    brute = min(
        float(np.sum((a - b) ** 2))
        for (a, la), (b, lb) in itertools.combinations(zip(points, labels), 2)
        if la != lb
    )
    assert d == pytest.approx(brute, rel=1e-12)


def test_pure_python_env_forces_fallback():
    code = (
        "import layeralign._kernels as k; print(k.BACKEND)"
    )
    env = dict(os.environ, LAYERALIGN_PURE_PYTHON="1")
    out = subprocess.run(
        [sys.executable, "-c", code], capture_output=True, text=True, env=env
    )
    assert out.stdout.strip() == "python"


# ---------------------------------------------------------------------------
# brute-force cross-checks (lex-first witness convention)
# ---------------------------------------------------------------------------


def _brute_real(X, N, hybrid):
    """Dumb reference: for hybrid, scan *every* integer p in range rather
    than trusting the midpoint-candidate argument."""
    m, n = X.shape
    best = (np.inf, None, None)
    for q in itertools.product(range(-N, N + 1), repeat=m):
        if all(c == 0 for c in q):
            continue
        F = np.asarray(q, dtype=float) @ X
        if hybrid:
            lo = int(np.floor(F.min())) - 1
            hi = int(np.ceil(F.max())) + 1
            err, pbest = min(
                (float(np.max(np.abs(F - p))), p) for p in range(lo, hi + 1)
            )
            pvec = np.full(n, pbest)
        else:
            pvec = np.rint(F)
            err = float(np.max(np.abs(F - pvec)))
        if err < best[0]:
            best = (err, np.asarray(q, dtype=np.int64), pvec)
    return best


@pytest.mark.parametrize("m,n", [(1, 1), (2, 1), (2, 2)])
def test_linforms_classical_matches_brute(m, n):
    rng = np.random.default_rng(m * 10 + n)
    for _ in range(10):
        X = _random_system(rng, m, n)
        e, q, p = kernels.linforms_min_real(X, 4, hybrid=False)
        eb, qb, _ = _brute_real(X, 4, hybrid=False)
        assert e == pytest.approx(eb, rel=1e-12)
        np.testing.assert_array_equal(q, qb)


@pytest.mark.parametrize("m,n", [(1, 1), (2, 1), (2, 2)])
def test_linforms_hybrid_matches_brute(m, n):
    rng = np.random.default_rng(m * 10 + n + 50)
    for _ in range(10):
        X = _random_system(rng, m, n)
        e, q, p = kernels.linforms_min_real(X, 4, hybrid=True)
        eb, qb, _ = _brute_real(X, 4, hybrid=True)
        assert e == pytest.approx(eb, rel=1e-12)


def test_hybrid_witness_is_consistent():
    # the reported (q, p) must reproduce the reported sup-norm error exactly
    rng = np.random.default_rng(8)
    for _ in range(20):
        X = _random_system(rng, 3, 2)
        e, q, p = kernels.linforms_min_real(X, 6, hybrid=True)
        F = q.astype(float) @ X
        assert np.max(np.abs(F - p)) == pytest.approx(e, rel=1e-12)
        assert np.all(p == p[0])  # common nearest integer across forms


def test_classical_witness_is_consistent():
    rng = np.random.default_rng(9)
    for _ in range(20):
        X = _random_system(rng, 2, 2)
        e, q, p = kernels.linforms_min_real(X, 6, hybrid=False)
        F = q.astype(float) @ X
        assert np.max(np.abs(F - p)) == pytest.approx(e, rel=1e-12)


@pytest.mark.parametrize("hybrid", [False, True])
def test_complex_witness_is_consistent(hybrid):
    rng = np.random.default_rng(10)
    for _ in range(10):
        X = _random_system(rng, 2, 1, field="complex")
        e, q, p = kernels.linforms_min_complex(X, 4, hybrid=hybrid)
        qz = q[:, 0] + 1j * q[:, 1]
        pz = p[:, 0] + 1j * p[:, 1]
        F = qz @ X
        assert np.max(np.abs(F - pz)) == pytest.approx(e, rel=1e-12)
        assert np.max(np.abs(q[:, 0] ** 2 + q[:, 1] ** 2)) <= 16


def test_complex_classical_matches_brute():
    rng = np.random.default_rng(11)
    disc = pk.gaussian_disc(3)
    for _ in range(5):
        X = _random_system(rng, 2, 1, field="complex")
        e, q, p = kernels.linforms_min_complex(X, 3, hybrid=False)
        best = np.inf
        for i in range(len(disc)):
            for j in range(len(disc)):
                qz = np.array(
                    [disc[i, 0] + 1j * disc[i, 1], disc[j, 0] + 1j * disc[j, 1]]
                )
                if qz[0] == 0 and qz[1] == 0:
                    continue
                F = qz @ X
                pz = np.rint(F.real) + 1j * np.rint(F.imag)
                best = min(best, float(np.max(np.abs(F - pz))))
        assert e == pytest.approx(best, rel=1e-12)


# ---------------------------------------------------------------------------
# gaussian disc
# ---------------------------------------------------------------------------


def test_gaussian_disc_counts():
    assert len(kernels.gaussian_disc(1)) == 5
    assert len(kernels.gaussian_disc(2)) == 13
    assert len(kernels.gaussian_disc(100)) == 31417


def test_gaussian_disc_is_lex_sorted_and_bounded():
    g = kernels.gaussian_disc(7)
    assert np.max(g[:, 0] ** 2 + g[:, 1] ** 2) <= 49
    order = np.lexsort((g[:, 1], g[:, 0]))
    np.testing.assert_array_equal(order, np.arange(len(g)))


@given(N=st.integers(min_value=1, max_value=30))
@settings(max_examples=25, deadline=None)
def test_gaussian_disc_count_matches_direct_sum(N):
    # sum over a of the strip height at that abscissa
    expected = sum(
        2 * int(np.floor(np.sqrt(N * N - a * a))) + 1 for a in range(-N, N + 1)
    )
    assert len(kernels.gaussian_disc(N)) == expected


# ---------------------------------------------------------------------------
# enumeration-order freeze: first witness wins ties deterministically
# ---------------------------------------------------------------------------


def test_tie_break_is_lex_first():
    # X chosen so +q and -q give the same error; the enumeration starts at
    # the most negative q, which must be the winner
    X = np.array([[0.25]])
    e, q, p = kernels.linforms_min_real(X, 3, hybrid=False)
    assert e == pytest.approx(0.25)
    assert q[0] == -3  # |-3*0.25 + 1| = 0.25 seen before +1/... duplicates
