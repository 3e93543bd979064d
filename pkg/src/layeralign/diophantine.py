"""Diophantine approximation machinery behind the distance guarantees.

Systems of n linear forms in m integer variables are probed two ways:

- classical: each form gets its own nearest integer,
  error(q) = max_i |<q, X_i> - p_i|;
- hybrid: all forms share one integer p (defined for m + 1 > n), the regime
  that models a receiver's stacked interference bundles.

On top of the exhaustive searches sit the Dirichlet-style existence bound,
Khintchine-Groshev-type series, Monte Carlo measure probes for the
approximable sets, badly-approximable constants, and a Gaussian-integer
census used by the complex-field counting arguments.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import BudgetExceededError, ConfigError
from .xchannel import ScalarField

__all__ = [
    "ApproxFunction",
    "ApproxWitness",
    "DirichletResult",
    "KGSeries",
    "MeasureEstimate",
    "BadApproxConstant",
    "GaussianCensus",
    "COMPLEX_DIRICHLET_C",
    "sample_point",
    "min_form_distance",
    "dirichlet_hybrid_check",
    "kg_series",
    "estimate_approximable_measure",
    "badly_approximable_constant",
    "gaussian_lattice_census",
]

DEFAULT_GRID_CAP = 10_000_000

# Empirical constant for the complex hybrid Dirichlet check at the registered
# probe point (m, n) = (2, 1).  Calibrated in two stages: a 200-draw census
# (seed 20260814, N in {5, 10, 20}) put the 99.5th percentile of
# error * N**2 at 0.639, and a fresh 500-draw census (seed 555) showed per-N
# tails up to 0.75 at N = 5.  Frozen at the level where a random sample
# violates the bound at some N in {5, 10, 20} about 0.2% of the time.
COMPLEX_DIRICHLET_C = 0.75


@dataclass(frozen=True)
class ApproxFunction:
    """A positive, non-increasing approximation function psi(r) for r >= 1."""

    fn: object
    label: str = "psi"

    @classmethod
    def power(cls, exponent, scale=1.0, label=None):
        if exponent > 0:
            raise ConfigError("approximation functions must be non-increasing")
        if scale <= 0:
            raise ConfigError("scale must be positive")
        return cls(
            fn=lambda r: scale * np.power(np.asarray(r, dtype=float), exponent),
            label=label or f"{scale:g}*r^{exponent:g}",
        )

    def __call__(self, r):
        return np.asarray(self.fn(np.asarray(r, dtype=float)), dtype=float)

    def validate(self, r_max=1e6):
        """Probe positivity and monotone decrease on a log grid; raise if violated."""
        grid = np.unique(np.geomspace(1.0, float(r_max), 64))
        vals = self(grid)
        if not np.all(np.isfinite(vals)) or np.any(vals <= 0):
            raise ConfigError(f"{self.label}: psi must be finite and positive")
        if np.any(np.diff(vals) > 1e-12 * vals[:-1]):
            raise ConfigError(f"{self.label}: psi must be non-increasing")
        return self


def _coerce_psi(psi):
    if isinstance(psi, ApproxFunction):
        return psi.validate()
    if callable(psi):
        return ApproxFunction(fn=psi).validate()
    raise ConfigError("psi must be an ApproxFunction or a callable")


def sample_point(rng, m, n, field=ScalarField.REAL):
    """Uniform draw from the unit cell: the (m, n) system matrix X."""
    field = ScalarField.coerce(field)
    if m < 1 or n < 1:
        raise ConfigError("m and n must be >= 1")
    if field.is_complex:
        return (rng.random((m, n)) - 0.5) + 1j * (rng.random((m, n)) - 0.5)
    return rng.random((m, n)) - 0.5


def _check_hybrid(m, n, mode):
    if mode not in ("classical", "hybrid"):
        raise ConfigError(f"unknown mode {mode!r}")
    if mode == "hybrid" and m + 1 <= n:
        raise ConfigError(f"hybrid mode needs m + 1 > n, got m={m}, n={n}")


def _grid_size(m, N, field):
    if field.is_complex:
        return int(_kernels.gaussian_disc(int(N)).shape[0]) ** m
    return (2 * int(N) + 1) ** m


@dataclass(frozen=True)
class ApproxWitness:
    """Best integer witness found by an exhaustive search."""

    error: float
    q: np.ndarray
    p: np.ndarray
    norm: float
    mode: str
    field: ScalarField


def _qnorm(q, field):
    q = np.asarray(q)
    if field.is_complex:
        return float(np.sqrt((q[:, 0] ** 2 + q[:, 1] ** 2).max()))
    return float(np.abs(q).max())


def min_form_distance(X, N, mode="hybrid", field=None, cap=DEFAULT_GRID_CAP):
    """Exhaustive best witness over 1 <= |q| <= N (sup norm on components).

    Ties resolve to the lexicographically first q in grid order.  Raises
    BudgetExceededError when the search grid would exceed `cap`.
    """
    X = np.asarray(X)
    if X.ndim != 2:
        raise ConfigError("X must be an (m, n) matrix")
    m, n = X.shape
    if field is None:
        field = ScalarField.COMPLEX if np.iscomplexobj(X) else ScalarField.REAL
    field = ScalarField.coerce(field)
    _check_hybrid(m, n, mode)
    if N < 1:
        raise ConfigError("N must be >= 1")
    size = _grid_size(m, N, field)
    if size > cap:
        raise BudgetExceededError(
            f"search grid has {size} points, cap is {cap}", requested=size, cap=int(cap)
        )
    if field.is_complex:
        err, q, p = _kernels.linforms_min_complex(X.astype(np.complex128), N,
                                                  mode == "hybrid")
    else:
        err, q, p = _kernels.linforms_min_real(X.astype(np.float64), N,
                                               mode == "hybrid")
    return ApproxWitness(error=float(err), q=q, p=p, norm=_qnorm(q, field),
                         mode=mode, field=field)


@dataclass(frozen=True)
class DirichletResult:
    ok: bool
    bound: float
    witness: ApproxWitness


def dirichlet_hybrid_check(X, N, cap=DEFAULT_GRID_CAP):
    """Verify the hybrid Dirichlet existence bound at horizon N.

    Real systems: error <= 2*(m+2) * N**(-(m+1)/n + 1).  Complex systems use
    the empirically calibrated COMPLEX_DIRICHLET_C with the same exponent.
    """
    X = np.asarray(X)
    m, n = X.shape
    w = min_form_distance(X, N, mode="hybrid", cap=cap)
    expo = -(m + 1.0) / n + 1.0
    c = COMPLEX_DIRICHLET_C if w.field.is_complex else 2.0 * (m + 2.0)
    bound = c * float(N) ** expo
    return DirichletResult(ok=bool(w.error <= bound), bound=bound, witness=w)


@dataclass(frozen=True)
class KGSeries:
    """Partial sums of a Khintchine-Groshev-type series with a verdict."""

    r: np.ndarray
    terms: np.ndarray
    partial: np.ndarray
    total: float
    verdict: str
    local_exponent: float
    variant: str


_KG_VARIANTS = ("real_classical", "real_hybrid", "complex_classical", "complex_hybrid")


def kg_series(psi, m, n, variant="real_classical", r_max=100_000):
    """Tabulate the convergence-dichotomy series for the given variant.

    real_classical:    sum r**(m-1) * psi(r)**n
    real_hybrid:       sum r**(m-n) * psi(r)**n          (m + 1 > n)
    complex_classical: sum r**(2m-1) * psi(r)**(2n)
    complex_hybrid:    sum (r**(m-n) * psi(r)**n)**2

    The verdict compares the local log-log slope of the summand near r_max
    against the -1 threshold: 'converges', 'diverges', or 'indeterminate'
    inside the +-0.05 margin.
    """
    psi = _coerce_psi(psi)
    if variant not in _KG_VARIANTS:
        raise ConfigError(f"variant must be one of {_KG_VARIANTS}")
    if variant.endswith("hybrid"):
        _check_hybrid(m, n, "hybrid")
    if r_max < 16:
        raise ConfigError("r_max too small to classify")
    r = np.arange(1, int(r_max) + 1, dtype=float)
    pv = psi(r)
    if variant == "real_classical":
        terms = r ** (m - 1) * pv ** n
    elif variant == "real_hybrid":
        terms = r ** (m - n) * pv ** n
    elif variant == "complex_classical":
        terms = r ** (2 * m - 1) * pv ** (2 * n)
    else:
        terms = (r ** (m - n) * pv ** n) ** 2
    partial = np.cumsum(terms)
    r_hi = int(r_max)
    r_lo = max(2, r_hi // 2)
    slope = float(
        (math.log(terms[r_hi - 1]) - math.log(terms[r_lo - 1]))
        / (math.log(r_hi) - math.log(r_lo))
    )
    margin = 0.05
    if slope < -1.0 - margin:
        verdict = "converges"
    elif slope > -1.0 + margin:
        verdict = "diverges"
    else:
        verdict = "indeterminate"
    return KGSeries(r=r, terms=terms, partial=partial, total=float(partial[-1]),
                    verdict=verdict, local_exponent=slope, variant=variant)


@dataclass(frozen=True)
class MeasureEstimate:
    fraction: float
    hits: int
    samples: int
    N0: int
    N_max: int
    mode: str
    field: ScalarField


def estimate_approximable_measure(psi, m, n, mode="classical", field=ScalarField.REAL,
                                  samples=200, N0=1, N_max=40, seed=0,
                                  cap=DEFAULT_GRID_CAP):
    """Monte Carlo fraction of sample systems psi-approximable in a q-window.

    A sample X counts as a hit when some q with N0 <= |q| <= N_max achieves
    error(q) < psi(|q|).  Complex systems are supported for n = 1 (where the
    hybrid and classical errors coincide: one form, one nearest Gaussian
    integer).
    """
    psi = _coerce_psi(psi)
    field = ScalarField.coerce(field)
    _check_hybrid(m, n, mode)
    if not 1 <= N0 <= N_max:
        raise ConfigError("need 1 <= N0 <= N_max")
    if samples < 1:
        raise ConfigError("samples must be >= 1")
    size = _grid_size(m, N_max, field)
    if size > cap:
        raise BudgetExceededError(
            f"probe grid has {size} points, cap is {cap}", requested=size, cap=int(cap)
        )
    rng = np.random.default_rng(seed)
    if field.is_complex:
        if n != 1:
            raise ConfigError("complex measure probes support n = 1 only")
        disc = _kernels.gaussian_disc(int(N_max))
        qc = disc[:, 0] + 1j * disc[:, 1]
        norms = np.abs(qc)
        keep = norms >= N0
        # norms >= 1 excludes q = 0 automatically
        keep &= norms >= 1.0
        if m == 1:
            grid = qc[keep][:, None]
        else:
            idx = np.stack(
                [g.ravel() for g in np.meshgrid(*[np.arange(disc.shape[0])] * m,
                                                indexing="ij")],
                axis=1,
            )
            gall = qc[idx]
            nall = np.abs(gall).max(axis=1)
            sel = (nall >= N0) & (nall >= 1.0)
            grid = gall[sel]
            norms = nall[sel]
        if m == 1:
            norms = norms[keep]
        thresh = psi(norms)
        hits = 0
        chunk = max(1, int(2_000_000 // max(grid.shape[0], 1)))
        for lo in range(0, samples, chunk):
            ns = min(chunk, samples - lo)
            Xs = np.stack([sample_point(rng, m, n, field) for _ in range(ns)])
            V = np.tensordot(grid, Xs[:, :, 0].T, axes=(1, 0))  # (nq, ns)
            E = np.abs(V - (np.rint(V.real) + 1j * np.rint(V.imag)))
            hits += int(np.count_nonzero((E < thresh[:, None]).any(axis=0)))
        return MeasureEstimate(fraction=hits / samples, hits=hits, samples=samples,
                               N0=int(N0), N_max=int(N_max), mode=mode, field=field)
    # real field
    axes = [np.arange(-N_max, N_max + 1, dtype=np.int64)] * m
    mesh = np.meshgrid(*axes, indexing="ij")
    grid = np.stack([g.ravel() for g in mesh], axis=1)
    norms = np.abs(grid).max(axis=1)
    sel = norms >= max(N0, 1)
    grid = grid[sel].astype(np.float64)
    thresh = psi(norms[sel].astype(float))
    hits = 0
    # chunk samples so the (nq, ns, n) tensor stays modest
    chunk = max(1, int(4_000_000 // max(grid.shape[0] * n, 1)))
    rngs = np.random.default_rng(seed)
    for lo in range(0, samples, chunk):
        ns = min(chunk, samples - lo)
        Xs = np.stack([sample_point(rngs, m, n, field) for _ in range(ns)])  # (ns, m, n)
        V = np.einsum("qm,smn->qsn", grid, Xs)
        if mode == "classical":
            E = np.abs(V - np.rint(V)).max(axis=2)
        else:
            mid = 0.5 * (V.min(axis=2) + V.max(axis=2))
            c = np.rint(mid)
            E = None
            for cand in (c - 1.0, c, c + 1.0):
                Ec = np.abs(V - cand[:, :, None]).max(axis=2)
                E = Ec if E is None else np.minimum(E, Ec)
        hits += int(np.count_nonzero((E < thresh[:, None]).any(axis=0)))
    return MeasureEstimate(fraction=hits / samples, hits=hits, samples=samples,
                           N0=int(N0), N_max=int(N_max), mode=mode, field=field)


@dataclass(frozen=True)
class BadApproxConstant:
    """min over 1 <= |q| <= N of error(q) * |q|**exponent."""

    constant: float
    exponent: float
    N_max: int
    mode: str
    field: ScalarField


def badly_approximable_constant(X, N_max, mode="hybrid", cap=DEFAULT_GRID_CAP):
    """Scan the scale-invariant error field for its infimum constant.

    Hybrid exponent (m+1)/n - 1, classical m/n: a positive constant over a
    growing horizon is the badly-approximable signature.  Uses the numpy
    all-errors path (desk-scale horizons).
    """
    X = np.asarray(X)
    m, n = X.shape
    field = ScalarField.COMPLEX if np.iscomplexobj(X) else ScalarField.REAL
    _check_hybrid(m, n, mode)
    size = _grid_size(m, N_max, field)
    if size > cap:
        raise BudgetExceededError(
            f"scan grid has {size} points, cap is {cap}", requested=size, cap=int(cap)
        )
    expo = (m + 1.0) / n - 1.0 if mode == "hybrid" else m / float(n)
    if field.is_complex:
        errs, norms = _complex_all_form_errors(X, int(N_max), mode == "hybrid")
    else:
        errs, norms = _kernels.linforms_all_real(X.astype(np.float64), int(N_max),
                                                 mode == "hybrid")
    return BadApproxConstant(
        constant=float(np.min(errs * norms ** expo)),
        exponent=expo, N_max=int(N_max), mode=mode, field=field,
    )


def _complex_all_form_errors(X, N, hybrid):
    """Per-q (error, |q|) over Gaussian q with 1 <= |q| <= N (numpy, desk scale)."""
    X = np.asarray(X, dtype=np.complex128)
    m, n = X.shape
    disc = _kernels.gaussian_disc(N)
    qc = disc[:, 0] + 1j * disc[:, 1]
    if m == 1:
        grid = qc[:, None]
    else:
        idx = np.stack(
            [g.ravel() for g in np.meshgrid(*[np.arange(disc.shape[0])] * m,
                                            indexing="ij")],
            axis=1,
        )
        grid = qc[idx]
    norms = np.abs(grid).max(axis=1)
    sel = norms >= 1.0
    grid = grid[sel]
    norms = norms[sel]
    V = grid @ X  # (nq, n)
    if hybrid:
        cr = np.rint(0.5 * (V.real.min(axis=1) + V.real.max(axis=1)))
        ci = np.rint(0.5 * (V.imag.min(axis=1) + V.imag.max(axis=1)))
        E = None
        for dr in (-1.0, 0.0, 1.0):
            for di in (-1.0, 0.0, 1.0):
                cand = (cr + dr) + 1j * (ci + di)
                Ec = np.abs(V - cand[:, None]).max(axis=1)
                E = Ec if E is None else np.minimum(E, Ec)
    else:
        E = np.abs(V - (np.rint(V.real) + 1j * np.rint(V.imag))).max(axis=1)
    return E, norms


@dataclass(frozen=True)
class GaussianCensus:
    """Gaussian-integer lattice counts at integer radii.

    point_counts[r-1]    = #{z in Z[i] : |z| <= r}           ~ pi r**2   (cumulative)
    pair_counts[r-1]     = #{(q1, q2) : max(|q1|,|q2|) <= r}  ~ r**4      (cumulative)
    resonant_counts[r-1] = #{(q, p) : r < |q|_2 <= r+1, |p| < |q|_2}
                           with q in Z[i]^2 and p in Z[i]: the per-shell
                           resonant-set census, a 4-d lattice shell (~r**3)
                           times a p-disc (~r**2), so ~ r**5 per shell.
    """

    radii: np.ndarray
    point_counts: np.ndarray
    pair_counts: np.ndarray
    resonant_counts: np.ndarray

    def point_count(self, r):
        return int(self.point_counts[int(r) - 1])

    def slope(self, r_lo, r_hi, which="resonant"):
        """Log-log least-squares slope of a census between two radii."""
        data = {
            "point": self.point_counts,
            "pair": self.pair_counts,
            "resonant": self.resonant_counts,
        }[which]
        lo, hi = int(r_lo), int(r_hi)
        if not 1 <= lo < hi <= int(self.radii[-1]):
            raise ConfigError("need 1 <= r_lo < r_hi <= r_max")
        rr = self.radii[lo - 1: hi]
        cc = data[lo - 1: hi]
        mask = cc > 0
        A = np.vstack([np.log(rr[mask]), np.ones(mask.sum())]).T
        coef, *_ = np.linalg.lstsq(A, np.log(cc[mask]), rcond=None)
        return float(coef[0])


def gaussian_lattice_census(r_max):
    """Count Gaussian integers, pairs, and per-shell resonant (q, p) systems.

    Everything is exact integer arithmetic on squared moduli.  The point and
    pair counts are cumulative in the radius.  The resonant census groups
    q = (q1, q2) in Z[i]^2 by the shell r < |q|_2 <= r+1 (|q|_2 the Euclidean
    norm of the 4 integer components) and counts one entry per Gaussian
    integer p with |p| < |q|_2; representation counts of the 4-d shell come
    from convolving the 2-d ones.
    """
    r_max = int(r_max)
    if r_max < 1:
        raise ConfigError("r_max must be >= 1")
    S = (r_max + 1) ** 2
    box = int(math.isqrt(S))
    a = np.arange(-box, box + 1, dtype=np.int64)
    sq = (a[:, None] ** 2 + a[None, :] ** 2).ravel()
    # r2[s] = #{z in Z[i] : |z|**2 == s}, s = 0..S
    r2 = np.bincount(sq[sq <= S], minlength=S + 1)
    cum2 = np.cumsum(r2)  # cum2[s] = #{z : |z|**2 <= s}
    # r4[s] = #{q in Z[i]^2 : |q|_2**2 == s}, by convolution of two discs
    r4 = np.convolve(r2, r2)[: S + 1]
    radii = np.arange(1, r_max + 1, dtype=np.int64)
    point_counts = cum2[radii * radii]
    pair_counts = point_counts * point_counts
    # per-shell: sum over s in (r**2, (r+1)**2] of r4[s] * #{p : |p|**2 < s}
    weighted = r4 * np.concatenate(([0], cum2[:-1]))  # cum2[s-1] = strict disc
    wcum = np.cumsum(weighted)
    resonant_counts = wcum[(radii + 1) ** 2] - wcum[radii * radii]
    return GaussianCensus(
        radii=radii,
        point_counts=point_counts,
        pair_counts=pair_counts,
        resonant_counts=resonant_counts,
    )
