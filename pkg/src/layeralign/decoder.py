"""Received-constellation enumeration, hard decoding, and performance bounds.

After alignment, one receiver sees its target symbol plus a handful of
integer interference bundles, each scaled by an effective gain.  Decoding a
message is nearest-point search over the enumerated received constellation;
the guarantees flow through its labeled minimum distance:

    P_err <= Q(d_min / (2 sigma)) <= exp(-d_min**2 / (8 sigma**2))

and the Fano-style rate bound R >= log2|U| - 1 - P_err * log2|U|.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import BudgetExceededError, ConfigError
from .xchannel import ScalarField

__all__ = [
    "GainTable",
    "ReceivedConstellation",
    "DecodeResult",
    "normalize_for_target",
    "enumerate_received",
    "check_property_gamma",
    "pairwise_min_distance",
    "min_distance_by_differences",
    "hard_decode",
    "decode_batch",
    "error_probability_bound",
    "rate_lower_bound",
    "noise_removal_check",
]

DEFAULT_ENUM_CAP = 10_000_000
# above this many tuples the pairwise sweep gives way to the difference route
PAIRWISE_POINT_CAP = 250_000


@dataclass(frozen=True)
class GainTable:
    """Effective gains of one receiver's integer streams, target-normalized.

    columns[:, s] is the per-antenna gain of stream s after dividing each
    antenna by its raw target gain, so columns[:, target_index] is exactly
    all ones.  half_widths[s] bounds stream s's symbols to {-w..w} (the
    Gaussian box for complex fields).
    """

    columns: np.ndarray
    target_index: int
    half_widths: tuple
    noise_variance: float
    field: ScalarField
    target_gains: np.ndarray  # raw per-antenna gains of the target stream
    labels: tuple

    @property
    def n_antennas(self):
        return self.columns.shape[0]

    @property
    def n_streams(self):
        return self.columns.shape[1]

    @property
    def sigma(self):
        return float(np.sqrt(self.noise_variance))

    @property
    def whiten_weights(self):
        """Per-antenna weights |g_l| restoring isotropic noise after normalization."""
        return np.abs(self.target_gains)

    @property
    def effective_sigma(self):
        """Worst-case per-antenna noise scale after normalization: sigma / min|g_l|."""
        return self.sigma / float(np.min(np.abs(self.target_gains)))

    def tuple_count(self):
        dims = self.field.real_dims
        total = 1
        for w in self.half_widths:
            total *= (2 * w + 1) ** dims
        return total


def normalize_for_target(columns, target_index, half_widths, noise_variance,
                         field=ScalarField.REAL, labels=None):
    """Build a GainTable: divide each antenna row by its raw target gain.

    Raises ConfigError if any target gain vanishes (the target would be
    invisible on that antenna) or the inputs are inconsistent.
    """
    field = ScalarField.coerce(field)
    columns = np.atleast_2d(np.asarray(columns, dtype=field.dtype))
    M, S = columns.shape
    if not 0 <= target_index < S:
        raise ConfigError(f"target_index {target_index} out of range for {S} streams")
    half_widths = tuple(int(w) for w in half_widths)
    if len(half_widths) != S or any(w < 1 for w in half_widths):
        raise ConfigError("half_widths must give a positive bound per stream")
    if not np.all(np.isfinite(columns)):
        raise ConfigError("gain columns must be finite")
    g = columns[:, target_index].copy()
    if np.min(np.abs(g)) == 0:
        raise ConfigError("target gain vanishes on some antenna; cannot normalize")
    if noise_variance < 0:
        raise ConfigError("noise variance must be >= 0")
    if labels is None:
        labels = tuple(
            "target" if s == target_index else f"interference[{s}]" for s in range(S)
        )
    return GainTable(
        columns=columns / g[:, None],
        target_index=int(target_index),
        half_widths=half_widths,
        noise_variance=float(noise_variance),
        field=field,
        target_gains=g,
        labels=tuple(labels),
    )


def _embed(values):
    """Interleave a complex (n, M) array into real (n, 2M) coordinates."""
    out = np.empty((values.shape[0], 2 * values.shape[1]))
    out[:, 0::2] = values.real
    out[:, 1::2] = values.imag
    return out


def _component_grid(table):
    """Integer component grid, one row per received tuple, lexicographic.

    Real field: one column per stream.  Complex: (re, im) column pair per
    stream.  Row order is C order over the per-component axes, which is the
    provenance tie-break order everywhere downstream.
    """
    axes = []
    for w in table.half_widths:
        rng = np.arange(-w, w + 1, dtype=np.int64)
        axes.append(rng)
        if table.field.is_complex:
            axes.append(rng.copy())
    mesh = np.meshgrid(*axes, indexing="ij")
    return np.stack([m.ravel() for m in mesh], axis=1)


@dataclass(frozen=True)
class ReceivedConstellation:
    """Enumerated noiseless receive points with their generating tuples."""

    points: np.ndarray      # (n, D) real-embedded normalized coordinates
    targets: np.ndarray     # (n,) ints, or (n,) complex128 for complex fields
    labels: np.ndarray      # (n,) int64 collision labels for the target symbol
    combos: np.ndarray      # (n, C) integer components, lexicographic order
    d_min: float
    gamma_ok: bool
    table: GainTable

    @property
    def size(self):
        return self.points.shape[0]

    @property
    def cardinality(self):
        """Number of distinct target symbols (the decodable alphabet size)."""
        w = self.table.half_widths[self.table.target_index]
        return (2 * w + 1) ** self.table.field.real_dims


def _points_and_targets(table, combos):
    if table.field.is_complex:
        re = combos[:, 0::2].astype(np.float64)
        im = combos[:, 1::2].astype(np.float64)
        vals = (re + 1j * im) @ table.columns.T
        points = _embed(vals)
        t = table.target_index
        tre = combos[:, 2 * t]
        tim = combos[:, 2 * t + 1]
        targets = tre + 1j * tim
        w = table.half_widths[t]
        labels = (tre + w) * (2 * w + 1) + (tim + w)
    else:
        points = combos.astype(np.float64) @ table.columns.T
        targets = combos[:, table.target_index].copy()
        labels = targets
    return points, targets, np.ascontiguousarray(labels, dtype=np.int64)


def enumerate_received(table, cap=DEFAULT_ENUM_CAP, dmin_method="auto"):
    """Enumerate the received constellation and compute its labeled d_min.

    dmin_method: 'pairwise' forces the sweep kernel, 'differences' the
    difference-lattice route, 'auto' switches on constellation size.  Both
    routes compute the same quantity (property-tested); the difference route
    avoids materializing pair distances for very large complex grids.

    Raises BudgetExceededError when the tuple count exceeds `cap`.
    """
    total = table.tuple_count()
    if total > cap:
        raise BudgetExceededError(
            f"received constellation has {total} tuples, cap is {cap}",
            requested=total, cap=int(cap),
        )
    combos = _component_grid(table)
    points, targets, labels = _points_and_targets(table, combos)
    gamma_ok, _ = _gamma_scan(points, labels)
    if dmin_method == "auto":
        dmin_method = "pairwise" if total <= PAIRWISE_POINT_CAP else "differences"
    if dmin_method == "pairwise":
        d2 = _kernels.labeled_min_sq_dist(points, labels)
        d_min = float(np.sqrt(d2)) if np.isfinite(d2) else np.inf
    elif dmin_method == "differences":
        d_min = min_distance_by_differences(table)
    else:
        raise ConfigError(f"unknown dmin_method {dmin_method!r}")
    return ReceivedConstellation(
        points=points, targets=targets, labels=labels, combos=combos,
        d_min=d_min, gamma_ok=bool(gamma_ok), table=table,
    )


def _gamma_scan(points, labels):
    """Locate exact coordinate collisions carrying different target labels."""
    order = np.lexsort(points.T[::-1])
    sp = points[order]
    sl = labels[order]
    same = np.all(sp[1:] == sp[:-1], axis=1)
    bad = same & (sl[1:] != sl[:-1])
    return not bool(bad.any()), int(bad.sum())


def check_property_gamma(rc):
    """True iff the map (received point -> target symbol) is well defined.

    Many tuples may land on the same point (the interference collapse is the
    whole trick); what is forbidden is one point carrying two different
    target symbols.  Coordinates are compared exactly.
    """
    ok, _ = _gamma_scan(rc.points, rc.labels)
    return ok


def pairwise_min_distance(rc):
    """Labeled d_min straight from the definition (sweep kernel)."""
    d2 = _kernels.labeled_min_sq_dist(rc.points, rc.labels)
    return float(np.sqrt(d2)) if np.isfinite(d2) else np.inf


def min_distance_by_differences(table, cap=DEFAULT_ENUM_CAP):
    """Labeled d_min via the interference difference lattice.

    The distance between two received points depends only on the component
    differences, so minimizing over point pairs equals minimizing
    || dt * 1 + F ||² over interference-difference rows F and integer target
    differences dt != 0 allowed by the symbol range (dt = 0 rows with a
    nonzero interference difference are same-label pairs and do not count).
    For fixed F the best dt is a rounding of the (componentwise) mean of -F,
    clamped to the admissible box.
    """
    t = table.target_index
    wt = table.half_widths[t]
    int_cols = [s for s in range(table.n_streams) if s != t]
    dims = table.field.real_dims
    total = 1
    for s in int_cols:
        total *= (4 * table.half_widths[s] + 1) ** dims
    if total > cap:
        raise BudgetExceededError(
            f"difference lattice has {total} rows, cap is {cap}",
            requested=total, cap=int(cap),
        )
    axes = []
    for s in int_cols:
        w = table.half_widths[s]
        rng = np.arange(-2 * w, 2 * w + 1, dtype=np.int64)
        axes.append(rng)
        if table.field.is_complex:
            axes.append(rng.copy())
    if axes:
        mesh = np.meshgrid(*axes, indexing="ij")
        dcombos = np.stack([m.ravel() for m in mesh], axis=1)
    else:
        dcombos = np.zeros((1, 0), dtype=np.int64)
    cols = table.columns[:, int_cols]
    if table.field.is_complex:
        F = (dcombos[:, 0::2] + 1j * dcombos[:, 1::2]) @ cols.T  # (n, M) complex
        mu = -F.mean(axis=1)
        best_sq = np.full(F.shape[0], np.inf)
        # nearest nonzero Gaussian dt: floor/ceil combos plus the axis units
        res = (np.floor(mu.real), np.ceil(mu.real), -np.ones(F.shape[0]), np.ones(F.shape[0]),
               np.zeros(F.shape[0]), np.zeros(F.shape[0]))
        ims = (np.floor(mu.imag), np.ceil(mu.imag), np.zeros(F.shape[0]), np.zeros(F.shape[0]),
               -np.ones(F.shape[0]), np.ones(F.shape[0]))
        pairs = [(res[0], ims[0]), (res[0], ims[1]), (res[1], ims[0]), (res[1], ims[1]),
                 (res[2], ims[2]), (res[3], ims[3]), (res[4], ims[4]), (res[5], ims[5])]
        for cr, ci in pairs:
            cr = np.clip(cr, -2 * wt, 2 * wt)
            ci = np.clip(ci, -2 * wt, 2 * wt)
            cand = cr + 1j * ci
            delta = cand[:, None] + F
            sq = np.abs(delta * delta.conj()).sum(axis=1).real
            sq = np.where(cand == 0, np.inf, sq)
            best_sq = np.minimum(best_sq, sq)
        return float(np.sqrt(best_sq.min()))
    F = dcombos.astype(np.float64) @ cols.T  # (n, M) real
    mu = -F.mean(axis=1)
    best_sq = np.full(F.shape[0], np.inf)
    ones = np.ones(F.shape[0])
    for cand in (np.floor(mu), np.ceil(mu), -ones, ones):
        cand = np.clip(cand, -2 * wt, 2 * wt)
        delta = cand[:, None] + F
        sq = (delta * delta).sum(axis=1)
        sq = np.where(cand == 0, np.inf, sq)
        best_sq = np.minimum(best_sq, sq)
    return float(np.sqrt(best_sq.min()))


@dataclass(frozen=True)
class DecodeResult:
    """One hard decision: the decoded target plus its provenance tuple."""

    target: object
    combo: np.ndarray
    index: int
    distance: float
    correct: bool | None = None


def _whitened(rc):
    w = rc.table.whiten_weights
    if rc.table.field.is_complex:
        w = np.repeat(w, 2)
    return rc.points * w, w


def decode_batch(Y, rc, true_targets=None):
    """Hard-decode a block of raw receive vectors against a constellation.

    Per antenna the receive value is divided by the raw target gain (matching
    the table normalization) and re-weighted by |gain| so the noise is
    isotropic again; the nearest constellation point then gives the
    maximum-likelihood tuple.  Ties resolve to the lexicographically first
    generating tuple.

    Args:
        Y: (M, T) raw receive block (or (M,) for a single vector).
        rc: ReceivedConstellation from enumerate_received.
        true_targets: optional (T,) ground-truth targets for error counting.

    Returns:
        (targets, indices, n_errors); n_errors is None without ground truth.
    """
    Y = np.asarray(Y, dtype=rc.table.field.dtype)
    if Y.ndim == 1:
        Y = Y[:, None]
    if Y.ndim != 2 or Y.shape[0] != rc.table.n_antennas:
        raise ConfigError(
            f"receive block must be ({rc.table.n_antennas}, T), got {Y.shape}"
        )
    Yn = Y / rc.table.target_gains[:, None]
    if rc.table.field.is_complex:
        Yn = _embed(Yn.T).T  # (2M, T)
    pts_w, w = _whitened(rc)
    Yw = Yn * w[:, None]
    T = Yw.shape[1]
    idx = np.empty(T, dtype=np.int64)
    for j in range(T):
        d = pts_w - Yw[:, j]
        idx[j] = int(np.argmin((d * d).sum(axis=1)))
    targets = rc.targets[idx]
    n_err = None
    if true_targets is not None:
        true_targets = np.asarray(true_targets)
        n_err = int(np.count_nonzero(targets != true_targets))
    return targets, idx, n_err


def hard_decode(y, rc, true_target=None):
    """Decode a single receive vector; returns a DecodeResult with provenance."""
    targets, idx, _ = decode_batch(np.asarray(y).reshape(-1, 1), rc)
    i = int(idx[0])
    pts_w, w = _whitened(rc)
    y = np.asarray(y, dtype=rc.table.field.dtype).reshape(-1)
    yn = y / rc.table.target_gains
    if rc.table.field.is_complex:
        yn = _embed(yn[None, :])[0]
    dist = float(np.linalg.norm(pts_w[i] - yn * w))
    correct = None if true_target is None else bool(targets[0] == true_target)
    return DecodeResult(target=targets[0], combo=rc.combos[i].copy(), index=i,
                        distance=dist, correct=correct)


def error_probability_bound(d_min, sigma):
    """Pairwise error bounds for nearest-point decoding at distance d_min.

    Returns (q_bound, exp_bound) = (Q(d/2sigma), exp(-d**2/(8 sigma**2))),
    with Q the Gaussian tail; the exponential form is the looser of the two.
    """
    if d_min < 0:
        raise ConfigError("d_min must be >= 0")
    if sigma < 0:
        raise ConfigError("sigma must be >= 0")
    if sigma == 0:
        return (0.0, 0.0) if d_min > 0 else (0.5, 1.0)
    x = d_min / (2.0 * sigma)
    q = 0.5 * math.erfc(x / math.sqrt(2.0))
    return q, math.exp(-(d_min ** 2) / (8.0 * sigma ** 2))


def rate_lower_bound(cardinality, p_err):
    """Fano-style achievable-rate floor, clamped at zero.

    R >= log2|U| - 1 - p_err * log2|U|; with p_err = 1 the raw bound is -1,
    reported as 0.
    """
    if cardinality < 1:
        raise ConfigError("cardinality must be >= 1")
    if not 0.0 <= p_err <= 1.0:
        raise ConfigError("p_err must lie in [0, 1]")
    logu = math.log2(cardinality)
    return max(0.0, logu - 1.0 - p_err * logu)


def noise_removal_check(d_min, noise_variance):
    """True when d_min clears the noise scale sqrt(variance) strictly."""
    if noise_variance < 0:
        raise ConfigError("noise variance must be >= 0")
    return d_min > math.sqrt(noise_variance)
