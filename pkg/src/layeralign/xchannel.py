"""Channel topologies: K-transmitter X channels and the 3-user SIMO MAC.

Three layouts are supported, all with i.i.d. Gaussian fading redrawn until
every matrix passes a condition-number ceiling:

- ``kx2``: K transmitters, 2 receivers, M antennas everywhere (M x M links);
- ``2xk``: 2 transmitters, K receivers, M antennas everywhere;
- ``mac``: 3 single-antenna users into one 2-antenna receiver (2 x 1 links).
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from enum import Enum

import numpy as np

from .errors import ConfigError

__all__ = [
    "ScalarField",
    "TopologyKind",
    "NoiseModel",
    "XTopology",
    "sample_topology",
    "transmit",
    "topology_to_dict",
    "topology_from_dict",
]

_MAX_RESAMPLE = 200


class ScalarField(str, Enum):
    REAL = "real"
    COMPLEX = "complex"

    @classmethod
    def coerce(cls, value):
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise ConfigError(f"unknown field {value!r} (expected 'real' or 'complex')") from None

    @property
    def is_complex(self):
        return self is ScalarField.COMPLEX

    @property
    def dtype(self):
        return np.complex128 if self.is_complex else np.float64

    @property
    def real_dims(self):
        """Real dimensions per scalar: 1 for the reals, 2 for the complexes."""
        return 2 if self.is_complex else 1


class TopologyKind(str, Enum):
    KX2 = "kx2"
    TWO_BY_K = "2xk"
    SIMO_MAC = "mac"

    @classmethod
    def coerce(cls, value):
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise ConfigError(f"unknown topology kind {value!r}") from None


@dataclass(frozen=True)
class NoiseModel:
    """Additive Gaussian noise with `variance` per real dimension."""

    variance: float

    def __post_init__(self):
        if not np.isfinite(self.variance) or self.variance < 0:
            raise ConfigError(f"noise variance must be >= 0, got {self.variance!r}")

    @property
    def sigma(self):
        return float(np.sqrt(self.variance))

    def draw(self, rng, shape, field=ScalarField.REAL):
        field = ScalarField.coerce(field)
        if field.is_complex:
            return self.sigma * (rng.standard_normal(shape) + 1j * rng.standard_normal(shape))
        return self.sigma * rng.standard_normal(shape)


@dataclass(frozen=True)
class XTopology:
    """A sampled channel realization.

    H maps (tx, rx) pairs (1-based indices) to gain matrices of shape
    (rx antennas, tx antennas).
    """

    kind: TopologyKind
    K: int
    M: int
    field: ScalarField
    seed: int
    H: dict = dc_field(repr=False, default_factory=dict)

    @property
    def n_tx(self):
        return {TopologyKind.KX2: self.K, TopologyKind.TWO_BY_K: 2, TopologyKind.SIMO_MAC: 3}[self.kind]

    @property
    def n_rx(self):
        return {TopologyKind.KX2: 2, TopologyKind.TWO_BY_K: self.K, TopologyKind.SIMO_MAC: 1}[self.kind]

    @property
    def tx_antennas(self):
        return 1 if self.kind is TopologyKind.SIMO_MAC else self.M

    @property
    def rx_antennas(self):
        return 2 if self.kind is TopologyKind.SIMO_MAC else self.M

    def channel(self, tx, rx):
        try:
            return self.H[(tx, rx)]
        except KeyError:
            raise ConfigError(f"no link ({tx}, {rx}) in this {self.kind.value} topology") from None

    def max_cond(self):
        """Largest condition number across all square links (1.0 for the MAC)."""
        conds = [
            np.linalg.cond(h) for h in self.H.values() if h.shape[0] == h.shape[1]
        ]
        return float(max(conds)) if conds else 1.0


def _draw_matrix(rng, shape, field):
    if field.is_complex:
        return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2.0)
    return rng.standard_normal(shape)


def sample_topology(kind, K=3, M=2, field=ScalarField.REAL, seed=0, cond_ceiling=1e6):
    """Draw a channel realization with every square link conditioned below the ceiling.

    Ill-conditioned draws are resampled matrix-by-matrix (the event is rare;
    the ceiling guards the inverse-based precoders downstream).
    """
    kind = TopologyKind.coerce(kind)
    field = ScalarField.coerce(field)
    if not isinstance(K, (int, np.integer)) or K < 2:
        raise ConfigError(f"K must be an integer >= 2, got {K!r}")
    if not isinstance(M, (int, np.integer)) or M < 1:
        raise ConfigError(f"M must be an integer >= 1, got {M!r}")
    if cond_ceiling <= 1:
        raise ConfigError(f"cond_ceiling must exceed 1, got {cond_ceiling!r}")
    if kind is TopologyKind.SIMO_MAC:
        if K != 3:
            raise ConfigError("the SIMO MAC layout is fixed at K=3 users")
        M = 1
    rng = np.random.default_rng(seed)
    if kind is TopologyKind.KX2:
        links = [(tx, rx) for tx in range(1, K + 1) for rx in (1, 2)]
        shape = (M, M)
    elif kind is TopologyKind.TWO_BY_K:
        links = [(tx, rx) for tx in (1, 2) for rx in range(1, K + 1)]
        shape = (M, M)
    else:
        links = [(tx, 1) for tx in (1, 2, 3)]
        shape = (2, 1)
    H = {}
    for link in links:
        for _ in range(_MAX_RESAMPLE):
            h = _draw_matrix(rng, shape, field)
            if shape[0] != shape[1] or np.linalg.cond(h) <= cond_ceiling:
                break
        else:
            raise ConfigError(
                f"could not draw a matrix with cond <= {cond_ceiling} for link {link}"
            )
        H[link] = h
    return XTopology(kind=kind, K=int(K), M=int(M), field=field, seed=int(seed), H=H)


def transmit(topology, x, noise=None, rng=None):
    """Propagate transmit blocks through the channel.

    Args:
        topology: an XTopology.
        x: dict tx -> array (tx_antennas, T) of transmitted values.
        noise: optional NoiseModel; adds i.i.d. noise per receive antenna.
        rng: numpy Generator (or int seed) used for the noise draw.

    Returns:
        dict rx -> array (rx_antennas, T).
    """
    if set(x) != set(range(1, topology.n_tx + 1)):
        raise ConfigError(f"x must provide blocks for transmitters 1..{topology.n_tx}")
    blocks = {}
    for tx, xt in x.items():
        xt = np.atleast_2d(np.asarray(xt))
        if xt.shape[0] != topology.tx_antennas:
            raise ConfigError(
                f"transmitter {tx} block has {xt.shape[0]} rows, expected {topology.tx_antennas}"
            )
        blocks[tx] = xt
    T = next(iter(blocks.values())).shape[1]
    if rng is None or isinstance(rng, (int, np.integer)):
        rng = np.random.default_rng(rng)
    out = {}
    for rx in range(1, topology.n_rx + 1):
        acc = np.zeros((topology.rx_antennas, T), dtype=topology.field.dtype)
        for tx in range(1, topology.n_tx + 1):
            acc = acc + topology.channel(tx, rx) @ blocks[tx]
        if noise is not None and noise.variance > 0:
            acc = acc + noise.draw(rng, acc.shape, topology.field)
        out[rx] = acc
    return out


def _matrix_to_jsonable(h, field):
    if field.is_complex:
        return {"re": h.real.tolist(), "im": h.imag.tolist()}
    return h.tolist()


def _matrix_from_jsonable(obj, field):
    if field.is_complex:
        return np.asarray(obj["re"], dtype=float) + 1j * np.asarray(obj["im"], dtype=float)
    return np.asarray(obj, dtype=float)


def topology_to_dict(topology):
    """JSON-ready description of a topology (links keyed as 'tx,rx')."""
    return {
        "kind": topology.kind.value,
        "K": topology.K,
        "M": topology.M,
        "field": topology.field.value,
        "seed": topology.seed,
        "H": {
            f"{tx},{rx}": _matrix_to_jsonable(h, topology.field)
            for (tx, rx), h in sorted(topology.H.items())
        },
    }


def topology_from_dict(data):
    kind = TopologyKind.coerce(data["kind"])
    field = ScalarField.coerce(data["field"])
    H = {}
    for key, obj in data["H"].items():
        tx, rx = (int(s) for s in key.split(","))
        H[(tx, rx)] = _matrix_from_jsonable(obj, field)
    return XTopology(
        kind=kind, K=int(data["K"]), M=int(data["M"]), field=field,
        seed=int(data.get("seed", 0)), H=H,
    )
