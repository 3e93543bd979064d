"""Scaled integer constellations and the two-stream encoding layer.

A transmit antenna sends x = A * (a*u + b*v) with u, v integer symbols from
{-Q, ..., Q} and (a, b) chosen so the map (u, v) -> a*u + b*v is injective
on the symbol grid.  The amplitude A ties constellation growth to transmit
power: with A = Q**k the peak per-stream power is A**2 * Q**2 ~ Q**(2*(k+1)).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError

__all__ = [
    "Constellation",
    "EncodingPair",
    "ScalingLaw",
    "build_constellation",
    "draw_symbols",
    "encode_antenna",
]


def _check_Q(Q):
    if not isinstance(Q, (int, np.integer)) or isinstance(Q, bool) or Q < 1:
        raise ConfigError(f"Q must be an integer >= 1, got {Q!r}")


@dataclass(frozen=True)
class Constellation:
    """The scaled integer constellation A * {-Q, ..., Q}."""

    Q: int
    A: float = 1.0

    def __post_init__(self):
        _check_Q(self.Q)
        if not np.isfinite(self.A) or self.A <= 0:
            raise ConfigError(f"A must be a positive finite float, got {self.A!r}")

    @property
    def points(self):
        return self.A * np.arange(-self.Q, self.Q + 1)

    @property
    def cardinality(self):
        return 2 * self.Q + 1

    @property
    def power(self):
        """Peak per-stream power A**2 * Q**2."""
        return float(self.A) ** 2 * float(self.Q) ** 2


def build_constellation(Q, A=1.0):
    """Validate (Q, A) and return the corresponding Constellation."""
    return Constellation(int(Q), float(A))


@dataclass(frozen=True)
class EncodingPair:
    """Per-antenna direction coefficients (a, b) multiplexing two symbol streams.

    The antenna transmits A * (a*u + b*v); decodability of the pair (u, v)
    from the sum requires all (2Q+1)**2 levels a*u + b*v to be distinct.
    """

    a: float
    b: float

    def __post_init__(self):
        for name, c in (("a", self.a), ("b", self.b)):
            if not np.isfinite(c) or c == 0:
                raise ConfigError(f"coefficient {name} must be finite and nonzero, got {c!r}")

    def levels(self, Q):
        """All values a*u + b*v over the symbol grid, sorted ascending."""
        _check_Q(Q)
        sym = np.arange(-Q, Q + 1)
        return np.sort((self.a * sym)[:, None] + (self.b * sym)[None, :], axis=None)

    def min_gap(self, Q):
        """Smallest spacing between distinct levels (0.0 on a collision)."""
        return float(np.diff(self.levels(Q)).min())

    def is_uniquely_decodable(self, Q, tol=1e-9):
        """True when every (u, v) pair maps to its own level with gap > tol.

        Rationally dependent coefficients (e.g. a=1, b=2 at Q >= 2) collide;
        pairs like (1, sqrt(2)) stay injective at any Q.
        """
        return self.min_gap(Q) > tol


def encode_antenna(u, v, pair, A=1.0, Q=None):
    """Encode two integer symbol streams onto one antenna: A * (a*u + b*v).

    Args:
        u, v: integer symbols (scalars or arrays; Gaussian integers for the
            complex field are fine since (a, b) stay real).
        pair: EncodingPair with the antenna's direction coefficients.
        A: amplitude scaling.
        Q: optional symbol bound; when given, u and v are range-checked.

    Returns:
        The transmitted values, same shape as the broadcast of u and v.
    """
    u = np.asarray(u)
    v = np.asarray(v)
    if Q is not None:
        _check_Q(Q)
        for name, s in (("u", u), ("v", v)):
            bound = np.max(np.abs(s)) if s.size else 0
            if bound > Q:
                raise ConfigError(f"{name} symbols exceed the constellation bound Q={Q}")
    return A * (pair.a * u + pair.b * v)


@dataclass(frozen=True)
class ScalingLaw:
    """Amplitude law A = Q**k linking constellation size to power.

    Per stream, peak power is P = A**2 * Q**2 ~ Q**(2*(k+1)) while the
    received minimum distance of a k-th order interference stack behaves
    like A * Q**(-k); the law pins that product at order one.
    """

    k: float

    def __post_init__(self):
        if not np.isfinite(self.k) or self.k < 0:
            raise ConfigError(f"scaling exponent k must be >= 0, got {self.k!r}")

    def amplitude(self, Q):
        _check_Q(Q)
        return float(Q) ** self.k

    def power(self, Q, streams=1):
        """Peak transmit power with `streams` scaled constellations superposed."""
        return streams * self.amplitude(Q) ** 2 * float(Q) ** 2

    def nominal_min_distance(self, Q):
        """A * Q**(-k): exactly 1 under this law, the point of the scaling."""
        return self.amplitude(Q) * float(Q) ** (-self.k)


def draw_symbols(rng, Q, size=None, field="real"):
    """Uniform symbol draws: {-Q..Q} ints, or the Gaussian box for 'complex'."""
    _check_Q(Q)
    field = getattr(field, "value", field)
    if field == "real":
        return rng.integers(-Q, Q + 1, size=size)
    if field == "complex":
        re = rng.integers(-Q, Q + 1, size=size)
        im = rng.integers(-Q, Q + 1, size=size)
        return re + 1j * im
    raise ConfigError(f"unknown field {field!r}")
