"""Geometry, bounded path loss, noise budget and Rician channel sampling."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

SPEED_OF_LIGHT = 3e8
THERMAL_NOISE_DBM_HZ = -174.0

PATHLOSS_CONVENTIONS = ("paper", "inverse")


class Position2D(NamedTuple):
    x: float
    y: float


@dataclass(frozen=True)
class RadioParams:
    """Radio and propagation parameters shared by every hop.

    ``pathloss_convention`` selects how the path-loss constant enters:
    ``"paper"`` multiplies by ``(4*pi*fc/c)**2`` (so short links have gain
    above one), ``"inverse"`` divides by it (free-space attenuation).
    The exponent is used exactly as given, sign included.
    """

    carrier_freq: float = 2.1e9
    bandwidth: float = 10e6
    noise_figure: float = 6.0
    pathloss_exponent: float = -2.5
    ptx_dbm: float = 20.0
    pathloss_convention: str = "paper"

    def __post_init__(self):
        if not (math.isfinite(self.carrier_freq) and self.carrier_freq > 0):
            raise ValueError(f"carrier_freq must be positive, got {self.carrier_freq!r}")
        if not (math.isfinite(self.bandwidth) and self.bandwidth > 0):
            raise ValueError(f"bandwidth must be positive, got {self.bandwidth!r}")
        if not math.isfinite(self.ptx_dbm):
            raise ValueError(f"ptx_dbm must be finite, got {self.ptx_dbm!r}")
        if not math.isfinite(self.noise_figure):
            raise ValueError(f"noise_figure must be finite, got {self.noise_figure!r}")
        if not math.isfinite(self.pathloss_exponent):
            raise ValueError(f"pathloss_exponent must be finite, got {self.pathloss_exponent!r}")
        if self.pathloss_convention not in PATHLOSS_CONVENTIONS:
            raise ValueError(
                f"pathloss_convention must be one of {PATHLOSS_CONVENTIONS}, "
                f"got {self.pathloss_convention!r}"
            )

    @property
    def pathloss_constant(self) -> float:
        return (4 * math.pi * self.carrier_freq / SPEED_OF_LIGHT) ** 2

    @property
    def ptx_watts(self) -> float:
        return dbm_to_watts(self.ptx_dbm)


@dataclass(frozen=True)
class LinkBudget:
    """Large-scale state of one hop.

    ``los_mean`` is the real LOS amplitude shared by all elements and
    ``scatter_var`` the variance of the circular scattered part. Built by
    :func:`make_link` these satisfy ``los_mean = sqrt(K*L)`` and
    ``scatter_var = L``; a zero ``scatter_var`` is accepted so degenerate
    (deterministic) links can be assembled by hand.
    """

    distance: float
    pathloss: float
    rician_factor: float
    los_mean: float
    scatter_var: float

    def __post_init__(self):
        if not self.pathloss > 0:
            raise ValueError(f"pathloss must be positive, got {self.pathloss!r}")
        if not self.scatter_var >= 0:
            raise ValueError(f"scatter_var must be non-negative, got {self.scatter_var!r}")
        if not self.rician_factor >= 0:
            raise ValueError(f"rician_factor must be non-negative, got {self.rician_factor!r}")


def dbm_to_watts(p_dbm: float) -> float:
    return 10.0 ** ((p_dbm - 30.0) / 10.0)


def distance(p: Position2D, q: Position2D) -> float:
    return math.hypot(p[0] - q[0], p[1] - q[1])


def path_loss(d: float, params: RadioParams) -> float:
    """Bounded path loss ``(1 + d)**beta`` scaled by the path-loss constant.

    Finite at ``d = 0`` for any exponent.
    """
    if not math.isfinite(d):
        raise ValueError(f"distance must be finite, got {d!r}")
    if d < 0:
        raise ValueError(f"distance must be non-negative, got {d!r}")
    k0 = params.pathloss_constant
    bounded = (1.0 + d) ** params.pathloss_exponent
    if params.pathloss_convention == "paper":
        return k0 * bounded
    return bounded / k0


def noise_dbm(params: RadioParams) -> float:
    return THERMAL_NOISE_DBM_HZ + params.noise_figure + 10.0 * math.log10(params.bandwidth)


def noise_power_watts(params: RadioParams) -> float:
    """Receiver noise power in watts; identical at D and E."""
    return dbm_to_watts(noise_dbm(params))


def make_link(u: Position2D, v: Position2D, k_factor: float, params: RadioParams) -> LinkBudget:
    if not (math.isfinite(k_factor) and k_factor >= 0):
        raise ValueError(f"Rician factor must be a finite value >= 0, got {k_factor!r}")
    d = distance(u, v)
    loss = path_loss(d, params)
    return LinkBudget(
        distance=d,
        pathloss=loss,
        rician_factor=k_factor,
        los_mean=math.sqrt(k_factor * loss),
        scatter_var=loss,
    )


def trial_stream(master_seed: int, index: int) -> np.random.Generator:
    """Independent generator for substream ``index`` of ``master_seed``.

    Equal ``(master_seed, index)`` always yields the same draw sequence, and
    distinct indices are statistically independent (SeedSequence spawning).
    """
    seq = np.random.SeedSequence(int(master_seed), spawn_key=(int(index),))
    return np.random.Generator(np.random.PCG64(seq))


def sample_channel(link: LinkBudget, k_elems: int, stream: np.random.Generator) -> np.ndarray:
    """Draw ``k_elems`` i.i.d. coefficients from CN(los_mean, scatter_var).

    Draws ``2*k_elems`` standard normals from ``stream``: the first half are
    the real parts, the second half the imaginary parts.
    """
    if k_elems < 1:
        raise ValueError(f"k_elems must be >= 1, got {k_elems!r}")
    z = stream.standard_normal(2 * k_elems)
    scale = math.sqrt(link.scatter_var / 2.0)
    return link.los_mean + scale * (z[:k_elems] + 1j * z[k_elems:])
