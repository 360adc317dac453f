"""RIS phase-shift designs and the oracles used to check them.

Every design works on single realizations (1-D arrays of length K) and on
stacks of realizations (shape ``(..., K)``); the element axis is always last.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

MAX_ORACLE_ELEMENTS = 8


def wrap_phase(x):
    """Map angles into [-pi, pi]; +pi stays +pi."""
    x = np.asarray(x, dtype=float)
    wrapped = x - 2 * np.pi * np.round(x / (2 * np.pi))
    return np.clip(wrapped, -np.pi, np.pi)


def _check_lengths(*arrays):
    n = arrays[0].shape[-1]
    for a in arrays[1:]:
        if a.shape[-1] != n:
            raise ValueError(f"length mismatch: {arrays[0].shape[-1]} vs {a.shape[-1]}")


def cascade_terms(g_a, phases, g_b):
    """Per-element contributions ``conj(g_a) * exp(1j*phases) * g_b``."""
    g_a, phases, g_b = np.asarray(g_a), np.asarray(phases), np.asarray(g_b)
    _check_lengths(g_a, phases, g_b)
    return np.conj(g_a) * np.exp(1j * phases) * g_b


def cascade(g_a, phases, g_b):
    """Composite coefficient ``g_a^H diag(exp(1j*phases)) g_b``."""
    return np.sum(cascade_terms(g_a, phases, g_b), axis=-1)


def amplitude_profile(g_a, g_b) -> np.ndarray:
    g_a, g_b = np.asarray(g_a), np.asarray(g_b)
    _check_lengths(g_a, g_b)
    return np.abs(g_a) * np.abs(g_b)


@dataclass(frozen=True)
class PairingPlan:
    ordering: np.ndarray
    pairs: np.ndarray  # (n_pairs, 2) original indices, larger amplitude first
    leftover: int | None


def pairing_plan(amplitudes) -> PairingPlan:
    """Sort amplitudes descending (ties by index) and pair neighbours."""
    a = np.asarray(amplitudes, dtype=float)
    if a.ndim != 1:
        raise ValueError("pairing_plan expects a single amplitude vector")
    order = np.argsort(-a, kind="stable")
    n_pairs = a.size // 2
    pairs = order[: 2 * n_pairs].reshape(n_pairs, 2)
    leftover = int(order[-1]) if a.size % 2 else None
    return PairingPlan(ordering=order, pairs=pairs, leftover=leftover)


def _pair_indices(amplitudes):
    order = np.argsort(-amplitudes, axis=-1, kind="stable")
    n_pairs = amplitudes.shape[-1] // 2
    return order[..., 0 : 2 * n_pairs : 2], order[..., 1 : 2 * n_pairs : 2]


def heuristic_min_eve(g_sr, g_re) -> np.ndarray:
    """Pairwise-cancellation phases that suppress the eavesdropper cascade.

    Elements are ranked by ``|g_sr_k| |g_re_k|`` and consecutive ranks are
    paired. In each pair the weaker element keeps a zero phase and the
    stronger one is rotated so its cascade term points exactly opposite
    the weaker one's. An unpaired last element (odd K) keeps a zero phase.
    """
    g_sr, g_re = np.asarray(g_sr), np.asarray(g_re)
    _check_lengths(g_sr, g_re)
    term_phase = np.angle(np.conj(g_sr) * g_re)
    first, second = _pair_indices(np.abs(g_sr) * np.abs(g_re))

    phases = np.zeros(term_phase.shape, dtype=float)
    target = np.take_along_axis(term_phase, second, axis=-1) + np.pi
    own = np.take_along_axis(term_phase, first, axis=-1)
    np.put_along_axis(phases, first, wrap_phase(target - own), axis=-1)
    return phases


def random_phases(k_elems: int, stream: np.random.Generator) -> np.ndarray:
    if k_elems < 1:
        raise ValueError(f"k_elems must be >= 1, got {k_elems!r}")
    return stream.uniform(-np.pi, np.pi, size=k_elems)


def max_main_phases(g_sr, g_rd) -> np.ndarray:
    """Co-phase every term toward D so the cascade is the coherent sum."""
    g_sr, g_rd = np.asarray(g_sr), np.asarray(g_rd)
    _check_lengths(g_sr, g_rd)
    return wrap_phase(np.angle(g_sr) - np.angle(g_rd))


def eve_lower_bound(profile) -> float:
    """Smallest ``|sum_k a_k exp(1j*theta_k)|`` over free phases."""
    a = np.asarray(profile, dtype=float)
    if a.size == 0:
        return 0.0
    return float(max(0.0, 2 * a.max() - a.sum()))


def heuristic_upper_bound(profile) -> float:
    """Triangle-inequality ceiling on the heuristic's cascade magnitude."""
    a = np.sort(np.asarray(profile, dtype=float))[::-1]
    n_pairs = a.size // 2
    bound = float(np.sum(a[0 : 2 * n_pairs : 2] - a[1 : 2 * n_pairs : 2]))
    if a.size % 2:
        bound += float(a[-1])
    return bound


def pair_phase_gaps(g_sr, g_re, phases) -> np.ndarray:
    """Angle between the two cascade terms of each heuristic pair.

    Returns values in [0, pi]; a perfect cancellation gives pi.
    """
    terms = cascade_terms(g_sr, phases, g_re)
    if terms.ndim != 1:
        raise ValueError("pair_phase_gaps expects a single realization")
    plan = pairing_plan(amplitude_profile(g_sr, g_re))
    rel = terms[plan.pairs[:, 0]] * np.conj(terms[plan.pairs[:, 1]])
    return np.abs(np.angle(rel))


def grid_oracle_min(g_sr, g_re, levels: int):
    """Exhaustive minimum of ``|cascade|`` over a uniform phase grid.

    The grid is ``-pi + 2*pi*m/levels``. Rotating every phase by one grid
    step maps the grid onto itself without changing the magnitude, so the
    first element is pinned to ``-pi`` and only ``levels**(K-1)`` points are
    visited.
    """
    g_sr, g_re = np.asarray(g_sr), np.asarray(g_re)
    _check_lengths(g_sr, g_re)
    k = g_sr.shape[-1]
    if g_sr.ndim != 1:
        raise ValueError("grid_oracle_min expects a single realization")
    if k > MAX_ORACLE_ELEMENTS:
        raise ValueError(f"grid oracle limited to K <= {MAX_ORACLE_ELEMENTS}, got {k}")
    if levels < 2:
        raise ValueError(f"levels must be >= 2, got {levels}")

    grid = -np.pi + 2 * np.pi * np.arange(levels) / levels
    terms = np.conj(g_sr) * g_re
    total = terms[0] * np.exp(1j * grid[0])
    for t in terms[1:]:
        total = np.add.outer(total, t * np.exp(1j * grid))
    mags = np.abs(np.atleast_1d(total))
    best = int(np.argmin(mags))
    idx = np.unravel_index(best, mags.shape) if k > 1 else ()
    phases = np.array([grid[0]] + [grid[i] for i in idx])
    return phases, float(mags.flat[best])


def brute_force_min(g_sr, g_re, levels: int):
    """Same search as :func:`grid_oracle_min` without the rotation pinning.

    Only usable for tiny K; kept as an independent check of the pinning.
    """
    terms = np.conj(np.asarray(g_sr)) * np.asarray(g_re)
    grid = -np.pi + 2 * np.pi * np.arange(levels) / levels
    best = (None, np.inf)
    for combo in itertools.product(grid, repeat=terms.size):
        val = abs(np.sum(terms * np.exp(1j * np.array(combo))))
        if val < best[1]:
            best = (np.array(combo), val)
    return best
