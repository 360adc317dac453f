"""SNRs, secrecy quantities and Monte-Carlo estimators for SOP and SR."""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import TYPE_CHECKING, Iterable, NamedTuple, Sequence

import numpy as np
from scipy import stats

from .channel import sample_channel, trial_stream
from .phase_design import cascade, heuristic_min_eve, max_main_phases

if TYPE_CHECKING:
    from .experiments.config import ScenarioConfig

SCHEMES = ("opt", "ran", "max_main")

# Trials are simulated in fixed index-aligned blocks so the floating-point
# path of every trial is the same whatever the worker count.
BLOCK_SIZE = 512


class SnrPair(NamedTuple):
    snr_d: float
    snr_e: float


@dataclass(frozen=True)
class EstimateWithCI:
    mean: float
    ci_half_width: float
    trials: int
    confidence: float = 0.95
    lo: float = math.nan
    hi: float = math.nan


@dataclass(frozen=True)
class TrialResult:
    snr: SnrPair
    secrecy_rate: float
    outage: tuple[int, ...]


def snr(ptx_watts: float, cascade_amp: complex, noise_watts: float) -> float:
    if not noise_watts > 0:
        raise ValueError(f"noise power must be positive, got {noise_watts!r}")
    if not ptx_watts > 0:
        raise ValueError(f"transmit power must be positive, got {ptx_watts!r}")
    return ptx_watts * abs(cascade_amp) ** 2 / noise_watts


def log_ratio(snr_d, snr_e):
    """Unclamped ``log2((1 + snr_d) / (1 + snr_e))``."""
    return np.log2((1.0 + np.asarray(snr_d, dtype=float)) / (1.0 + np.asarray(snr_e, dtype=float)))


def secrecy_rate_sample(p: SnrPair) -> float:
    return float(max(0.0, log_ratio(p.snr_d, p.snr_e)))


def sop_indicator(p: SnrPair, rate: float) -> int:
    """1 when the log-ratio is at or below ``rate`` (boundary is an outage)."""
    if rate < 0:
        raise ValueError(f"target rate must be >= 0, got {rate!r}")
    return int(log_ratio(p.snr_d, p.snr_e) <= rate)


def proportion_estimate(successes: int, trials: int, confidence: float = 0.95) -> EstimateWithCI:
    """Sample proportion with a Wilson score interval."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    ci = stats.binomtest(int(successes), int(trials)).proportion_ci(
        confidence_level=confidence, method="wilson"
    )
    p = successes / trials
    lo, hi = min(float(ci.low), p), max(float(ci.high), p)
    return EstimateWithCI(p, (hi - lo) / 2, int(trials), confidence, lo, hi)


def mean_estimate(samples, confidence: float = 0.95) -> EstimateWithCI:
    """Sample mean with a normal-approximation interval.

    With a single sample the half-width is ``inf``.
    """
    x = np.asarray(samples, dtype=float)
    n = x.size
    if n < 1:
        raise ValueError("need at least one sample")
    mean = math.fsum(x) / n
    if n == 1:
        return EstimateWithCI(mean, math.inf, 1, confidence, -math.inf, math.inf)
    std = math.sqrt(math.fsum((x - mean) ** 2) / (n - 1))
    half = float(stats.norm.ppf(0.5 + confidence / 2)) * std / math.sqrt(n)
    return EstimateWithCI(mean, half, n, confidence, mean - half, mean + half)


def _design(scheme, g_sr, g_rd, g_re, ran_phases):
    if scheme == "opt":
        return heuristic_min_eve(g_sr, g_re)
    if scheme == "max_main":
        return max_main_phases(g_sr, g_rd)
    if scheme == "ran":
        return ran_phases
    raise ValueError(f"unknown scheme {scheme!r}; expected one of {SCHEMES}")


def _check_schemes(schemes):
    for s in schemes:
        if s not in SCHEMES:
            raise ValueError(f"unknown scheme {s!r}; expected one of {SCHEMES}")


def draw_realization(scenario: ScenarioConfig, stream: np.random.Generator, links=None, with_random=True):
    """Channels for one trial, then (optionally) the random-baseline phases.

    Draw order is fixed: S->RIS, RIS->D, RIS->E, random phases. Every scheme
    therefore sees the same channels for a given stream.
    """
    sr, rd, re = links if links is not None else scenario.links()
    k = scenario.k_elems
    g_sr = sample_channel(sr, k, stream)
    g_rd = sample_channel(rd, k, stream)
    g_re = sample_channel(re, k, stream)
    ran = stream.uniform(-np.pi, np.pi, size=k) if with_random else None
    return g_sr, g_rd, g_re, ran


def run_trial(scenario: ScenarioConfig, scheme: str, stream: np.random.Generator, links=None) -> TrialResult:
    """One Monte-Carlo trial for one scheme.

    ``links`` optionally replaces ``scenario.links()`` (used for hand-built
    degenerate links in tests).
    """
    _check_schemes([scheme])
    g_sr, g_rd, g_re, ran = draw_realization(scenario, stream, links, with_random=scheme == "ran")
    phases = _design(scheme, g_sr, g_rd, g_re, ran)
    ptx, noise = scenario.radio.ptx_watts, scenario.noise_watts
    pair = SnrPair(snr(ptx, cascade(g_sr, phases, g_rd), noise), snr(ptx, cascade(g_sr, phases, g_re), noise))
    lr = float(log_ratio(pair.snr_d, pair.snr_e))
    return TrialResult(pair, max(0.0, lr), tuple(int(lr <= r) for r in scenario.rates))


def _simulate_block(args):
    scenario, schemes, master_seed, start, stop = args
    links = scenario.links()
    n, k = stop - start, scenario.k_elems
    g_sr = np.empty((n, k), complex)
    g_rd = np.empty((n, k), complex)
    g_re = np.empty((n, k), complex)
    ran = np.empty((n, k))
    need_ran = "ran" in schemes
    for row, idx in enumerate(range(start, stop)):
        g_sr[row], g_rd[row], g_re[row], r = draw_realization(
            scenario, trial_stream(master_seed, idx), links, with_random=need_ran
        )
        if need_ran:
            ran[row] = r

    ptx, noise = scenario.radio.ptx_watts, scenario.noise_watts
    out = {}
    for scheme in schemes:
        phases = _design(scheme, g_sr, g_rd, g_re, ran)
        snr_d = ptx * np.abs(cascade(g_sr, phases, g_rd)) ** 2 / noise
        snr_e = ptx * np.abs(cascade(g_sr, phases, g_re)) ** 2 / noise
        out[scheme] = np.stack([snr_d, snr_e])
    return out


def simulate_snrs(
    scenario: ScenarioConfig,
    schemes: Sequence[str],
    trials: int,
    master_seed: int,
    workers: int = 1,
) -> dict[str, np.ndarray]:
    """Per-trial ``(snr_d, snr_e)`` for each scheme, shape ``(2, trials)``.

    Trial ``i`` always uses substream ``(master_seed, i)``, so schemes are
    compared on common random numbers and results do not depend on
    ``workers``.
    """
    _check_schemes(schemes)
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials!r}")
    schemes = tuple(schemes)
    jobs = [
        (scenario, schemes, master_seed, s, min(s + BLOCK_SIZE, trials))
        for s in range(0, trials, BLOCK_SIZE)
    ]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_simulate_block, jobs))
    else:
        parts = [_simulate_block(j) for j in jobs]
    return {s: np.concatenate([p[s] for p in parts], axis=1) for s in schemes}


def summarize(snrs: np.ndarray, rates: Iterable[float], confidence: float = 0.95):
    """Reduce per-trial SNR pairs to (SOP per rate, SR) estimates."""
    lr = log_ratio(snrs[0], snrs[1])
    n = lr.size
    sop = {}
    for r in rates:
        if r < 0:
            raise ValueError(f"target rate must be >= 0, got {r!r}")
        sop[r] = proportion_estimate(int(np.count_nonzero(lr <= r)), n, confidence)
    return sop, mean_estimate(np.maximum(lr, 0.0), confidence)


def estimate(
    scenario: ScenarioConfig,
    scheme: str,
    trials: int,
    master_seed: int,
    workers: int = 1,
    confidence: float = 0.95,
):
    """Monte-Carlo SOP (one estimate per target rate) and SR for ``scheme``."""
    snrs = simulate_snrs(scenario, [scheme], trials, master_seed, workers)[scheme]
    return summarize(snrs, scenario.rates, confidence)


def estimate_schemes(
    scenario: ScenarioConfig,
    schemes: Sequence[str],
    trials: int,
    master_seed: int,
    workers: int = 1,
    confidence: float = 0.95,
    rates: Iterable[float] | None = None,
):
    """Like :func:`estimate` for several schemes on shared channel draws."""
    rates = tuple(scenario.rates if rates is None else rates)
    snrs = simulate_snrs(scenario, schemes, trials, master_seed, workers)
    return {s: summarize(v, rates, confidence) for s, v in snrs.items()}
