"""Worked examples of each operation, runnable as ``ris-secrecy selftest``."""
from __future__ import annotations

import math

import numpy as np

from ..channel import (
    LinkBudget,
    Position2D,
    RadioParams,
    distance,
    make_link,
    noise_dbm,
    noise_power_watts,
    path_loss,
    sample_channel,
    trial_stream,
)
from ..phase_design import (
    cascade,
    eve_lower_bound,
    grid_oracle_min,
    heuristic_min_eve,
    max_main_phases,
    random_phases,
)
from ..secrecy_metrics import (
    SnrPair,
    mean_estimate,
    run_trial,
    secrecy_rate_sample,
    snr,
    sop_indicator,
)
from .config import ConfigError, load_config


def _close(a, b, rel=1e-9, abs_=0.0):
    return math.isclose(a, b, rel_tol=rel, abs_tol=abs_)


def _raises(fn, exc=ValueError):
    try:
        fn()
    except exc:
        return True
    return False


def _channel_examples():
    p = RadioParams()
    k0 = (4 * math.pi * 2.1e9 / 3e8) ** 2
    link = make_link(Position2D(0, 0), Position2D(10, 10), 3.0, p)
    flat = LinkBudget(1.0, 1.0, 0.0, 0.7, 0.0)
    return [
        ("distance identity", distance((0, 0), (0, 0)) == 0),
        ("distance S-RIS", _close(distance((0, 0), (10, 10)), 14.1421, rel=1e-5)),
        ("distance RIS-D", _close(distance((10, 10), (70, 0)), 60.8276, rel=1e-5)),
        ("path-loss constant", _close(path_loss(0.0, p), 7737.8, rel=1e-4)),
        ("path loss at 0 ignores exponent",
         path_loss(0.0, RadioParams(pathloss_exponent=3.7)) == k0),
        ("path loss S-RIS", _close(path_loss(14.1421, p), 8.67, rel=2e-3)),
        ("path loss rejects inf", _raises(lambda: path_loss(math.inf, p))),
        ("thermal floor", _close(noise_dbm(RadioParams(noise_figure=0, bandwidth=1)), -174.0)),
        ("noise 10 MHz", _close(noise_power_watts(RadioParams(noise_figure=6, bandwidth=1e7)), 1.5849e-13, rel=1e-4)),
        ("noise 1 MHz", _close(noise_dbm(RadioParams(noise_figure=6, bandwidth=1e6)), -108.0)),
        ("Rayleigh link has zero mean", make_link((0, 0), (3, 4), 0.0, p).los_mean == 0.0),
        ("LOS mean", _close(link.los_mean, math.sqrt(3 * link.pathloss)) and link.scatter_var == link.pathloss),
        ("zero variance is deterministic", np.all(sample_channel(flat, 5, trial_stream(1, 0)) == 0.7)),
        ("sampler reproducible", np.array_equal(sample_channel(link, 8, trial_stream(3, 9)),
                                                sample_channel(link, 8, trial_stream(3, 9)))),
    ]


def _phase_examples():
    one = np.array([1 + 0j])
    rng = trial_stream(11, 0)
    g = rng.standard_normal((2, 8)) + 1j * rng.standard_normal((2, 8))
    amps = np.array([3.0, 1.0])
    g_sr2 = amps * np.exp(1j * np.array([0.4, -2.0]))
    g_re2 = np.exp(1j * np.array([1.1, 0.3]))
    phases3 = heuristic_min_eve(np.ones(3), np.ones(3))
    ph2, min2 = grid_oracle_min(np.ones(2, complex), np.exp(1j * np.array([0.0, 0.3])), 64)
    return [
        ("cascade identity", cascade(one, np.zeros(1), one) == 1),
        ("cascade half turn", _close(cascade(one, np.array([np.pi]), one).real, -1.0)),
        ("equal pair cancels", abs(cascade(np.ones(2), heuristic_min_eve(np.ones(2), np.ones(2)), np.ones(2))) < 1e-12),
        ("unequal pair leaves difference",
         _close(abs(cascade(g_sr2, heuristic_min_eve(g_sr2, g_re2), g_re2)), 2.0)),
        ("odd K keeps leftover", _close(abs(cascade(np.ones(3), phases3, np.ones(3))), 1.0)),
        ("random phases in range", np.all(np.abs(random_phases(1000, trial_stream(2, 0))) <= np.pi)),
        ("max-main real channels", max_main_phases(np.array([2.0 + 0j]), np.array([0.5 + 0j]))[0] == 0),
        ("max-main coherent sum", _close(abs(cascade(g[0], max_main_phases(g[0], g[1]), g[1])),
                                         float(np.sum(np.abs(g[0]) * np.abs(g[1]))), rel=1e-12)),
        ("lower bound closable", eve_lower_bound([1, 1, 1]) == 0),
        ("lower bound dominant", eve_lower_bound([5, 1, 1]) == 3),
        ("lower bound single", eve_lower_bound([2.5]) == 2.5),
        ("grid oracle K=2", min2 <= 2 * math.sin(math.pi / 64)),
        ("grid oracle rejects K=9", _raises(lambda: grid_oracle_min(np.ones(9), np.ones(9), 2))),
    ]


def _metric_examples():
    from .config import ScenarioConfig

    scen = ScenarioConfig(k_elems=3, rates=(0.0, 1.0))
    flat = LinkBudget(1.0, 1.0, 0.0, 1e-6, 0.0)
    deg = run_trial(scen, "opt", trial_stream(5, 0), links=(flat, flat, flat))
    expected = scen.radio.ptx_watts * 1e-24 / scen.noise_watts
    return [
        ("snr zero cascade", snr(1.0, 0j, 1.0) == 0),
        ("snr identity", snr(1.0, 1 + 0j, 1.0) == 1),
        ("snr 18 dB", _close(snr(0.1, math.sqrt(1e-10), 1.5849e-13), 63.1, rel=1e-3)),
        ("snr rejects zero noise", _raises(lambda: snr(1.0, 1j, 0.0))),
        ("sr symmetric", secrecy_rate_sample(SnrPair(5.0, 5.0)) == 0),
        ("sr log ratio", secrecy_rate_sample(SnrPair(3.0, 1.0)) == 1.0),
        ("sr clamped", secrecy_rate_sample(SnrPair(0.0, 10.0)) == 0),
        ("outage boundary R=0", sop_indicator(SnrPair(2.0, 2.0), 0.0) == 1),
        ("outage boundary R=1", sop_indicator(SnrPair(3.0, 1.0), 1.0) == 1),
        ("no outage", sop_indicator(SnrPair(3.0, 1.0), 0.5) == 0),
        ("degenerate trial", _close(deg.snr.snr_e, expected, rel=1e-9) and _close(deg.snr.snr_d, expected, rel=1e-9)),
        ("single-trial SR interval", mean_estimate([1.0]).ci_half_width == math.inf),
    ]


def _config_examples():
    return [
        ("empty config gives defaults", load_config("").k_elems == 144),
        ("single override", load_config("k_elems = 196").k_elems == 196),
        ("k_elems = 0 rejected", _raises(lambda: load_config("k_elems = 0"), ConfigError)),
    ]


def selftest():
    """Return ``[(name, passed), ...]`` for every worked example."""
    results = []
    for group in (_channel_examples, _phase_examples, _metric_examples, _config_examples):
        results.extend((name, bool(ok)) for name, ok in group())
    return results
