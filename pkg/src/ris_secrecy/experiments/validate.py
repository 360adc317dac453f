"""Invariant suite run by ``ris-secrecy validate``."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..channel import sample_channel, trial_stream
from ..phase_design import (
    amplitude_profile,
    cascade,
    eve_lower_bound,
    grid_oracle_min,
    heuristic_min_eve,
    heuristic_upper_bound,
    pair_phase_gaps,
    random_phases,
)
from ..secrecy_metrics import estimate, proportion_estimate
from .config import ScenarioConfig

PAIR_TOL = 1e-9
SANDWICH_RTOL = 1e-9
ORACLE_POINT_CAP = 200_000
CALIBRATION_FLIPS = 400


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str = ""
    failures: list = field(default_factory=list)  # (seed, realization index) pairs

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        msg = f"{status} {self.name}: {self.detail}"
        if self.failures:
            shown = ", ".join(f"seed={s} index={i}" for s, i in self.failures[:5])
            msg += f" [first failures: {shown}]"
        return msg


@dataclass
class ValidationReport:
    checks: list

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def lines(self) -> list[str]:
        return [c.line() for c in self.checks]


def _channels(links, k, seed, index):
    """E-side channel pair for one validation realization."""
    sr, _, re = links
    stream = trial_stream(seed, index)
    g_sr = sample_channel(sr, k, stream)
    g_re = sample_channel(re, k, stream)
    return g_sr, g_re, stream


def check_pair_cancellation(links, sizes, realizations, seed, designer=heuristic_min_eve):
    failures, worst = [], 0.0
    for k in sizes:
        for i in range(realizations):
            g_sr, g_re, _ = _channels(links, k, seed + k, i)
            gaps = pair_phase_gaps(g_sr, g_re, designer(g_sr, g_re))
            if gaps.size:
                err = float(np.max(np.abs(gaps - np.pi)))
                worst = max(worst, err)
                if err > PAIR_TOL:
                    failures.append((seed + k, i))
    total = len(sizes) * realizations
    return CheckResult(
        "pair-cancellation",
        not failures,
        f"{total} realizations, K in {tuple(sizes)}, max |gap - pi| = {worst:.2e} rad",
        failures,
    )


def check_sandwich(links, sizes, realizations, seed, designer=heuristic_min_eve):
    failures = []
    for k in sizes:
        for i in range(realizations):
            g_sr, g_re, _ = _channels(links, k, seed + k, i)
            prof = amplitude_profile(g_sr, g_re)
            val = abs(cascade(g_sr, designer(g_sr, g_re), g_re))
            lo, hi = eve_lower_bound(prof), heuristic_upper_bound(prof)
            tol = SANDWICH_RTOL * max(1.0, float(np.sum(prof)))
            if not (lo - tol <= val <= hi + tol):
                failures.append((seed + k, i))
    return CheckResult(
        "sandwich-bounds",
        not failures,
        f"{len(sizes) * realizations} realizations, lower <= |cascade| <= pair residual sum",
        failures,
    )


def _oracle_levels(k, levels):
    if k <= 1:
        return levels
    return max(2, min(levels, int(ORACLE_POINT_CAP ** (1.0 / (k - 1)))))


def check_grid_oracle(links, levels, realizations, seed, designer=heuristic_min_eve, max_k=6):
    failures = []
    used = {}
    for k in range(2, max_k + 1):
        lv = _oracle_levels(k, levels)
        used[k] = lv
        n = realizations if k <= 4 else max(1, realizations // 10)
        for i in range(n):
            g_sr, g_re, _ = _channels(links, k, seed + 100 + k, i)
            prof = amplitude_profile(g_sr, g_re)
            lb = eve_lower_bound(prof)
            heur = abs(cascade(g_sr, designer(g_sr, g_re), g_re))
            _, coarse = grid_oracle_min(g_sr, g_re, lv)
            tol = 1e-9 * max(1.0, float(np.sum(prof)))
            ok = heur >= lb - tol and coarse >= lb - tol
            if k == 2:
                # two elements: the heuristic reaches the exact minimum
                ok = ok and abs(heur - lb) <= tol and coarse >= heur - tol
            if k == 3 and (2 * lv) ** 2 <= ORACLE_POINT_CAP:
                _, fine = grid_oracle_min(g_sr, g_re, 2 * lv)
                ok = ok and fine <= coarse + tol
            if not ok:
                failures.append((seed + 100 + k, i))
    return CheckResult(
        "grid-oracle",
        not failures,
        f"K=2..{max_k}, grid levels {used}, oracle and heuristic above the lower bound",
        failures,
    )


def check_dominance(links, realizations, seed, k=4, designer=heuristic_min_eve):
    heur, ran = [], []
    for i in range(realizations):
        g_sr, g_re, stream = _channels(links, k, seed + 200, i)
        heur.append(abs(cascade(g_sr, designer(g_sr, g_re), g_re)) ** 2)
        ran.append(abs(cascade(g_sr, random_phases(k, stream), g_re)) ** 2)
    mh, mr = float(np.mean(heur)), float(np.mean(ran))
    return CheckResult(
        "dominance",
        mh < mr,
        f"K={k}, {realizations} paired realizations, mean |c_E|^2 heuristic {mh:.4g} vs random {mr:.4g}",
    )


def sampler_moments(link, draws, seed):
    """Sample mean, variance and per-axis variances of one link's coefficients."""
    g = sample_channel(link, draws, trial_stream(seed, 0))
    dev = g - g.mean()
    return {
        "mean": complex(g.mean()),
        "var": float(np.mean(np.abs(dev) ** 2)),
        "var_re": float(np.mean(dev.real ** 2)),
        "var_im": float(np.mean(dev.imag ** 2)),
    }


def check_sampler(links, seed, draws=100_000):
    ok, parts = True, []
    for name, link in zip(("sr", "rd", "re"), links):
        m = sampler_moments(link, draws, seed)
        eta, mu = link.scatter_var, link.los_mean
        mean_ok = abs(m["mean"] - mu) <= 4 * math.sqrt(eta / draws)
        var_ok = abs(m["var"] - eta) <= 0.05 * eta
        axes_ok = all(abs(m[a] - eta / 2) <= 0.05 * eta / 2 for a in ("var_re", "var_im"))
        ok &= mean_ok and var_ok and axes_ok
        parts.append(f"{name}: var/eta={m['var'] / eta:.4f}")
    return CheckResult("sampler-moments", ok, f"{draws} draws per link; " + ", ".join(parts))


def wilson_coverage(p, flips, repetitions, seed, confidence=0.95):
    rng = trial_stream(seed, 0)
    counts = rng.binomial(flips, p, size=repetitions)
    hits = 0
    for c in counts:
        est = proportion_estimate(int(c), flips, confidence)
        hits += est.lo <= p <= est.hi
    return hits / repetitions


def check_ci_calibration(seed, repetitions=1000):
    cov = wilson_coverage(0.5, CALIBRATION_FLIPS, repetitions, seed)
    return CheckResult(
        "ci-calibration",
        abs(cov - 0.95) <= 0.02,
        f"Wilson 95% coverage {cov:.3f} over {repetitions} repetitions of {CALIBRATION_FLIPS} flips",
    )


def check_determinism(seed, trials=600):
    scen = ScenarioConfig(k_elems=16, rates=(0.5, 1.0))
    a = estimate(scen, "opt", trials, seed, workers=1)
    b = estimate(scen, "opt", trials, seed, workers=1)
    c = estimate(scen, "opt", trials, seed, workers=2)
    return CheckResult(
        "determinism",
        a == b == c,
        f"{trials} trials, repeated and 2-worker estimates identical",
    )


def validate(levels: int = 32, trials: int = 500, seed: int = 7, designer=heuristic_min_eve,
             scenario: ScenarioConfig | None = None) -> ValidationReport:
    """Run the invariant suite.

    ``trials`` sets the number of channel realizations per check and
    ``levels`` the grid resolution of the brute-force oracle. ``designer``
    replaces the phase design under test (mutation testing).
    """
    scenario = scenario or ScenarioConfig()
    links = scenario.links()
    sizes = (2, 3, 16, 144)
    per_size = max(1, trials // 2)
    checks = [
        check_pair_cancellation(links, sizes, per_size, seed, designer),
        check_sandwich(links, sizes, per_size, seed, designer),
        check_grid_oracle(links, levels, trials, seed, designer),
        check_dominance(links, trials, seed, designer=designer),
        check_sampler(links, seed),
        check_ci_calibration(seed),
        check_determinism(seed),
    ]
    return ValidationReport(checks)
