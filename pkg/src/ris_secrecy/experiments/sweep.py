"""Parameter sweeps over a base scenario, written as CSV."""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import Sequence, TextIO

from ..secrecy_metrics import estimate_schemes
from .config import ConfigError, ScenarioConfig

SWEEP_VARIABLES = ("rate", "ptx_dbm", "k_elems", "k_sr", "k_rd", "k_re")

CSV_HEADER = (
    "variable", "value", "scheme", "rate",
    "sop", "sop_ci_lo", "sop_ci_hi",
    "sr", "sr_ci_lo", "sr_ci_hi",
    "trials", "seed",
)


@dataclass(frozen=True)
class SweepSpec:
    variable: str
    values: tuple
    base: ScenarioConfig

    def __post_init__(self):
        if self.variable not in SWEEP_VARIABLES:
            raise ConfigError(f"sweep variable must be one of {SWEEP_VARIABLES}, got {self.variable!r}")
        if not self.values:
            raise ConfigError("sweep needs at least one value")
        object.__setattr__(self, "values", tuple(_coerce(self.variable, v) for v in self.values))
        # building every cell up front surfaces domain errors before any work
        for v in self.values:
            self.cell(v)

    def cell(self, value) -> ScenarioConfig:
        if self.variable == "rate":
            return self.base.replace(rates=(value,))
        return self.base.replace(**{self.variable: value})


def _coerce(variable, value):
    if variable == "k_elems":
        if float(value) != int(float(value)):
            raise ConfigError(f"k_elems: sweep values must be integers, got {value!r}")
        return int(float(value))
    v = float(value)
    if not math.isfinite(v):
        raise ConfigError(f"{variable}: sweep values must be finite, got {value!r}")
    return v


def parse_values(text: str) -> list[float]:
    """``"a,b,c"`` or an inclusive range ``"start:stop:step"``."""
    text = text.strip()
    if ":" in text:
        try:
            start, stop, step = (float(p) for p in text.split(":"))
        except ValueError:
            raise ConfigError(f"range must be start:stop:step, got {text!r}") from None
        if step <= 0:
            raise ConfigError(f"range step must be positive, got {step!r}")
        n = int(math.floor((stop - start) / step + 1e-9)) + 1
        return [round(start + i * step, 12) for i in range(max(n, 0))]
    try:
        return [float(p) for p in text.split(",") if p.strip()]
    except ValueError:
        raise ConfigError(f"values must be comma-separated numbers, got {text!r}") from None


def fmt(x) -> str:
    if isinstance(x, int):
        return str(x)
    return format(float(x), ".17g")


def _rows(variable, value_text, scheme, results, trials, seed):
    sop_by_rate, sr = results
    for rate, sop in sop_by_rate.items():
        yield (
            variable, value_text, scheme, fmt(rate),
            fmt(sop.mean), fmt(sop.lo), fmt(sop.hi),
            fmt(sr.mean), fmt(sr.lo), fmt(sr.hi),
            str(trials), str(seed),
        )


def write_header(out: TextIO):
    csv.writer(out, lineterminator="\n").writerow(CSV_HEADER)


def run_scenario(scenario: ScenarioConfig, out: TextIO, workers: int = 1, header: bool = True) -> int:
    """Single-scenario run: one row per scheme per target rate."""
    writer = csv.writer(out, lineterminator="\n")
    if header:
        writer.writerow(CSV_HEADER)
    res = estimate_schemes(scenario, scenario.schemes, scenario.trials, scenario.master_seed, workers)
    count = 0
    for scheme in scenario.schemes:
        for row in _rows("none", "", scheme, res[scheme], scenario.trials, scenario.master_seed):
            writer.writerow(row)
            count += 1
    return count


def run_sweep(spec: SweepSpec, out: TextIO, workers: int = 1, progress=None) -> dict:
    """Estimate every (value, scheme) cell and write CSV rows in value order.

    Every cell reuses the base scenario's master seed, so trial ``i`` has the
    same channel draws in every cell and for every scheme. Curves are thus
    compared on common random numbers, and adding a sweep point leaves the
    other rows unchanged. A rate sweep simulates once and thresholds the
    same trials at every rate.
    """
    base = spec.base
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    rows = 0
    try:
        if spec.variable == "rate":
            res = estimate_schemes(base, base.schemes, base.trials, base.master_seed, workers,
                                   rates=spec.values)
            for value in spec.values:
                for scheme in base.schemes:
                    sop_by_rate, sr = res[scheme]
                    for row in _rows("rate", fmt(value), scheme, ({value: sop_by_rate[value]}, sr),
                                     base.trials, base.master_seed):
                        writer.writerow(row)
                        rows += 1
                if progress:
                    progress(value)
        else:
            for value in spec.values:
                cell = spec.cell(value)
                res = estimate_schemes(cell, cell.schemes, cell.trials, cell.master_seed, workers)
                for scheme in cell.schemes:
                    for row in _rows(spec.variable, fmt(value), scheme, res[scheme], cell.trials, cell.master_seed):
                        writer.writerow(row)
                        rows += 1
                out.flush()
                if progress:
                    progress(value)
    except OSError as exc:
        raise OSError(f"writing sweep output failed after {rows} rows: {exc}") from exc
    return {
        "variable": spec.variable,
        "cells": len(spec.values) * len(base.schemes),
        "rows": rows,
    }


def read_rows(path_or_file) -> list[dict]:
    """Parse sweep CSV back into dicts with float columns."""
    if isinstance(path_or_file, str):
        with open(path_or_file, newline="") as fh:
            return read_rows(fh)
    out = []
    for row in csv.DictReader(path_or_file):
        for key in ("rate", "sop", "sop_ci_lo", "sop_ci_hi", "sr", "sr_ci_lo", "sr_ci_hi"):
            row[key] = float(row[key])
        row["trials"] = int(row["trials"])
        out.append(row)
    return out


def rows_by(rows: Sequence[dict], scheme: str, rate: float | None = None) -> list[dict]:
    return [r for r in rows if r["scheme"] == scheme and (rate is None or r["rate"] == rate)]
