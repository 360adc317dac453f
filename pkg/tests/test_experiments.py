import io
import math

import numpy as np
import pytest

from ris_secrecy.channel import Position2D
from ris_secrecy.experiments.config import (
    CONFIG_KEYS,
    ConfigError,
    ScenarioConfig,
    apply_overrides,
    dump_config,
    load_config,
)
from ris_secrecy.experiments.selftest import selftest
from ris_secrecy.experiments.sweep import CSV_HEADER, SweepSpec, parse_values, read_rows, run_sweep
from ris_secrecy.experiments.validate import validate
from ris_secrecy.phase_design import heuristic_min_eve


def test_empty_config_is_default_scenario():
    cfg = load_config("")
    assert cfg == ScenarioConfig()
    assert cfg.k_elems == 144 and cfg.rates == (1.0,)
    r = cfg.radio
    assert (r.ptx_dbm, r.noise_figure, r.bandwidth, r.pathloss_exponent, r.carrier_freq) == (20, 6, 1e7, -2.5, 2.1e9)
    assert (cfg.k_sr, cfg.k_rd, cfg.k_re) == (3, 0.5, 1.25)
    assert (cfg.pos_s, cfg.pos_r, cfg.pos_d, cfg.pos_e) == ((0, 0), (10, 10), (70, 0), (70, -10))


def test_single_override():
    cfg = load_config("k_elems = 196\n")
    assert cfg == ScenarioConfig(k_elems=196)


def test_full_document():
    text = """
    # comment line
    k_elems = 100      # trailing comment
    rates = 0, 0.5, 1
    schemes = opt, max_main
    pos_e = (70, -20)
    ptx_dbm = 40
    pathloss_convention = inverse
    master_seed = 0x10
    trials = 1e3
    """
    cfg = load_config(text)
    assert cfg.k_elems == 100
    assert cfg.rates == (0.0, 0.5, 1.0)
    assert cfg.schemes == ("opt", "max_main")
    assert cfg.pos_e == Position2D(70, -20)
    assert cfg.radio.ptx_dbm == 40 and cfg.radio.pathloss_convention == "inverse"
    assert cfg.master_seed == 16 and cfg.trials == 1000


@pytest.mark.parametrize("text, fragment", [
    ("k_elems = 0", "k_elems"),
    ("trials = 0", "trials"),
    ("k_sr = -1", "k_sr"),
    ("rates = -0.5", "rates"),
    ("schemes = opt, best", "schemes"),
    ("bandwidth = 0", "bandwidth"),
    ("pathloss_convention = friis", "pathloss_convention"),
    ("k_elems = 2.5", "k_elems"),
    ("pos_s = 1", "pos_s"),
    ("color = blue", "unknown key"),
    ("k_elems 10", "line 1"),
    ("\n\nk_elems = 4\nk_elems = 5", "line 4"),
    ("ptx_dbm = loud", "ptx_dbm"),
])
def test_config_errors(text, fragment):
    with pytest.raises(ConfigError, match=fragment):
        load_config(text)


def test_overrides_and_round_trip():
    cfg = apply_overrides(ScenarioConfig(), ["k_elems=64", "ptx_dbm = 30", "rates=0.5,2"])
    assert cfg.k_elems == 64 and cfg.radio.ptx_dbm == 30 and cfg.rates == (0.5, 2.0)
    assert load_config(dump_config(cfg)) == cfg
    with pytest.raises(ConfigError):
        apply_overrides(cfg, ["nonsense=1"])
    with pytest.raises(ConfigError):
        apply_overrides(cfg, ["k_elems"])


def test_config_keys_cover_scenario():
    assert "pathloss_convention" in CONFIG_KEYS
    assert set(CONFIG_KEYS) >= {"k_elems", "k_sr", "k_rd", "k_re", "rates", "trials", "master_seed", "schemes"}


def test_parse_values():
    assert parse_values("0:1:0.25") == [0.0, 0.25, 0.5, 0.75, 1.0]
    assert parse_values("10, 20,30") == [10.0, 20.0, 30.0]
    assert len(parse_values("0:4:0.25")) == 17
    with pytest.raises(ConfigError):
        parse_values("0:1:0")


def _sweep(variable, values, workers=1, **base):
    scen = ScenarioConfig(**{"k_elems": 16, "trials": 300, "rates": (0.5, 1.0), **base})
    buf = io.StringIO()
    summary = run_sweep(SweepSpec(variable, tuple(values), scen), buf, workers=workers)
    return buf.getvalue(), summary


def test_sweep_row_count_and_ranges():
    text, summary = _sweep("k_sr", [0, 5], schemes=("opt", "ran", "max_main"))
    rows = read_rows(io.StringIO(text))
    assert text.splitlines()[0] == ",".join(CSV_HEADER)
    assert len(rows) == summary["rows"] == 2 * 3 * 2
    for r in rows:
        assert 0 <= r["sop"] <= 1 and r["sr"] >= 0
        assert r["sop_ci_lo"] <= r["sop"] <= r["sop_ci_hi"]
        assert r["sr_ci_lo"] <= r["sr"] <= r["sr_ci_hi"]


def test_rate_sweep_one_row_per_scheme_per_value():
    text, summary = _sweep("rate", [0, 0.5, 1, 2])
    rows = read_rows(io.StringIO(text))
    assert len(rows) == 4 * 2
    opt = [r["sop"] for r in rows if r["scheme"] == "opt"]
    assert opt == sorted(opt)


def test_single_value_single_trial_sweep():
    text, _ = _sweep("k_elems", [10], trials=1)
    rows = read_rows(io.StringIO(text))
    assert len(rows) == 2 * 2
    assert all(r["trials"] == 1 and r["value"] == "10" for r in rows)
    assert all(math.isinf(r["sr_ci_hi"]) for r in rows)


def test_sweep_byte_identical_and_worker_independent():
    a, _ = _sweep("k_elems", [8, 600], trials=700)
    b, _ = _sweep("k_elems", [8, 600], trials=700)
    c, _ = _sweep("k_elems", [8, 600], trials=700, workers=4)
    assert a == b == c


def test_adding_sweep_point_keeps_other_rows():
    a, _ = _sweep("ptx_dbm", [10, 30])
    b, _ = _sweep("ptx_dbm", [10, 20, 30])
    rows_a = a.splitlines()[1:]
    rows_b = b.splitlines()[1:]
    assert set(rows_a) <= set(rows_b)


def test_seventeen_significant_digits():
    text, _ = _sweep("k_rd", [0.1])
    row = read_rows(io.StringIO(text))[0]
    line = text.splitlines()[1].split(",")
    assert float(line[4]) == row["sop"]
    assert line[1] == format(0.1, ".17g")


def test_sweep_spec_validation():
    scen = ScenarioConfig()
    with pytest.raises(ConfigError):
        SweepSpec("colour", (1,), scen)
    with pytest.raises(ConfigError):
        SweepSpec("k_elems", (), scen)
    with pytest.raises(ConfigError):
        SweepSpec("k_elems", (0,), scen)
    with pytest.raises(ConfigError):
        SweepSpec("rate", (-1,), scen)


def test_selftest_all_pass():
    failed = [name for name, ok in selftest() if not ok]
    assert not failed


def test_validate_default_passes():
    report = validate(levels=16, trials=100)
    assert report.passed, report.lines()


def test_validate_detects_sign_flip():
    def flipped(g_sr, g_re):
        # conjugation sign error: uses +arg(g_sr) instead of -arg(g_sr)
        return heuristic_min_eve(np.conj(g_sr), g_re)

    report = validate(levels=8, trials=40, designer=flipped)
    checks = {c.name: c for c in report.checks}
    assert not checks["pair-cancellation"].passed
    assert checks["pair-cancellation"].failures
    assert not report.passed
    assert "seed=" in checks["pair-cancellation"].line()
