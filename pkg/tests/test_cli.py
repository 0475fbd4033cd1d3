import dataclasses
import json

import numpy as np
import pytest

from eocomb import cli
from eocomb import threemode as tm
from eocomb.config import ConfigError, config_from_dict, emit_config, parse_config
from eocomb.selftest import battery_scattering, random_battery, run_selftest
from eocomb.sweep import evaluate_point, run_sweep

FOUR_PUMP = {
    "model": "comb",
    "parameters": {"c": 1.0, "n_pumps": 4, "kappa_opt": 1.75, "kappa_mw": 12.4, "eta_opt": 0.8, "eta_mw": 0.5},
    "quantities": ["n_out", "bandwidth"],
}


def small_grid(fmt="csv"):
    return config_from_dict({
        "model": "three_mode",
        "parameters": {"c1": 0.5, "c2": 0.5},
        "sweep": [{"name": "c1", "start": 0.0, "stop": 3.0, "count": 6},
                  {"name": "c2", "start": 0.1, "stop": 3.0, "count": 5}],
        "quantities": ["n_out", "squeezing", "metrics", "fidelity", "capacity"],
        "output": {"format": fmt},
    })


def test_minimal_config_gets_defaults():
    cfg = parse_config('{"model": "three_mode", "parameters": {"c1": 0.5, "c2": 0.9}}')
    assert cfg.parameters["eta"] == 1.0
    assert cfg.parameters["kappa"] == 1.0
    assert cfg.parameters["n_ext"] == cfg.parameters["n_int"] == 0.0
    assert cfg.quantities == ("n_out",)
    assert cfg.output == {"path": None, "format": "csv"}
    comb = config_from_dict({"model": "comb", "parameters": {"c": 1.0}})
    assert comb.parameters["n_pumps"] == 1


@pytest.mark.parametrize("bad, field", [
    ({"model": "three_mode", "parameters": {"c1": 0.5, "c2": 0.9, "colour": 1}}, "colour"),
    ({"model": "three_mode", "parameters": {"c1": 0.5, "c2": 0.9}, "extra": 1}, "extra"),
    ({"model": "three_mode", "parameters": {"c1": -0.5, "c2": 0.9}}, "c1"),
    ({"model": "three_mode", "parameters": {"c1": 0.5, "c2": 0.9, "eta": 1.2}}, "eta"),
    ({"model": "comb", "parameters": {"c": 1.0, "n_pumps": 0}}, "n_pumps"),
    ({"model": "comb", "parameters": {"c": 1.0, "kappa_mw": 0.0}}, "kappa_mw"),
    ({"model": "three_mode", "parameters": {"c1": 0.5}}, "c2"),
    ({"model": "ring", "parameters": {}}, "model"),
    ({"model": "comb", "parameters": {"c": 1.0, "temperature_K": 0.01}}, "mw_frequency_GHz"),
])
def test_config_errors_name_the_field(bad, field):
    with pytest.raises(ConfigError, match=field):
        config_from_dict(bad)


def test_at_most_two_axes():
    axis = {"start": 0.0, "stop": 1.0, "count": 2}
    with pytest.raises(ConfigError, match="at most 2"):
        config_from_dict({"model": "three_mode", "parameters": {"c1": 0.5, "c2": 0.5},
                          "sweep": [dict(axis, name=n) for n in ("c1", "c2", "eta")]})


def test_round_trip_and_four_pump_comb_config():
    cfg = config_from_dict(FOUR_PUMP)
    assert parse_config(emit_config(cfg)) == cfg
    grid = small_grid()
    assert parse_config(emit_config(grid)) == grid
    table = run_sweep(cfg)
    assert table.column("bandwidth__plus")[0] == pytest.approx(1.11, abs=0.02)


def test_unstable_point_is_flagged_not_rejected():
    cfg = config_from_dict({"model": "three_mode", "parameters": {"c1": 0.5, "c2": 1.6}})
    table = run_sweep(cfg)
    assert table.flags == ["unstable"]
    values, flag = evaluate_point("three_mode", cfg.parameters, ["n_out"], cfg.protocol)
    assert flag == "unstable" and all(np.isnan(values))


def test_every_unstable_grid_point_is_flagged():
    table = run_sweep(small_grid(), jobs=1)
    c1, c2 = table.column("c1"), table.column("c2")
    for a, b, flag in zip(c1, c2, table.flags):
        assert (flag in ("unstable", "at_threshold")) == (b >= 1 + a - 1e-12)


def test_sweep_is_deterministic_and_job_independent():
    cfg = small_grid()
    a = run_sweep(cfg, jobs=1).to_csv()
    assert a == run_sweep(cfg, jobs=1).to_csv()
    assert a == run_sweep(cfg, jobs=2).to_csv()


def test_output_formats():
    table = run_sweep(small_grid(), jobs=1)
    csv = table.to_csv().splitlines()
    assert csv[0].startswith("# tool: eocomb")
    header = next(line for line in csv if not line.startswith("#"))
    assert header.split(",")[:3] == ["c1", "c2", "n_out__plus"]
    assert header.endswith(",flag")
    doc = json.loads(table.to_json())
    assert set(doc) == {"metadata", "columns", "rows"}
    assert len(doc["rows"]) == 30
    assert doc["metadata"]["points"] == 30


def test_single_point_sweep_equals_direct_evaluation():
    p = tm.ThreeModeParams.symmetric(0.5, 0.9)
    cfg = config_from_dict({"model": "three_mode", "parameters": {"c1": 0.5, "c2": 0.9},
                            "sweep": [{"name": "c1", "start": 0.5, "stop": 0.5, "count": 1}]})
    row = run_sweep(cfg).rows[0]
    assert row[1:4] == pytest.approx(list(tm.output_spectra(p, 0.0)), rel=1e-12)


def test_main_exit_codes(tmp_path, capsys):
    out = tmp_path / "s.csv"
    assert cli.main(["spectra", "--set", "c1=0.5", "--set", "c2=0.9", "--out", str(out)]) == 0
    assert "n_out__plus" in out.read_text()
    capsys.readouterr()
    assert cli.main(["spectra", "--set", "c1=0.5", "--set", "c2=1.6"]) == 2
    assert "unstable" in capsys.readouterr().err
    assert cli.main(["spectra", "--set", "c1=0.5", "--set", "c2=-1"]) == 1
    assert "c2" in capsys.readouterr().err
    cfg = tmp_path / "comb.json"
    cfg.write_text(json.dumps(FOUR_PUMP))
    assert cli.main(["sweep", "--config", str(cfg), "--format", "json", "--quantity", "squeezing"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert "dq_minus__mp" in doc["columns"]


def test_selftest_passes_quickly(capsys):
    assert cli.main(["selftest", "--quick"]) == 0
    text = capsys.readouterr().out
    assert "FAIL" not in text
    assert "D2" in text


def test_perturbed_t15_sign_fails_oracle_battery():
    def flipped(p, w):
        s = tm.scattering_matrix(p, w)
        t = np.array(s.coefficients)
        t[0, 4] = -t[0, 4]
        return dataclasses.replace(s, coefficients=t)

    assert not battery_scattering(flipped, random_battery(10)).passed
    report = run_selftest(flipped, battery_size=10, include_slow=False)
    assert not report.passed
    assert battery_scattering(tm.scattering_matrix, random_battery(10)).passed
