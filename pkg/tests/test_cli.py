import json

import pytest

from contactbundles import cli
from contactbundles.errors import ConfigError
from contactbundles.scenarios import SCENARIOS, TOLERANCES, ScenarioConfig


def small(name, **kw):
    return ScenarioConfig(name, seed=kw.pop("seed", 42), samples=kw.pop("samples", 10),
                          tolerances=kw.pop("tolerances", {}), out=None, threads=kw.pop("threads", 1))


@pytest.fixture(scope="module")
def std_report():
    return cli.run(small("std_contact"))


def test_list_scenarios(capsys):
    assert cli.main(["--list-scenarios"]) == 0
    names = capsys.readouterr().out.split()
    assert names == list(SCENARIOS)
    assert len(names) == 10


def test_std_contact_passes(std_report):
    assert std_report["status"] == "PASS"
    assert all(c["status"] == "PASS" and c["witness"] is None for c in std_report["checks"])
    assert set(std_report) == {"scenario", "config", "checks", "status", "wall_clock_seconds",
                               "version"}
    assert set(std_report["checks"][0]) == {"name", "status", "value", "threshold", "comparison",
                                            "witness"}


def test_report_round_trip(std_report):
    text = cli.dumps(std_report)
    assert cli.dumps(json.loads(text)) == text


def test_determinism(std_report):
    again = cli.run(small("std_contact", threads=4))
    a, b = cli.strip_clock(std_report), cli.strip_clock(again)
    assert cli.dumps(a) == cli.dumps(b)


def test_negative_controls_fail_with_witness():
    rep = cli.run(small("negative_controls", samples=10))
    assert rep["status"] == "FAIL"
    assert all(c["status"] == "FAIL" and c["witness"] is not None for c in rep["checks"])
    keeps = cli.companions(small("negative_controls", samples=10))
    assert all(c["status"] == "PASS" for c in keeps)


def test_main_writes_report(tmp_path, capsys):
    out = tmp_path / "r.json"
    code = cli.main(["--scenario", "hopf_fatness", "--samples", "10", "--out", str(out),
                     "--tol-fat", "1e-5"])
    assert code == 0
    rep = json.loads(out.read_text())
    assert rep["config"]["tolerances"]["fat"] == 1e-5
    assert "PASS" in capsys.readouterr().err


def test_main_exit_one_on_fail(tmp_path):
    out = tmp_path / "r.json"
    assert cli.main(["--scenario", "negative_controls", "--samples", "5", "--out", str(out)]) == 1


@pytest.mark.parametrize("argv", [
    ["--scenario", "nope"],
    [],
    ["--scenario", "std_contact", "--samples", "0"],
    ["--scenario", "std_contact", "--bogus"],
])
def test_config_errors_exit_two(argv):
    assert cli.main(argv) == 2


def test_config_file(tmp_path):
    good = tmp_path / "good.ini"
    good.write_text("[run]\nscenario = std_contact\nseed = 7\nsamples = 5\n"
                    "[tolerances]\npf = 1e-7\n")
    args = cli.build_parser().parse_args(["--config", str(good), "--seed", "8"])
    cfg = cli.config_from_args(args)
    assert (cfg.scenario, cfg.seed, cfg.samples, cfg.tolerances) == ("std_contact", 8, 5,
                                                                      {"pf": 1e-7})
    for text in ("[run]\nscenario = std_contact\ncolour = red\n",
                 "[extra]\nx = 1\n",
                 "[tolerances]\nnot_a_tolerance = 1\n",
                 "[tolerances]\npf = abc\n"):
        bad = tmp_path / "bad.ini"
        bad.write_text(text)
        with pytest.raises(ConfigError):
            cli.read_config(str(bad))
        assert cli.main(["--config", str(bad), "--scenario", "std_contact"]) == 2


def test_unknown_tolerance_rejected_by_run():
    with pytest.raises(ConfigError):
        cli.run(small("std_contact", tolerances={"nonsense": 1.0}))


def test_every_tolerance_has_a_flag():
    args = cli.build_parser().parse_args(["--scenario", "std_contact"])
    for name in TOLERANCES:
        assert hasattr(args, f"tol_{name}")
