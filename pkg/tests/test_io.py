import json

import numpy as np
import pytest

from surfgrow import (Grid1D, MaterialParams, ParseError, RunResult,
                      ScenarioConfig, StepRecord, ValidationError, parse_config,
                      read_snapshot, run_fdm_shear, write_fields)
from surfgrow.config import read_pairs
from surfgrow.output import SNAPSHOT_COLUMNS
from surfgrow.tensors import identity


def write_cfg(tmp_path, text, name="case.cfg"):
    p = tmp_path / name
    p.write_text(text, encoding="utf-8")
    return p


MINIMAL = """\
# minimal sheared-attachment setup
kind = non_normal
alpha = 0.5
G = 1.0
mu = 0.1
V_G = 1.0
t_end = 1.0
"""


def test_parse_minimal_config_applies_defaults(tmp_path):
    cfg = parse_config(write_cfg(tmp_path, MINIMAL))
    assert cfg.kind == "non_normal"
    assert cfg.n_cells == 200
    assert cfg.height0 == 0.0
    dt, n_steps = cfg.resolve_dt()
    assert dt == pytest.approx(1.0 / 800)
    assert n_steps * dt == pytest.approx(cfg.t_end)


def test_parse_rejects_negative_modulus(tmp_path):
    with pytest.raises(ValidationError, match="G"):
        parse_config(write_cfg(tmp_path, "kind = non_normal\nG = -2.0\n"))


def test_parse_rejects_unknown_key(tmp_path):
    with pytest.raises(ParseError, match="wobble"):
        parse_config(write_cfg(tmp_path, "kind = thermal\nwobble = 3\n"))


def test_parse_reports_line_numbers():
    with pytest.raises(ParseError, match="line 2"):
        read_pairs("kind = thermal\nnot a pair\n")
    with pytest.raises(ParseError, match="line 3"):
        read_pairs("kind = thermal\n\nalpha = oops\n")
    with pytest.raises(ParseError, match="duplicate"):
        read_pairs("kind = thermal\nkind = thermal\n")


def test_parse_missing_file():
    with pytest.raises(ParseError, match="not found"):
        parse_config("/nonexistent/path.cfg")


def test_parse_mu_sweep_list(tmp_path):
    cfg = parse_config(write_cfg(tmp_path,
                                 MINIMAL + "mu_sweep = 0.5, 0.25, 0.125\n"))
    assert cfg.sweep_values() == (0.5, 0.25, 0.125)


def _tiny_config(n_cells=16):
    return ScenarioConfig(kind="fdm_shear", params=MaterialParams(mu=1.0),
                          H0=1.0, n_cells=n_cells, t_end=0.5, n_snapshots=3)


def test_write_fields_empty_history(tmp_path):
    manifest = write_fields(RunResult(config=_tiny_config(), history=[]),
                            tmp_path / "out")
    assert manifest.snapshots == []
    lines = (tmp_path / "out" / "metrics.jsonl").read_text().splitlines()
    header = json.loads(lines[0])
    assert header["type"] == "header" and len(lines) == 1


def test_write_fields_single_snapshot_row_count(tmp_path):
    grid = Grid1D(4, 1.0)
    rec = StepRecord(t=0.0, grid=grid, v_nodes=np.zeros(5),
                     grad_v=np.zeros((4, 2, 2)), F_e=identity((4,)),
                     p=np.ones(4), rho=np.ones(4),
                     metrics={k: 0.0 for k in
                              ("t", "H", "mass_residual", "momentum_residual",
                               "traction_residual", "system_residual",
                               "det_drift", "max_F_e21", "max_p_dev")})
    result = RunResult(config=_tiny_config(), history=[rec])
    manifest = write_fields(result, tmp_path / "out")
    lines = (tmp_path / "out" / "snapshot_0000.csv").read_text().splitlines()
    assert lines[0] == ",".join(SNAPSHOT_COLUMNS)
    assert len(lines) == 5
    assert len(manifest.snapshots) == 1


def test_snapshot_roundtrip_is_bitwise(tmp_path):
    res = run_fdm_shear(_tiny_config())
    write_fields(res, tmp_path / "out")
    data = read_snapshot(tmp_path / "out" / "snapshot_0000.csv")
    rec = res.history[0]
    np.testing.assert_array_equal(data["x2"], rec.grid.centers)
    np.testing.assert_array_equal(data["Fe12"], rec.F_e[:, 0, 1])
    np.testing.assert_array_equal(data["p"], rec.p)
    v1 = 0.5 * (rec.v_nodes[:-1] + rec.v_nodes[1:])
    np.testing.assert_array_equal(data["v1"], v1)


def test_reruns_are_byte_identical(tmp_path):
    for sub in ("a", "b"):
        write_fields(run_fdm_shear(_tiny_config()), tmp_path / sub)
    names = sorted(p.name for p in (tmp_path / "a").iterdir())
    assert names == sorted(p.name for p in (tmp_path / "b").iterdir())
    for name in names:
        assert (tmp_path / "a" / name).read_bytes() == \
            (tmp_path / "b" / name).read_bytes(), name


def test_manifest_matches_directory(tmp_path):
    res = run_fdm_shear(_tiny_config())
    manifest = write_fields(res, tmp_path / "out", duration_seconds=1.25)
    on_disk = {p.name for p in (tmp_path / "out").iterdir()}
    assert on_disk == {f["name"] for f in manifest.files} | {"manifest.json"}
    parsed = json.loads((tmp_path / "out" / "manifest.json").read_text())
    assert parsed["duration_seconds"] == 1.25
    assert parsed["version"] and parsed["config"]["kind"] == "fdm_shear"
    assert all(len(f["sha256"]) == 64 for f in parsed["files"])
