# Copyright 2026 The dualmpc Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      https://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import os
import subprocess

import numpy as np
import pytest

import dualmpc


def short(spec, duration=1.5):
    s = dualmpc.Scenario.from_spec(spec)
    s.duration = duration
    s.metrics_start = 0.5
    return s


def test_presets():
    assert dualmpc.preset_names() == ["stand", "trot", "asym_friction", "wrench", "compliant"]


def test_scenario_text_round_trip():
    s = dualmpc.Scenario.from_spec("wrench:baseline")
    assert s.mode == "baseline"
    t = dualmpc.Scenario.from_text(s.text())
    assert t.text() == s.text()


def test_unknown_preset_raises():
    with pytest.raises(dualmpc.DualMpcError) as e:
        dualmpc.Scenario.from_spec("nope")
    assert e.value.code == "ConfigParse"


def test_trot_run_shapes_and_determinism():
    r = dualmpc.run(short("trot"))
    n = len(r.t)
    assert n > 0
    assert r.state.shape == (n, 12)
    assert r.forces.shape == (n, 12)
    assert not r.metrics["fell"]
    assert r.metrics["fallbacks"] == 0
    assert np.all(np.diff(r.t) > 0)
    assert r.trace_csv() == dualmpc.run(short("trot")).trace_csv()


def test_write_outputs(tmp_path):
    r = dualmpc.run(short("stand", 0.5))
    r.write_outputs(tmp_path, trace=False)
    names = sorted(p.name for p in tmp_path.iterdir())
    assert "metrics.txt" in names and "robot.params" in names and "trace.csv" not in names


def test_compare_rows():
    rows = dualmpc.compare(short("trot:dual"), short("trot:baseline"))
    metrics = [r[0] for r in rows]
    assert "mse_vx" in metrics
    with pytest.raises(dualmpc.DualMpcError):
        dualmpc.compare(short("trot"), short("stand"))


def test_solve_qp_box():
    qp = dualmpc.CondensedQP(np.eye(2), np.array([-2.0, 0.5]),
                             G=np.vstack([np.eye(2), -np.eye(2)]), h=np.ones(4))
    s = dualmpc.solve_qp(qp)
    np.testing.assert_allclose(s["u"], [1.0, -0.5], atol=1e-6)
    assert s["kkt_residual"] < 1e-6


def test_positive_definite():
    assert dualmpc.check_positive_definite(np.eye(3))
    assert not dualmpc.check_positive_definite(-np.eye(3))


def test_check_subset():
    res = dualmpc.check([1, 3])
    assert [r["id"] for r in res] == [1, 3]
    assert all(r["pass"] for r in res)


def test_cli_smoke(tmp_path):
    cli = os.environ.get("DUALMPC_CLI")
    if not cli:
        pytest.skip("CLI path not provided")
    out = subprocess.run([cli, "run", "stand", "--out", str(tmp_path), "--trace", "--dump-qp", "2"],
                         capture_output=True, text=True, check=True).stdout
    assert "stand [dual]" in out
    assert (tmp_path / "trace.csv").exists()
    assert (tmp_path / "qp" / "tick0001_grf_P.csv").exists()
    bad = subprocess.run([cli, "run", "nope"], capture_output=True, text=True)
    assert bad.returncode == 2
