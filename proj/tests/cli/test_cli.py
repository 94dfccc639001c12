# Copyright 2026 The Zeitgeist Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""End-to-end checks of the zeitgeist executable: exit codes, files, determinism."""

import json
import os
import subprocess
from pathlib import Path

import pytest

BIN = os.environ.get("ZEITGEIST_BIN", "zeitgeist")

TWO_BY_TWO_ROWS = [[[0.0, 1.0], [1.0, 0.0]], [[1.0, 0.0], [0.0, 1.0]]]


def run(*args, cwd):
    return subprocess.run([BIN, *map(str, args)], cwd=cwd, capture_output=True, text=True, timeout=600)


def write_json(path, doc):
    path.write_text(json.dumps(doc, indent=1) + "\n")
    return path


@pytest.fixture(scope="module")
def example1(tmp_path_factory):
    root = tmp_path_factory.mktemp("ex1")
    res = run("build", "--out", root / "cfg", "example1", cwd=root)
    assert res.returncode == 0, res.stderr
    return root / "cfg"


@pytest.fixture
def anti_coordination(tmp_path):
    # Success iff the strategies differ: no symmetric equilibrium, so no EZ
    # when both groups know the truth.
    env = write_json(tmp_path / "env.json", {
        "strategies": ["x", "y"],
        "consequences": ["g", "b"],
        "utility": [1, 0],
        "situations": [{"name": "S", "kernel": {"type": "table", "rows": TWO_BY_TWO_ROWS}}],
    })
    model = write_json(tmp_path / "model.json", {
        "label": "correct",
        "kernels": [{"type": "table", "rows": TWO_BY_TWO_ROWS}],
    })
    return env, model


def small_sim(path, horizon=200, seed=5):
    return write_json(path, {"n_agents": 60, "shares": [0.5, 0.5], "tau": 0.95, "horizon": horizon,
                             "seed": seed, "threads": 1})


def test_build_writes_listed_files(example1):
    manifest = json.loads((example1 / "manifest.json").read_text())
    assert manifest["exit_code"] == 0
    assert sorted(manifest["outputs"]) == sorted(p.name for p in example1.iterdir() if p.name != "manifest.json")


def test_solve_example1_reports_both_situations(example1, tmp_path):
    res = run("solve-ez", "--env", example1 / "env.json", "--model-a", example1 / "model_a.json",
              "--model-b", example1 / "model_a.json", "--shares", "1,0", "--out", tmp_path / "o", cwd=tmp_path)
    assert res.returncode == 0, res.stderr
    doc = json.loads((tmp_path / "o" / "ez.json").read_text())
    assert {r["situation"] for r in doc["records"]} == {"G_A", "G_B"}
    assert doc["ez_count"] > 0
    manifest = json.loads((tmp_path / "o" / "manifest.json").read_text())
    assert sorted(manifest["outputs"]) == ["ez.json", "ez.txt"]


def test_missing_file_is_a_usage_error(example1, tmp_path):
    res = run("solve-ez", "--env", tmp_path / "nope.json", "--model-a", example1 / "model_a.json",
              "--model-b", example1 / "model_a.json", "--shares", "1,0", "--out", tmp_path / "o", cwd=tmp_path)
    assert res.returncode == 1


def test_no_equilibrium_exits_2_with_empty_list(anti_coordination, tmp_path):
    env, model = anti_coordination
    res = run("solve-ez", "--env", env, "--model-a", model, "--model-b", model, "--shares", "0.5,0.5",
              "--out", tmp_path / "o", cwd=tmp_path)
    assert res.returncode == 2, res.stderr
    doc = json.loads((tmp_path / "o" / "ez.json").read_text())
    assert doc["records"] == []
    assert doc["ez_count"] == 0


def test_malformed_config_names_the_line(anti_coordination, tmp_path):
    env, model = anti_coordination
    text = env.read_text().splitlines()
    line = next(i for i, s in enumerate(text) if '"utility"' in s)
    text[line] += " @"
    bad = tmp_path / "bad.json"
    bad.write_text("\n".join(text) + "\n")
    res = run("solve-ez", "--env", bad, "--model-a", model, "--model-b", model, "--shares", "1,0",
              "--out", tmp_path / "o", cwd=tmp_path)
    assert res.returncode == 1
    assert f"bad.json:{line + 1}:" in res.stderr


def test_bad_shares_are_a_usage_error(anti_coordination, tmp_path):
    env, model = anti_coordination
    res = run("solve-ez", "--env", env, "--model-a", model, "--model-b", model, "--shares", "0.7,0.7",
              "--out", tmp_path / "o", cwd=tmp_path)
    assert res.returncode == 1


def test_learn_is_byte_identical_for_a_seed(example1, tmp_path):
    sim = small_sim(tmp_path / "sim.json")
    outs = []
    for name in ("r1", "r2"):
        res = run("learn", "--env", example1 / "env.json", "--model-a", example1 / "model_a.json",
                  "--model-b", example1 / "model_a.json", "--sim", sim, "--window", 50, "--out", tmp_path / name,
                  cwd=tmp_path)
        assert res.returncode == 0, res.stderr
        outs.append((tmp_path / name / "trajectory.tsv").read_bytes())
    assert outs[0] == outs[1]
    assert len(outs[0].splitlines()) == 1 + 2 * 200

    res = run("learn", "--env", example1 / "env.json", "--model-a", example1 / "model_a.json",
              "--model-b", example1 / "model_a.json", "--sim", sim, "--seed", 6, "--window", 50,
              "--out", tmp_path / "r3", cwd=tmp_path)
    assert res.returncode == 0
    assert (tmp_path / "r3" / "trajectory.tsv").read_bytes() != outs[0]
    manifest = json.loads((tmp_path / "r3" / "manifest.json").read_text())
    assert manifest["seed"] == 6


def test_learn_horizon_zero(example1, tmp_path):
    sim = small_sim(tmp_path / "sim.json", horizon=0)
    res = run("learn", "--env", example1 / "env.json", "--model-a", example1 / "model_a.json",
              "--model-b", example1 / "model_a.json", "--sim", sim, "--out", tmp_path / "o", cwd=tmp_path)
    assert res.returncode == 2
    cmp = json.loads((tmp_path / "o" / "comparison.json").read_text())
    assert cmp["converged"] is False
    assert len((tmp_path / "o" / "trajectory.tsv").read_text().splitlines()) == 1


def test_reproduce_only_centipede(tmp_path):
    res = run("reproduce", "--only", "centipede", "--out", tmp_path / "o", cwd=tmp_path)
    assert res.returncode == 0, res.stdout
    rows = json.loads((tmp_path / "o" / "reproduce.json").read_text())
    assert [r["fixture"] for r in rows] == ["centipede"]
    assert rows[0]["pass"] is True


def test_reproduce_unknown_fixture(tmp_path):
    assert run("reproduce", "--only", "nonsense", "--out", tmp_path / "o", cwd=tmp_path).returncode == 1


def test_tampered_example1_fails_with_a_diff(example1, tmp_path):
    doc = json.loads((example1 / "env.json").read_text())
    # G_A, (a2, a2): 0.3 becomes 0.31.
    doc["situations"][0]["kernel"]["rows"][1][1] = [0.31, 0.69]
    tampered = write_json(tmp_path / "tampered.json", doc)
    res = run("reproduce", "--only", "example1", "--example1-env", tampered, "--out", tmp_path / "o", cwd=tmp_path)
    assert res.returncode == 3
    rows = json.loads((tmp_path / "o" / "reproduce.json").read_text())
    assert rows[0]["pass"] is False
    table = next(c for c in rows[0]["checks"] if c["name"] == "success tables")
    assert "G_A(a2,a2)=0.31 want 0.3" in table["actual"]
