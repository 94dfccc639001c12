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

"""Smoke tests for the Python module."""

import json
import math

import pytest

import zeitgeist as zg


def test_version():
    assert zg.__version__.count(".") == 2


def test_kl():
    assert zg.kl_divergence([0.5, 0.5], [0.5, 0.5]) == 0.0
    assert zg.kl_divergence([0.0, 1.0], [0.5, 0.5]) == pytest.approx(math.log(2))
    assert zg.kl_divergence([0.5, 0.5], [1.0, 0.0]) == math.inf
    with pytest.raises(ValueError):
        zg.kl_divergence([1.0], [0.5, 0.5])


def test_example1_game_theory():
    env = zg.example1()
    assert env.strategies == ["a1", "a2", "a3"]
    assert env.payoff("G_A", "a2", "a2") == pytest.approx(0.3)
    assert zg.symmetric_nash(env, 1)["v_ne"] == pytest.approx(0.4)
    assert zg.stackelberg(env, 0) == ("a2", pytest.approx(0.3))
    assert zg.stackelberg(env, 1) == ("a1", pytest.approx(0.5))


def test_example1_fragile_against_illusion():
    env = zg.example1()
    verdict = zg.classify_stability(env, zg.minimal_correct_model(env), zg.illusion_of_control_model(env, 0.01),
                                    [0.5, 0.5], [0.01, 0.005, 0.001])
    assert verdict["classification"] == "Fragile"
    assert len(verdict["evidence"]) == 3


def test_investment_equilibria():
    g = zg.investment_game()
    per_situation = zg.solve_ez(g["env"], g["model_a"], g["model_b"], 0.0, 1.0)
    assert len(per_situation) == 1
    (only,) = per_situation[0]
    labels = g["env"].strategies
    assert only["play"] == (labels[0], labels[0], labels[0], labels[1])
    assert only["fitness_a"] == pytest.approx(2.0)
    assert only["fitness_b"] == pytest.approx(2.5)
    assert zg.detect_reversal(g["env"], g["model_a"], g["model_b"])["reversal"]


def test_closed_forms():
    assert zg.cournot()["a_AA"] == pytest.approx(8 / 3, abs=1e-12)
    rep = zg.centipede(10, 1.0, 2.0)
    assert rep["analogy_minimizer_x"] == pytest.approx(0.2, abs=1e-6)
    assert rep["p_star_b"] == pytest.approx(0.75, abs=1e-9)
    assert zg.dollar(10)["dominance"]


def test_config_round_trip():
    env = zg.example1()
    back = zg.parse_env(env.to_json())
    assert back.to_json() == env.to_json()
    model = zg.parse_model(zg.minimal_correct_model(env).to_json(env), env)
    assert model.size == 2 * 9
    with pytest.raises(ValueError, match="<env>:1"):
        zg.parse_env("{")


def test_learning_is_deterministic():
    env = zg.example1()
    m = zg.minimal_correct_model(env)
    sim = json.dumps({"n_agents": 60, "shares": [0.5, 0.5], "tau": 0.95, "horizon": 200, "seed": 3})
    x = zg.run_learning(env, m, m, sim, window=50)
    y = zg.run_learning(env, m, m, sim, window=50)
    assert x["periods"] == 200
    assert x["payoff_a"] == y["payoff_a"]
    assert math.isclose(sum(x["final_belief_b"]), 1.0, abs_tol=1e-9)
