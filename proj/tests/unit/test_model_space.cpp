// Copyright 2026 The Zeitgeist Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <random>

#include "doctest.h"
#include "fixtures.hpp"
#include "oracle.hpp"
#include "zeitgeist/games_catalog.hpp"

using namespace zeitgeist;

namespace {

// Rows that do not sum to one, bypassing the table validation.
class BrokenKernel final : public Kernel {
 public:
  BrokenKernel() { log_ = {std::log(0.5), std::log(0.2)}; }
  Index num_strategies() const override { return 3; }
  Index num_consequences() const override { return 2; }
  DistView row(Index, Index) const override { return {0, mass_, log_, true}; }

 private:
  std::vector<double> mass_{0.5, 0.2};
  std::vector<double> log_;
};

const std::vector<std::vector<double>> kSame = {{0.2, 0.4, 0.3}, {0.4, 0.1, 0.5}, {0.3, 0.5, 0.6}};

}  // namespace

TEST_CASE("minimal correct model sizes") {
  const StageEnv env = build_example1();
  const Model m = minimal_correct_model(env);
  CHECK(m.size() == 18);
  CHECK(m.kernels().size() == 2);
  CHECK(m.strategic_certainty_form());
  for (Index i = 0; i < m.size(); ++i) {
    const Parameter p = m.parameter(i);
    CHECK(m.sc_index(p.kernel, p.conj_a, p.conj_b) == i);
  }
  CHECK_THROWS_AS(m.parameter(18), InputError);

  const StageEnv one = fixtures::success_env({kSame});
  CHECK(minimal_correct_model(one).kernels().size() == 1);
  const StageEnv twin = fixtures::success_env({kSame, kSame});
  const Model dedup = minimal_correct_model(twin);
  CHECK(dedup.kernels().size() == 1);
  CHECK(dedup.size() == 9);
}

TEST_CASE("singleton models") {
  const StageEnv env = build_example1();
  const Model dogmatic = singleton_model(env, env.kernel_ptr(0));
  CHECK(dogmatic.size() == 9);
  CHECK(dogmatic.kernels().size() == 1);
  CHECK_THROWS_AS(singleton_model(env, std::make_shared<BrokenKernel>()), InputError);
  CHECK_THROWS_AS(singleton_model(env, std::make_shared<BlindKernel>(3, std::vector<std::vector<double>>{{1, 0, 0}})),
                  InputError);

  const Model illusion = illusion_of_control_model(env, 1e-3);
  const Model single = singleton_model(env, illusion.kernels()[0], "illusion-A");
  CHECK(single.label() == "illusion-A");
  CHECK(single.kernel(0).dense_row(1, 0) == illusion.kernel(0).dense_row(1, 2));
}

TEST_CASE("illusion kernels approach the stackelberg-response rows") {
  const StageEnv env = build_example1();
  const Model m = illusion_of_control_model(env, 1e-10);
  REQUIRE(m.kernels().size() == 2);
  REQUIRE(m.perturb_eps.has_value());
  const double want[2][3] = {{0.1, 0.3, 0.2}, {0.5, 0.14, 0.4}};
  for (Index k = 0; k < 2; ++k)
    for (Index a = 0; a < 3; ++a)
      for (Index opp = 0; opp < 3; ++opp) CHECK(m.kernel(k).dense_row(a, opp)[0] == doctest::Approx(want[k][a]).epsilon(1e-8));
  CHECK_THROWS_AS(illusion_of_control_model(env, 0.0), InputError);
  CHECK_THROWS_AS(illusion_of_control_model(env, 0.2), InputError);
}

TEST_CASE("illusion model: dominant stackelberg strategy and strategic independence") {
  std::mt19937_64 rng(5);
  int built = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const auto f = oracle::random_fixture(rng, 2 + trial % 3, 2 + trial % 2, 1, false);
    const StageEnv& env = *f.env;
    const Stackelberg st = stackelberg(env, 0);
    if (!st.unique) continue;
    Model m = minimal_correct_model(env);
    try {
      m = illusion_of_control_model(env, 1e-6);
    } catch (const ConstructionError&) {
      continue;
    }
    ++built;
    CHECK(m.kernels().size() == 1);
    for (Index conj = 0; conj < env.num_strategies(); ++conj) {
      std::vector<double> v(env.num_strategies());
      for (Index a = 0; a < v.size(); ++a) v[a] = oracle::payoff(env, m.kernel(0), a, conj);
      CHECK(argmax_set(v) == std::vector<Index>{st.strategy});
    }
  }
  CHECK(built > 100);
}

TEST_CASE("identifiability") {
  const StageEnv env = build_example1();
  const Identifiability id = check_identifiability(env);
  CHECK(id.situation_id);
  CHECK(id.stackelberg_id);
  const Identifiability one = check_identifiability(fixtures::success_env({kSame}));
  CHECK(one.situation_id);
  CHECK(one.stackelberg_id);
  const StageEnv twin = fixtures::success_env({kSame, kSame});
  const Identifiability two = check_identifiability(twin);
  CHECK_FALSE(two.situation_id);
  CHECK_FALSE(two.stackelberg_id);
  // Identical kernels leave every profile tied between the two situations.
  CHECK_THROWS_AS(illusion_of_control_model(twin, 1e-4), ConstructionError);
}

TEST_CASE("explicit parameter lists are validated") {
  const StageEnv env = build_example1();
  CHECK_THROWS_AS(Model::with_parameters("x", {env.kernel_ptr(0)}, {}, 3), InputError);
  CHECK_THROWS_AS(Model::with_parameters("x", {env.kernel_ptr(0)}, {{0, 3, 0}}, 3), InputError);
  CHECK_THROWS_AS(Model::with_parameters("x", {env.kernel_ptr(0)}, {{0, 0, 1}}, 3), InputError);
  CHECK_THROWS_AS(Model::strategic_certainty("x", {}, 3), InputError);
  const Model m = Model::with_parameters("x", {env.kernel_ptr(0)}, {{2, 1, 0}}, 3);
  CHECK(m.size() == 1);
  CHECK(m.parameter(0) == Parameter{2, 1, 0});
}

TEST_CASE("property: minimal correct model fits truthful data exactly") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    const Index n_a = 2 + trial % 3;
    const auto f = oracle::random_fixture(rng, n_a, 3, 1 + trial % 3, trial % 2 == 1);
    const Model m = minimal_correct_model(*f.env);
    std::uniform_int_distribution<Index> pick(0, n_a - 1);
    const Quadruple q{pick(rng), pick(rng), pick(rng), pick(rng)};
    const Shares sh = Shares::of_a(std::uniform_real_distribution<double>(0, 1)(rng));
    for (Index s = 0; s < f.env->num_situations(); ++s) {
      for (Group g : {Group::A, Group::B}) {
        double best = oracle::kInf;
        for (Index i = 0; i < m.size(); ++i) best = std::min(best, oracle::weighted_kl(*f.env, m, i, g, sh, s, q));
        CHECK(best == doctest::Approx(0.0).epsilon(1e-12));
      }
    }
  }
}
