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

// Both players' success probabilities, [situation][row][col] = {row, col}.
constexpr double kTable[2][3][3][2] = {
    {{{0.1, 0.1}, {0.1, 0.1}, {0.1, 0.11}},
     {{0.1, 0.1}, {0.3, 0.3}, {0.1, 0.1}},
     {{0.11, 0.1}, {0.1, 0.1}, {0.2, 0.2}}},
    {{{0.11, 0.11}, {0.5, 0.5}, {0.12, 0.4}},
     {{0.5, 0.5}, {0.12, 0.12}, {0.14, 0.55}},
     {{0.4, 0.12}, {0.55, 0.14}, {0.4, 0.4}}},
};

StageEnv with_utility(const StageEnv& env, double scale, double shift) {
  std::vector<double> u = env.utility();
  for (double& x : u) x = scale * x + shift;
  std::vector<KernelPtr> ks;
  for (Index s = 0; s < env.num_situations(); ++s) ks.push_back(env.kernel_ptr(s));
  return StageEnv(env.strategies(), env.consequences(), env.situations(), ks, u, env.monitoring());
}

}  // namespace

TEST_CASE("example1 payoffs match the table for both seats") {
  const StageEnv env = build_example1();
  for (Index s = 0; s < 2; ++s)
    for (Index i = 0; i < 3; ++i)
      for (Index j = 0; j < 3; ++j) {
        CHECK(env.payoff(s, i, j) == doctest::Approx(kTable[s][i][j][0]).epsilon(1e-15));
        CHECK(env.payoff(s, j, i) == doctest::Approx(kTable[s][i][j][1]).epsilon(1e-15));
      }
  CHECK(expected_payoff(env, "G_A", "a2", "a2", env.kernel(0)) == doctest::Approx(0.3));
  CHECK(expected_payoff(env, "G_B", "a3", "a2", env.kernel(1)) == doctest::Approx(0.55));
  CHECK_THROWS_AS(expected_payoff(env, "G_C", "a1", "a1", env.kernel(0)), InputError);
  CHECK_THROWS_AS(expected_payoff(env, "G_A", "a9", "a1", env.kernel(0)), InputError);
}

TEST_CASE("zero utility gives zero payoff") {
  const StageEnv env = with_utility(build_example1(), 0.0, 0.0);
  for (Index i = 0; i < 3; ++i)
    for (Index j = 0; j < 3; ++j) CHECK(expected_payoff(env, env.kernel(1), i, j) == 0.0);
}

TEST_CASE("best responses in example1") {
  const StageEnv env = build_example1();
  CHECK(best_responses(env, 0, 0) == std::vector<Index>{2});
  CHECK(best_responses(env, 1, 1) == std::vector<Index>{2});
  CHECK(min_tiebreak_best_response(env, 1, 0) == 1);
  CHECK(min_tiebreak_best_response(env, 0, 1) == 1);
}

TEST_CASE("one-strategy game") {
  const StageEnv env = fixtures::success_env({{{0.7}}});
  CHECK(best_responses(env, 0, 0) == std::vector<Index>{0});
  const SymmetricNash ne = symmetric_nash(env, 0);
  CHECK(ne.exists);
  CHECK(ne.strategies == std::vector<Index>{0});
  CHECK(ne.v_ne == doctest::Approx(0.7));
  CHECK(stackelberg(env, 0).v_bar == doctest::Approx(0.7));
}

TEST_CASE("full tie picks the lowest index") {
  const StageEnv env = fixtures::success_env({{{0.5, 0.5, 0.5}, {0.5, 0.5, 0.5}, {0.5, 0.5, 0.5}}});
  CHECK(best_responses(env, 0, 1).size() == 3);
  for (Index a = 0; a < 3; ++a) CHECK(min_tiebreak_best_response(env, 0, a) == 0);
}

TEST_CASE("symmetric nash and stackelberg in example1") {
  const StageEnv env = build_example1();
  const SymmetricNash a = symmetric_nash(env, 0), b = symmetric_nash(env, 1);
  // a3 is a symmetric equilibrium of G_A too; a2 is the payoff-maximizing one.
  CHECK(a.strategies == std::vector<Index>{1, 2});
  CHECK(a.v_ne == doctest::Approx(0.3));
  CHECK(b.strategies == std::vector<Index>{2});
  CHECK(b.v_ne == doctest::Approx(0.4));
  const Stackelberg sa = stackelberg(env, 0), sb = stackelberg(env, 1);
  CHECK(sa.strategy == 1);
  CHECK(sa.v_bar == doctest::Approx(0.3));
  CHECK(sa.unique);
  CHECK(sb.strategy == 0);
  CHECK(sb.v_bar == doctest::Approx(0.5));
  CHECK(sb.unique);
}

TEST_CASE("no symmetric nash is flagged") {
  const StageEnv env = fixtures::anti_coordination_env();
  const SymmetricNash ne = symmetric_nash(env, 0);
  CHECK_FALSE(ne.exists);
  CHECK(ne.strategies.empty());
}

TEST_CASE("decision problem: stackelberg equals nash") {
  auto k = std::make_shared<BlindKernel>(2, std::vector<std::vector<double>>{{0.2, 0.8}, {0.6, 0.4}, {0.5, 0.5}});
  const std::vector<std::string> s{"x", "y", "z"};
  const StageEnv env(s, {"g", "b"}, {"G"}, {k}, {1.0, 0.0}, Monitoring::perfect(s));
  const SymmetricNash ne = symmetric_nash(env, 0);
  const Stackelberg st = stackelberg(env, 0);
  CHECK(ne.strategies == std::vector<Index>{1});
  CHECK(st.strategy == 1);
  CHECK(st.v_bar == doctest::Approx(ne.v_ne).epsilon(1e-15));
}

TEST_CASE("property: v_ne <= v_bar, stackelberg consistency, affine invariance") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> scale(0.1, 5.0), shift(-3.0, 3.0);
  int with_ne = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const Index n_a = 2 + trial % 4;
    const auto f = oracle::random_fixture(rng, n_a, 2 + trial % 3, 1 + trial % 2, trial % 2 == 0);
    const StageEnv& env = *f.env;
    const StageEnv moved = with_utility(env, scale(rng), shift(rng));
    for (Index s = 0; s < env.num_situations(); ++s) {
      const Stackelberg st = stackelberg(env, s);
      CHECK(st.v_bar == doctest::Approx(oracle::payoff(env, env.kernel(s), st.strategy, st.follower)));
      CHECK(st.follower == min_tiebreak_best_response(env, s, st.strategy));
      const SymmetricNash ne = symmetric_nash(env, s);
      bool unique_br = true;
      for (Index opp = 0; opp < n_a; ++opp) unique_br = unique_br && best_responses(env, s, opp).size() == 1;
      if (ne.exists && unique_br) {
        ++with_ne;
        CHECK(ne.v_ne <= st.v_bar + 1e-12);
      }
      for (Index opp = 0; opp < n_a; ++opp) {
        // Brute force against the dense oracle.
        std::vector<double> v(n_a);
        for (Index a = 0; a < n_a; ++a) v[a] = oracle::payoff(env, env.kernel(s), a, opp);
        const double hi = *std::max_element(v.begin(), v.end());
        std::vector<Index> want;
        for (Index a = 0; a < n_a; ++a)
          if (v[a] >= hi - 1e-9) want.push_back(a);
        CHECK(best_responses(env, s, opp) == want);
        CHECK(best_responses(moved, s, opp) == want);
      }
    }
  }
  CHECK(with_ne > 50);
}

TEST_CASE("tied responses can push v_bar below v_ne") {
  // Against a1 both replies tie for the responder; the tie is broken against
  // the leader, so leading with the equilibrium strategy earns 0.
  const StageEnv env = fixtures::success_env({{{1.0, 0.0}, {1.0, 0.0}}});
  const SymmetricNash ne = symmetric_nash(env, 0);
  REQUIRE(ne.exists);
  CHECK(ne.v_ne == doctest::Approx(1.0));
  CHECK(stackelberg(env, 0).v_bar < ne.v_ne);
}

TEST_CASE("malformed environments are rejected") {
  const std::vector<std::string> s{"x", "y"};
  auto k = std::make_shared<BlindKernel>(2, std::vector<std::vector<double>>{{0.2, 0.8}, {0.6, 0.4}});
  CHECK_THROWS_AS(StageEnv(s, {"g", "b"}, {"G"}, {k}, {1.0}, Monitoring::perfect(s)), InputError);
  CHECK_THROWS_AS(StageEnv(s, {"g", "b"}, {}, {}, {1.0, 0.0}, Monitoring::perfect(s)), InputError);
  CHECK_THROWS_AS(BlindKernel(2, {{0.2, 0.7}, {0.6, 0.4}}), InputError);
  CHECK_THROWS_AS(BlindKernel(2, {{-0.2, 1.2}, {0.6, 0.4}}), InputError);
  CHECK_THROWS_AS(FitnessWeights({0.5, 0.6}), InputError);
  CHECK_THROWS_AS(Shares::make(0.5, 0.6), InputError);
  const FitnessWeights u = FitnessWeights::uniform(4);
  CHECK(u.q == std::vector<double>(4, 0.25));
}

TEST_CASE("noisy monitoring rows") {
  const Monitoring m = Monitoring::noisy({"x", "y", "z"}, 0.7);
  for (Index a = 0; a < 3; ++a)
    for (Index b = 0; b < 3; ++b) CHECK(m.dist[a][b] == doctest::Approx(a == b ? 0.8 : 0.1));
  const Monitoring u = Monitoring::uninformative(3);
  CHECK(u.signals.size() == 1);
}
