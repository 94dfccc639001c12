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

#include <algorithm>
#include <iterator>
#include <random>
#include <sstream>

#include "doctest.h"
#include "oracle.hpp"
#include "zeitgeist/games_catalog.hpp"

using namespace zeitgeist;

namespace {

bool same_extended(double x, double y) {
  if (x == kInf || y == kInf) return x == y;
  return std::abs(x - y) <= 1e-12 * std::max(1.0, std::abs(y));
}

DataContext ctx_of(Group g, Shares sh, Index s, Quadruple q) { return DataContext{g, sh, s, q}; }

}  // namespace

TEST_CASE("kl examples") {
  const std::vector<double> half{0.5, 0.5};
  CHECK(kl_divergence(half, half) == 0.0);
  const double want = 0.4 * std::log(4.0) + 0.6 * std::log(2.0 / 3.0);
  CHECK(kl_divergence(std::vector<double>{0.4, 0.6}, std::vector<double>{0.1, 0.9}) == doctest::Approx(want).epsilon(1e-14));
  CHECK(want == doctest::Approx(0.31123).epsilon(1e-5));
  CHECK(kl_divergence(std::vector<double>{1.0, 0.0}, std::vector<double>{0.0, 1.0}) == kInf);
  CHECK(kl_divergence(std::vector<double>{0.0, 1.0}, std::vector<double>{0.5, 0.5}) == doctest::Approx(std::log(2.0)));
  CHECK_THROWS_AS(kl_divergence(std::vector<double>{1.0}, half), InputError);
  CHECK_THROWS_AS(kl_divergence(std::vector<double>{0.3, 0.3}, half), InputError);
}

TEST_CASE("property: kl nonnegative, zero iff equal, matches oracle (1000 pairs)") {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 1000; ++i) {
    const Index n = 2 + i % 7;
    const auto p = oracle::random_row(rng, n, 0.25);
    const auto q = oracle::random_row(rng, n, 0.25);
    const double d = kl_divergence(p, q);
    CHECK(d >= 0.0);
    CHECK(same_extended(d, oracle::kl(p, q)));
    CHECK(kl_divergence(p, p) == doctest::Approx(0.0).epsilon(1e-15));
    double diff = 0.0;
    for (Index k = 0; k < n; ++k) diff = std::max(diff, std::abs(p[k] - q[k]));
    if (diff > 1e-6) CHECK(d > 0.0);
  }
}

TEST_CASE("weighted kl examples") {
  const StageEnv env = build_example1();
  const Model m = minimal_correct_model(env);
  const Quadruple q{1, 0, 2, 1};
  // Truth: situation G_A, conjectures equal to the actual play.
  CHECK(weighted_kl(env, m, m.sc_index(0, 1, 2), ctx_of(Group::A, Shares::of_a(0.3), 0, q)) == 0.0);
  CHECK(weighted_kl(env, m, m.sc_index(0, 0, 1), ctx_of(Group::B, Shares::of_a(0.3), 0, q)) == 0.0);
  // Wrong own-group conjecture under perfect monitoring is infinite even at weight zero.
  CHECK(weighted_kl(env, m, m.sc_index(0, 0, 2), ctx_of(Group::A, Shares::of_a(0.0), 0, q)) == kInf);
  // Wrong cross-group conjecture at weight zero also stays infinite.
  CHECK(weighted_kl(env, m, m.sc_index(0, 1, 0), ctx_of(Group::A, Shares::of_a(1.0), 0, q)) == kInf);
  CHECK(weighted(0.0, kInf) == kInf);
  CHECK(weighted(0.0, 2.0) == 0.0);
}

TEST_CASE("minimizers of the minimal correct and singleton models") {
  const StageEnv env = build_example1();
  const Model m = minimal_correct_model(env);
  const Quadruple q{1, 0, 2, 1};
  for (Index s = 0; s < 2; ++s) {
    const MinimizerSet a = kl_minimizers(m, ctx_of(Group::A, Shares::of_a(0.5), s, q), env);
    CHECK(a.indices == std::vector<Index>{m.sc_index(s, 1, 2)});
    CHECK(a.min_value == 0.0);
    const MinimizerSet b = kl_minimizers(m, ctx_of(Group::B, Shares::of_a(0.5), s, q), env);
    CHECK(b.indices == std::vector<Index>{m.sc_index(s, 0, 1)});
  }
  const Model single = singleton_model(env, illusion_of_control_model(env, 1e-3).kernels()[1]);
  const MinimizerSet one = kl_minimizers(single, ctx_of(Group::A, Shares::of_a(0.5), 0, q), env);
  CHECK(one.indices.size() == 1);
  CHECK(one.indices[0] == single.sc_index(0, 1, 2));
}

TEST_CASE("all-infinite minimizer sets are flagged") {
  // Consequence 0 is impossible under the truth but certain under the model.
  const std::vector<std::string> s{"x", "y"};
  auto truth = std::make_shared<BlindKernel>(2, std::vector<std::vector<double>>{{0.0, 1.0}, {0.0, 1.0}});
  auto wrong = std::make_shared<BlindKernel>(2, std::vector<std::vector<double>>{{1.0, 0.0}, {1.0, 0.0}});
  const StageEnv env(s, {"g", "b"}, {"G"}, {truth}, {1.0, 0.0}, Monitoring::uninformative(2));
  const Model m = singleton_model(env, wrong);
  const MinimizerSet r = kl_minimizers(m, ctx_of(Group::A, Shares::of_a(0.5), 0, {}), env);
  CHECK(r.all_infinite);
  CHECK(r.indices.size() == m.size());
  CHECK(r.min_value == kInf);
}

TEST_CASE("property: weighted kl and minimizers match the dense product oracle (100 fixtures)") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    const Index n_a = 2 + trial % 3;
    const auto f = oracle::random_fixture(rng, n_a, 2 + trial % 4, 1 + trial % 2, trial % 3 == 0);
    const StageEnv& env = *f.env;
    std::uniform_int_distribution<Index> pick(0, n_a - 1);
    const double pa = trial % 5 == 0 ? (trial % 10 == 0 ? 0.0 : 1.0) : std::uniform_real_distribution<double>(0, 1)(rng);
    const Shares sh = Shares::of_a(pa);
    for (int rep = 0; rep < 3; ++rep) {
      const Quadruple q{pick(rng), pick(rng), pick(rng), pick(rng)};
      for (Index s = 0; s < env.num_situations(); ++s) {
        for (Group g : {Group::A, Group::B}) {
          for (const Model* m : {f.a.get(), f.b.get()}) {
            const DataContext ctx = ctx_of(g, sh, s, q);
            for (Index i = 0; i < m->size(); ++i)
              CHECK(same_extended(weighted_kl(env, *m, i, ctx), oracle::weighted_kl(env, *m, i, g, sh, s, q)));
            const MinimizerSet lib = kl_minimizers(*m, ctx, env);
            CHECK(lib.indices == oracle::minimizers(env, *m, g, sh, s, q));
            // The cached per-group path agrees with the direct one.
            GroupInference gi(env, *m, g, s, sh.of(g));
            gi.set_cross(q.play(g, other(g)), q.play(other(g), g));
            const MinimizerSet cached = gi.minimizers(q.play(g, g));
            CHECK(cached.indices == lib.indices);
            CHECK(cached.all_infinite == lib.all_infinite);
          }
        }
      }
    }
  }
}

TEST_CASE("property: weighted kl is lipschitz in shares where finite") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 50; ++trial) {
    const auto f = oracle::random_fixture(rng, 3, 3, 1, true);
    const Model& m = *f.b;
    const Quadruple q{0, 1, 2, 1};
    for (Index i = 0; i < m.size(); ++i) {
      const double v0 = weighted_kl(*f.env, m, i, ctx_of(Group::A, Shares::of_a(0.0), 0, q));
      const double v1 = weighted_kl(*f.env, m, i, ctx_of(Group::A, Shares::of_a(1.0), 0, q));
      if (v0 == kInf || v1 == kInf) continue;
      const double lip = std::abs(v1 - v0);
      for (int k = 0; k < 20; ++k) {
        const double p = k / 20.0, p2 = (k + 1) / 20.0;
        const double a = weighted_kl(*f.env, m, i, ctx_of(Group::A, Shares::of_a(p), 0, q));
        const double b = weighted_kl(*f.env, m, i, ctx_of(Group::A, Shares::of_a(p2), 0, q));
        CHECK(std::abs(a - b) <= lip * (p2 - p) + 1e-12);
      }
    }
  }
}

TEST_CASE("property: minimizers are upper hemicontinuous in shares (investment game)") {
  const InvestmentGame game = build_investment_game({});
  const Model& m = game.model_b;
  for (int k = 0; k <= 20; ++k) {
    const double star = k / 20.0;
    for (Index aa = 0; aa < 2; ++aa)
      for (Index ab = 0; ab < 2; ++ab)
        for (Index ba = 0; ba < 2; ++ba)
          for (Index bb = 0; bb < 2; ++bb) {
            const Quadruple q{aa, ab, ba, bb};
            for (double dir : {-1.0, 1.0}) {
              if (star + dir * 1e-2 < 0.0 || star + dir * 1e-2 > 1.0) continue;
              // Indices present along the whole sequence p_j -> star.
              std::vector<Index> persist;
              for (int j = 0; j < 8; ++j) {
                const double p = star + dir * 1e-2 * std::pow(0.5, j);
                const auto idx = kl_minimizers(m, ctx_of(Group::B, Shares::of_a(p), 0, q), game.env).indices;
                if (j == 0) {
                  persist = idx;
                } else {
                  std::vector<Index> keep;
                  std::set_intersection(persist.begin(), persist.end(), idx.begin(), idx.end(), std::back_inserter(keep));
                  persist = keep;
                }
              }
              const auto at = kl_minimizers(m, ctx_of(Group::B, Shares::of_a(star), 0, q), game.env).indices;
              for (Index i : persist) CHECK(std::binary_search(at.begin(), at.end(), i));
            }
          }
  }
}

TEST_CASE("cournot residents: the true intercept strictly wins") {
  CournotSpec spec;
  spec.r_hat = spec.r;
  const CournotDiscrete d = build_cournot_discrete(spec, uniform_grid(0.0, 8.0, 25), 64, 1.0);
  Index truth = 0;
  for (Index k = 0; k < d.intercepts.size(); ++k)
    if (std::abs(d.intercepts[k] - spec.beta) < std::abs(d.intercepts[truth] - spec.beta)) truth = k;
  REQUIRE(d.intercepts[truth] == doctest::Approx(spec.beta).epsilon(1e-12));
  const Index e = 8;  // 8/3 on the 1/3-step grid
  REQUIRE(uniform_grid(0.0, 8.0, 25)[e] == doctest::Approx(8.0 / 3.0).epsilon(1e-12));
  const Quadruple q{e, e, e, e};
  const DataContext ctx = ctx_of(Group::A, Shares::of_a(1.0), 0, q);
  CHECK(weighted_kl(d.env, d.model_a, d.model_a.sc_index(truth, e, e), ctx) == doctest::Approx(0.0).epsilon(1e-12));
  for (Index k = 0; k < d.intercepts.size(); ++k) {
    if (k == truth) continue;
    CHECK(weighted_kl(d.env, d.model_a, d.model_a.sc_index(k, e, e), ctx) > 1e-6);
  }
  CHECK(kl_minimizers(d.model_a, ctx, d.env).indices == std::vector<Index>{d.model_a.sc_index(truth, e, e)});
}

TEST_CASE("score dump has one row per parameter") {
  const StageEnv env = build_example1();
  const Model m = minimal_correct_model(env);
  std::ostringstream os;
  write_scores_csv(os, m, ctx_of(Group::A, Shares::of_a(0.5), 0, {1, 1, 1, 1}), env);
  const std::string s = os.str();
  CHECK(std::count(s.begin(), s.end(), '\n') == 19);
  CHECK(s.find("inf") != std::string::npos);
}
