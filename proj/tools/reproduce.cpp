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

#include "reproduce.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <ostream>

#include "json.hpp"
#include "zeitgeist/config_io.hpp"
#include "zeitgeist/games_catalog.hpp"
#include "zeitgeist/learning_sim.hpp"
#include "zeitgeist/stability.hpp"

namespace zeitgeist::tools {
namespace {

std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

Check near(std::string name, double actual, double expected, double tol) {
  return {std::move(name), num(expected) + " +/- " + num(tol), num(actual),
          std::abs(actual - expected) <= tol};
}

Check flag(std::string name, bool actual, bool expected = true) {
  return {std::move(name), expected ? "true" : "false", actual ? "true" : "false", actual == expected};
}

std::string quad(const StageEnv& env, const Quadruple& q) {
  const auto& s = env.strategies();
  return "(" + s[q.aa] + "," + s[q.ab] + "," + s[q.ba] + "," + s[q.bb] + ")";
}

Row cournot_row() {
  Row row{"cournot", "closed-form", {}};
  const CournotSpec spec{10.0, 2.0, 1.0, 0.5};
  const CournotReport rep = cournot_closed_form(spec);
  row.checks.push_back(near("a_AA", rep.a_aa, 8.0 / 3.0, 1e-12));
  row.checks.push_back(near("resident fitness", rep.resident_fitness, 64.0 / 9.0, 1e-12));
  row.checks.push_back(near("a_stack", rep.a_stack, 4.0, 1e-12));
  row.checks.push_back(near("a_BA", rep.a_ba, 4.0, 1e-12));
  row.checks.push_back(near("entrant fitness", rep.entrant_fitness, 8.0, 1e-12));
  constexpr double kStep = 1e-3;
  double best_r = 0.0, best_f = -kInf;
  for (int i = 1; i <= 3000; ++i) {
    const double r_hat = i * kStep;
    const double f = cournot_entrant_fitness(spec, r_hat);
    if (f > best_f) {
      best_f = f;
      best_r = r_hat;
    }
  }
  row.checks.push_back(near("fitness-maximizing r_hat", best_r, 0.5, kStep));
  return row;
}

Row cournot_grid_row() {
  Row row{"cournot-grid", "solver", {}};
  const CournotSpec spec{10.0, 2.0, 1.0, 0.5};
  const CournotReport rep = cournot_closed_form(spec);
  std::vector<double> errors;
  for (Index n : {51, 101, 201}) {
    const std::vector<double> grid = uniform_grid(0.0, 8.0, n);
    const double step = grid[1] - grid[0];
    const CournotDiscrete cd = build_cournot_discrete(spec, grid, 64, 1.0);
    const auto ez = enumerate_ez(cd.env, cd.model_a, cd.model_b, Shares::make(1.0, 0.0));
    if (ez.empty()) {
      row.checks.push_back({"EZ exists on " + std::to_string(n) + " points", "nonempty", "empty", false});
      return row;
    }
    // Worst EZ for the one-step bound; nearest EZ for the refinement error.
    double worst_aa = 0.0, worst_ba = 0.0, nearest = kInf;
    for (const auto& z : ez) {
      const Quadruple& q = z.per_situation[0].play;
      const double e_aa = std::abs(grid[q.aa] - rep.a_aa), e_ba = std::abs(grid[q.ba] - rep.a_ba);
      worst_aa = std::max(worst_aa, e_aa);
      worst_ba = std::max(worst_ba, e_ba);
      nearest = std::min(nearest, std::max(e_aa, e_ba));
    }
    errors.push_back(nearest);
    if (n == 201) {
      const double bound = step * (1 + 1e-9);
      row.checks.push_back(near("worst a_AA error on 201 points", worst_aa, 0.0, bound));
      row.checks.push_back(near("worst a_BA error on 201 points", worst_ba, 0.0, bound));
    }
  }
  const bool shrinking = errors[1] < errors[0] && errors[2] < errors[1];
  row.checks.push_back({"error over {51,101,201}", "strictly decreasing",
                        num(errors[0]) + ", " + num(errors[1]) + ", " + num(errors[2]), shrinking});
  return row;
}

Row example1_row(const ReproduceOptions& opt) {
  Row row{"example1", "solver", {}};
  const StageEnv builtin = build_example1();
  ConfigContext ctx;
  const StageEnv env = opt.example1_env ? load_env(*opt.example1_env, ctx) : builtin;

  // Table audit against the built-in cells.
  std::string diff;
  if (env.num_strategies() != 3 || env.num_situations() != 2 || env.num_consequences() != 2) {
    diff = "shape differs";
  } else {
    for (Index s = 0; s < 2; ++s)
      for (Index i = 0; i < 3; ++i)
        for (Index j = 0; j < 3; ++j) {
          const double got = env.kernel(s).dense_row(i, j)[0];
          const double want = builtin.kernel(s).dense_row(i, j)[0];
          if (got != want)
            diff += env.situations()[s] + "(" + env.strategies()[i] + "," + env.strategies()[j] + ")=" +
                    num(got) + " want " + num(want) + "; ";
        }
  }
  row.checks.push_back({"success tables", "as tabulated", diff.empty() ? "as tabulated" : diff, diff.empty()});
  if (!diff.empty() && diff == "shape differs") return row;

  const Index ga = 0, gb = 1;
  row.checks.push_back(near("v_NE(G_A)", symmetric_nash(env, ga).v_ne, 0.3, 1e-12));
  row.checks.push_back(near("v_NE(G_B)", symmetric_nash(env, gb).v_ne, 0.4, 1e-12));
  const Stackelberg sa = stackelberg(env, ga), sb = stackelberg(env, gb);
  row.checks.push_back({"Stackelberg G_A", "(a2, 0.3)", "(" + env.strategies()[sa.strategy] + ", " + num(sa.v_bar) + ")",
                        env.strategies()[sa.strategy] == "a2" && std::abs(sa.v_bar - 0.3) <= 1e-12});
  row.checks.push_back({"Stackelberg G_B", "(a1, 0.5)", "(" + env.strategies()[sb.strategy] + ", " + num(sb.v_bar) + ")",
                        env.strategies()[sb.strategy] == "a1" && std::abs(sb.v_bar - 0.5) <= 1e-12});
  const Identifiability id = check_identifiability(env);
  row.checks.push_back(flag("situation identifiability", id.situation_id));
  row.checks.push_back(flag("Stackelberg identifiability", id.stackelberg_id));

  const SeparationResult sep = singleton_fragility_check(env);
  row.checks.push_back(flag("separating q found", sep.separating_q.has_value()));
  if (sep.separating_q) {
    const auto& q = *sep.separating_q;
    row.checks.push_back(flag("q full support", q[0] > 0.0 && q[1] > 0.0));
    row.checks.push_back({"margin", "> 0", num(sep.margin), sep.margin > 0.0});
    const double level = q[0] * 0.3 + q[1] * 0.4;
    bool below = true;
    for (auto [x, y] : {std::pair{0.1, 0.55}, std::pair{0.3, 0.14}, std::pair{0.2, 0.4}})
      below = below && q[0] * x + q[1] * y < level;
    row.checks.push_back(flag("case points below the hyperplane", below));
  }
  const Model correct = minimal_correct_model(env);
  const Model illusion = illusion_of_control_model(env, 0.01);
  const StabilityVerdict v = classify_stability(env, correct, illusion, FitnessWeights({0.5, 0.5}),
                                                {0.01, 0.005, 0.001});
  row.checks.push_back({"correct vs illusion", "fragile", to_string(v.classification),
                        v.classification == Classification::kFragile});
  return row;
}

double belief_mass_on_kernel(const Belief& mu, const Model& m, Index kernel) {
  double s = 0.0;
  for (const auto& [k, w] : mu)
    if (m.parameter(k).kernel == kernel) s += w;
  return s;
}

Index nearest_index(const std::vector<double>& grid, double x) {
  Index best = 0;
  for (Index i = 1; i < grid.size(); ++i)
    if (std::abs(grid[i] - x) < std::abs(grid[best] - x)) best = i;
  return best;
}

Row investment_row() {
  Row row{"investment", "solver", {}};
  const InvestmentSpec spec{1.0, 5.5, 12.0};
  const InvestmentGame g = build_investment_game(spec);
  const StageEnv& env = g.env;
  row.checks.push_back(flag("conditions hold", g.conditions.condition1 && g.conditions.condition2));
  const ReversalResult rev = detect_reversal(env, g.model_a, g.model_b);
  row.checks.push_back(flag("stability reversal", rev.reversal));

  const Quadruple at_a{0, 0, 1, 1}, at_b{0, 0, 0, 1};
  const Index k5 = nearest_index(g.b_grid, spec.b + spec.m / 3.0);
  const Index k4 = nearest_index(g.b_grid, spec.b + spec.m / 4.0);
  bool plays = !rev.at_a_dominant.empty(), cond = plays, beliefs = plays;
  for (const SituationEz& s : rev.at_a_dominant.per_situation.at(0)) {
    plays = plays && s.play == at_a;
    cond = cond && std::abs(conditional_fitness(s, env, Group::A, Group::A) - 2 * spec.b) < 1e-9 &&
           std::abs(conditional_fitness(s, env, Group::B, Group::A) - (6 * spec.b - spec.c)) < 1e-9 &&
           std::abs(conditional_fitness(s, env, Group::A, Group::B) - 3 * spec.b) < 1e-9 &&
           std::abs(conditional_fitness(s, env, Group::B, Group::B) - (8 * spec.b - spec.c)) < 1e-9;
    beliefs = beliefs && belief_mass_on_kernel(s.belief_b, g.model_b, k5) > 1.0 - 1e-9;
  }
  row.checks.push_back(flag("shares (1,0): every EZ plays (1,1,2,2)", plays));
  row.checks.push_back(flag("shares (1,0): conditional fitness 2b|6b-c and 3b|8b-c", cond));
  row.checks.push_back(flag("shares (1,0): B believes b = 5", beliefs));

  const auto& list_b = rev.at_b_dominant.per_situation.at(0);
  row.checks.push_back({"shares (0,1): EZ count", "1", std::to_string(list_b.size()), list_b.size() == 1});
  if (list_b.size() == 1) {
    const SituationEz& s = list_b[0];
    row.checks.push_back({"shares (0,1): play", quad(env, at_b), quad(env, s.play), s.play == at_b});
    const Fitness f = situation_fitness(s, Shares::make(0.0, 1.0), env);
    row.checks.push_back(near("shares (0,1): fit_A", f.a, 2 * spec.b, 1e-9));
    row.checks.push_back(near("shares (0,1): fit_B", f.b, 8 * spec.b - spec.c, 1e-9));
    row.checks.push_back(near("shares (0,1): B mass on b = 4", belief_mass_on_kernel(s.belief_b, g.model_b, k4), 1.0, 1e-9));
  }
  return row;
}

Row centipede_row() {
  Row row{"centipede", "tree", {}};
  const CentipedeSpec spec{10, 1.0, 2.0};
  const CentipedeReport rep = centipede_analysis(spec);
  row.checks.push_back(flag("maximal-continuation EZ verified", rep.maximal_continuation_verified));
  row.checks.push_back(near("analogy minimizer x", rep.analogy_minimizer_x, 0.2, 1e-6));
  const StableSharesResult ss = stable_shares(centipede_gap_function(spec), 100, 1e-12);
  const double p_b = ss.shares_a.size() == 1 ? 1.0 - ss.shares_a[0] : std::nan("");
  row.checks.push_back(near("stable share p_B*", p_b, 0.75, 1e-9));

  // p_B* from the share scan, over a lattice where the continuation condition holds.
  const double gs[] = {1.0, 1.5, 2.0, 2.5, 3.0};
  const Index ks[] = {6, 8, 10, 12, 14};
  const double ls[] = {0.2, 0.4, 0.6, 0.8, 1.0};
  auto pb = [](Index K, double g, double l) {
    const StableSharesResult r = stable_shares(centipede_gap_function({K, g, l}), 100, 1e-12);
    return r.shares_a.size() == 1 ? 1.0 - r.shares_a[0] : std::nan("");
  };
  double v[5][5][5];
  for (int a = 0; a < 5; ++a)
    for (int b = 0; b < 5; ++b)
      for (int c = 0; c < 5; ++c) v[a][b][c] = pb(ks[b], gs[a], ls[c]);
  bool mono = true;
  for (int a = 0; a < 5; ++a)
    for (int b = 0; b < 5; ++b)
      for (int c = 0; c < 5; ++c) {
        if (!std::isfinite(v[a][b][c])) mono = false;
        if (a + 1 < 5 && !(v[a + 1][b][c] > v[a][b][c])) mono = false;
        if (b + 1 < 5 && !(v[a][b + 1][c] > v[a][b][c])) mono = false;
        if (c + 1 < 5 && !(v[a][b][c + 1] < v[a][b][c])) mono = false;
      }
  row.checks.push_back(flag("p_B* up in g and K, down in l (5x5x5)", mono));
  return row;
}

Row dollar_row() {
  Row row{"dollar", "tree", {}};
  for (Index K : {6, 8, 10, 12}) {
    const DollarReport rep = dollar_analysis(K);
    row.checks.push_back(flag("K=" + std::to_string(K) + " correct dominates on 101 points", rep.dominance));
    row.checks.push_back(flag("K=" + std::to_string(K) + " maximal-continuation EZ verified", rep.maximal_continuation_verified));
    const StableSharesResult ss = stable_shares(dollar_gap_function(K), 100, 1e-12);
    row.checks.push_back({"K=" + std::to_string(K) + " stable shares", "none", std::to_string(ss.shares_a.size()),
                          ss.shares_a.empty()});
  }
  return row;
}

Row learning_row(unsigned long long seed) {
  Row row{"learning", "simulation", {}};
  const InvestmentSpec spec{1.0, 5.5, 12.0};
  const InvestmentGame g = build_investment_game(spec);
  SimConfig cfg;
  cfg.n_agents = 1000;
  cfg.shares = Shares::make(0.01, 0.99);
  cfg.tau = 0.99;
  cfg.horizon = 5000;
  cfg.seed = seed;
  const LearningTrajectory traj = run_learning(g.env, g.model_a, g.model_b, cfg);
  const auto ez = enumerate_ez(g.env, g.model_a, g.model_b, cfg.shares);
  const EzComparison cmp = compare_to_ez(traj, ez, 500, 0.05);
  const Quadruple want{0, 0, 0, 1};
  row.checks.push_back({"modal play", quad(g.env, want), quad(g.env, cmp.modal_play), cmp.modal_play == want});
  const Index k4 = nearest_index(g.b_grid, spec.b + spec.m / 4.0);
  const Index target = g.model_b.sc_index(k4, 0, 1);
  const double mass = traj.belief(traj.periods() - 1, Group::B)[target];
  row.checks.push_back({"B posterior mass at b = 4", ">= 0.95", num(mass), mass >= 0.95});
  if (!ez.empty()) {
    const Fitness f = situation_fitness(ez[0].per_situation[0], cfg.shares, g.env);
    for (Group grp : {Group::A, Group::B}) {
      const Index i = idx(grp);
      const double fit = grp == Group::A ? f.a : f.b;
      const double dev = std::abs(cmp.mean_payoff[i] - fit);
      row.checks.push_back({std::string("group ") + name(grp) + " payoff within 3 se",
                            num(fit) + " +/- " + num(3 * cmp.payoff_se[i]), num(cmp.mean_payoff[i]),
                            dev <= 3 * cmp.payoff_se[i]});
    }
  }
  row.checks.push_back(flag("converged to the EZ", cmp.converged));
  return row;
}

}  // namespace

bool Row::pass() const {
  if (checks.empty()) return false;
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

const std::vector<std::string>& fixture_names() {
  static const std::vector<std::string> names{"cournot", "cournot-grid", "example1", "investment",
                                              "centipede", "dollar", "learning"};
  return names;
}

std::vector<Row> reproduce(const ReproduceOptions& opt) {
  if (opt.only && std::find(fixture_names().begin(), fixture_names().end(), *opt.only) == fixture_names().end())
    throw InputError("unknown fixture '" + *opt.only + "'");
  const std::vector<std::pair<std::string, std::function<Row()>>> all{
      {"cournot", cournot_row},
      {"cournot-grid", cournot_grid_row},
      {"example1", [&] { return example1_row(opt); }},
      {"investment", investment_row},
      {"centipede", centipede_row},
      {"dollar", dollar_row},
      {"learning", [&] { return learning_row(opt.seed); }},
  };
  std::vector<Row> rows;
  for (const auto& [name, run] : all) {
    if (opt.only && *opt.only != name) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Row r = run();
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    rows.push_back(std::move(r));
  }
  return rows;
}

void write_rows_text(std::ostream& os, const std::vector<Row>& rows) {
  for (const Row& r : rows) {
    char head[128];
    std::snprintf(head, sizeof head, "%-4s %-13s %-12s %7.2fs\n", r.pass() ? "PASS" : "FAIL", r.fixture.c_str(),
                  r.source.c_str(), r.seconds);
    os << head;
    for (const Check& c : r.checks)
      os << "       " << (c.pass ? "ok  " : "BAD ") << c.name << ": expected " << c.expected << ", got "
         << c.actual << '\n';
  }
}

void write_rows_json(std::ostream& os, const std::vector<Row>& rows) {
  nlohmann::json doc = nlohmann::json::array();
  for (const Row& r : rows) {
    nlohmann::json checks = nlohmann::json::array();
    for (const Check& c : r.checks)
      checks.push_back({{"name", c.name}, {"expected", c.expected}, {"actual", c.actual}, {"pass", c.pass}});
    doc.push_back({{"fixture", r.fixture}, {"source", r.source}, {"pass", r.pass()}, {"seconds", r.seconds},
                   {"checks", checks}});
  }
  os << doc.dump(2) << '\n';
}

}  // namespace zeitgeist::tools
