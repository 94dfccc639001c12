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

// zeitgeist: command-line front end.
//
// Exit codes: 0 success, 1 usage or configuration error, 2 a legal but
// empty result (no EZ, no separating q, no stable share, empty run),
// 3 a reproduction mismatch.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "reproduce.hpp"
#include "zeitgeist/config_io.hpp"
#include "zeitgeist/games_catalog.hpp"
#include "zeitgeist/learning_sim.hpp"
#include "zeitgeist/stability.hpp"

#ifndef ZEITGEIST_VERSION
#define ZEITGEIST_VERSION "0.0.0"
#endif

namespace fs = std::filesystem;
using nlohmann::json;
using namespace zeitgeist;

namespace {

constexpr int kOk = 0, kConfig = 1, kEmpty = 2, kMismatch = 3;

class Manifest {
 public:
  Manifest(std::string command, fs::path out) : command_(std::move(command)), out_(std::move(out)) {
    fs::create_directories(out_);
  }
  void config(const std::string& role, const std::string& path) {
    if (!path.empty()) configs_[role] = path;
  }
  void seed(unsigned long long s) { seed_ = s; }
  // Opens `name` inside the output directory and records it.
  std::ofstream open(const std::string& name) {
    outputs_.push_back(name);
    std::ofstream f(out_ / name, std::ios::binary);
    if (!f) throw ConfigError((out_ / name).string() + ":0: cannot write file");
    return f;
  }
  void finish(int exit_code) {
    json doc;
    doc["command"] = command_;
    doc["configs"] = configs_;
    doc["seed"] = seed_ ? json(*seed_) : json(nullptr);
    doc["tool_version"] = ZEITGEIST_VERSION;
    doc["outputs"] = outputs_;
    doc["exit_code"] = exit_code;
    doc["wall_clock_seconds"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    std::ofstream f(out_ / "manifest.json");
    f << doc.dump(2) << '\n';
  }

 private:
  std::string command_;
  fs::path out_;
  std::map<std::string, std::string> configs_;
  std::optional<unsigned long long> seed_;
  std::vector<std::string> outputs_;
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::vector<double> parse_list(const std::string& text, const char* what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw InputError(std::string("cannot parse ") + what + " '" + text + "'");
    }
  }
  if (out.empty()) throw InputError(std::string("empty ") + what);
  return out;
}

Shares parse_shares(const std::string& text) {
  const std::vector<double> v = parse_list(text, "--shares");
  if (v.size() != 2) throw InputError("--shares takes two values: pA,pB");
  return Shares::make(v[0], v[1]);
}

FitnessWeights parse_q(const std::string& text, const StageEnv& env) {
  if (text.empty()) return FitnessWeights::uniform(env.num_situations());
  FitnessWeights q(parse_list(text, "--q"));
  if (q.q.size() != env.num_situations()) throw InputError("--q needs one weight per situation");
  return q;
}

struct Inputs {
  std::string env, model_a, model_b;
};

struct Loaded {
  ConfigContext ctx;
  std::optional<StageEnv> env;
  std::optional<Model> a, b;
};

void load(Loaded& l, const Inputs& in, bool models) {
  l.env.emplace(load_env(in.env, l.ctx));
  if (models) {
    l.a.emplace(load_model(in.model_a, *l.env, l.ctx));
    l.b.emplace(load_model(in.model_b, *l.env, l.ctx));
  }
}

void add_inputs(CLI::App* cmd, Inputs& in, bool models) {
  cmd->add_option("--env", in.env, "environment config")->required()->check(CLI::ExistingFile);
  if (models) {
    cmd->add_option("--model-a", in.model_a, "model held by group A")->required()->check(CLI::ExistingFile);
    cmd->add_option("--model-b", in.model_b, "model held by group B")->required()->check(CLI::ExistingFile);
  }
}

void record(Manifest& m, const Inputs& in) {
  m.config("env", in.env);
  m.config("model_a", in.model_a);
  m.config("model_b", in.model_b);
}

json ez_summary(const EzSolutions& sol, const StageEnv& env) {
  json out = json::array();
  for (Index s = 0; s < sol.per_situation.size(); ++s)
    for (const SituationEz& e : sol.per_situation[s]) {
      const auto q = e.play.as_array();
      out.push_back({{"situation", env.situations()[s]},
                     {"play", {env.strategies()[q[0]], env.strategies()[q[1]], env.strategies()[q[2]], env.strategies()[q[3]]}},
                     {"conditional_fitness",
                      {{"AA", conditional_fitness(e, env, Group::A, Group::A)},
                       {"AB", conditional_fitness(e, env, Group::A, Group::B)},
                       {"BA", conditional_fitness(e, env, Group::B, Group::A)},
                       {"BB", conditional_fitness(e, env, Group::B, Group::B)}}}});
    }
  return out;
}

void write_text(Manifest& m, const std::string& name, const std::string& text) {
  auto f = m.open(name);
  f << text;
}

void write_build(Manifest& m, const StageEnv& env, const Model* a, const Model* b, const json& report) {
  write_text(m, "env.json", env_to_json(env));
  if (a) write_text(m, "model_a.json", model_to_json(*a, env));
  if (b) write_text(m, "model_b.json", model_to_json(*b, env));
  write_text(m, "report.json", report.dump(2) + "\n");
}

json checks_json(const std::vector<EzCheck>& checks) {
  json out = json::array();
  for (const EzCheck& c : checks)
    out.push_back({{"name", c.name}, {"pass", c.pass}, {"value", c.value}, {"expected", c.expected}});
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Equilibrium zeitgeists: solve, classify, simulate and reproduce."};
  app.require_subcommand(1);
  app.set_version_flag("--version", ZEITGEIST_VERSION);

  std::string out_dir = "out";
  Inputs in;
  std::string shares_text, q_text, eps_text, sim_path, only, example1_env;
  std::optional<unsigned long long> seed;
  Index grid_n = 100, every = 1, window = 500;
  double tol = 1e-10, conv_tol = 0.05;

  auto* solve = app.add_subcommand("solve-ez", "enumerate equilibrium zeitgeists at given shares");
  add_inputs(solve, in, true);
  solve->add_option("--shares", shares_text, "pA,pB")->required();
  solve->add_option("--out", out_dir, "output directory");

  auto* classify = app.add_subcommand("classify", "stability of model A against entrants holding model B");
  add_inputs(classify, in, true);
  classify->add_option("--q", q_text, "situation weights, comma separated");
  classify->add_option("--eps-list", eps_text, "descending entrant shares");
  classify->add_option("--out", out_dir, "output directory");

  auto* reversal = app.add_subcommand("reversal", "stability reversal test");
  add_inputs(reversal, in, true);
  reversal->add_option("--out", out_dir, "output directory");

  auto* shares = app.add_subcommand("stable-shares", "scan group-A shares for stable interior points");
  add_inputs(shares, in, true);
  shares->add_option("--q", q_text, "situation weights");
  shares->add_option("--grid", grid_n, "grid intervals (>= 10)");
  shares->add_option("--tol", tol, "bisection tolerance");
  shares->add_option("--out", out_dir, "output directory");

  auto* separate = app.add_subcommand("separate", "can the correct model resist every singleton entrant");
  add_inputs(separate, in, false);
  separate->add_option("--out", out_dir, "output directory");

  auto* learn = app.add_subcommand("learn", "agent-based learning run compared against the EZ set");
  add_inputs(learn, in, true);
  learn->add_option("--sim", sim_path, "simulation config")->required()->check(CLI::ExistingFile);
  learn->add_option("--seed", seed, "overrides the config seed");
  learn->add_option("--every", every, "write every k-th period");
  learn->add_option("--window", window, "final periods compared against the EZ set");
  learn->add_option("--tol", conv_tol, "belief distance for convergence");
  learn->add_option("--out", out_dir, "output directory");

  auto* repro = app.add_subcommand("reproduce", "run every reference fixture");
  repro->add_option("--only", only, "single fixture");
  repro->add_option("--example1-env", example1_env, "replace the three-strategy example")->check(CLI::ExistingFile);
  repro->add_option("--seed", seed, "learning seed");
  repro->add_option("--out", out_dir, "output directory");

  auto* build = app.add_subcommand("build", "write configs and reports for a catalog game");
  build->require_subcommand(1);
  build->add_option("--out", out_dir, "output directory");
  CournotSpec cs;
  Index cournot_n = 201, cournot_bins = 64;
  double cournot_sd = 1.0;
  auto* b_cournot = build->add_subcommand("cournot", "discretized Cournot duopoly");
  b_cournot->add_option("--beta", cs.beta, "demand intercept");
  b_cournot->add_option("--c", cs.c, "marginal cost");
  b_cournot->add_option("--r", cs.r, "true demand slope");
  b_cournot->add_option("--r-hat", cs.r_hat, "slope perceived by entrants");
  b_cournot->add_option("--grid-n", cournot_n, "quantity grid points on [0, (beta - c) / r]");
  b_cournot->add_option("--bins", cournot_bins, "price bins");
  b_cournot->add_option("--sd", cournot_sd, "price noise standard deviation");
  InvestmentSpec is{1.0, 5.5, 12.0};
  double inv_sd = 3.0;
  auto* b_invest = build->add_subcommand("investment", "investment game");
  b_invest->add_option("--b", is.b, "return parameter b");
  b_invest->add_option("--c", is.c, "investment cost");
  b_invest->add_option("--m", is.m, "market parameter m");
  b_invest->add_option("--sd", inv_sd, "price noise standard deviation");
  double perturb = 0.01;
  auto* b_ex1 = build->add_subcommand("example1", "three strategies, two situations");
  b_ex1->add_option("--perturb-eps", perturb, "illusion-of-control mixing weight");
  CentipedeSpec cps;
  auto* b_cent = build->add_subcommand("centipede", "centipede game analysis");
  b_cent->add_option("--K", cps.K, "number of nodes");
  b_cent->add_option("--g", cps.g, "gain per continuation");
  b_cent->add_option("--l", cps.l, "loss from being dropped on");
  Index dollar_k = 10;
  auto* b_dollar = build->add_subcommand("dollar", "dollar game analysis");
  b_dollar->add_option("--K", dollar_k, "number of nodes, even and >= 6");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfig;
  }

  try {
    Loaded l;
    if (*solve) {
      Manifest m("solve-ez", out_dir);
      record(m, in);
      load(l, in, true);
      const EzSolutions sol = solve_ez(*l.env, *l.a, *l.b, parse_shares(shares_text));
      {
        auto f = m.open("ez.json");
        write_ez_report_json(f, sol, *l.env, *l.a, *l.b);
      }
      {
        auto f = m.open("ez.txt");
        write_ez_report_text(f, sol, *l.env, *l.a, *l.b);
      }
      const int code = sol.empty() ? kEmpty : kOk;
      m.finish(code);
      write_ez_report_text(std::cout, sol, *l.env, *l.a, *l.b);
      return code;
    }
    if (*classify) {
      Manifest m("classify", out_dir);
      record(m, in);
      load(l, in, true);
      const std::vector<double> eps = eps_text.empty() ? default_eps_list() : parse_list(eps_text, "--eps-list");
      const StabilityVerdict v = classify_stability(*l.env, *l.a, *l.b, parse_q(q_text, *l.env), eps);
      {
        auto f = m.open("verdict.json");
        write_verdict_json(f, v);
      }
      m.finish(kOk);
      std::cout << to_string(v.classification) << '\n';
      return kOk;
    }
    if (*reversal) {
      Manifest m("reversal", out_dir);
      record(m, in);
      load(l, in, true);
      const ReversalResult r = detect_reversal(*l.env, *l.a, *l.b);
      json doc{{"reversal", r.reversal},
               {"reason", r.reason},
               {"mixture_present", r.mixture_present},
               {"at_a_dominant", ez_summary(r.at_a_dominant, *l.env)},
               {"at_b_dominant", ez_summary(r.at_b_dominant, *l.env)}};
      write_text(m, "reversal.json", doc.dump(2) + "\n");
      m.finish(kOk);
      std::cout << (r.reversal ? "reversal" : "no reversal") << (r.reason.empty() ? "" : ": " + r.reason) << '\n';
      return kOk;
    }
    if (*shares) {
      Manifest m("stable-shares", out_dir);
      record(m, in);
      load(l, in, true);
      const StableSharesResult r = stable_shares(*l.env, *l.a, *l.b, parse_q(q_text, *l.env), grid_n, tol);
      json scan = json::array();
      for (auto [p, g] : r.scan) scan.push_back({p, g});
      json doc{{"stable_shares_a", r.shares_a}, {"points_without_ez", r.gap_points}, {"scan", scan}};
      write_text(m, "shares.json", doc.dump(2) + "\n");
      const int code = r.shares_a.empty() ? kEmpty : kOk;
      m.finish(code);
      for (double p : r.shares_a) std::cout << p << '\n';
      return code;
    }
    if (*separate) {
      Manifest m("separate", out_dir);
      record(m, in);
      load(l, in, false);
      const SeparationResult r = singleton_fragility_check(*l.env);
      {
        auto f = m.open("separation.json");
        write_separation_json(f, r, *l.env);
      }
      const int code = r.separating_q ? kOk : kEmpty;
      m.finish(code);
      std::cout << (r.separating_q ? "separating q found" : "no separating q") << '\n';
      return code;
    }
    if (*learn) {
      Manifest m("learn", out_dir);
      record(m, in);
      m.config("sim", sim_path);
      load(l, in, true);
      SimConfig cfg = load_sim_config(sim_path);
      if (seed) cfg.seed = *seed;
      m.seed(cfg.seed);
      const LearningTrajectory traj = run_learning(*l.env, *l.a, *l.b, cfg);
      {
        auto f = m.open("trajectory.tsv");
        write_trajectory(f, traj, *l.env, every);
      }
      const auto ez = enumerate_ez(*l.env, *l.a, *l.b, cfg.shares);
      const EzComparison cmp = compare_to_ez(traj, ez, std::min<Index>(window, traj.periods()), conv_tol);
      {
        auto f = m.open("comparison.json");
        write_comparison_json(f, cmp, *l.env);
      }
      const int code = traj.periods() == 0 ? kEmpty : kOk;
      m.finish(code);
      std::cout << (cmp.converged ? "converged" : "not converged") << '\n';
      return code;
    }
    if (*repro) {
      Manifest m("reproduce", out_dir);
      tools::ReproduceOptions opt;
      if (!only.empty()) opt.only = only;
      if (!example1_env.empty()) {
        opt.example1_env = example1_env;
        m.config("example1_env", example1_env);
      }
      if (seed) opt.seed = *seed;
      m.seed(opt.seed);
      const std::vector<tools::Row> rows = tools::reproduce(opt);
      {
        auto f = m.open("reproduce.txt");
        tools::write_rows_text(f, rows);
      }
      {
        auto f = m.open("reproduce.json");
        tools::write_rows_json(f, rows);
      }
      tools::write_rows_text(std::cout, rows);
      bool all = true;
      for (const auto& r : rows) all = all && r.pass();
      m.finish(all ? kOk : kMismatch);
      return all ? kOk : kMismatch;
    }
    if (*build) {
      if (*b_cournot) {
        Manifest m("build cournot", out_dir);
        const CournotReport rep = cournot_closed_form(cs);
        const CournotDiscrete cd =
            build_cournot_discrete(cs, uniform_grid(0.0, (cs.beta - cs.c) / cs.r, cournot_n), cournot_bins, cournot_sd);
        json doc{{"a_AA", rep.a_aa}, {"resident_fitness", rep.resident_fitness}, {"a_stack", rep.a_stack},
                 {"a_BA", rep.a_ba}, {"entrant_fitness", rep.entrant_fitness},
                 {"intercept_residual", cd.intercept_residual}, {"warnings", cd.warnings}};
        write_build(m, cd.env, &cd.model_a, &cd.model_b, doc);
        m.finish(kOk);
        for (const auto& w : cd.warnings) std::cerr << "warning: " << w << '\n';
        return kOk;
      }
      if (*b_invest) {
        Manifest m("build investment", out_dir);
        const InvestmentGame g = build_investment_game(is, inv_sd);
        json doc{{"b_star_11", g.b_star_11}, {"b_star_12", g.b_star_12}, {"b_star_22", g.b_star_22},
                 {"b_grid", g.b_grid},
                 {"condition1", g.conditions.condition1}, {"condition2", g.conditions.condition2}};
        write_build(m, g.env, &g.model_a, &g.model_b, doc);
        m.finish(kOk);
        if (!g.conditions.condition1 || !g.conditions.condition2)
          std::cerr << "warning: investment conditions do not hold\n";
        return kOk;
      }
      if (*b_ex1) {
        Manifest m("build example1", out_dir);
        const StageEnv env = build_example1();
        const Model correct = minimal_correct_model(env);
        const Model illusion = illusion_of_control_model(env, perturb);
        json v_ne = json::array(), stack = json::array();
        for (Index s = 0; s < env.num_situations(); ++s) {
          v_ne.push_back(symmetric_nash(env, s).v_ne);
          const Stackelberg st = stackelberg(env, s);
          stack.push_back({{"strategy", env.strategies()[st.strategy]}, {"v_bar", st.v_bar}, {"unique", st.unique}});
        }
        const Identifiability id = check_identifiability(env);
        json doc{{"v_ne", v_ne}, {"stackelberg", stack},
                 {"situation_identifiability", id.situation_id}, {"stackelberg_identifiability", id.stackelberg_id}};
        write_build(m, env, &correct, &illusion, doc);
        m.finish(kOk);
        return kOk;
      }
      if (*b_cent) {
        Manifest m("build centipede", out_dir);
        const CentipedeReport r = centipede_analysis(cps);
        json doc{{"K", cps.K}, {"g", cps.g}, {"l", cps.l}, {"applicable", r.applicable},
                 {"maximal_continuation_verified", r.maximal_continuation_verified},
                 {"analogy_minimizer_x", r.analogy_minimizer_x},
                 {"p_star_a", r.applicable ? json(r.p_star_a) : json(nullptr)},
                 {"p_star_b", r.applicable ? json(r.p_star_b) : json(nullptr)},
                 {"checks", checks_json(r.checks)}};
        write_text(m, "report.json", doc.dump(2) + "\n");
        m.finish(kOk);
        std::cout << doc.dump(2) << '\n';
        return kOk;
      }
      if (*b_dollar) {
        Manifest m("build dollar", out_dir);
        const DollarReport r = dollar_analysis(dollar_k);
        json doc{{"K", dollar_k}, {"dominance", r.dominance},
                 {"maximal_continuation_verified", r.maximal_continuation_verified},
                 {"checks", checks_json(r.checks)}};
        write_text(m, "report.json", doc.dump(2) + "\n");
        m.finish(kOk);
        std::cout << doc.dump(2) << '\n';
        return kOk;
      }
    }
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfig;
  } catch (const ConstructionError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfig;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfig;
  }
  return kConfig;
}
