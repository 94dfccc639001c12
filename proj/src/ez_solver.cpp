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

#include "zeitgeist/ez_solver.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <optional>
#include <ostream>
#include <unordered_map>

#include "json.hpp"
#include "zeitgeist/lp.hpp"

namespace zeitgeist {

namespace {

// Subjective payoffs U_k(a, c) with memoized column maxima.
class PayoffCache {
 public:
  PayoffCache(const StageEnv& env, const Model& model) : env_(env), model_(model) {}

  double value(Index k, Index a, Index c) const {
    return expectation(model_.kernel(k).row(a, c), env_.utility());
  }
  double column_max(Index k, Index c) {
    const Index key = k * env_.num_strategies() + c;
    auto it = max_.find(key);
    if (it != max_.end()) return it->second;
    double best = -kInf;
    for (Index a = 0; a < env_.num_strategies(); ++a) best = std::max(best, value(k, a, c));
    max_.emplace(key, best);
    return best;
  }

 private:
  const StageEnv& env_;
  const Model& model_;
  std::unordered_map<Index, double> max_;
};

struct Rationalized {
  Belief belief;
  bool mixture = false;
};

class GroupSearch {
 public:
  GroupSearch(const StageEnv& env, const Model& model, Group g, Index situation, double p_g)
      : inference(env, model, g, situation, p_g), env_(env), model_(model), g_(g), cache_(env, model) {}

  // Belief on `m` under which a_own is a best reply to own-group opponents
  // and x is a best reply to the other group, if one exists.
  std::optional<Rationalized> rationalize(Index a_own, Index x, const MinimizerSet& m) {
    for (Index th : m.indices) {
      if (single_ok(th, a_own, x)) return Rationalized{{{th, 1.0}}, false};
    }
    if (m.indices.size() < 2) return std::nullopt;
    return mixture(a_own, x, m.indices);
  }

  GroupInference inference;

 private:
  bool single_ok(Index th, Index a_own, Index x) {
    const Parameter p = model_.parameter(th);
    const Index c_own = p.conj(g_);
    const Index c_cross = p.conj(other(g_));
    return cache_.value(p.kernel, a_own, c_own) >= cache_.column_max(p.kernel, c_own) - kTieTol &&
           cache_.value(p.kernel, x, c_cross) >= cache_.column_max(p.kernel, c_cross) - kTieTol;
  }

  // Maximizes the best-reply margin t - kTieTol over beliefs on `support`, so
  // the returned vertex is as far inside the tie tolerance as possible.
  // Variables are the n weights followed by t >= 0.
  std::optional<Rationalized> mixture(Index a_own, Index x, const std::vector<Index>& support) {
    const Index n = support.size();
    const Index n_a = env_.num_strategies();
    std::vector<std::vector<double>> rows;
    std::vector<double> rhs;
    std::vector<double> sum(n + 1, 1.0);
    sum[n] = 0.0;
    rows.push_back(sum);
    rhs.push_back(1.0);
    for (double& v : sum) v = -v;
    rows.push_back(sum);
    rhs.push_back(-1.0);
    std::vector<double> cap(n + 1, 0.0);
    cap[n] = 1.0;
    rows.push_back(cap);
    rhs.push_back(1.0 + kTieTol);
    for (const Group opp : {g_, other(g_)}) {
      const Index target = opp == g_ ? a_own : x;
      for (Index alt = 0; alt < n_a; ++alt) {
        if (alt == target) continue;
        std::vector<double> r(n + 1, 1.0);
        for (Index j = 0; j < n; ++j) {
          const Parameter p = model_.parameter(support[j]);
          const Index c = p.conj(opp);
          r[j] = cache_.value(p.kernel, alt, c) - cache_.value(p.kernel, target, c);
        }
        rows.push_back(std::move(r));
        rhs.push_back(kTieTol);
      }
    }
    std::vector<double> objective(n + 1, 0.0);
    objective[n] = 1.0;
    const LpResult lp = solve_lp(rows, rhs, objective);
    if (lp.status != LpResult::Status::kOptimal) return std::nullopt;
    Rationalized out;
    out.mixture = true;
    double total = 0.0;
    for (Index j = 0; j < n; ++j) {
      if (lp.x[j] > 1e-12) {
        out.belief.emplace_back(support[j], lp.x[j]);
        total += lp.x[j];
      }
    }
    for (auto& [i, w] : out.belief) w /= total;
    return out;
  }

  const StageEnv& env_;
  const Model& model_;
  Group g_;
  PayoffCache cache_;
};

std::vector<SituationEz> solve_situation(const StageEnv& env, const Model& model_a,
                                         const Model& model_b, Shares shares, Index s) {
  const Index n_a = env.num_strategies();
  GroupSearch search_a(env, model_a, Group::A, s, shares.a);
  GroupSearch search_b(env, model_b, Group::B, s, shares.b);
  std::vector<SituationEz> out;
  std::vector<std::pair<Index, Rationalized>> ok_a, ok_b;
  for (Index ab = 0; ab < n_a; ++ab) {
    for (Index ba = 0; ba < n_a; ++ba) {
      ok_a.clear();
      search_a.inference.set_cross(ab, ba);
      for (Index aa = 0; aa < n_a; ++aa) {
        const MinimizerSet m = search_a.inference.minimizers(aa);
        if (auto r = search_a.rationalize(aa, ab, m)) ok_a.emplace_back(aa, std::move(*r));
      }
      if (ok_a.empty()) continue;
      ok_b.clear();
      search_b.inference.set_cross(ba, ab);
      for (Index bb = 0; bb < n_a; ++bb) {
        const MinimizerSet m = search_b.inference.minimizers(bb);
        if (auto r = search_b.rationalize(bb, ba, m)) ok_b.emplace_back(bb, std::move(*r));
      }
      for (const auto& [aa, ra] : ok_a) {
        for (const auto& [bb, rb] : ok_b) {
          SituationEz e;
          e.situation = s;
          e.play = Quadruple{aa, ab, ba, bb};
          e.belief_a = ra.belief;
          e.belief_b = rb.belief;
          e.mixture_supported = ra.mixture || rb.mixture;
          out.push_back(std::move(e));
        }
      }
    }
  }
  std::sort(out.begin(), out.end(),
            [](const SituationEz& x, const SituationEz& y) { return x.play < y.play; });
  return out;
}

double belief_total(const Belief& mu) {
  double t = 0.0;
  for (const auto& [i, w] : mu) t += w;
  return t;
}

}  // namespace

bool EzSolutions::empty() const {
  return std::any_of(per_situation.begin(), per_situation.end(),
                     [](const auto& v) { return v.empty(); });
}

double EzSolutions::count() const {
  double n = 1.0;
  for (const auto& v : per_situation) n *= static_cast<double>(v.size());
  return n;
}

std::vector<Zeitgeist> EzSolutions::materialize(Index limit) const {
  std::vector<Zeitgeist> out;
  if (empty()) return out;
  if (count() > static_cast<double>(limit)) throw InputError("too many equilibrium zeitgeists to list");
  std::vector<Index> pos(per_situation.size(), 0);
  for (;;) {
    Zeitgeist z;
    z.shares = shares;
    for (Index s = 0; s < pos.size(); ++s) z.per_situation.push_back(per_situation[s][pos[s]]);
    out.push_back(std::move(z));
    // Odometer with the last situation varying fastest.
    Index s = pos.size();
    while (s > 0) {
      --s;
      if (++pos[s] < per_situation[s].size()) break;
      pos[s] = 0;
      if (s == 0) return out;
    }
    if (pos.empty()) return out;
  }
}

EzSolutions solve_ez(const StageEnv& env, const Model& model_a, const Model& model_b,
                     Shares shares) {
  EzSolutions sol;
  sol.shares = shares;
  for (Index s = 0; s < env.num_situations(); ++s) {
    sol.per_situation.push_back(solve_situation(env, model_a, model_b, shares, s));
  }
  return sol;
}

std::vector<Zeitgeist> enumerate_ez(const StageEnv& env, const Model& model_a,
                                    const Model& model_b, Shares shares) {
  return solve_ez(env, model_a, model_b, shares).materialize();
}

std::vector<double> subjective_payoffs(const StageEnv& env, const Model& model, const Belief& mu,
                                       Group opp) {
  std::vector<double> out(env.num_strategies(), 0.0);
  for (const auto& [th, w] : mu) {
    const Parameter p = model.parameter(th);
    for (Index a = 0; a < out.size(); ++a) {
      out[a] += w * expected_payoff(env, model.kernel(p.kernel), a, p.conj(opp));
    }
  }
  return out;
}

std::pair<bool, EZCertificate> verify_ez(const Zeitgeist& z, const StageEnv& env,
                                         const Model& model_a, const Model& model_b) {
  if (z.per_situation.size() != env.num_situations()) {
    throw InputError("zeitgeist must give play for every situation");
  }
  EZCertificate cert;
  bool all_ok = true;
  for (Index s = 0; s < env.num_situations(); ++s) {
    const SituationEz& e = z.per_situation[s];
    std::array<GroupCertificate, 2> gc;
    for (const Group g : {Group::A, Group::B}) {
      const Model& model = g == Group::A ? model_a : model_b;
      const Belief& mu = e.belief(g);
      for (const auto& [th, w] : mu) {
        if (th >= model.size() || !(w >= 0.0)) {
          throw InputError("belief refers to a parameter outside model '" + model.label() + "'");
        }
      }
      if (std::abs(belief_total(mu) - 1.0) > kProbTol) {
        throw InputError("belief weights must sum to 1");
      }
      GroupCertificate& c = gc[idx(g)];
      c.minimizers = kl_minimizers(model, DataContext{g, z.shares, s, e.play}, env);
      for (const auto& [th, w] : mu) {
        if (w > 0.0 && !std::binary_search(c.minimizers.indices.begin(),
                                           c.minimizers.indices.end(), th)) {
          c.off_support.push_back(th);
        }
      }
      c.payoff_vs_a = subjective_payoffs(env, model, mu, Group::A);
      c.payoff_vs_b = subjective_payoffs(env, model, mu, Group::B);
      const double max_a = *std::max_element(c.payoff_vs_a.begin(), c.payoff_vs_a.end());
      const double max_b = *std::max_element(c.payoff_vs_b.begin(), c.payoff_vs_b.end());
      c.slack_vs_a = c.payoff_vs_a[e.play.play(g, Group::A)] - max_a;
      c.slack_vs_b = c.payoff_vs_b[e.play.play(g, Group::B)] - max_b;
      c.ok = c.off_support.empty() && c.slack_vs_a >= -kTieTol && c.slack_vs_b >= -kTieTol;
      all_ok = all_ok && c.ok;
    }
    cert.groups.push_back(std::move(gc));
  }
  return {all_ok, std::move(cert)};
}

double conditional_fitness(const SituationEz& s, const StageEnv& env, Group g, Group g_prime) {
  return env.payoff(s.situation, s.play.play(g, g_prime), s.play.play(g_prime, g));
}

double conditional_fitness(const Zeitgeist& z, const StageEnv& env, Index situation, Group g,
                           Group g_prime) {
  return conditional_fitness(z.per_situation.at(situation), env, g, g_prime);
}

Fitness situation_fitness(const SituationEz& s, Shares shares, const StageEnv& env) {
  Fitness f;
  f.a = shares.a * conditional_fitness(s, env, Group::A, Group::A) +
        shares.b * conditional_fitness(s, env, Group::A, Group::B);
  f.b = shares.b * conditional_fitness(s, env, Group::B, Group::B) +
        shares.a * conditional_fitness(s, env, Group::B, Group::A);
  return f;
}

Fitness fitness(const Zeitgeist& z, const StageEnv& env, const FitnessWeights& q) {
  if (q.q.size() != env.num_situations()) throw InputError("one fitness weight per situation");
  Fitness f;
  for (Index s = 0; s < env.num_situations(); ++s) {
    const Fitness fs = situation_fitness(z.per_situation[s], z.shares, env);
    f.a += q.q[s] * fs.a;
    f.b += q.q[s] * fs.b;
  }
  return f;
}

namespace {

nlohmann::json belief_json(const Belief& mu, const Model& model, const StageEnv& env) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& [th, w] : mu) {
    const Parameter p = model.parameter(th);
    out.push_back({{"index", th},
                   {"weight", w},
                   {"conj_a", env.strategies()[p.conj_a]},
                   {"conj_b", env.strategies()[p.conj_b]},
                   {"kernel", p.kernel}});
  }
  return out;
}

}  // namespace

void write_ez_report_json(std::ostream& os, const EzSolutions& sol, const StageEnv& env,
                          const Model& model_a, const Model& model_b) {
  nlohmann::json doc;
  doc["shares"] = {sol.shares.a, sol.shares.b};
  doc["model_a"] = model_a.label();
  doc["model_b"] = model_b.label();
  doc["ez_count"] = sol.count();
  doc["records"] = nlohmann::json::array();
  const auto& lab = env.strategies();
  for (const auto& list : sol.per_situation) {
    for (const SituationEz& e : list) {
      const Fitness f = situation_fitness(e, sol.shares, env);
      doc["records"].push_back({
          {"situation", env.situations()[e.situation]},
          {"play", {{"AA", lab[e.play.aa]}, {"AB", lab[e.play.ab]}, {"BA", lab[e.play.ba]},
                    {"BB", lab[e.play.bb]}}},
          {"mixture_supported", e.mixture_supported},
          {"belief_a", belief_json(e.belief_a, model_a, env)},
          {"belief_b", belief_json(e.belief_b, model_b, env)},
          {"fitness_a", f.a},
          {"fitness_b", f.b},
          {"conditional_fitness",
           {{"AA", conditional_fitness(e, env, Group::A, Group::A)},
            {"AB", conditional_fitness(e, env, Group::A, Group::B)},
            {"BA", conditional_fitness(e, env, Group::B, Group::A)},
            {"BB", conditional_fitness(e, env, Group::B, Group::B)}}},
      });
    }
  }
  os << doc.dump(2) << '\n';
}

void write_ez_report_text(std::ostream& os, const EzSolutions& sol, const StageEnv& env,
                          const Model& model_a, const Model& model_b) {
  const auto& lab = env.strategies();
  os << "shares A=" << sol.shares.a << " B=" << sol.shares.b << "  models A='" << model_a.label()
     << "' B='" << model_b.label() << "'  EZ count " << sol.count() << '\n';
  os << std::left << std::setw(12) << "situation" << std::setw(40) << "play AA/AB/BA/BB"
     << std::setw(14) << "fit_A" << std::setw(14) << "fit_B" << std::setw(14) << "cf_AA"
     << std::setw(14) << "cf_AB" << std::setw(14) << "cf_BA" << std::setw(14) << "cf_BB"
     << "mixture\n";
  for (const auto& list : sol.per_situation) {
    for (const SituationEz& e : list) {
      const Fitness f = situation_fitness(e, sol.shares, env);
      const std::string play = lab[e.play.aa] + " " + lab[e.play.ab] + " " + lab[e.play.ba] + " " +
                               lab[e.play.bb];
      os << std::left << std::setw(12) << env.situations()[e.situation] << std::setw(40) << play
         << std::setw(14) << f.a << std::setw(14) << f.b << std::setw(14)
         << conditional_fitness(e, env, Group::A, Group::A) << std::setw(14)
         << conditional_fitness(e, env, Group::A, Group::B) << std::setw(14)
         << conditional_fitness(e, env, Group::B, Group::A) << std::setw(14)
         << conditional_fitness(e, env, Group::B, Group::B) << (e.mixture_supported ? "yes" : "no")
         << '\n';
    }
  }
}

}  // namespace zeitgeist
