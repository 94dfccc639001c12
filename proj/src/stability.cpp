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

#include "zeitgeist/stability.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <ostream>

#include "json.hpp"
#include "zeitgeist/lp.hpp"

namespace zeitgeist {

const char* to_string(Classification c) {
  switch (c) {
    case Classification::kStable:
      return "Stable";
    case Classification::kFragile:
      return "Fragile";
    case Classification::kAmbiguous:
      return "Ambiguous";
    case Classification::kNoEz:
      return "NoEZ";
  }
  return "?";
}

std::vector<double> default_eps_list() { return {0.1, 0.05, 0.01, 0.005, 0.001}; }

StabilityVerdict classify_stability(const StageEnv& env, const Model& model_a,
                                    const Model& model_b, const FitnessWeights& q,
                                    const std::vector<double>& eps_list) {
  if (eps_list.empty()) throw InputError("eps list must be nonempty");
  for (Index i = 0; i < eps_list.size(); ++i) {
    if (!(eps_list[i] > 0.0 && eps_list[i] < 1.0)) throw InputError("eps values must lie in (0,1)");
    if (i > 0 && !(eps_list[i] < eps_list[i - 1])) throw InputError("eps list must be strictly descending");
  }
  if (q.q.size() != env.num_situations()) throw InputError("one fitness weight per situation");

  StabilityVerdict v;
  bool all_exist = true, all_stable = true, all_fragile = true;
  for (double eps : eps_list) {
    const EzSolutions sol = solve_ez(env, model_a, model_b, Shares::make(1.0 - eps, eps));
    EpsEvidence ev;
    ev.eps = eps;
    ev.ez_count = sol.empty() ? 0.0 : sol.count();
    if (sol.empty()) {
      ev.min_gap = ev.max_gap = std::nan("");
      all_exist = false;
    } else {
      // The EZ set is a product over situations, so the extreme gaps are
      // sums of per-situation extremes.
      for (Index s = 0; s < env.num_situations(); ++s) {
        double lo = kInf, hi = -kInf;
        for (const SituationEz& e : sol.per_situation[s]) {
          const double g = situation_fitness(e, sol.shares, env).gap();
          lo = std::min(lo, g);
          hi = std::max(hi, g);
          ev.mixture_present = ev.mixture_present || e.mixture_supported;
        }
        ev.min_gap += q.q[s] * lo;
        ev.max_gap += q.q[s] * hi;
      }
      if (ev.min_gap < -kTieTol) all_stable = false;
      if (ev.max_gap >= -kTieTol) all_fragile = false;
    }
    v.evidence.push_back(ev);
  }
  if (!all_exist) {
    v.classification = Classification::kNoEz;
  } else if (all_stable) {
    v.classification = Classification::kStable;
  } else if (all_fragile) {
    v.classification = Classification::kFragile;
  } else {
    v.classification = Classification::kAmbiguous;
  }
  return v;
}

ReversalResult detect_reversal(const StageEnv& env, const Model& model_a, const Model& model_b) {
  if (env.num_situations() != 1) throw InputError("stability reversal needs a single situation");
  ReversalResult r;
  r.at_a_dominant = solve_ez(env, model_a, model_b, Shares::make(1.0, 0.0));
  r.at_b_dominant = solve_ez(env, model_a, model_b, Shares::make(0.0, 1.0));
  for (const auto* sol : {&r.at_a_dominant, &r.at_b_dominant}) {
    for (const auto& e : sol->per_situation[0]) r.mixture_present = r.mixture_present || e.mixture_supported;
  }
  if (r.at_a_dominant.empty() || r.at_b_dominant.empty()) {
    r.reason = "no EZ at one of the extreme share vectors";
    return r;
  }
  for (const SituationEz& e : r.at_a_dominant.per_situation[0]) {
    const double aa = conditional_fitness(e, env, Group::A, Group::A);
    const double ba = conditional_fitness(e, env, Group::B, Group::A);
    const double ab = conditional_fitness(e, env, Group::A, Group::B);
    const double bb = conditional_fitness(e, env, Group::B, Group::B);
    if (!(aa > ba + kTieTol && ab > bb + kTieTol)) {
      r.reason = "some EZ at shares (1,0) lacks conditional dominance of A";
      return r;
    }
  }
  for (const SituationEz& e : r.at_b_dominant.per_situation[0]) {
    const Fitness f = situation_fitness(e, r.at_b_dominant.shares, env);
    if (!(f.b > f.a + kTieTol)) {
      r.reason = "some EZ at shares (0,1) does not give B strictly higher fitness";
      return r;
    }
  }
  r.reversal = true;
  r.reason = "conditions hold in every EZ";
  return r;
}

StableSharesResult stable_shares(const ShareGapFunction& gap, Index grid_n, double tol) {
  if (grid_n < 10) throw InputError("share grid needs at least 10 intervals");
  if (!(tol > 0.0)) throw InputError("bisection tolerance must be positive");
  constexpr double kZero = 1e-12;
  StableSharesResult out;
  std::vector<std::optional<double>> g(grid_n + 1);
  for (Index k = 0; k <= grid_n; ++k) {
    const double p = static_cast<double>(k) / static_cast<double>(grid_n);
    g[k] = gap(p);
    if (g[k]) {
      out.scan.emplace_back(p, *g[k]);
    } else {
      out.gap_points.push_back(p);
    }
  }
  auto sign = [&](Index k) -> int {
    if (!g[k]) return 2;
    return *g[k] > kZero ? 1 : (*g[k] < -kZero ? -1 : 0);
  };
  for (Index k = 0; k < grid_n; ++k) {
    const double lo_p = static_cast<double>(k) / static_cast<double>(grid_n);
    const double hi_p = static_cast<double>(k + 1) / static_cast<double>(grid_n);
    if (sign(k) == 1 && sign(k + 1) == -1) {
      double lo = lo_p, hi = hi_p;
      bool exact = false;
      while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        const auto gm = gap(mid);
        if (!gm) break;
        if (std::abs(*gm) <= kZero) {
          lo = hi = mid;
          exact = true;
          break;
        }
        (*gm > 0.0 ? lo : hi) = mid;
      }
      out.shares_a.push_back(exact ? lo : 0.5 * (lo + hi));
    } else if (k > 0 && sign(k) == 0 && sign(k - 1) == 1 && sign(k + 1) == -1) {
      out.shares_a.push_back(lo_p);
    }
  }
  // Interior shares only.
  std::erase_if(out.shares_a, [](double p) { return p <= 0.0 || p >= 1.0; });
  return out;
}

StableSharesResult stable_shares(const StageEnv& env, const Model& model_a, const Model& model_b,
                                 const FitnessWeights& q, Index grid_n, double tol,
                                 EzSelector selector) {
  if (q.q.size() != env.num_situations()) throw InputError("one fitness weight per situation");
  (void)selector;
  auto gap = [&](double p) -> std::optional<double> {
    const EzSolutions sol = solve_ez(env, model_a, model_b, Shares::of_a(p));
    if (sol.empty()) return std::nullopt;
    double total = 0.0;
    for (Index s = 0; s < env.num_situations(); ++s) {
      total += q.q[s] * situation_fitness(sol.per_situation[s].front(), sol.shares, env).gap();
    }
    return total;
  };
  return stable_shares(gap, grid_n, tol);
}

std::vector<double> response_values(const StageEnv& env, const std::vector<unsigned>& masks) {
  const Index n_a = env.num_strategies();
  if (masks.size() != n_a) throw InputError("one response set per opponent strategy");
  std::vector<double> v(env.num_situations());
  for (Index s = 0; s < env.num_situations(); ++s) {
    double lo = kInf;
    for (Index opp = 0; opp < n_a; ++opp) {
      for (Index own = 0; own < n_a; ++own) {
        if (!(masks[opp] >> own & 1U)) continue;
        const auto br = best_responses(env, s, own);
        if (std::find(br.begin(), br.end(), opp) == br.end()) continue;
        lo = std::min(lo, env.payoff(s, own, opp));
      }
    }
    v[s] = lo == kInf ? -kInf : lo;
  }
  return v;
}

SeparationResult singleton_fragility_check(const StageEnv& env) {
  const Index n_a = env.num_strategies();
  const Index n_s = env.num_situations();
  SeparationResult out;
  for (Index s = 0; s < n_s; ++s) {
    const SymmetricNash ne = symmetric_nash(env, s);
    if (!ne.exists) {
      throw InputError("no symmetric pure Nash equilibrium in situation '" + env.situations()[s] + "'");
    }
    out.v_ne.push_back(ne.v_ne);
  }

  // value[s][opp][mask]: worst payoff over own in mask with opp a rational
  // reply to own; +inf when no such own exists.
  const double sets = std::pow(std::pow(2.0, static_cast<double>(n_a)) - 1.0, static_cast<double>(n_a));
  out.functions_only = sets > 2e5;
  if (out.functions_only && std::pow(static_cast<double>(n_a), static_cast<double>(n_a)) > 2e6) {
    throw InputError("too many strategies to enumerate response maps");
  }
  std::vector<unsigned> choices;
  for (unsigned m = 1; m < (1U << n_a); ++m) {
    if (!out.functions_only || std::has_single_bit(m)) choices.push_back(m);
  }
  std::vector<std::vector<std::vector<double>>> value(
      n_s, std::vector<std::vector<double>>(n_a, std::vector<double>(choices.size(), kInf)));
  for (Index s = 0; s < n_s; ++s) {
    std::vector<std::vector<bool>> rational(n_a, std::vector<bool>(n_a, false));
    for (Index own = 0; own < n_a; ++own) {
      for (Index r : best_responses(env, s, own)) rational[own][r] = true;
    }
    for (Index opp = 0; opp < n_a; ++opp) {
      for (Index c = 0; c < choices.size(); ++c) {
        for (Index own = 0; own < n_a; ++own) {
          if ((choices[c] >> own & 1U) && rational[own][opp]) {
            value[s][opp][c] = std::min(value[s][opp][c], env.payoff(s, own, opp));
          }
        }
      }
    }
  }
  std::vector<Index> pos(n_a, 0);
  for (;;) {
    std::vector<double> v(n_s);
    for (Index s = 0; s < n_s; ++s) {
      double lo = kInf;
      for (Index opp = 0; opp < n_a; ++opp) lo = std::min(lo, value[s][opp][pos[opp]]);
      v[s] = lo == kInf ? -kInf : lo;
    }
    out.candidate_points.push_back(std::move(v));
    Index i = 0;
    while (i < n_a && ++pos[i] == choices.size()) pos[i++] = 0;
    if (i == n_a) break;
  }
  std::sort(out.candidate_points.begin(), out.candidate_points.end());
  out.candidate_points.erase(std::unique(out.candidate_points.begin(), out.candidate_points.end()),
                             out.candidate_points.end());

  std::vector<const std::vector<double>*> finite;
  for (const auto& v : out.candidate_points) {
    if (std::all_of(v.begin(), v.end(), [](double x) { return x > -kInf; })) finite.push_back(&v);
  }
  auto margin_at = [&](const std::vector<double>& q) {
    double m = kInf;
    for (const auto* v : finite) {
      double d = 0.0;
      for (Index s = 0; s < n_s; ++s) d += q[s] * (out.v_ne[s] - (*v)[s]);
      m = std::min(m, d);
    }
    return m;
  };
  std::vector<double> q(n_s, 1.0 / static_cast<double>(n_s));
  if (finite.empty()) {
    out.lp_margin = out.margin = kInf;
    out.tilt = 1.0;
    out.separating_q = q;
    return out;
  }
  // Variables (q_1..q_n, t+, t-); maximize t = t+ - t-.
  std::vector<std::vector<double>> rows;
  std::vector<double> rhs;
  std::vector<double> sum(n_s + 2, 0.0);
  for (Index s = 0; s < n_s; ++s) sum[s] = 1.0;
  rows.push_back(sum);
  rhs.push_back(1.0);
  for (double& x : sum) x = -x;
  rows.push_back(sum);
  rhs.push_back(-1.0);
  for (const auto* v : finite) {
    std::vector<double> r(n_s + 2);
    for (Index s = 0; s < n_s; ++s) r[s] = -(out.v_ne[s] - (*v)[s]);
    r[n_s] = 1.0;
    r[n_s + 1] = -1.0;
    rows.push_back(std::move(r));
    rhs.push_back(0.0);
  }
  std::vector<double> obj(n_s + 2, 0.0);
  obj[n_s] = 1.0;
  obj[n_s + 1] = -1.0;
  const LpResult lp = solve_lp(rows, rhs, obj);
  if (lp.status != LpResult::Status::kOptimal) return out;
  std::vector<double> best(lp.x.begin(), lp.x.begin() + static_cast<long>(n_s));
  out.lp_margin = margin_at(best);
  if (!(out.lp_margin > kTieTol)) {
    out.margin = out.lp_margin;
    return out;
  }
  for (double eps = 0.5; eps > 1e-18; eps *= 0.5) {
    for (Index s = 0; s < n_s; ++s) q[s] = (1.0 - eps) * best[s] + eps / static_cast<double>(n_s);
    const double m = margin_at(q);
    if (m > kTieTol) {
      out.separating_q = q;
      out.margin = m;
      out.tilt = eps;
      return out;
    }
  }
  out.margin = out.lp_margin;
  return out;
}

void write_verdict_json(std::ostream& os, const StabilityVerdict& v) {
  nlohmann::json doc;
  doc["classification"] = to_string(v.classification);
  doc["evidence"] = nlohmann::json::array();
  for (const auto& e : v.evidence) {
    nlohmann::json r = {{"eps", e.eps}, {"ez_count", e.ez_count}, {"mixture_present", e.mixture_present}};
    if (e.ez_count > 0) {
      r["min_gap"] = e.min_gap;
      r["max_gap"] = e.max_gap;
    } else {
      r["min_gap"] = nullptr;
      r["max_gap"] = nullptr;
    }
    doc["evidence"].push_back(r);
  }
  os << doc.dump(2) << '\n';
}

void write_separation_json(std::ostream& os, const SeparationResult& r, const StageEnv& env) {
  nlohmann::json doc;
  doc["situations"] = env.situations();
  doc["v_ne"] = r.v_ne;
  doc["functions_only"] = r.functions_only;
  auto pts = nlohmann::json::array();
  for (const auto& v : r.candidate_points) {
    auto p = nlohmann::json::array();
    for (double x : v) {
      if (x == -kInf) {
        p.push_back("-inf");
      } else {
        p.push_back(x);
      }
    }
    pts.push_back(p);
  }
  doc["candidate_points"] = pts;
  if (r.separating_q) {
    doc["separating_q"] = *r.separating_q;
  } else {
    doc["separating_q"] = nullptr;
  }
  doc["margin"] = std::isfinite(r.margin) ? nlohmann::json(r.margin) : nlohmann::json("inf");
  doc["lp_margin"] = std::isfinite(r.lp_margin) ? nlohmann::json(r.lp_margin) : nlohmann::json("inf");
  doc["tilt"] = r.tilt;
  os << doc.dump(2) << '\n';
}

}  // namespace zeitgeist
