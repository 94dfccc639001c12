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

#include "zeitgeist/learning_sim.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <numeric>
#include <ostream>
#include <random>
#include <thread>

#include "json.hpp"

namespace zeitgeist {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Model tables the simulation reads every period.
struct ModelTables {
  std::vector<Parameter> params;
  std::vector<double> log_prior;
  std::vector<double> prior;
  // Subjective expected utility, [(k * n + own) * n + conj].
  std::vector<double> eu;
};

ModelTables make_tables(const StageEnv& env, const Model& model, const std::vector<double>& prior,
                        const char* group) {
  constexpr Index kMaxParams = 1000000;
  if (model.size() > kMaxParams)
    throw InputError(std::string("learning: model ") + group + " has too many parameters to simulate");
  ModelTables t;
  const Index n = env.num_strategies();
  t.params.reserve(model.size());
  for (Index i = 0; i < model.size(); ++i) t.params.push_back(model.parameter(i));
  if (prior.empty()) {
    t.prior.assign(model.size(), 1.0 / static_cast<double>(model.size()));
  } else {
    if (prior.size() != model.size())
      throw InputError(std::string("learning: prior for group ") + group + " has the wrong length");
    check_probability_row(prior, std::string("prior for group ") + group);
    for (double w : prior)
      if (w < 1e-12) throw InputError(std::string("learning: prior for group ") + group + " lacks full support");
    t.prior = prior;
  }
  for (double w : t.prior) t.log_prior.push_back(std::log(w));
  t.eu.resize(model.kernels().size() * n * n);
  for (Index k = 0; k < model.kernels().size(); ++k)
    for (Index a = 0; a < n; ++a)
      for (Index c = 0; c < n; ++c)
        t.eu[(k * n + a) * n + c] = expectation(model.kernel(k).row(a, c), env.utility());
  return t;
}

struct Agent {
  std::mt19937_64 rng;
  std::vector<double> log_post;
  std::vector<double> weight;  // exp(log_post), kept in step
  std::array<Index, 2> seen{};
  std::array<Index, 2> act{};
  double realized = 0.0;
  Index skipped = 0;
};

double log_of(const DistView& v, Index y) {
  const double m = v.at(y);
  return m > 0.0 ? v.log_mass[y - v.offset] : kNegInf;
}

Index sample(const DistView& v, double u) {
  double acc = 0.0;
  Index last = v.offset;
  for (Index j = 0; j < v.mass.size(); ++j) {
    if (v.mass[j] <= 0.0) continue;
    last = v.offset + j;
    acc += v.mass[j];
    if (u < acc) return last;
  }
  return last;
}

void reset(Agent& agent, const ModelTables& t) {
  agent.log_post = t.log_prior;
  agent.weight = t.prior;
  agent.seen = {0, 0};
}

template <typename F>
void parallel_for(Index n, unsigned threads, F&& f) {
  if (threads <= 1 || n < 2 * threads) {
    for (Index i = 0; i < n; ++i) f(i);
    return;
  }
  std::vector<std::thread> pool;
  const Index chunk = (n + threads - 1) / threads;
  for (unsigned w = 0; w < threads; ++w) {
    const Index lo = w * chunk, hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &f] {
      for (Index i = lo; i < hi; ++i) f(i);
    });
  }
  for (auto& th : pool) th.join();
}

double total_variation(std::span<const double> nu, const Belief& mu) {
  std::vector<double> diff(nu.begin(), nu.end());
  for (const auto& [k, w] : mu)
    if (k < diff.size()) diff[k] -= w;
  double s = 0.0;
  for (double d : diff) s += std::abs(d);
  return 0.5 * s;
}

}  // namespace

unsigned default_threads() {
  if (const char* env = std::getenv("ZEITGEIST_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<unsigned>(v);
  }
  return 1;
}

std::array<Index, 2> SimConfig::group_sizes() const {
  const auto na = static_cast<Index>(std::llround(static_cast<double>(n_agents) * shares.a));
  const auto nb = static_cast<Index>(std::llround(static_cast<double>(n_agents) * shares.b));
  return {na, nb};
}

LearningTrajectory run_learning(const StageEnv& env, const Model& model_a, const Model& model_b,
                                const SimConfig& cfg) {
  Shares::make(cfg.shares.a, cfg.shares.b);
  if (!(cfg.tau >= 0.0 && cfg.tau < 1.0)) throw InputError("learning: tau must lie in [0, 1)");
  const std::array<Index, 2> sizes = cfg.group_sizes();
  if (sizes[0] < 2 || sizes[1] < 2) throw InputError("learning: each group needs at least 2 agents");
  const Index n = env.num_strategies();
  for (const Model* m : {&model_a, &model_b})
    if (m->num_strategies() != n) throw InputError("learning: model and environment disagree on |A|");
  const FitnessWeights q = cfg.situation_weights.q.empty() ? FitnessWeights::uniform(env.num_situations())
                                                           : cfg.situation_weights;
  if (q.q.size() != env.num_situations()) throw InputError("learning: situation weights have the wrong length");

  const std::array<ModelTables, 2> tables{make_tables(env, model_a, cfg.prior_a, "A"),
                                          make_tables(env, model_b, cfg.prior_b, "B")};
  const std::array<const Model*, 2> models{&model_a, &model_b};
  const double on = cfg.tau + (1.0 - cfg.tau) / static_cast<double>(n);
  const double off = (1.0 - cfg.tau) / static_cast<double>(n);
  const double log_on = std::log(on), log_off = off > 0.0 ? std::log(off) : kNegInf;
  const unsigned threads = cfg.threads ? cfg.threads : default_threads();

  const auto lo = static_cast<std::uint32_t>(cfg.seed & 0xffffffffULL);
  const auto hi = static_cast<std::uint32_t>(cfg.seed >> 32);
  std::array<std::vector<Agent>, 2> pop;
  for (Index g = 0; g < 2; ++g) {
    pop[g].resize(sizes[g]);
    for (Index i = 0; i < sizes[g]; ++i) {
      std::seed_seq seq{lo, hi, static_cast<std::uint32_t>(g), static_cast<std::uint32_t>(i)};
      pop[g][i].rng.seed(seq);
      reset(pop[g][i], tables[g]);
    }
  }
  std::seed_seq sit_seq{lo, hi, 2u, 0u};
  std::mt19937_64 sit_rng(sit_seq);
  std::discrete_distribution<Index> draw_situation(q.q.begin(), q.q.end());

  LearningTrajectory traj;
  traj.n_strategies = n;
  traj.n_params = {model_a.size(), model_b.size()};
  traj.group_sizes = sizes;
  traj.shares = cfg.shares;
  traj.situation_period = cfg.situation_period;
  traj.situation.reserve(cfg.horizon);
  traj.alpha.assign(cfg.horizon * 4 * n, 0.0);
  for (Index g = 0; g < 2; ++g) traj.nu[g].assign(cfg.horizon * traj.n_params[g], 0.0);
  traj.payoff.assign(cfg.horizon * 2, 0.0);

  const Index total = sizes[0] + sizes[1];
  auto agent_at = [&](Index flat) -> std::pair<Index, Index> {
    return flat < sizes[0] ? std::pair<Index, Index>{0, flat} : std::pair<Index, Index>{1, flat - sizes[0]};
  };

  Index situation = 0;
  for (Index t = 0; t < cfg.horizon; ++t) {
    if (t == 0 || (cfg.situation_period > 0 && t % cfg.situation_period == 0)) {
      situation = draw_situation(sit_rng);
      if (t > 0)
        for (Index g = 0; g < 2; ++g)
          for (Agent& a : pop[g]) reset(a, tables[g]);
    }
    traj.situation.push_back(situation);
    const Kernel& truth = env.kernel(situation);

    // Actions for this period, from the state at its start.
    parallel_for(total, threads, [&](Index flat) {
      const auto [g, i] = agent_at(flat);
      Agent& me = pop[g][i];
      const ModelTables& tab = tables[g];
      for (Index h = 0; h < 2; ++h) {
        if (me.seen[h] < cfg.policy.burn_in) {
          me.act[h] = std::uniform_int_distribution<Index>(0, n - 1)(me.rng);
          continue;
        }
        std::vector<double> value(n, 0.0);
        for (Index k = 0; k < tab.params.size(); ++k) {
          const double w = me.weight[k];
          if (w == 0.0) continue;
          const Parameter& p = tab.params[k];
          const Index c = p.conj(static_cast<Group>(h));
          for (Index a = 0; a < n; ++a) value[a] += w * tab.eu[(p.kernel * n + a) * n + c];
        }
        me.act[h] = argmax_set(value, kTieTol).front();
      }
    });

    // Matching, consequences, signals and Bayesian updates.
    parallel_for(total, threads, [&](Index flat) {
      const auto [g, i] = agent_at(flat);
      Agent& me = pop[g][i];
      const ModelTables& tab = tables[g];
      const Model& model = *models[g];
      const Index h = std::uniform_real_distribution<double>(0.0, 1.0)(me.rng) < cfg.shares.a ? 0 : 1;
      Index j;
      if (h == g) {
        j = std::uniform_int_distribution<Index>(0, sizes[h] - 2)(me.rng);
        if (j >= i) ++j;
      } else {
        j = std::uniform_int_distribution<Index>(0, sizes[h] - 1)(me.rng);
      }
      const Index own = me.act[h];
      const Index opp = pop[h][j].act[g];
      const Index y = sample(truth.row(own, opp), std::uniform_real_distribution<double>(0.0, 1.0)(me.rng));
      Index signal = opp;
      if (std::uniform_real_distribution<double>(0.0, 1.0)(me.rng) >= cfg.tau)
        signal = std::uniform_int_distribution<Index>(0, n - 1)(me.rng);
      me.realized = env.utility()[y];

      std::vector<double> next(me.log_post.size(), kNegInf);
      double top = kNegInf;
      for (Index k = 0; k < tab.params.size(); ++k) {
        if (me.log_post[k] == kNegInf) continue;
        const Parameter& p = tab.params[k];
        const Index c = p.conj(static_cast<Group>(h));
        const double ll = log_of(model.kernel(p.kernel).row(own, c), y) + (signal == c ? log_on : log_off);
        next[k] = me.log_post[k] + ll;
        top = std::max(top, next[k]);
      }
      ++me.seen[h];
      if (top == kNegInf) {
        ++me.skipped;
        return;
      }
      double z = 0.0;
      for (double v : next)
        if (v != kNegInf) z += std::exp(v - top);
      const double log_z = top + std::log(z);
      for (Index k = 0; k < next.size(); ++k) {
        me.log_post[k] = next[k] == kNegInf ? kNegInf : next[k] - log_z;
        me.weight[k] = next[k] == kNegInf ? 0.0 : std::exp(me.log_post[k]);
      }
    });

    for (Index g = 0; g < 2; ++g) {
      // Sum, then divide once, so unanimous play and constant beliefs are exact.
      const double size = static_cast<double>(sizes[g]);
      double pay = 0.0;
      double* nu = traj.nu[g].data() + t * traj.n_params[g];
      double* alpha = traj.alpha.data() + (t * 4 + 2 * g) * n;
      for (const Agent& a : pop[g]) {
        for (Index h = 0; h < 2; ++h) alpha[h * n + a.act[h]] += 1.0;
        for (Index k = 0; k < a.weight.size(); ++k) nu[k] += a.weight[k];
        pay += a.realized;
      }
      for (Index i = 0; i < 2 * n; ++i) alpha[i] /= size;
      for (Index k = 0; k < traj.n_params[g]; ++k) nu[k] /= size;
      traj.payoff[t * 2 + g] = pay / size;
    }
  }
  for (Index g = 0; g < 2; ++g)
    for (const Agent& a : pop[g]) traj.zero_likelihood_events += a.skipped;
  return traj;
}

EzComparison compare_window(const LearningTrajectory& traj, const std::vector<Zeitgeist>& ez_list,
                            Index begin, Index end, double tol) {
  EzComparison out;
  out.begin = begin;
  out.end = end;
  if (traj.periods() == 0) {
    out.note = "empty trajectory";
    return out;
  }
  if (!(begin < end && end <= traj.periods())) throw InputError("comparison window outside the trajectory");
  out.situation = traj.situation[begin];
  for (Index t = begin; t < end; ++t)
    if (traj.situation[t] != out.situation) throw InputError("comparison window spans a situation change");

  const Index n = traj.n_strategies;
  const double len = static_cast<double>(end - begin);
  std::array<Index, 4> modal{};
  for (Index mt = 0; mt < 4; ++mt) {
    std::vector<double> avg(n, 0.0);
    for (Index t = begin; t < end; ++t)
      for (Index a = 0; a < n; ++a) avg[a] += traj.alpha[(t * 4 + mt) * n + a] / len;
    modal[mt] = argmax_set(avg, 1e-12).front();
  }
  out.modal_play = {modal[0], modal[1], modal[2], modal[3]};
  for (Index g = 0; g < 2; ++g) {
    out.mean_belief[g].assign(traj.n_params[g], 0.0);
    for (Index t = begin; t < end; ++t) {
      const auto b = traj.belief(t, static_cast<Group>(g));
      for (Index k = 0; k < b.size(); ++k) out.mean_belief[g][k] += b[k];
    }
    for (double& w : out.mean_belief[g]) w /= len;
    double mean = 0.0, sq = 0.0;
    for (Index t = begin; t < end; ++t) mean += traj.payoff[t * 2 + g];
    mean /= len;
    for (Index t = begin; t < end; ++t) sq += std::pow(traj.payoff[t * 2 + g] - mean, 2);
    out.mean_payoff[g] = mean;
    out.payoff_se[g] = end - begin > 1 ? std::sqrt(sq / (len - 1.0)) / std::sqrt(len) : 0.0;
  }

  if (ez_list.empty()) {
    out.note = "no equilibrium zeitgeist to compare against";
    return out;
  }
  for (Index e = 0; e < ez_list.size(); ++e) {
    const SituationEz& s = ez_list[e].per_situation.at(out.situation);
    const auto want = s.play.as_array();
    const auto got = out.modal_play.as_array();
    Index mismatch = 0;
    for (Index m = 0; m < 4; ++m) mismatch += want[m] != got[m];
    const double dist = std::max(total_variation(out.mean_belief[0], s.belief_a),
                                 total_variation(out.mean_belief[1], s.belief_b));
    if (!out.nearest || mismatch < out.play_mismatch ||
        (mismatch == out.play_mismatch && dist < out.belief_distance)) {
      out.nearest = e;
      out.play_mismatch = mismatch;
      out.belief_distance = dist;
    }
  }
  out.converged = out.play_mismatch == 0 && out.belief_distance <= tol;
  return out;
}

EzComparison compare_to_ez(const LearningTrajectory& traj, const std::vector<Zeitgeist>& ez_list,
                           Index window, double tol) {
  const Index T = traj.periods();
  if (T == 0) return compare_window(traj, ez_list, 0, 0, tol);
  if (window == 0 || window > T) throw InputError("comparison window must lie in [1, horizon]");
  return compare_window(traj, ez_list, T - window, T, tol);
}

std::vector<EzComparison> compare_segments(const LearningTrajectory& traj,
                                           const std::vector<Zeitgeist>& ez_list, Index window,
                                           double tol) {
  std::vector<EzComparison> out;
  const Index T = traj.periods();
  const Index seg = traj.situation_period > 0 ? traj.situation_period : T;
  for (Index start = 0; start < T; start += seg) {
    const Index stop = std::min(T, start + seg);
    const Index w = std::min(window, stop - start);
    out.push_back(compare_window(traj, ez_list, stop - w, stop, tol));
  }
  return out;
}

void write_trajectory(std::ostream& os, const LearningTrajectory& traj, const StageEnv& env,
                      Index every) {
  if (every == 0) throw InputError("subsample interval must be positive");
  const Index n = traj.n_strategies;
  auto hist = [&](Index t, Index mt) {
    std::string s;
    char buf[32];
    for (Index a = 0; a < n; ++a) {
      std::snprintf(buf, sizeof buf, "%s%.6f", a ? ";" : "", traj.alpha[(t * 4 + mt) * n + a]);
      s += buf;
    }
    return s;
  };
  os << "period\tsituation\tgroup\tplay_vs_A\tplay_vs_B\tmodal_param\tmodal_mass\tmean_payoff\n";
  char buf[64];
  for (Index t = 0; t < traj.periods(); t += every) {
    for (Index g = 0; g < 2; ++g) {
      const auto b = traj.belief(t, static_cast<Group>(g));
      const Index top = static_cast<Index>(std::max_element(b.begin(), b.end()) - b.begin());
      os << t << '\t' << env.situations()[traj.situation[t]] << '\t' << (g ? 'B' : 'A') << '\t'
         << hist(t, 2 * g) << '\t' << hist(t, 2 * g + 1) << '\t' << top << '\t';
      std::snprintf(buf, sizeof buf, "%.6f\t%.9g\n", b.empty() ? 0.0 : b[top], traj.payoff[t * 2 + g]);
      os << buf;
    }
  }
}

void write_comparison_json(std::ostream& os, const EzComparison& c, const StageEnv& env) {
  nlohmann::json doc;
  doc["window"] = {c.begin, c.end};
  doc["situation"] = env.situations().at(c.situation);
  nlohmann::json play = nlohmann::json::object();
  const char* names[4] = {"AA", "AB", "BA", "BB"};
  const auto q = c.modal_play.as_array();
  for (Index m = 0; m < 4; ++m) play[names[m]] = env.strategies().at(q[m]);
  doc["modal_play"] = play;
  doc["mean_payoff"] = {{"A", c.mean_payoff[0]}, {"B", c.mean_payoff[1]}};
  doc["payoff_se"] = {{"A", c.payoff_se[0]}, {"B", c.payoff_se[1]}};
  doc["nearest_ez"] = c.nearest ? nlohmann::json(*c.nearest) : nlohmann::json(nullptr);
  doc["play_mismatch"] = c.play_mismatch;
  doc["belief_distance"] = std::isfinite(c.belief_distance) ? nlohmann::json(c.belief_distance)
                                                            : nlohmann::json("inf");
  doc["converged"] = c.converged;
  if (!c.note.empty()) doc["note"] = c.note;
  os << doc.dump(2) << '\n';
}

}  // namespace zeitgeist
