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

#include "zeitgeist/config_io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace zeitgeist {
namespace {

using nlohmann::json;

struct PathError {
  std::string pointer;
  std::string message;
};

std::string escape_token(const std::string& key) {
  std::string out;
  for (char c : key) {
    if (c == '~') out += "~0";
    else if (c == '/') out += "~1";
    else out += c;
  }
  return out;
}

// A JSON value together with its pointer, for error reporting.
class Node {
 public:
  Node(const json& j, std::string ptr) : j_(j), ptr_(std::move(ptr)) {}

  [[noreturn]] void fail(const std::string& msg) const { throw PathError{ptr_.empty() ? "/" : ptr_, msg}; }

  bool has(const std::string& key) const { return j_.is_object() && j_.contains(key); }
  Node at(const std::string& key) const {
    if (!j_.is_object()) fail("expected an object");
    if (!j_.contains(key)) fail("missing field '" + key + "'");
    return Node(j_.at(key), ptr_ + "/" + escape_token(key));
  }
  Node at(Index i) const { return Node(j_.at(i), ptr_ + "/" + std::to_string(i)); }
  Index size() const {
    if (!j_.is_array()) fail("expected an array");
    return j_.size();
  }
  Index size(Index expected, const char* what) const {
    const Index n = size();
    if (n != expected)
      fail(std::string(what) + ": expected " + std::to_string(expected) + " entries, found " + std::to_string(n));
    return n;
  }
  double num() const {
    if (!j_.is_number()) fail("expected a number");
    return j_.get<double>();
  }
  long long integer() const {
    if (!j_.is_number_integer()) fail("expected an integer");
    return j_.get<long long>();
  }
  Index count() const {
    const long long v = integer();
    if (v < 0) fail("expected a nonnegative integer");
    return static_cast<Index>(v);
  }
  bool boolean() const {
    if (!j_.is_boolean()) fail("expected true or false");
    return j_.get<bool>();
  }
  std::string str() const {
    if (!j_.is_string()) fail("expected a string");
    return j_.get<std::string>();
  }
  bool is_string() const { return j_.is_string(); }
  bool is_object() const { return j_.is_object(); }
  std::vector<double> numbers() const {
    std::vector<double> out(size());
    for (Index i = 0; i < out.size(); ++i) out[i] = at(i).num();
    return out;
  }
  std::vector<std::string> strings() const {
    std::vector<std::string> out(size());
    for (Index i = 0; i < out.size(); ++i) out[i] = at(i).str();
    return out;
  }

 private:
  const json& j_;
  std::string ptr_;
};

template <typename F>
auto guarded(const Node& n, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const InputError& e) {
    n.fail(e.what());
  }
}

Index line_at(const std::string& text, std::size_t pos) {
  return 1 + static_cast<Index>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(std::min(pos, text.size())), '\n'));
}

template <typename F>
auto with_lines(const std::string& text, const std::string& source, F&& f) -> decltype(f(std::declval<const json&>())) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(source + ":" + std::to_string(line_at(text, e.byte ? e.byte - 1 : 0)) +
                      ": malformed JSON: " + e.what());
  }
  try {
    return f(doc);
  } catch (const PathError& e) {
    const Index line = line_of_pointer(text, e.pointer);
    throw ConfigError(source + ":" + std::to_string(line ? line : 1) + ": " + e.message + " (at " + e.pointer + ")");
  }
}

std::vector<double> parse_row(const Node& n, Index n_y) {
  std::vector<double> row;
  if (n.is_object()) {
    const Index offset = n.at("offset").count();
    const std::vector<double> mass = n.at("mass").numbers();
    if (offset + mass.size() > n_y) n.fail("sparse row runs past the consequence set");
    row.assign(n_y, 0.0);
    std::copy(mass.begin(), mass.end(), row.begin() + static_cast<std::ptrdiff_t>(offset));
  } else {
    n.size(n_y, "probability row");
    row = n.numbers();
  }
  guarded(n, [&] {
    check_probability_row(row, "kernel row");
    return 0;
  });
  return row;
}

Binning parse_binning(const Node& n) {
  Binning b;
  b.lower = n.at("lower").num();
  b.upper = n.at("upper").num();
  b.bins = n.at("bins").count();
  b.sd = n.at("sd").num();
  return b;
}

KernelPtr parse_kernel(const Node& k, Index n_a, Index n_y, ConfigContext& ctx) {
  const std::string type = k.at("type").str();
  KernelPtr out;
  if (type == "table") {
    const Node rows = k.at("rows");
    rows.size(n_a, "kernel rows (own strategies)");
    std::vector<std::vector<std::vector<double>>> dense(n_a);
    for (Index i = 0; i < n_a; ++i) {
      const Node ri = rows.at(i);
      ri.size(n_a, "kernel rows (opponent strategies)");
      for (Index j = 0; j < n_a; ++j) dense[i].push_back(parse_row(ri.at(j), n_y));
    }
    out = guarded(k, [&] { return std::make_shared<TableKernel>(n_a, n_y, dense); });
  } else if (type == "blind") {
    const Node rows = k.at("rows");
    rows.size(n_a, "blind kernel rows");
    std::vector<std::vector<double>> dense;
    for (Index i = 0; i < n_a; ++i) dense.push_back(parse_row(rows.at(i), n_y));
    out = guarded(k, [&] { return std::make_shared<BlindKernel>(n_y, dense); });
  } else if (type == "normal_bins" || type == "linear_price") {
    const Binning b = parse_binning(k.at("binning"));
    const bool own_blocks = k.has("own_blocks") ? k.at("own_blocks").boolean() : false;
    auto bank = guarded(k.at("binning"), [&] { return ctx.bank(b); });
    if (type == "normal_bins") {
      const Node means = k.at("means");
      means.size(n_a, "mean table");
      std::vector<std::vector<double>> m(n_a);
      for (Index i = 0; i < n_a; ++i) {
        means.at(i).size(n_a, "mean table row");
        m[i] = means.at(i).numbers();
      }
      out = guarded(k, [&] { return std::make_shared<BinnedNormalKernel>(bank, ctx.distinct_classes(n_a), [&] {
        std::vector<double> flat;
        for (const auto& r : m) flat.insert(flat.end(), r.begin(), r.end());
        return flat;
      }(), own_blocks); });
    } else {
      LinearPrice form;
      form.levels = k.at("levels").numbers();
      if (form.levels.size() != n_a) k.at("levels").fail("need one level per strategy");
      form.intercept = k.at("intercept").num();
      form.slope = k.at("slope").num();
      out = guarded(k, [&] {
        return std::make_shared<BinnedNormalKernel>(bank, ctx.level_classes(form.levels), form, own_blocks);
      });
    }
  } else {
    k.at("type").fail("unknown kernel type '" + type + "'");
  }
  if (out->num_consequences() != n_y)
    k.fail("kernel has " + std::to_string(out->num_consequences()) + " consequences, environment has " +
           std::to_string(n_y));
  return out;
}

Index parse_strategy_ref(const Node& n, const StageEnv& env) {
  if (n.is_string()) return guarded(n, [&] { return env.strategy_index(n.str()); });
  const Index i = n.count();
  if (i >= env.num_strategies()) n.fail("strategy index out of range");
  return i;
}

json row_json(const std::vector<double>& dense) {
  if (dense.size() <= 32) return dense;
  Index first = 0, last = dense.size();
  while (first < last && dense[first] == 0.0) ++first;
  while (last > first && dense[last - 1] == 0.0) --last;
  return {{"offset", first},
          {"mass", std::vector<double>(dense.begin() + static_cast<std::ptrdiff_t>(first),
                                       dense.begin() + static_cast<std::ptrdiff_t>(last))}};
}

json binning_json(const Binning& b) {
  return {{"lower", b.lower}, {"upper", b.upper}, {"bins", b.bins}, {"sd", b.sd}};
}

json kernel_json(const Kernel& k) {
  const Index n = k.num_strategies();
  if (const auto* bn = dynamic_cast<const BinnedNormalKernel*>(&k)) {
    if (bn->linear_form()) {
      const LinearPrice& f = *bn->linear_form();
      return {{"type", "linear_price"}, {"binning", binning_json(bn->binning())}, {"levels", f.levels},
              {"intercept", f.intercept}, {"slope", f.slope}, {"own_blocks", bn->own_blocks()}};
    }
    json means = json::array();
    for (Index i = 0; i < n; ++i) {
      json r = json::array();
      for (Index j = 0; j < n; ++j) r.push_back(bn->mean(i, j));
      means.push_back(r);
    }
    return {{"type", "normal_bins"}, {"binning", binning_json(bn->binning())}, {"means", means},
            {"own_blocks", bn->own_blocks()}};
  }
  if (k.opponent_blind()) {
    json rows = json::array();
    for (Index i = 0; i < n; ++i) rows.push_back(row_json(k.dense_row(i, 0)));
    return {{"type", "blind"}, {"rows", rows}};
  }
  json rows = json::array();
  for (Index i = 0; i < n; ++i) {
    json r = json::array();
    for (Index j = 0; j < n; ++j) r.push_back(row_json(k.dense_row(i, j)));
    rows.push_back(r);
  }
  return {{"type", "table"}, {"rows", rows}};
}

bool is_perfect(const Monitoring& m, const std::vector<std::string>& strategies) {
  if (m.signals != strategies) return false;
  for (Index i = 0; i < m.dist.size(); ++i)
    for (Index j = 0; j < m.dist[i].size(); ++j)
      if (m.dist[i][j] != (i == j ? 1.0 : 0.0)) return false;
  return true;
}

}  // namespace

std::shared_ptr<NormalBank> ConfigContext::bank(const Binning& b) {
  for (const auto& bank : banks_)
    if (bank->binning() == b) return bank;
  banks_.push_back(std::make_shared<NormalBank>(b));
  return banks_.back();
}

std::shared_ptr<const ProfileClasses> ConfigContext::level_classes(const std::vector<double>& levels) {
  auto& slot = levels_[levels];
  if (!slot) slot = ProfileClasses::by_level_sum(levels);
  return slot;
}

std::shared_ptr<const ProfileClasses> ConfigContext::distinct_classes(Index n) {
  auto& slot = distinct_[n];
  if (!slot) slot = ProfileClasses::distinct(n);
  return slot;
}

Index line_of_pointer(const std::string& text, const std::string& pointer) {
  std::vector<std::string> toks;
  if (!pointer.empty() && pointer != "/") {
    std::string cur;
    for (std::size_t i = 1; i <= pointer.size(); ++i) {
      if (i == pointer.size() || pointer[i] == '/') {
        std::string t;
        for (std::size_t k = 0; k < cur.size(); ++k) {
          if (cur[k] == '~' && k + 1 < cur.size()) {
            t += cur[k + 1] == '1' ? '/' : '~';
            ++k;
          } else {
            t += cur[k];
          }
        }
        toks.push_back(t);
        cur.clear();
      } else {
        cur += pointer[i];
      }
    }
  }
  std::size_t i = 0;
  const std::size_t n = text.size();
  auto ws = [&] {
    while (i < n && (text[i] == ' ' || text[i] == '\n' || text[i] == '\r' || text[i] == '\t')) ++i;
  };
  auto read_string = [&] {
    std::string out;
    ++i;
    while (i < n && text[i] != '"') {
      if (text[i] == '\\' && i + 1 < n) ++i;
      out += text[i++];
    }
    ++i;
    return out;
  };
  auto skip_value = [&] {
    ws();
    if (i >= n) return;
    if (text[i] == '"') {
      read_string();
      return;
    }
    if (text[i] == '{' || text[i] == '[') {
      int depth = 0;
      while (i < n) {
        const char c = text[i];
        if (c == '"') {
          read_string();
          continue;
        }
        if (c == '{' || c == '[') ++depth;
        if (c == '}' || c == ']') --depth;
        ++i;
        if (depth == 0) return;
      }
      return;
    }
    while (i < n && text[i] != ',' && text[i] != ']' && text[i] != '}' && text[i] != ' ' && text[i] != '\n') ++i;
  };
  for (const std::string& tok : toks) {
    ws();
    if (i >= n) return 0;
    if (text[i] == '{') {
      ++i;
      bool found = false;
      while (true) {
        ws();
        if (i >= n || text[i] != '"') return 0;
        const std::string key = read_string();
        ws();
        if (i >= n || text[i] != ':') return 0;
        ++i;
        if (key == tok) {
          found = true;
          break;
        }
        skip_value();
        ws();
        if (i < n && text[i] == ',') {
          ++i;
          continue;
        }
        return 0;
      }
      if (!found) return 0;
    } else if (text[i] == '[') {
      ++i;
      Index target = 0;
      try {
        target = std::stoul(tok);
      } catch (const std::exception&) {
        return 0;
      }
      for (Index k = 0; k < target; ++k) {
        skip_value();
        ws();
        if (i >= n || text[i] != ',') return 0;
        ++i;
      }
    } else {
      return 0;
    }
  }
  ws();
  return line_at(text, i);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(path + ":0: cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

StageEnv parse_env(const std::string& text, const std::string& source, ConfigContext& ctx) {
  return with_lines(text, source, [&](const json& doc) {
    const Node root(doc, "");
    const std::vector<std::string> strategies = root.at("strategies").strings();
    const std::vector<std::string> consequences = root.at("consequences").strings();
    const Index n_a = strategies.size(), n_y = consequences.size();
    if (n_a == 0) root.at("strategies").fail("need at least one strategy");
    const Node util = root.at("utility");
    util.size(n_y, "utility");
    std::vector<double> utility = util.numbers();

    const Node sits = root.at("situations");
    std::vector<std::string> names;
    std::vector<KernelPtr> kernels;
    for (Index s = 0; s < sits.size(); ++s) {
      names.push_back(sits.at(s).at("name").str());
      kernels.push_back(parse_kernel(sits.at(s).at("kernel"), n_a, n_y, ctx));
    }

    Monitoring mon = Monitoring::perfect(strategies);
    if (root.has("monitoring")) {
      const Node m = root.at("monitoring");
      const std::string kind = m.is_string() ? m.str() : m.at("type").str();
      if (kind == "perfect") {
      } else if (kind == "uninformative") {
        mon = Monitoring::uninformative(n_a);
      } else if (kind == "noisy") {
        const double tau = m.at("tau").num();
        if (!(tau >= 0.0 && tau <= 1.0)) m.at("tau").fail("tau must lie in [0, 1]");
        mon = Monitoring::noisy(strategies, tau);
      } else if (kind == "table") {
        mon.signals = m.at("signals").strings();
        const Node dist = m.at("dist");
        dist.size(n_a, "monitoring rows");
        mon.dist.clear();
        for (Index i = 0; i < n_a; ++i) {
          dist.at(i).size(mon.signals.size(), "monitoring row");
          mon.dist.push_back(parse_row(dist.at(i), mon.signals.size()));
        }
      } else {
        m.fail("unknown monitoring type '" + kind + "'");
      }
    }
    return guarded(root, [&] {
      return StageEnv(strategies, consequences, names, std::move(kernels), std::move(utility), std::move(mon));
    });
  });
}

Model parse_model(const std::string& text, const std::string& source, const StageEnv& env,
                  ConfigContext& ctx) {
  return with_lines(text, source, [&](const json& doc) {
    const Node root(doc, "");
    const std::string label = root.has("label") ? root.at("label").str() : "model";
    const Node ks = root.at("kernels");
    std::vector<KernelPtr> kernels;
    for (Index k = 0; k < ks.size(); ++k)
      kernels.push_back(parse_kernel(ks.at(k), env.num_strategies(), env.num_consequences(), ctx));
    if (kernels.empty()) ks.fail("a model needs at least one kernel");
    const bool sc = root.has("strategic_certainty_form") ? root.at("strategic_certainty_form").boolean() : true;
    Model model = [&] {
      if (sc) {
        if (root.has("params")) root.at("params").fail("params are implied by strategic_certainty_form");
        return Model::strategic_certainty(label, kernels, env.num_strategies());
      }
      const Node ps = root.at("params");
      std::vector<Parameter> params;
      for (Index i = 0; i < ps.size(); ++i) {
        const Node p = ps.at(i);
        Parameter par{parse_strategy_ref(p.at("conj_a"), env), parse_strategy_ref(p.at("conj_b"), env),
                      p.at("kernel").count()};
        if (par.kernel >= kernels.size()) p.at("kernel").fail("kernel index out of range");
        params.push_back(par);
      }
      return guarded(ps, [&] { return Model::with_parameters(label, kernels, params, env.num_strategies()); });
    }();
    if (root.has("perturb_eps")) model.perturb_eps = root.at("perturb_eps").num();
    return model;
  });
}

SimConfig parse_sim_config(const std::string& text, const std::string& source) {
  return with_lines(text, source, [&](const json& doc) {
    const Node root(doc, "");
    SimConfig cfg;
    if (root.has("n_agents")) cfg.n_agents = root.at("n_agents").count();
    const Node sh = root.at("shares");
    sh.size(2, "shares");
    cfg.shares = guarded(sh, [&] { return Shares::make(sh.at(0).num(), sh.at(1).num()); });
    if (root.has("prior_a")) cfg.prior_a = root.at("prior_a").numbers();
    if (root.has("prior_b")) cfg.prior_b = root.at("prior_b").numbers();
    if (root.has("tau")) {
      cfg.tau = root.at("tau").num();
      if (!(cfg.tau >= 0.0 && cfg.tau < 1.0)) root.at("tau").fail("tau must lie in [0, 1)");
    }
    if (root.has("policy")) {
      const Node p = root.at("policy");
      if (p.has("burn_in")) cfg.policy.burn_in = p.at("burn_in").count();
      if (p.has("eps0")) cfg.policy.eps0 = p.at("eps0").num();
      if (p.has("kappa")) cfg.policy.kappa = p.at("kappa").num();
    }
    if (root.has("horizon")) cfg.horizon = root.at("horizon").count();
    if (root.has("situation_period")) cfg.situation_period = root.at("situation_period").count();
    if (root.has("situation_weights")) {
      const Node w = root.at("situation_weights");
      cfg.situation_weights = guarded(w, [&] { return FitnessWeights(w.numbers()); });
    }
    if (root.has("seed")) cfg.seed = static_cast<unsigned long long>(root.at("seed").count());
    if (root.has("threads")) cfg.threads = static_cast<unsigned>(root.at("threads").count());
    return cfg;
  });
}

StageEnv load_env(const std::string& path, ConfigContext& ctx) { return parse_env(read_file(path), path, ctx); }

Model load_model(const std::string& path, const StageEnv& env, ConfigContext& ctx) {
  return parse_model(read_file(path), path, env, ctx);
}

SimConfig load_sim_config(const std::string& path) { return parse_sim_config(read_file(path), path); }

std::string env_to_json(const StageEnv& env) {
  json doc;
  doc["strategies"] = env.strategies();
  doc["consequences"] = env.consequences();
  doc["utility"] = env.utility();
  json sits = json::array();
  for (Index s = 0; s < env.num_situations(); ++s)
    sits.push_back({{"name", env.situations()[s]}, {"kernel", kernel_json(env.kernel(s))}});
  doc["situations"] = sits;
  const Monitoring& m = env.monitoring();
  if (is_perfect(m, env.strategies())) {
    doc["monitoring"] = "perfect";
  } else if (m.signals.size() == 1) {
    doc["monitoring"] = "uninformative";
  } else {
    json dist = json::array();
    for (const auto& r : m.dist) dist.push_back(r);
    doc["monitoring"] = {{"type", "table"}, {"signals", m.signals}, {"dist", dist}};
  }
  return doc.dump(1) + "\n";
}

std::string model_to_json(const Model& model, const StageEnv& env) {
  json doc;
  doc["label"] = model.label();
  doc["strategic_certainty_form"] = model.strategic_certainty_form();
  json ks = json::array();
  for (const auto& k : model.kernels()) ks.push_back(kernel_json(*k));
  doc["kernels"] = ks;
  if (!model.strategic_certainty_form()) {
    json ps = json::array();
    for (const Parameter& p : model.explicit_parameters())
      ps.push_back({{"conj_a", env.strategies()[p.conj_a]}, {"conj_b", env.strategies()[p.conj_b]},
                    {"kernel", p.kernel}});
    doc["params"] = ps;
  }
  if (model.perturb_eps) doc["perturb_eps"] = *model.perturb_eps;
  return doc.dump(1) + "\n";
}

std::string sim_config_to_json(const SimConfig& cfg) {
  json doc;
  doc["n_agents"] = cfg.n_agents;
  doc["shares"] = {cfg.shares.a, cfg.shares.b};
  if (!cfg.prior_a.empty()) doc["prior_a"] = cfg.prior_a;
  if (!cfg.prior_b.empty()) doc["prior_b"] = cfg.prior_b;
  doc["tau"] = cfg.tau;
  doc["policy"] = {{"burn_in", cfg.policy.burn_in}, {"eps0", cfg.policy.eps0}, {"kappa", cfg.policy.kappa}};
  doc["horizon"] = cfg.horizon;
  doc["situation_period"] = cfg.situation_period;
  if (!cfg.situation_weights.q.empty()) doc["situation_weights"] = cfg.situation_weights.q;
  doc["seed"] = cfg.seed;
  doc["threads"] = cfg.threads;
  return doc.dump(1) + "\n";
}

}  // namespace zeitgeist
