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

#include "zeitgeist/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace zeitgeist {

double kl_divergence(const DistView& p, const DistView& q) {
  // Views are trimmed, so the end entries of p are nonzero.
  if (p.offset < q.offset || p.end() > q.end()) return kInf;
  const Index shift = p.offset - q.offset;
  double s = 0.0;
  if (q.full_support) {
    for (Index j = 0; j < p.mass.size(); ++j) {
      const double pm = p.mass[j];
      if (pm > 0.0) s += pm * (p.log_mass[j] - q.log_mass[j + shift]);
    }
  } else {
    for (Index j = 0; j < p.mass.size(); ++j) {
      const double pm = p.mass[j];
      if (pm <= 0.0) continue;
      if (q.mass[j + shift] <= 0.0) return kInf;
      s += pm * (p.log_mass[j] - q.log_mass[j + shift]);
    }
  }
  return s > 0.0 ? s : 0.0;
}

double expectation(const DistView& p, std::span<const double> values) {
  double s = 0.0;
  for (Index j = 0; j < p.mass.size(); ++j) s += p.mass[j] * values[p.offset + j];
  return s;
}

Index RowStore::add(std::span<const double> dense, Index base) {
  Index first = 0;
  while (first < dense.size() && dense[first] <= 0.0) ++first;
  Index last = dense.size();
  while (last > first && dense[last - 1] <= 0.0) --last;
  if (first == last) throw InputError("probability row has no mass");
  Entry e{base + first, mass_.size(), last - first, true};
  for (Index j = first; j < last; ++j) {
    const double m = dense[j] > 0.0 ? dense[j] : 0.0;
    if (m == 0.0) e.full = false;
    mass_.push_back(m);
    log_.push_back(m > 0.0 ? std::log(m) : -kInf);
  }
  rows_.push_back(e);
  return rows_.size() - 1;
}

DistView RowStore::view(Index row, Index shift) const {
  const Entry& e = rows_[row];
  return DistView{e.offset + shift,
                  std::span<const double>(mass_.data() + e.start, e.len),
                  std::span<const double>(log_.data() + e.start, e.len), e.full};
}

std::vector<double> Kernel::dense_row(Index own, Index opp) const {
  std::vector<double> out(num_consequences(), 0.0);
  const DistView v = row(own, opp);
  for (Index j = 0; j < v.mass.size(); ++j) out[v.offset + j] = v.mass[j];
  return out;
}

TableKernel::TableKernel(Index n_strategies, Index n_consequences,
                         const std::vector<std::vector<std::vector<double>>>& rows)
    : n_a_(n_strategies), n_y_(n_consequences) {
  if (rows.size() != n_a_) throw InputError("kernel table needs one block per own strategy");
  for (Index i = 0; i < n_a_; ++i) {
    if (rows[i].size() != n_a_) throw InputError("kernel table needs one row per opponent strategy");
    for (Index j = 0; j < n_a_; ++j) {
      if (rows[i][j].size() != n_y_) {
        throw InputError("kernel row length differs from the number of consequences");
      }
      std::ostringstream what;
      what << "kernel row (" << i << ", " << j << ")";
      check_probability_row(rows[i][j], what.str());
      store_.add(rows[i][j]);
    }
  }
}

BlindKernel::BlindKernel(Index n_consequences, const std::vector<std::vector<double>>& rows)
    : n_a_(rows.size()), n_y_(n_consequences) {
  if (rows.empty()) throw InputError("blind kernel needs at least one row");
  for (Index i = 0; i < n_a_; ++i) {
    if (rows[i].size() != n_y_) throw InputError("blind kernel row length mismatch");
    check_probability_row(rows[i], "blind kernel row " + std::to_string(i));
    store_.add(rows[i]);
  }
}

namespace {

double upper_tail(double z) { return 0.5 * std::erfc(z / std::sqrt(2.0)); }
double lower_tail(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

std::vector<double> normal_bins(const Binning& b, double mean) {
  std::vector<double> out(b.bins, 0.0);
  const double w = b.width();
  if (b.sd <= 0.0) {
    const double pos = (mean - b.lower) / w;
    const auto j = static_cast<long long>(std::floor(pos));
    out[static_cast<Index>(std::clamp<long long>(j, 0, static_cast<long long>(b.bins) - 1))] = 1.0;
    return out;
  }
  double total = 0.0;
  for (Index j = 0; j < b.bins; ++j) {
    const double lo = j == 0 ? -kInf : (b.lower + static_cast<double>(j) * w - mean) / b.sd;
    const double hi = j + 1 == b.bins ? kInf : (b.lower + static_cast<double>(j + 1) * w - mean) / b.sd;
    double m;
    // Difference taken on the tail side for relative accuracy far out.
    if (lo >= 0.0) {
      m = upper_tail(lo) - upper_tail(hi);
    } else if (hi <= 0.0) {
      m = lower_tail(hi) - lower_tail(lo);
    } else {
      m = 1.0 - upper_tail(hi) - lower_tail(lo);
    }
    out[j] = m > 0.0 ? m : 0.0;
    total += out[j];
  }
  for (double& m : out) m /= total;
  return out;
}

}  // namespace

NormalBank::NormalBank(Binning binning) : binning_(binning) {
  if (binning_.bins < 2) throw InputError("a price binning needs at least 2 bins");
  if (!(binning_.upper > binning_.lower)) throw InputError("binning upper edge must exceed lower edge");
  if (!(binning_.sd >= 0.0)) throw InputError("noise sd must be nonnegative");
}

Index NormalBank::intern(double mean) {
  const long long key = std::llround(mean * 1e9);
  auto it = by_key_.find(key);
  if (it != by_key_.end()) return it->second;
  const std::vector<double> row = normal_bins(binning_, static_cast<double>(key) * 1e-9);
  const Index id = store_.add(row);
  by_key_.emplace(key, id);
  return id;
}

std::shared_ptr<const ProfileClasses> ProfileClasses::distinct(Index n_strategies) {
  auto c = std::make_shared<ProfileClasses>();
  c->n_strategies = n_strategies;
  c->num_classes = n_strategies * n_strategies;
  c->class_of.resize(c->num_classes);
  for (Index i = 0; i < c->num_classes; ++i) c->class_of[i] = static_cast<std::uint32_t>(i);
  return c;
}

std::shared_ptr<const ProfileClasses> ProfileClasses::by_level_sum(const std::vector<double>& levels) {
  auto c = std::make_shared<ProfileClasses>();
  const Index n = levels.size();
  c->n_strategies = n;
  c->class_of.resize(n * n);
  std::unordered_map<long long, std::uint32_t> seen;
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      const double sum = levels[i] + levels[j];
      const long long key = std::llround(sum * 1e9);
      auto [it, fresh] = seen.emplace(key, static_cast<std::uint32_t>(c->level_sums.size()));
      if (fresh) c->level_sums.push_back(sum);
      c->class_of[i * n + j] = it->second;
    }
  }
  c->num_classes = c->level_sums.size();
  return c;
}

BinnedNormalKernel::BinnedNormalKernel(std::shared_ptr<NormalBank> bank,
                                       const std::vector<std::vector<double>>& means, bool own_blocks)
    : bank_(std::move(bank)), n_a_(means.size()), own_blocks_(own_blocks) {
  if (n_a_ == 0) throw InputError("binned kernel needs a mean table");
  classes_ = ProfileClasses::distinct(n_a_);
  for (const auto& r : means) {
    if (r.size() != n_a_) throw InputError("binned kernel mean table must be square");
    class_means_.insert(class_means_.end(), r.begin(), r.end());
  }
  intern_all();
}

BinnedNormalKernel::BinnedNormalKernel(std::shared_ptr<NormalBank> bank,
                                       std::shared_ptr<const ProfileClasses> classes,
                                       const std::vector<double>& class_means, bool own_blocks)
    : bank_(std::move(bank)), classes_(std::move(classes)), class_means_(class_means),
      n_a_(classes_->n_strategies), own_blocks_(own_blocks) {
  if (class_means_.size() != classes_->num_classes) {
    throw InputError("binned kernel needs one mean per profile class");
  }
  intern_all();
}

BinnedNormalKernel::BinnedNormalKernel(std::shared_ptr<NormalBank> bank,
                                       std::shared_ptr<const ProfileClasses> classes,
                                       const LinearPrice& form, bool own_blocks)
    : bank_(std::move(bank)), classes_(std::move(classes)), n_a_(classes_->n_strategies),
      own_blocks_(own_blocks), linear_(form) {
  if (form.levels.size() != n_a_ || classes_->level_sums.size() != classes_->num_classes) {
    throw InputError("linear price kernel needs level-sum classes over its own levels");
  }
  for (double sum : classes_->level_sums) class_means_.push_back(form.intercept - form.slope * sum);
  intern_all();
}

void BinnedNormalKernel::intern_all() {
  if (n_a_ == 0) throw InputError("binned kernel needs at least one strategy");
  ids_.reserve(class_means_.size());
  for (double m : class_means_) {
    if (!std::isfinite(m)) throw InputError("binned kernel mean must be finite");
    ids_.push_back(bank_->intern(m));
  }
}

Index BinnedNormalKernel::num_consequences() const {
  return own_blocks_ ? n_a_ * bank_->binning().bins : bank_->binning().bins;
}

DistView BinnedNormalKernel::row(Index own, Index opp) const {
  return bank_->view(ids_[classes_->class_of[own * n_a_ + opp]],
                     own_blocks_ ? own * bank_->binning().bins : 0);
}

KernelPtr mix_with_uniform(const Kernel& base, double w) {
  const Index n_a = base.num_strategies();
  const Index n_y = base.num_consequences();
  const double u = w / static_cast<double>(n_y);
  auto mixed = [&](Index i, Index j) {
    std::vector<double> r = base.dense_row(i, j);
    for (double& v : r) v = (1.0 - w) * v + u;
    return r;
  };
  if (base.opponent_blind()) {
    std::vector<std::vector<double>> rows;
    for (Index i = 0; i < n_a; ++i) rows.push_back(mixed(i, 0));
    return std::make_shared<BlindKernel>(n_y, rows);
  }
  std::vector<std::vector<std::vector<double>>> rows(n_a);
  for (Index i = 0; i < n_a; ++i) {
    for (Index j = 0; j < n_a; ++j) rows[i].push_back(mixed(i, j));
  }
  return std::make_shared<TableKernel>(n_a, n_y, rows);
}

double max_abs_difference(const Kernel& f, const Kernel& g) {
  if (f.num_strategies() != g.num_strategies() || f.num_consequences() != g.num_consequences()) {
    return kInf;
  }
  double d = 0.0;
  for (Index i = 0; i < f.num_strategies(); ++i) {
    for (Index j = 0; j < f.num_strategies(); ++j) {
      const DistView p = f.row(i, j);
      const DistView q = g.row(i, j);
      const Index lo = std::min(p.offset, q.offset);
      const Index hi = std::max(p.end(), q.end());
      for (Index y = lo; y < hi; ++y) d = std::max(d, std::abs(p.at(y) - q.at(y)));
    }
  }
  return d;
}

}  // namespace zeitgeist
