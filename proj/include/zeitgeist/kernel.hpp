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

// Consequence kernels: maps from a strategy profile (own, opponent) to a
// distribution over the consequence set Y.
//
// Rows are handed out as sparse views. A view covers the index range
// [offset, offset + mass.size()) of Y and is zero outside it. The log of
// every mass is precomputed so KL evaluation does no transcendental work.

#ifndef ZEITGEIST_KERNEL_HPP_
#define ZEITGEIST_KERNEL_HPP_

#include <cstdint>
#include <memory>
#include <optional>
#include <unordered_map>
#include <vector>

#include "zeitgeist/common.hpp"

namespace zeitgeist {

struct DistView {
  Index offset = 0;
  std::span<const double> mass;
  std::span<const double> log_mass;
  // Every entry of `mass` is strictly positive.
  bool full_support = false;

  Index end() const { return offset + mass.size(); }
  double at(Index y) const {
    return (y < offset || y >= end()) ? 0.0 : mass[y - offset];
  }
};

// KL(p || q) over views of the same Y; +inf on a support violation.
double kl_divergence(const DistView& p, const DistView& q);

// Σ_y p(y)·values[y].
double expectation(const DistView& p, std::span<const double> values);

// Owns a batch of rows. Leading and trailing zeros are trimmed on insert.
class RowStore {
 public:
  // `dense` is a full-length row starting at global index `base`.
  Index add(std::span<const double> dense, Index base = 0);
  DistView view(Index row, Index shift = 0) const;
  Index size() const { return rows_.size(); }

 private:
  struct Entry {
    Index offset, start, len;
    bool full;
  };
  std::vector<Entry> rows_;
  std::vector<double> mass_;
  std::vector<double> log_;
};

class Kernel {
 public:
  virtual ~Kernel() = default;
  virtual Index num_strategies() const = 0;
  virtual Index num_consequences() const = 0;
  virtual DistView row(Index own, Index opp) const = 0;
  // Row ignores the opponent's strategy.
  virtual bool opponent_blind() const { return false; }

  // Full-length copy of a row, for serialization and comparisons.
  std::vector<double> dense_row(Index own, Index opp) const;
};

using KernelPtr = std::shared_ptr<const Kernel>;

// Explicit |A|^2 rows, indexed [own][opp].
class TableKernel final : public Kernel {
 public:
  TableKernel(Index n_strategies, Index n_consequences,
              const std::vector<std::vector<std::vector<double>>>& rows);
  Index num_strategies() const override { return n_a_; }
  Index num_consequences() const override { return n_y_; }
  DistView row(Index own, Index opp) const override {
    return store_.view(own * n_a_ + opp);
  }

 private:
  Index n_a_, n_y_;
  RowStore store_;
};

// One row per own strategy; the opponent is ignored.
class BlindKernel final : public Kernel {
 public:
  BlindKernel(Index n_consequences, const std::vector<std::vector<double>>& rows);
  Index num_strategies() const override { return n_a_; }
  Index num_consequences() const override { return n_y_; }
  DistView row(Index own, Index) const override { return store_.view(own); }
  bool opponent_blind() const override { return true; }

 private:
  Index n_a_, n_y_;
  RowStore store_;
};

// Equal-width bins over [lower, upper]; the two end bins absorb the tails.
struct Binning {
  double lower = 0.0;
  double upper = 1.0;
  Index bins = 2;
  double sd = 1.0;

  double width() const { return (upper - lower) / static_cast<double>(bins); }
  double center(Index j) const { return lower + (static_cast<double>(j) + 0.5) * width(); }
  bool operator==(const Binning&) const = default;
};

// Cache of discretized normal rows keyed by mean (quantized to 1e-9), so
// many kernels with overlapping means share storage. Filled at build time
// only; afterwards read-only.
class NormalBank {
 public:
  explicit NormalBank(Binning binning);
  const Binning& binning() const { return binning_; }
  Index intern(double mean);
  DistView view(Index id, Index shift) const { return store_.view(id, shift); }

 private:
  Binning binning_;
  RowStore store_;
  std::unordered_map<long long, Index> by_key_;
};

// Partition of the |A|^2 profiles into classes sharing one mean.
struct ProfileClasses {
  Index n_strategies = 0;
  std::vector<std::uint32_t> class_of;  // [own * n + opp]
  Index num_classes = 0;
  std::vector<double> level_sums;       // per class, when built from levels

  // Every profile in its own class.
  static std::shared_ptr<const ProfileClasses> distinct(Index n_strategies);
  // Profiles grouped by levels[own] + levels[opp] (rounded to 1e-9).
  static std::shared_ptr<const ProfileClasses> by_level_sum(const std::vector<double>& levels);
};

// Mean = intercept - slope * (levels[own] + levels[opp]).
struct LinearPrice {
  std::vector<double> levels;
  double intercept = 0.0;
  double slope = 0.0;
};

// Y = (own strategy) x (bin) when `own_blocks`, otherwise Y = bins. The row
// for a profile is a discretized normal with that profile's mean.
class BinnedNormalKernel final : public Kernel {
 public:
  // Means given per profile, means[own][opp].
  BinnedNormalKernel(std::shared_ptr<NormalBank> bank, const std::vector<std::vector<double>>& means,
                     bool own_blocks);
  // Means given per class of `classes`.
  BinnedNormalKernel(std::shared_ptr<NormalBank> bank, std::shared_ptr<const ProfileClasses> classes,
                     const std::vector<double>& class_means, bool own_blocks);
  // Linear price in the sum of strategy levels; `classes` must come from
  // ProfileClasses::by_level_sum(form.levels).
  BinnedNormalKernel(std::shared_ptr<NormalBank> bank, std::shared_ptr<const ProfileClasses> classes,
                     const LinearPrice& form, bool own_blocks);

  Index num_strategies() const override { return n_a_; }
  Index num_consequences() const override;
  DistView row(Index own, Index opp) const override;
  double mean(Index own, Index opp) const { return class_means_[classes_->class_of[own * n_a_ + opp]]; }
  const Binning& binning() const { return bank_->binning(); }
  bool own_blocks() const { return own_blocks_; }
  const std::optional<LinearPrice>& linear_form() const { return linear_; }

 private:
  void intern_all();

  std::shared_ptr<NormalBank> bank_;
  std::shared_ptr<const ProfileClasses> classes_;
  std::vector<double> class_means_;
  std::vector<Index> ids_;  // per class
  Index n_a_;
  bool own_blocks_;
  std::optional<LinearPrice> linear_;
};

// (1 - w)·base + w·uniform, materialized as a table or blind kernel.
KernelPtr mix_with_uniform(const Kernel& base, double w);

// max |F(a,b)(y) - F'(a,b)(y)| over every profile and consequence.
double max_abs_difference(const Kernel& f, const Kernel& g);

}  // namespace zeitgeist

#endif  // ZEITGEIST_KERNEL_HPP_
