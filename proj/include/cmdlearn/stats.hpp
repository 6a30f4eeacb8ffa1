/*
 * Copyright 2026 The cmdlearn Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

// Sufficient statistics shared by all learners: feature occurrence counts,
// class-conditional proportions, selectivity weights and information gain.

#include <cstdint>
#include <span>
#include <vector>

#include "cmdlearn/corpus.hpp"
#include "json.hpp"

namespace cmdlearn {

class FeatureStats {
 public:
  FeatureStats() = default;

  std::size_t num_features() const { return n_; }
  std::size_t num_classes() const { return c_; }
  std::uint32_t total() const { return total_; }

  // Instances having feature f.
  std::uint32_t count(FeatureId f) const { return d_[f]; }
  // Instances of class j having feature f.
  std::uint32_t count(FeatureId f, ClassId j) const { return d_class_[f * c_ + j]; }
  std::uint32_t class_count(ClassId j) const { return class_count_[j]; }

  // Share of the instances having f that belong to j; 0 when no instance has f.
  double proportion(FeatureId f, ClassId j) const {
    return d_[f] == 0 ? 0.0 : static_cast<double>(d_class_[f * c_ + j]) / d_[f];
  }
  double weight(FeatureId f) const { return weight_[f]; }
  std::span<const double> weights() const { return weight_; }

  nlohmann::json to_json() const;
  static FeatureStats from_json(const nlohmann::json& j);

  friend bool operator==(const FeatureStats&, const FeatureStats&) = default;

 private:
  friend FeatureStats compute_stats(std::span<const Instance>, std::size_t, std::size_t);
  friend FeatureStats compute_stats(const Dataset&, std::span<const std::uint32_t>);

  void finalize_weights();

  std::size_t n_ = 0;
  std::size_t c_ = 0;
  std::uint32_t total_ = 0;
  std::vector<std::uint32_t> d_;
  std::vector<std::uint32_t> d_class_;  // row-major [feature][class]
  std::vector<std::uint32_t> class_count_;
  std::vector<double> weight_;
};

FeatureStats compute_stats(const Dataset& ds);
// Stats over an arbitrary instance list under a dictionary of the given shape.
// Empty lists are allowed here; callers that need data check beforehand.
FeatureStats compute_stats(std::span<const Instance> instances, std::size_t num_features,
                           std::size_t num_classes);
// Stats over the rows of ds selected by index.
FeatureStats compute_stats(const Dataset& ds, std::span<const std::uint32_t> rows);

double proportion(const FeatureStats& stats, FeatureId f, ClassId j);

// w_f = (1/c) * sum_j [1 - 4 p(f,j) (1 - p(f,j))]
double feature_weight(const FeatureStats& stats, FeatureId f);

// Shannon entropy (bits) of a count histogram with 0 log 0 = 0.
double entropy(std::span<const std::uint32_t> counts);

// H(class) - sum_v P(f=v) H(class | f=v), in bits.
double information_gain(const FeatureStats& stats, FeatureId f);
std::vector<double> information_gains(const FeatureStats& stats);

// Feature ranking criterion used by tree induction.
enum class SplitCriterion { weight, info_gain };

double criterion_value(const FeatureStats& stats, FeatureId f, SplitCriterion criterion);

}  // namespace cmdlearn
