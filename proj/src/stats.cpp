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

#include "cmdlearn/stats.hpp"

#include <cmath>

#include "cmdlearn/error.hpp"

namespace cmdlearn {

using nlohmann::json;

FeatureStats compute_stats(const Dataset& ds) {
  if (ds.empty()) throw DataError("cannot compute statistics of an empty dataset");
  return compute_stats(ds.instances, ds.dictionary.num_features(), ds.dictionary.num_classes());
}

FeatureStats compute_stats(std::span<const Instance> instances, std::size_t num_features,
                           std::size_t num_classes) {
  FeatureStats s;
  s.n_ = num_features;
  s.c_ = num_classes;
  s.total_ = static_cast<std::uint32_t>(instances.size());
  s.d_.assign(num_features, 0);
  s.d_class_.assign(num_features * num_classes, 0);
  s.class_count_.assign(num_classes, 0);
  for (const auto& inst : instances) {
    ++s.class_count_[inst.class_id];
    for (FeatureId f : inst.vector) {
      ++s.d_[f];
      ++s.d_class_[f * num_classes + inst.class_id];
    }
  }
  s.finalize_weights();
  return s;
}

FeatureStats compute_stats(const Dataset& ds, std::span<const std::uint32_t> rows) {
  FeatureStats s;
  s.n_ = ds.dictionary.num_features();
  s.c_ = ds.dictionary.num_classes();
  s.total_ = static_cast<std::uint32_t>(rows.size());
  s.d_.assign(s.n_, 0);
  s.d_class_.assign(s.n_ * s.c_, 0);
  s.class_count_.assign(s.c_, 0);
  for (auto r : rows) {
    const auto& inst = ds.instances[r];
    ++s.class_count_[inst.class_id];
    for (FeatureId f : inst.vector) {
      ++s.d_[f];
      ++s.d_class_[f * s.c_ + inst.class_id];
    }
  }
  s.finalize_weights();
  return s;
}

void FeatureStats::finalize_weights() {
  weight_.assign(n_, 0.0);
  for (FeatureId f = 0; f < n_; ++f) weight_[f] = feature_weight(*this, f);
}

double proportion(const FeatureStats& stats, FeatureId f, ClassId j) {
  return stats.proportion(f, j);
}

double feature_weight(const FeatureStats& stats, FeatureId f) {
  const auto c = stats.num_classes();
  if (c == 0) return 0.0;
  double sum = 0.0;
  for (ClassId j = 0; j < c; ++j) {
    const double p = stats.proportion(f, j);
    sum += 1.0 - 4.0 * p * (1.0 - p);
  }
  return sum / static_cast<double>(c);
}

double entropy(std::span<const std::uint32_t> counts) {
  std::uint64_t total = 0;
  for (auto k : counts) total += k;
  if (total == 0) return 0.0;
  double h = 0.0;
  for (auto k : counts) {
    if (k == 0) continue;
    const double p = static_cast<double>(k) / static_cast<double>(total);
    h -= p * std::log2(p);
  }
  return h;
}

double information_gain(const FeatureStats& stats, FeatureId f) {
  const auto c = stats.num_classes();
  const auto total = stats.total();
  const auto present = stats.count(f);
  if (total == 0 || present == 0 || present == total) return 0.0;

  std::vector<std::uint32_t> with(c), without(c), all(c);
  for (ClassId j = 0; j < c; ++j) {
    all[j] = stats.class_count(j);
    with[j] = stats.count(f, j);
    without[j] = all[j] - with[j];
  }
  const double p1 = static_cast<double>(present) / total;
  const double gain = entropy(all) - p1 * entropy(with) - (1.0 - p1) * entropy(without);
  // Rounding can leave a tiny negative residue for independent features.
  return gain < 0.0 ? 0.0 : gain;
}

std::vector<double> information_gains(const FeatureStats& stats) {
  std::vector<double> out(stats.num_features());
  for (FeatureId f = 0; f < out.size(); ++f) out[f] = information_gain(stats, f);
  return out;
}

double criterion_value(const FeatureStats& stats, FeatureId f, SplitCriterion criterion) {
  return criterion == SplitCriterion::weight ? stats.weight(f) : information_gain(stats, f);
}

json FeatureStats::to_json() const {
  return {{"n", n_},           {"c", c_},
          {"total", total_},   {"d", d_},
          {"d_class", d_class_}, {"class_count", class_count_},
          {"weight", weight_}};
}

FeatureStats FeatureStats::from_json(const json& j) {
  FeatureStats s;
  try {
    s.n_ = j.at("n").get<std::size_t>();
    s.c_ = j.at("c").get<std::size_t>();
    s.total_ = j.at("total").get<std::uint32_t>();
    s.d_ = j.at("d").get<std::vector<std::uint32_t>>();
    s.d_class_ = j.at("d_class").get<std::vector<std::uint32_t>>();
    s.class_count_ = j.at("class_count").get<std::vector<std::uint32_t>>();
    s.weight_ = j.at("weight").get<std::vector<double>>();
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed stats block: ") + e.what());
  }
  if (s.d_.size() != s.n_ || s.d_class_.size() != s.n_ * s.c_ || s.class_count_.size() != s.c_ ||
      s.weight_.size() != s.n_) {
    throw DataError("stats block has inconsistent array sizes");
  }
  return s;
}

}  // namespace cmdlearn
