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

// Memory-based classifiers (IB1, IB1-IG, BIN-CAT) and the per-class
// prototype classifier BIN-PRO.

#include <span>
#include <vector>

#include "cmdlearn/corpus.hpp"
#include "cmdlearn/ranking.hpp"
#include "cmdlearn/stats.hpp"
#include "json.hpp"

namespace cmdlearn {

// Size of the symmetric difference of two presence sets.
std::size_t ib1_distance(const FeatureVector& x, const FeatureVector& y);

// Sum of gains[f] over the features on which x and y differ.
double ib1ig_distance(const FeatureVector& x, const FeatureVector& y, std::span<const double> gains);

// Asymmetric class-weighted similarity of a new case x to training instance y.
// Only features present in x or y contribute, so the cost is O(|x| + |y|):
//   both present: +p(f, C_y) w_f
//   only in y:    -p(f, C_y) w_f
//   only in x:    -(1 - p(f, C_y)) w_f
double bincat_similarity(const FeatureVector& x, const Instance& y, const FeatureStats& stats);

enum class InstanceVariant { ib1, ib1_ig, bin_cat };

std::string_view to_string(InstanceVariant v);

class InstanceModel {
 public:
  InstanceModel(InstanceVariant variant, std::vector<Instance> instances, FeatureStats stats);

  static InstanceModel train(InstanceVariant variant, const Dataset& ds);

  InstanceVariant variant() const { return variant_; }
  const std::vector<Instance>& instances() const { return instances_; }
  const FeatureStats& stats() const { return stats_; }
  std::span<const double> gains() const { return gains_; }

  // Higher is more similar: negated distance for ib1/ib1_ig, similarity for bin_cat.
  double score(const FeatureVector& x, const Instance& y) const;

  nlohmann::json to_json() const;
  static InstanceModel from_json(const nlohmann::json& j);

 private:
  InstanceVariant variant_;
  std::vector<Instance> instances_;
  FeatureStats stats_;
  std::vector<double> gains_;  // ib1_ig only
};

struct Prototype {
  ClassId class_id = 0;
  std::uint32_t class_size = 0;  // |D_C|
  std::vector<double> p;         // p(D_f, C) per dictionary feature
  double absent_total = 0.0;     // sum_f p(D_f, C) w_f over every feature
};

class PrototypeModel {
 public:
  explicit PrototypeModel(FeatureStats stats);

  static PrototypeModel train(const Dataset& ds);

  const std::vector<Prototype>& prototypes() const { return prototypes_; }
  const FeatureStats& stats() const { return stats_; }

  // Throws UsageError when cls has no prototype.
  const Prototype& prototype(ClassId cls) const;

  nlohmann::json to_json() const;
  static PrototypeModel from_json(const nlohmann::json& j);

 private:
  FeatureStats stats_;
  std::vector<Prototype> prototypes_;  // ascending class id, trained classes only
  std::vector<int> index_;             // class id -> position, -1 when untrained
};

// SIM(x, C) = sum_{f in x} |D_C| p(f,C) w_f - sum_{f not in x} p(f,C) w_f,
// evaluated as sum_{f in x} (|D_C| + 1) p(f,C) w_f - T_C.
double binpro_similarity(const FeatureVector& x, ClassId cls, const PrototypeModel& model);

// Per-class best instance score, classes ordered by that score (ties: lower
// class id), truncated to k.
RankedPrediction rank(const InstanceModel& model, const FeatureVector& x, std::size_t k);
RankedPrediction rank(const PrototypeModel& model, const FeatureVector& x, std::size_t k);

// Orders (class, score) pairs by score desc then class id asc and keeps k.
RankedPrediction rank_scores(std::vector<RankedClass> scored, std::size_t k);

}  // namespace cmdlearn
