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

#include "cmdlearn/instance_based.hpp"

#include <algorithm>
#include <limits>

#include "cmdlearn/error.hpp"
#include "cmdlearn/kernels.hpp"

namespace cmdlearn {

using nlohmann::json;

std::string_view to_string(Basis basis) {
  switch (basis) {
    case Basis::exact:
      return "exact";
    case Basis::approximate:
      return "approximate";
    case Basis::fallback:
      return "fallback";
  }
  return "exact";
}

void require_positive_k(std::size_t k) {
  if (k < 1) throw UsageError("ranking length k must be at least 1");
}

std::string_view to_string(InstanceVariant v) {
  switch (v) {
    case InstanceVariant::ib1:
      return "ib1";
    case InstanceVariant::ib1_ig:
      return "ib1_ig";
    case InstanceVariant::bin_cat:
      return "bin_cat";
  }
  return "ib1";
}

namespace {

InstanceVariant parse_instance_variant(std::string_view s) {
  if (s == "ib1") return InstanceVariant::ib1;
  if (s == "ib1_ig") return InstanceVariant::ib1_ig;
  if (s == "bin_cat") return InstanceVariant::bin_cat;
  throw DataError("unknown instance model variant '" + std::string(s) + "'");
}

// Walks two ascending id lists, calling on_x(f) for ids only in x, on_y(f)
// for ids only in y and on_both(f) for shared ids.
template <typename OnX, typename OnY, typename OnBoth>
void merge_walk(std::span<const FeatureId> x, std::span<const FeatureId> y, OnX on_x, OnY on_y,
                OnBoth on_both) {
  std::size_t i = 0, j = 0;
  while (i < x.size() && j < y.size()) {
    if (x[i] < y[j]) {
      on_x(x[i++]);
    } else if (y[j] < x[i]) {
      on_y(y[j++]);
    } else {
      on_both(x[i]);
      ++i;
      ++j;
    }
  }
  for (; i < x.size(); ++i) on_x(x[i]);
  for (; j < y.size(); ++j) on_y(y[j]);
}

json instances_to_json(const std::vector<Instance>& instances) {
  json arr = json::array();
  for (const auto& inst : instances) {
    arr.push_back({{"id", inst.id},
                   {"f", std::vector<FeatureId>(inst.vector.begin(), inst.vector.end())},
                   {"c", inst.class_id}});
  }
  return arr;
}

std::vector<Instance> instances_from_json(const json& arr) {
  std::vector<Instance> out;
  for (const auto& item : arr) {
    out.push_back({item.value("id", std::string()),
                   FeatureVector(item.at("f").get<std::vector<FeatureId>>()),
                   item.at("c").get<ClassId>()});
  }
  return out;
}

}  // namespace

std::size_t ib1_distance(const FeatureVector& x, const FeatureVector& y) {
  std::size_t d = 0;
  merge_walk(
      x.ids(), y.ids(), [&](FeatureId) { ++d; }, [&](FeatureId) { ++d; }, [](FeatureId) {});
  return d;
}

double ib1ig_distance(const FeatureVector& x, const FeatureVector& y, std::span<const double> gains) {
  double d = 0.0;
  merge_walk(
      x.ids(), y.ids(), [&](FeatureId f) { d += gains[f]; }, [&](FeatureId f) { d += gains[f]; },
      [](FeatureId) {});
  return d;
}

double bincat_similarity(const FeatureVector& x, const Instance& y, const FeatureStats& stats) {
  const ClassId cy = y.class_id;
  double sim = 0.0;
  merge_walk(
      x.ids(), y.vector.ids(),
      [&](FeatureId f) { sim -= (1.0 - stats.proportion(f, cy)) * stats.weight(f); },
      [&](FeatureId f) { sim -= stats.proportion(f, cy) * stats.weight(f); },
      [&](FeatureId f) { sim += stats.proportion(f, cy) * stats.weight(f); });
  return sim;
}

// ---------------------------------------------------------------------------
// InstanceModel

InstanceModel::InstanceModel(InstanceVariant variant, std::vector<Instance> instances,
                             FeatureStats stats)
    : variant_(variant), instances_(std::move(instances)), stats_(std::move(stats)) {
  if (instances_.empty()) throw DataError("instance model needs at least one training instance");
  if (variant_ == InstanceVariant::ib1_ig) gains_ = information_gains(stats_);
}

InstanceModel InstanceModel::train(InstanceVariant variant, const Dataset& ds) {
  return InstanceModel(variant, ds.instances, compute_stats(ds));
}

double InstanceModel::score(const FeatureVector& x, const Instance& y) const {
  switch (variant_) {
    case InstanceVariant::ib1:
      return -static_cast<double>(ib1_distance(x, y.vector));
    case InstanceVariant::ib1_ig:
      return -ib1ig_distance(x, y.vector, gains_);
    case InstanceVariant::bin_cat:
      return bincat_similarity(x, y, stats_);
  }
  return 0.0;
}

json InstanceModel::to_json() const {
  return {{"variant", to_string(variant_)},
          {"instances", instances_to_json(instances_)},
          {"stats", stats_.to_json()}};
}

InstanceModel InstanceModel::from_json(const json& j) {
  try {
    return InstanceModel(parse_instance_variant(j.at("variant").get<std::string>()),
                         instances_from_json(j.at("instances")),
                         FeatureStats::from_json(j.at("stats")));
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed instance model: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// PrototypeModel

PrototypeModel::PrototypeModel(FeatureStats stats) : stats_(std::move(stats)) {
  const auto n = stats_.num_features();
  const auto c = stats_.num_classes();
  index_.assign(c, -1);
  for (ClassId cls = 0; cls < c; ++cls) {
    if (stats_.class_count(cls) == 0) continue;
    Prototype proto;
    proto.class_id = cls;
    proto.class_size = stats_.class_count(cls);
    proto.p.resize(n);
    for (FeatureId f = 0; f < n; ++f) {
      proto.p[f] = stats_.proportion(f, cls);
      proto.absent_total += proto.p[f] * stats_.weight(f);
    }
    index_[cls] = static_cast<int>(prototypes_.size());
    prototypes_.push_back(std::move(proto));
  }
  if (prototypes_.empty()) throw DataError("prototype model needs at least one trained class");
}

PrototypeModel PrototypeModel::train(const Dataset& ds) { return PrototypeModel(compute_stats(ds)); }

const Prototype& PrototypeModel::prototype(ClassId cls) const {
  if (cls >= index_.size() || index_[cls] < 0) {
    throw UsageError("no prototype for class " + std::to_string(cls));
  }
  return prototypes_[index_[cls]];
}

json PrototypeModel::to_json() const { return {{"stats", stats_.to_json()}}; }

PrototypeModel PrototypeModel::from_json(const json& j) {
  try {
    return PrototypeModel(FeatureStats::from_json(j.at("stats")));
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed prototype model: ") + e.what());
  }
}

double binpro_similarity(const FeatureVector& x, ClassId cls, const PrototypeModel& model) {
  const auto& proto = model.prototype(cls);
  const auto& stats = model.stats();
  const double scale = static_cast<double>(proto.class_size) + 1.0;
  double present = 0.0;
  for (FeatureId f : x) present += scale * proto.p[f] * stats.weight(f);
  return present - proto.absent_total;
}

// ---------------------------------------------------------------------------
// Ranking

RankedPrediction rank_scores(std::vector<RankedClass> scored, std::size_t k) {
  require_positive_k(k);
  std::sort(scored.begin(), scored.end(), [](const RankedClass& a, const RankedClass& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.class_id < b.class_id;
  });
  if (scored.size() > k) scored.resize(k);
  return RankedPrediction{std::move(scored)};
}

RankedPrediction rank(const InstanceModel& model, const FeatureVector& x, std::size_t k) {
  require_positive_k(k);
  const auto& instances = model.instances();
  std::vector<double> scores(instances.size());
  kernels::score_instances(model, x, scores);

  const auto c = model.stats().num_classes();
  constexpr double kUnset = -std::numeric_limits<double>::infinity();
  std::vector<double> best(c, kUnset);
  std::vector<char> seen(c, 0);
  for (std::size_t i = 0; i < instances.size(); ++i) {
    const auto cls = instances[i].class_id;
    if (!seen[cls] || scores[i] > best[cls]) {
      best[cls] = scores[i];
      seen[cls] = 1;
    }
  }
  std::vector<RankedClass> scored;
  for (ClassId cls = 0; cls < c; ++cls) {
    if (seen[cls]) scored.push_back({cls, best[cls], Basis::exact});
  }
  return rank_scores(std::move(scored), k);
}

RankedPrediction rank(const PrototypeModel& model, const FeatureVector& x, std::size_t k) {
  require_positive_k(k);
  const auto& protos = model.prototypes();
  std::vector<double> scores(protos.size());
  kernels::score_prototypes(model, x, scores);
  std::vector<RankedClass> scored;
  scored.reserve(protos.size());
  for (std::size_t i = 0; i < protos.size(); ++i) {
    scored.push_back({protos[i].class_id, scores[i], Basis::exact});
  }
  return rank_scores(std::move(scored), k);
}

}  // namespace cmdlearn
