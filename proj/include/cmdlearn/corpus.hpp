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

// Data model for analyzed input sentences and their sparse binary encoding.

#include <cstdint>
#include <initializer_list>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "json.hpp"

namespace cmdlearn {

using FeatureId = std::uint32_t;
using ClassId = std::uint32_t;

enum class UvlKind { entity, datatype };
enum class FeatureSource { dfl, uvl_count, uvl_type };

std::string_view to_string(UvlKind kind);
std::string_view to_string(FeatureSource source);
UvlKind parse_uvl_kind(std::string_view s);
FeatureSource parse_feature_source(std::string_view s);

struct UvlEntry {
  UvlKind kind = UvlKind::datatype;
  std::string name;

  friend bool operator==(const UvlEntry&, const UvlEntry&) = default;
};

// One analyzed input sentence: deep forms plus unknown values.
struct RawCase {
  std::string id;
  std::optional<std::string> language;
  std::vector<std::string> dfl;
  std::vector<UvlEntry> uvl;
  std::optional<std::string> class_label;

  friend bool operator==(const RawCase&, const RawCase&) = default;
};

// Number of unknown values is bucketed into {0, 1, 2, 3, >=4}.
inline constexpr std::size_t kUvlCountBuckets = 5;

struct FeatureInfo {
  FeatureId id = 0;
  std::string name;
  FeatureSource source = FeatureSource::dfl;

  friend bool operator==(const FeatureInfo&, const FeatureInfo&) = default;
};

class FeatureDictionary {
 public:
  FeatureDictionary() = default;

  // Appends a feature; its id is the next dense index. Throws DataError on a
  // duplicate (source, name).
  FeatureId add_feature(std::string name, FeatureSource source);
  ClassId add_class(std::string name);

  std::size_t num_features() const { return features_.size(); }
  std::size_t num_classes() const { return classes_.size(); }

  const std::vector<FeatureInfo>& features() const { return features_; }
  const std::vector<std::string>& classes() const { return classes_; }
  const FeatureInfo& feature(FeatureId id) const { return features_.at(id); }
  const std::string& class_name(ClassId id) const { return classes_.at(id); }

  std::optional<FeatureId> find_feature(FeatureSource source, std::string_view name) const;
  std::optional<ClassId> find_class(std::string_view name) const;

  nlohmann::json to_json() const;
  static FeatureDictionary from_json(const nlohmann::json& j);

  // Hex SHA-256 of the compact canonical JSON serialization.
  std::string hash() const;

  friend bool operator==(const FeatureDictionary& a, const FeatureDictionary& b) {
    return a.features_ == b.features_ && a.classes_ == b.classes_;
  }

  static std::string count_feature_name(std::size_t bucket);
  static std::string type_feature_name(const UvlEntry& entry);

 private:
  static std::string key(FeatureSource source, std::string_view name);

  std::vector<FeatureInfo> features_;
  std::vector<std::string> classes_;
  std::unordered_map<std::string, FeatureId> feature_index_;
  std::unordered_map<std::string, ClassId> class_index_;
};

// Strictly ascending set of present feature ids.
class FeatureVector {
 public:
  FeatureVector() = default;
  // Sorts and removes duplicates.
  explicit FeatureVector(std::vector<FeatureId> ids);
  FeatureVector(std::initializer_list<FeatureId> ids)
      : FeatureVector(std::vector<FeatureId>(ids)) {}

  bool contains(FeatureId f) const;
  std::size_t size() const { return ids_.size(); }
  bool empty() const { return ids_.empty(); }
  std::span<const FeatureId> ids() const { return ids_; }
  auto begin() const { return ids_.begin(); }
  auto end() const { return ids_.end(); }

  // Copy with feature f toggled.
  FeatureVector flipped(FeatureId f) const;

  friend bool operator==(const FeatureVector&, const FeatureVector&) = default;
  friend auto operator<=>(const FeatureVector&, const FeatureVector&) = default;

 private:
  std::vector<FeatureId> ids_;
};

struct Instance {
  std::string id;
  FeatureVector vector;
  ClassId class_id = 0;

  friend bool operator==(const Instance&, const Instance&) = default;
};

struct Dataset {
  FeatureDictionary dictionary;
  std::vector<Instance> instances;

  std::size_t size() const { return instances.size(); }
  bool empty() const { return instances.empty(); }

  // Throws DataError when an instance references an id outside the dictionary.
  void validate() const;

  friend bool operator==(const Dataset&, const Dataset&) = default;
};

FeatureDictionary build_dictionary(std::span<const RawCase> cases);
FeatureVector encode_case(const RawCase& raw, const FeatureDictionary& dict);
// Encodes labeled cases; throws DataError for labels unknown to the dictionary.
Dataset encode_dataset(std::span<const RawCase> cases, const FeatureDictionary& dict);

RawCase raw_case_from_json(const nlohmann::json& j);
nlohmann::json raw_case_to_json(const RawCase& raw);
std::vector<RawCase> read_raw_cases(std::istream& in);

Dataset load_dataset(std::istream& in);
void save_dataset(const Dataset& ds, std::ostream& out);
Dataset load_dataset_file(const std::string& path);
void save_dataset_file(const Dataset& ds, const std::string& path);

// Per-class stratified holdout: each class puts floor(size * fraction) of its
// instances in the test set, chosen by a seeded shuffle. Instance order within
// each side follows the input order.
std::pair<Dataset, Dataset> split(const Dataset& ds, double test_fraction, std::uint64_t seed);

}  // namespace cmdlearn
