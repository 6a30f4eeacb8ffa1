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

// One train/rank contract over all twelve learners, plus the model file
// envelope.

#include <array>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "cmdlearn/corpus.hpp"
#include "cmdlearn/instance_based.hpp"
#include "cmdlearn/ranking.hpp"
#include "cmdlearn/rules.hpp"
#include "cmdlearn/trees.hpp"
#include "json.hpp"

namespace cmdlearn {

enum class AlgorithmId {
  ib1,
  ib1_ig,
  bin_cat,
  bin_pro,
  bs_tree,
  igtree,
  bd_tree,
  c45,
  foil,
  bin_rules,
  c45_rules,
  se_tree,
};

inline constexpr std::array<AlgorithmId, 12> kAllAlgorithms = {
    AlgorithmId::ib1,     AlgorithmId::ib1_ig,    AlgorithmId::bin_cat, AlgorithmId::bin_pro,
    AlgorithmId::bs_tree, AlgorithmId::igtree,    AlgorithmId::bd_tree, AlgorithmId::c45,
    AlgorithmId::foil,    AlgorithmId::bin_rules, AlgorithmId::c45_rules, AlgorithmId::se_tree,
};

std::string_view to_string(AlgorithmId algo);
// Throws UsageError for anything but the twelve ids ("ib1", "ib1-ig", ...).
AlgorithmId parse_algorithm(std::string_view s);
// "all" or a comma-separated list.
std::vector<AlgorithmId> parse_algorithm_list(std::string_view s);

// Rule base together with its SE-tree index.
struct IndexedRules {
  RuleBase rules;
  SETree index;
};

class Model {
 public:
  using Body = std::variant<InstanceModel, PrototypeModel, DecisionTree, RuleBase, IndexedRules>;

  Model(AlgorithmId algo, FeatureDictionary dictionary, nlohmann::json params, Body body);

  AlgorithmId algo() const { return algo_; }
  const FeatureDictionary& dictionary() const { return dictionary_; }
  const std::string& dict_hash() const { return dict_hash_; }
  const nlohmann::json& params() const { return params_; }
  const Body& body() const { return body_; }

  // Throws DataError when dict does not hash to this model's dictionary.
  void require_dictionary(const FeatureDictionary& dict) const;

  // Ranked classes for an already encoded case. Trees and rule bases use the
  // one-deviation approximate search to fill ranks past the exact answer.
  RankedPrediction rank(const FeatureVector& x, std::size_t k) const;

  // Tree shape for tree models, rule counts for rule models, memory size for
  // instance models.
  nlohmann::json metrics() const;

  // Human-readable summary for the inspect command.
  std::string describe() const;

  nlohmann::json to_json() const;
  static Model from_json(const nlohmann::json& j);
  void save(const std::string& path) const;
  static Model load(const std::string& path);

 private:
  AlgorithmId algo_;
  FeatureDictionary dictionary_;
  std::string dict_hash_;
  nlohmann::json params_;
  Body body_;
};

// Trains `algo` on ds. se-tree learns BIN-rules and indexes them; c45-rules
// extracts and prunes rules from a C4.5 tree.
Model train(AlgorithmId algo, const Dataset& ds);

}  // namespace cmdlearn
