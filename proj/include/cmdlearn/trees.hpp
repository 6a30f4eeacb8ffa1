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

// Binary decision trees over presence features. Static variants rank the
// features once on the full training set (BS-tree by selectivity weight,
// IGTree by information gain); dynamic variants re-rank on each node's local
// instances (BD-tree by weight, C4.5 by information gain).

#include <cstdint>
#include <vector>

#include "cmdlearn/corpus.hpp"
#include "cmdlearn/ranking.hpp"
#include "cmdlearn/stats.hpp"
#include "json.hpp"

namespace cmdlearn {

enum class TreeVariant { bs_tree, igtree, bd_tree, c45 };

std::string_view to_string(TreeVariant v);
TreeVariant parse_tree_variant(std::string_view s);

struct TreeNode {
  static constexpr std::int32_t kNone = -1;

  std::int32_t feature = kNone;  // kNone for leaves
  std::int32_t absent = kNone;   // child for value 0
  std::int32_t present = kNone;  // child for value 1
  std::vector<std::uint32_t> hist;  // per-class counts, leaves only
  ClassId majority = 0;

  bool is_leaf() const { return feature == kNone; }
};

struct TreeMetrics {
  std::size_t nodes = 0;
  std::size_t leaves = 0;
  std::size_t levels = 0;  // root is level 1

  friend bool operator==(const TreeMetrics&, const TreeMetrics&) = default;
};

class DecisionTree {
 public:
  DecisionTree(TreeVariant variant, std::size_t num_classes, std::vector<TreeNode> nodes);

  TreeVariant variant() const { return variant_; }
  std::size_t num_classes() const { return num_classes_; }
  const std::vector<TreeNode>& nodes() const { return nodes_; }
  const TreeNode& root() const { return nodes_.front(); }
  const TreeNode& node(std::int32_t i) const { return nodes_[static_cast<std::size_t>(i)]; }

  // Index of the leaf reached by exact traversal.
  std::int32_t leaf_for(const FeatureVector& x) const;

  nlohmann::json to_json(const FeatureDictionary& dict) const;
  static DecisionTree from_json(const nlohmann::json& j, const FeatureDictionary& dict);

 private:
  TreeVariant variant_;
  std::size_t num_classes_;
  std::vector<TreeNode> nodes_;  // nodes_[0] is the root
};

DecisionTree build_static_tree(const Dataset& ds, SplitCriterion criterion);
DecisionTree build_dynamic_tree(const Dataset& ds, SplitCriterion criterion);
DecisionTree build_tree(const Dataset& ds, TreeVariant variant);

RankedPrediction classify_exact(const DecisionTree& tree, const FeatureVector& x, std::size_t k);

struct ReachedLeaf {
  std::int32_t node = 0;
  std::size_t deviations = 0;
};

// Depth-first search allowing up to max_deviations branches that contradict x.
std::vector<ReachedLeaf> reachable_leaves(const DecisionTree& tree, const FeatureVector& x,
                                          std::size_t max_deviations);

// Classes tiered by the number of deviations needed to reach them, each tier
// ordered by summed leaf support.
RankedPrediction classify_approx(const DecisionTree& tree, const FeatureVector& x,
                                 std::size_t max_deviations, std::size_t k);

TreeMetrics tree_metrics(const DecisionTree& tree);

// Throws InvariantError unless every internal node has two children, no root
// to leaf path tests a feature twice, and leaf histograms are non-empty with a
// correct majority. When expected_total is given, leaf totals must sum to it.
void validate_tree(const DecisionTree& tree, std::optional<std::size_t> expected_total = {});

}  // namespace cmdlearn
