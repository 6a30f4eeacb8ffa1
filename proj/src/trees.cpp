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

#include "cmdlearn/trees.hpp"

#include <algorithm>
#include <numeric>

#include "cmdlearn/error.hpp"
#include "cmdlearn/kernels.hpp"

namespace cmdlearn {

using nlohmann::json;

std::string_view to_string(TreeVariant v) {
  switch (v) {
    case TreeVariant::bs_tree:
      return "bs_tree";
    case TreeVariant::igtree:
      return "igtree";
    case TreeVariant::bd_tree:
      return "bd_tree";
    case TreeVariant::c45:
      return "c45";
  }
  return "bs_tree";
}

TreeVariant parse_tree_variant(std::string_view s) {
  if (s == "bs_tree") return TreeVariant::bs_tree;
  if (s == "igtree") return TreeVariant::igtree;
  if (s == "bd_tree") return TreeVariant::bd_tree;
  if (s == "c45") return TreeVariant::c45;
  throw DataError("unknown tree variant '" + std::string(s) + "'");
}

DecisionTree::DecisionTree(TreeVariant variant, std::size_t num_classes, std::vector<TreeNode> nodes)
    : variant_(variant), num_classes_(num_classes), nodes_(std::move(nodes)) {
  if (nodes_.empty()) throw DataError("decision tree has no nodes");
}

std::int32_t DecisionTree::leaf_for(const FeatureVector& x) const {
  std::int32_t i = 0;
  while (!node(i).is_leaf()) {
    const auto& n = node(i);
    i = x.contains(static_cast<FeatureId>(n.feature)) ? n.present : n.absent;
  }
  return i;
}

namespace {

ClassId majority_of(const std::vector<std::uint32_t>& hist) {
  ClassId best = 0;
  for (ClassId j = 1; j < hist.size(); ++j) {
    if (hist[j] > hist[best]) best = j;
  }
  return best;
}

class TreeBuilder {
 public:
  TreeBuilder(const Dataset& ds, SplitCriterion criterion, bool dynamic)
      : ds_(ds), criterion_(criterion), dynamic_(dynamic), used_(ds.dictionary.num_features(), 0) {
    if (ds.empty()) throw DataError("cannot build a tree from an empty dataset");
    if (!dynamic_) {
      const auto stats = compute_stats(ds);
      std::vector<double> score(stats.num_features());
      kernels::criterion_scores(stats, criterion_, score);
      ranking_.resize(score.size());
      std::iota(ranking_.begin(), ranking_.end(), FeatureId{0});
      std::stable_sort(ranking_.begin(), ranking_.end(),
                       [&](FeatureId a, FeatureId b) { return score[a] > score[b]; });
    }
  }

  std::vector<TreeNode> build() {
    std::vector<std::uint32_t> rows(ds_.size());
    std::iota(rows.begin(), rows.end(), 0u);
    grow(rows);
    return std::move(nodes_);
  }

 private:
  std::int32_t grow(const std::vector<std::uint32_t>& rows) {
    const auto index = static_cast<std::int32_t>(nodes_.size());
    nodes_.emplace_back();

    std::vector<std::uint32_t> hist(ds_.dictionary.num_classes(), 0);
    for (auto r : rows) ++hist[ds_.instances[r].class_id];
    const bool pure = std::count_if(hist.begin(), hist.end(), [](auto h) { return h > 0; }) <= 1;

    const std::int32_t feature = pure ? TreeNode::kNone : choose_split(rows);
    if (feature == TreeNode::kNone) {
      nodes_[index].majority = majority_of(hist);
      nodes_[index].hist = std::move(hist);
      return index;
    }

    std::vector<std::uint32_t> absent_rows, present_rows;
    for (auto r : rows) {
      (ds_.instances[r].vector.contains(static_cast<FeatureId>(feature)) ? present_rows : absent_rows)
          .push_back(r);
    }
    used_[feature] = 1;
    const auto absent = grow(absent_rows);
    const auto present = grow(present_rows);
    used_[feature] = 0;

    auto& node = nodes_[index];
    node.feature = feature;
    node.absent = absent;
    node.present = present;
    return index;
  }

  // Picks the feature for this node, or kNone when no unused feature puts
  // instances on both sides.
  std::int32_t choose_split(const std::vector<std::uint32_t>& rows) {
    const auto total = rows.size();
    if (!dynamic_) {
      std::vector<std::uint32_t> present(ds_.dictionary.num_features(), 0);
      for (auto r : rows) {
        for (FeatureId f : ds_.instances[r].vector) ++present[f];
      }
      for (FeatureId f : ranking_) {
        if (!used_[f] && present[f] > 0 && present[f] < total) return static_cast<std::int32_t>(f);
      }
      return TreeNode::kNone;
    }

    const auto stats = compute_stats(ds_, rows);
    std::vector<double> score(stats.num_features());
    kernels::criterion_scores(stats, criterion_, score);
    std::int32_t best = TreeNode::kNone;
    for (FeatureId f = 0; f < score.size(); ++f) {
      if (used_[f] || stats.count(f) == 0 || stats.count(f) == total) continue;
      if (best == TreeNode::kNone || score[f] > score[best]) best = static_cast<std::int32_t>(f);
    }
    return best;
  }

  const Dataset& ds_;
  SplitCriterion criterion_;
  bool dynamic_;
  std::vector<FeatureId> ranking_;
  std::vector<char> used_;
  std::vector<TreeNode> nodes_;
};

}  // namespace

DecisionTree build_static_tree(const Dataset& ds, SplitCriterion criterion) {
  auto nodes = TreeBuilder(ds, criterion, false).build();
  const auto variant = criterion == SplitCriterion::weight ? TreeVariant::bs_tree : TreeVariant::igtree;
  return DecisionTree(variant, ds.dictionary.num_classes(), std::move(nodes));
}

DecisionTree build_dynamic_tree(const Dataset& ds, SplitCriterion criterion) {
  auto nodes = TreeBuilder(ds, criterion, true).build();
  const auto variant = criterion == SplitCriterion::weight ? TreeVariant::bd_tree : TreeVariant::c45;
  return DecisionTree(variant, ds.dictionary.num_classes(), std::move(nodes));
}

DecisionTree build_tree(const Dataset& ds, TreeVariant variant) {
  switch (variant) {
    case TreeVariant::bs_tree:
      return build_static_tree(ds, SplitCriterion::weight);
    case TreeVariant::igtree:
      return build_static_tree(ds, SplitCriterion::info_gain);
    case TreeVariant::bd_tree:
      return build_dynamic_tree(ds, SplitCriterion::weight);
    case TreeVariant::c45:
      return build_dynamic_tree(ds, SplitCriterion::info_gain);
  }
  throw UsageError("unknown tree variant");
}

// ---------------------------------------------------------------------------
// Classification

namespace {

// Appends the classes supported by `leaves`, ordered by summed support, that
// are not already in `out`.
void append_tier(const DecisionTree& tree, const std::vector<std::int32_t>& leaves, Basis basis,
                 RankedPrediction& out) {
  std::vector<std::uint64_t> support(tree.num_classes(), 0);
  for (auto leaf : leaves) {
    const auto& hist = tree.node(leaf).hist;
    for (ClassId j = 0; j < hist.size(); ++j) support[j] += hist[j];
  }
  std::vector<RankedClass> tier;
  for (ClassId j = 0; j < support.size(); ++j) {
    if (support[j] == 0) continue;
    const bool listed = std::any_of(out.entries.begin(), out.entries.end(),
                                    [&](const RankedClass& e) { return e.class_id == j; });
    if (!listed) tier.push_back({j, static_cast<double>(support[j]), basis});
  }
  std::sort(tier.begin(), tier.end(), [](const RankedClass& a, const RankedClass& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.class_id < b.class_id;
  });
  out.entries.insert(out.entries.end(), tier.begin(), tier.end());
}

void descend(const DecisionTree& tree, const FeatureVector& x, std::int32_t i, std::size_t used,
             std::size_t budget, std::vector<ReachedLeaf>& out) {
  const auto& n = tree.node(i);
  if (n.is_leaf()) {
    out.push_back({i, used});
    return;
  }
  const bool has = x.contains(static_cast<FeatureId>(n.feature));
  descend(tree, x, has ? n.present : n.absent, used, budget, out);
  if (used < budget) descend(tree, x, has ? n.absent : n.present, used + 1, budget, out);
}

}  // namespace

RankedPrediction classify_exact(const DecisionTree& tree, const FeatureVector& x, std::size_t k) {
  require_positive_k(k);
  RankedPrediction out;
  append_tier(tree, {tree.leaf_for(x)}, Basis::exact, out);
  if (out.entries.size() > k) out.entries.resize(k);
  return out;
}

std::vector<ReachedLeaf> reachable_leaves(const DecisionTree& tree, const FeatureVector& x,
                                          std::size_t max_deviations) {
  std::vector<ReachedLeaf> out;
  descend(tree, x, 0, 0, max_deviations, out);
  return out;
}

RankedPrediction classify_approx(const DecisionTree& tree, const FeatureVector& x,
                                 std::size_t max_deviations, std::size_t k) {
  require_positive_k(k);
  const auto reached = reachable_leaves(tree, x, max_deviations);
  RankedPrediction out;
  for (std::size_t tier = 0; tier <= max_deviations && out.entries.size() < k; ++tier) {
    std::vector<std::int32_t> leaves;
    for (const auto& r : reached) {
      if (r.deviations == tier) leaves.push_back(r.node);
    }
    append_tier(tree, leaves, tier == 0 ? Basis::exact : Basis::approximate, out);
  }
  if (out.entries.size() > k) out.entries.resize(k);
  return out;
}

// ---------------------------------------------------------------------------
// Shape

TreeMetrics tree_metrics(const DecisionTree& tree) {
  TreeMetrics m;
  std::vector<std::pair<std::int32_t, std::size_t>> stack{{0, 1}};
  while (!stack.empty()) {
    auto [i, level] = stack.back();
    stack.pop_back();
    ++m.nodes;
    m.levels = std::max(m.levels, level);
    const auto& n = tree.node(i);
    if (n.is_leaf()) {
      ++m.leaves;
    } else {
      stack.push_back({n.absent, level + 1});
      stack.push_back({n.present, level + 1});
    }
  }
  return m;
}

void validate_tree(const DecisionTree& tree, std::optional<std::size_t> expected_total) {
  const auto& nodes = tree.nodes();
  std::vector<char> on_path;
  std::vector<char> visited(nodes.size(), 0);
  std::size_t total = 0;

  struct Frame {
    std::int32_t node;
    bool leaving;
  };
  std::vector<Frame> stack{{0, false}};
  while (!stack.empty()) {
    auto [i, leaving] = stack.back();
    stack.pop_back();
    if (i < 0 || static_cast<std::size_t>(i) >= nodes.size()) throw_invariant("child index out of range");
    const auto& n = nodes[i];
    if (leaving) {
      on_path[n.feature] = 0;
      continue;
    }
    if (visited[i]) throw_invariant("tree node reachable twice");
    visited[i] = 1;
    if (n.is_leaf()) {
      if (n.hist.size() != tree.num_classes()) throw_invariant("leaf histogram has the wrong size");
      std::size_t sum = 0;
      for (auto h : n.hist) sum += h;
      if (sum == 0) throw_invariant("empty leaf histogram");
      if (n.majority != majority_of(n.hist)) throw_invariant("leaf majority is not the histogram argmax");
      total += sum;
      continue;
    }
    if (n.feature < 0) throw_invariant("negative split feature");
    if (static_cast<std::size_t>(n.feature) >= on_path.size()) on_path.resize(n.feature + 1, 0);
    if (on_path[n.feature]) throw_invariant("feature tested twice on one path");
    on_path[n.feature] = 1;
    stack.push_back({i, true});
    stack.push_back({n.absent, false});
    stack.push_back({n.present, false});
  }
  if (expected_total && total != *expected_total) {
    throw_invariant("leaf histograms do not sum to the training-set size");
  }
  const auto m = tree_metrics(tree);
  if (m.nodes != 2 * m.leaves - 1) throw_invariant("tree is not strictly binary");
}

// ---------------------------------------------------------------------------
// Serialization

namespace {

json node_to_json(const DecisionTree& tree, std::int32_t i, const FeatureDictionary& dict) {
  const auto& n = tree.node(i);
  if (n.is_leaf()) {
    json hist = json::object();
    for (ClassId j = 0; j < n.hist.size(); ++j) {
      if (n.hist[j] > 0) hist[dict.class_name(j)] = n.hist[j];
    }
    return {{"hist", std::move(hist)}};
  }
  return {{"f", n.feature},
          {"absent", node_to_json(tree, n.absent, dict)},
          {"present", node_to_json(tree, n.present, dict)}};
}

std::int32_t node_from_json(const json& j, const FeatureDictionary& dict, std::vector<TreeNode>& nodes) {
  const auto index = static_cast<std::int32_t>(nodes.size());
  nodes.emplace_back();
  if (j.contains("hist")) {
    std::vector<std::uint32_t> hist(dict.num_classes(), 0);
    for (const auto& [name, count] : j.at("hist").items()) {
      auto cls = dict.find_class(name);
      if (!cls) throw DataError("tree leaf names unknown class '" + name + "'");
      hist[*cls] = count.get<std::uint32_t>();
    }
    nodes[index].majority = majority_of(hist);
    nodes[index].hist = std::move(hist);
    return index;
  }
  const auto f = j.at("f").get<std::int32_t>();
  if (f < 0 || static_cast<std::size_t>(f) >= dict.num_features()) {
    throw DataError("tree split feature out of range");
  }
  const auto absent = node_from_json(j.at("absent"), dict, nodes);
  const auto present = node_from_json(j.at("present"), dict, nodes);
  nodes[index].feature = f;
  nodes[index].absent = absent;
  nodes[index].present = present;
  return index;
}

}  // namespace

json DecisionTree::to_json(const FeatureDictionary& dict) const {
  return {{"variant", cmdlearn::to_string(variant_)}, {"root", node_to_json(*this, 0, dict)}};
}

DecisionTree DecisionTree::from_json(const json& j, const FeatureDictionary& dict) {
  try {
    std::vector<TreeNode> nodes;
    node_from_json(j.at("root"), dict, nodes);
    DecisionTree tree(parse_tree_variant(j.at("variant").get<std::string>()), dict.num_classes(),
                      std::move(nodes));
    validate_tree(tree);
    return tree;
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed tree: ") + e.what());
  } catch (const InvariantError& e) {
    throw DataError(std::string("inconsistent tree: ") + e.what());
  }
}

}  // namespace cmdlearn
