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

// Propositional rule induction (FOIL, BIN-rules), rule extraction from
// decision trees (C4.5-RULES) and the SE-tree index over a rule base.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cmdlearn/corpus.hpp"
#include "cmdlearn/ranking.hpp"
#include "cmdlearn/stats.hpp"
#include "cmdlearn/trees.hpp"
#include "json.hpp"

namespace cmdlearn {

enum class Sign { positive, negative };

// A signed feature test. Ordering is the canonical SE-tree order: ascending
// feature, positive before negative.
struct Literal {
  FeatureId feature = 0;
  Sign sign = Sign::positive;

  bool holds(const FeatureVector& x) const { return x.contains(feature) == (sign == Sign::positive); }

  friend bool operator==(const Literal&, const Literal&) = default;
  friend auto operator<=>(const Literal&, const Literal&) = default;
};

struct Rule {
  ClassId class_id = 0;
  std::vector<Literal> literals;
  std::uint32_t coverage = 0;  // training instances of class_id satisfying the body
  bool pure = true;            // no other-class instance satisfied it when learned

  friend bool operator==(const Rule&, const Rule&) = default;
};

enum class RuleOrigin { foil, bin_rules, c45_rules };

std::string_view to_string(RuleOrigin origin);

struct RuleBase {
  std::vector<Rule> rules;  // learning order
  ClassId default_class = 0;
  RuleOrigin origin = RuleOrigin::foil;
  std::size_t num_classes = 0;

  nlohmann::json to_json(const FeatureDictionary& dict) const;
  static RuleBase from_json(const nlohmann::json& j, const FeatureDictionary& dict);

  friend bool operator==(const RuleBase&, const RuleBase&) = default;
};

struct RuleMetrics {
  std::size_t rules = 0;
  std::size_t literals = 0;
  std::size_t max_length = 0;

  friend bool operator==(const RuleMetrics&, const RuleMetrics&) = default;
};

// ---------------------------------------------------------------------------
// Rule growth

// A partially grown rule and the training rows it still covers.
struct RuleGrowthState {
  ClassId target = 0;
  std::vector<Literal> literals;
  std::vector<std::uint32_t> positives;  // covered rows of the target class
  std::vector<std::uint32_t> negatives;  // covered rows of other classes

  std::size_t b_plus() const { return positives.size(); }
  std::size_t b_minus() const { return negatives.size(); }
};

enum class LiteralCriterion { foil_gain, bin_rules };

struct CandidateScore {
  Literal literal;
  std::uint32_t b_plus = 0;   // positives left after adding the literal
  std::uint32_t b_minus = 0;  // negatives left after adding the literal
  double score = 0.0;
};

// b_f+ (log2(b_f+ / (b_f+ + b_f-)) - log2(b+ / (b+ + b-))); 0 when b_f+ = 0.
double foil_gain(std::size_t b_plus_after, std::size_t b_minus_after, std::size_t b_plus_before,
                 std::size_t b_minus_before);

// w_f p(f,C) for a positive test, w_f (1 - p(f,C)) for a negative one.
double class_literal_weight(const FeatureStats& stats, Literal literal, ClassId cls);

// b_f+ (b- - b_f-) w_{f,s,C}
double bin_rules_score(std::size_t b_plus_after, std::size_t b_minus_before,
                       std::size_t b_minus_after, double class_weight);

// Fresh rule for `target` covering the given positive rows and every row of
// another class.
RuleGrowthState start_rule(const Dataset& ds, ClassId target, std::vector<std::uint32_t> positives);

// Scores every literal on a feature the rule does not test yet, both signs,
// in canonical literal order.
std::vector<CandidateScore> score_candidates(const RuleGrowthState& state, const Dataset& ds,
                                             const FeatureStats& stats, LiteralCriterion criterion);

// Best candidate that keeps b_plus >= 1 and strictly lowers b_minus; ties go
// to the canonically smaller literal.
std::optional<CandidateScore> select_literal(const std::vector<CandidateScore>& candidates,
                                             std::size_t b_minus_before);

// Specializes the rule; throws InvariantError if a binding set grows.
void add_literal(RuleGrowthState& state, Literal literal, const Dataset& ds);

RuleBase learn_foil(const Dataset& ds);
RuleBase learn_bin_rules(const Dataset& ds, const FeatureStats& stats);

// ---------------------------------------------------------------------------
// Tree-derived rules

// One rule per leaf, literals in root-to-leaf order, no pruning.
RuleBase path_rules(const DecisionTree& tree, const Dataset& ds);
RuleBase extract_rules_from_tree(const DecisionTree& tree, const Dataset& ds);

// ---------------------------------------------------------------------------
// Application

// Number of literals of `rule` that x violates.
std::size_t test_rule(const Rule& rule, const FeatureVector& x);

struct SETreeTerminal {
  ClassId class_id = 0;
  std::uint32_t coverage = 0;
  std::uint32_t rule_index = 0;
};

struct SETreeNode {
  std::optional<Literal> edge;  // empty at the root
  std::vector<std::pair<Literal, std::int32_t>> children;  // sorted by literal
  std::vector<SETreeTerminal> terminals;
};

// Trie over canonically sorted rule bodies; an index for classify_rules.
class SETree {
 public:
  SETree(std::vector<SETreeNode> nodes, ClassId default_class, std::size_t num_classes,
         std::size_t rule_count);

  const std::vector<SETreeNode>& nodes() const { return nodes_; }
  const SETreeNode& root() const { return nodes_.front(); }
  ClassId default_class() const { return default_class_; }
  std::size_t num_classes() const { return num_classes_; }
  std::size_t rule_count() const { return rule_count_; }

 private:
  std::vector<SETreeNode> nodes_;
  ClassId default_class_;
  std::size_t num_classes_;
  std::size_t rule_count_;
};

SETree build_se_tree(const RuleBase& rb);

// Tier 0: classes of satisfied rules; tier 1: classes of rules with one
// violated literal; then the default class. Within a tier classes are ordered
// by the best coverage among their firing rules.
RankedPrediction classify_rules(const RuleBase& rb, const FeatureVector& x, std::size_t k);
RankedPrediction classify_rules(const SETree& tree, const FeatureVector& x, std::size_t k);

RuleMetrics rule_metrics(const RuleBase& rb);
// nodes, leaves (nodes without children) and levels with the root at level 1.
TreeMetrics se_tree_metrics(const SETree& tree);

// Human-readable rule listing, one rule per line:
//   IF f(update) AND NOT f(delete) THEN class=UPDATE_PRICE (cov=9)
std::string format_rule(const Rule& rule, const FeatureDictionary& dict);
std::string dump_rules(const RuleBase& rb, const FeatureDictionary& dict);

// Per-class counts of training rows satisfying every literal.
std::vector<std::uint32_t> satisfying_histogram(std::span<const Literal> literals, const Dataset& ds);

}  // namespace cmdlearn
