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

#include "cmdlearn/rules.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "cmdlearn/error.hpp"
#include "cmdlearn/kernels.hpp"

namespace cmdlearn {

using nlohmann::json;

std::string_view to_string(RuleOrigin origin) {
  switch (origin) {
    case RuleOrigin::foil:
      return "foil";
    case RuleOrigin::bin_rules:
      return "bin_rules";
    case RuleOrigin::c45_rules:
      return "c45_rules";
  }
  return "foil";
}

namespace {

RuleOrigin parse_rule_origin(std::string_view s) {
  if (s == "foil") return RuleOrigin::foil;
  if (s == "bin_rules") return RuleOrigin::bin_rules;
  if (s == "c45_rules") return RuleOrigin::c45_rules;
  throw DataError("unknown rule origin '" + std::string(s) + "'");
}

bool satisfies(std::span<const Literal> literals, const FeatureVector& x) {
  return std::all_of(literals.begin(), literals.end(), [&](const Literal& l) { return l.holds(x); });
}

ClassId argmax_lowest(const std::vector<std::uint32_t>& counts) {
  ClassId best = 0;
  for (ClassId j = 1; j < counts.size(); ++j) {
    if (counts[j] > counts[best]) best = j;
  }
  return best;
}

ClassId global_majority(const Dataset& ds) {
  std::vector<std::uint32_t> counts(ds.dictionary.num_classes(), 0);
  for (const auto& inst : ds.instances) ++counts[inst.class_id];
  return argmax_lowest(counts);
}

// Majority class among rows covered by no rule; global majority if none.
ClassId uncovered_majority(const std::vector<Rule>& rules, const Dataset& ds) {
  std::vector<std::uint32_t> counts(ds.dictionary.num_classes(), 0);
  bool any = false;
  for (const auto& inst : ds.instances) {
    const bool covered = std::any_of(rules.begin(), rules.end(),
                                     [&](const Rule& r) { return satisfies(r.literals, inst.vector); });
    if (!covered) {
      ++counts[inst.class_id];
      any = true;
    }
  }
  return any ? argmax_lowest(counts) : global_majority(ds);
}

}  // namespace

std::vector<std::uint32_t> satisfying_histogram(std::span<const Literal> literals, const Dataset& ds) {
  std::vector<std::uint32_t> hist(ds.dictionary.num_classes(), 0);
  kernels::satisfying_histogram(literals, ds, hist);
  return hist;
}

// ---------------------------------------------------------------------------
// Literal scores

double foil_gain(std::size_t b_plus_after, std::size_t b_minus_after, std::size_t b_plus_before,
                 std::size_t b_minus_before) {
  if (b_plus_after == 0 || b_plus_before == 0) return 0.0;
  const double after = std::log2(static_cast<double>(b_plus_after) /
                                 static_cast<double>(b_plus_after + b_minus_after));
  const double before = std::log2(static_cast<double>(b_plus_before) /
                                  static_cast<double>(b_plus_before + b_minus_before));
  return static_cast<double>(b_plus_after) * (after - before);
}

double class_literal_weight(const FeatureStats& stats, Literal literal, ClassId cls) {
  const double p = stats.proportion(literal.feature, cls);
  return stats.weight(literal.feature) * (literal.sign == Sign::positive ? p : 1.0 - p);
}

double bin_rules_score(std::size_t b_plus_after, std::size_t b_minus_before,
                       std::size_t b_minus_after, double class_weight) {
  if (b_minus_after > b_minus_before) throw_invariant("negative bindings grew");
  return static_cast<double>(b_plus_after) * static_cast<double>(b_minus_before - b_minus_after) *
         class_weight;
}

// ---------------------------------------------------------------------------
// Growth

RuleGrowthState start_rule(const Dataset& ds, ClassId target, std::vector<std::uint32_t> positives) {
  RuleGrowthState state;
  state.target = target;
  state.positives = std::move(positives);
  for (std::uint32_t r = 0; r < ds.size(); ++r) {
    if (ds.instances[r].class_id != target) state.negatives.push_back(r);
  }
  return state;
}

std::vector<CandidateScore> score_candidates(const RuleGrowthState& state, const Dataset& ds,
                                             const FeatureStats& stats, LiteralCriterion criterion) {
  const auto n = ds.dictionary.num_features();
  std::vector<std::uint32_t> pos_with(n, 0), neg_with(n, 0);
  for (auto r : state.positives) {
    for (FeatureId f : ds.instances[r].vector) ++pos_with[f];
  }
  for (auto r : state.negatives) {
    for (FeatureId f : ds.instances[r].vector) ++neg_with[f];
  }
  std::vector<char> tested(n, 0);
  for (const auto& l : state.literals) tested[l.feature] = 1;

  const auto bp = state.b_plus();
  const auto bm = state.b_minus();
  std::vector<CandidateScore> out;
  out.reserve(2 * n);
  for (FeatureId f = 0; f < n; ++f) {
    if (tested[f]) continue;
    for (Sign sign : {Sign::positive, Sign::negative}) {
      CandidateScore c;
      c.literal = {f, sign};
      c.b_plus = sign == Sign::positive ? pos_with[f] : static_cast<std::uint32_t>(bp - pos_with[f]);
      c.b_minus = sign == Sign::positive ? neg_with[f] : static_cast<std::uint32_t>(bm - neg_with[f]);
      c.score = criterion == LiteralCriterion::foil_gain
                    ? foil_gain(c.b_plus, c.b_minus, bp, bm)
                    : bin_rules_score(c.b_plus, bm, c.b_minus,
                                      class_literal_weight(stats, c.literal, state.target));
      out.push_back(c);
    }
  }
  return out;
}

std::optional<CandidateScore> select_literal(const std::vector<CandidateScore>& candidates,
                                             std::size_t b_minus_before) {
  std::optional<CandidateScore> best;
  for (const auto& c : candidates) {
    if (c.b_plus == 0 || c.b_minus >= b_minus_before) continue;
    if (!best || c.score > best->score || (c.score == best->score && c.literal < best->literal)) {
      best = c;
    }
  }
  return best;
}

void add_literal(RuleGrowthState& state, Literal literal, const Dataset& ds) {
  const auto bp = state.b_plus();
  const auto bm = state.b_minus();
  auto keep = [&](std::vector<std::uint32_t>& rows) {
    std::erase_if(rows, [&](std::uint32_t r) { return !literal.holds(ds.instances[r].vector); });
  };
  keep(state.positives);
  keep(state.negatives);
  state.literals.push_back(literal);
  if (state.b_plus() > bp || state.b_minus() > bm) throw_invariant("bindings grew during rule growth");
}

namespace {

RuleBase separate_and_conquer(const Dataset& ds, const FeatureStats& stats, LiteralCriterion criterion,
                              RuleOrigin origin) {
  if (ds.empty()) throw DataError("cannot learn rules from an empty dataset");
  RuleBase rb;
  rb.origin = origin;
  rb.num_classes = ds.dictionary.num_classes();

  for (ClassId cls = 0; cls < rb.num_classes; ++cls) {
    std::vector<std::uint32_t> target;
    for (std::uint32_t r = 0; r < ds.size(); ++r) {
      if (ds.instances[r].class_id == cls) target.push_back(r);
    }
    while (!target.empty()) {
      auto state = start_rule(ds, cls, target);
      while (state.b_minus() > 0) {
        const auto best = select_literal(score_candidates(state, ds, stats, criterion), state.b_minus());
        if (!best) break;
        add_literal(state, best->literal, ds);
      }
      Rule rule;
      rule.class_id = cls;
      rule.literals = state.literals;
      rule.pure = state.b_minus() == 0;
      rule.coverage = satisfying_histogram(rule.literals, ds)[cls];
      rb.rules.push_back(std::move(rule));

      // state.positives is the covered subset of target, both ascending.
      std::vector<std::uint32_t> rest;
      std::set_difference(target.begin(), target.end(), state.positives.begin(), state.positives.end(),
                          std::back_inserter(rest));
      if (rest.size() == target.size()) throw_invariant("rule covers no remaining target instance");
      target = std::move(rest);
    }
  }
  rb.default_class = uncovered_majority(rb.rules, ds);
  return rb;
}

}  // namespace

RuleBase learn_foil(const Dataset& ds) {
  if (ds.empty()) throw DataError("cannot learn rules from an empty dataset");
  // FOIL gain does not read the stats; pass an empty block.
  return separate_and_conquer(ds, FeatureStats{}, LiteralCriterion::foil_gain, RuleOrigin::foil);
}

RuleBase learn_bin_rules(const Dataset& ds, const FeatureStats& stats) {
  return separate_and_conquer(ds, stats, LiteralCriterion::bin_rules, RuleOrigin::bin_rules);
}

// ---------------------------------------------------------------------------
// Tree-derived rules

RuleBase path_rules(const DecisionTree& tree, const Dataset& ds) {
  RuleBase rb;
  rb.origin = RuleOrigin::c45_rules;
  rb.num_classes = ds.dictionary.num_classes();
  std::vector<Literal> path;
  auto walk = [&](auto& self, std::int32_t i) -> void {
    const auto& n = tree.node(i);
    if (n.is_leaf()) {
      Rule rule;
      rule.class_id = n.majority;
      rule.literals = path;
      const auto hist = satisfying_histogram(rule.literals, ds);
      rule.coverage = hist[rule.class_id];
      rule.pure = std::accumulate(hist.begin(), hist.end(), 0u) == rule.coverage;
      rb.rules.push_back(std::move(rule));
      return;
    }
    const auto f = static_cast<FeatureId>(n.feature);
    path.push_back({f, Sign::negative});
    self(self, n.absent);
    path.back() = {f, Sign::positive};
    self(self, n.present);
    path.pop_back();
  };
  walk(walk, 0);
  rb.default_class = global_majority(ds);
  return rb;
}

RuleBase extract_rules_from_tree(const DecisionTree& tree, const Dataset& ds) {
  auto rb = path_rules(tree, ds);
  const auto total_of = [](const std::vector<std::uint32_t>& h) {
    return std::accumulate(h.begin(), h.end(), 0u);
  };

  // Pass 1: drop literals whose removal does not raise the rule's error.
  for (auto& rule : rb.rules) {
    auto hist = satisfying_histogram(rule.literals, ds);
    auto errors = total_of(hist) - hist[rule.class_id];
    bool changed = true;
    while (changed) {
      changed = false;
      for (std::size_t i = 0; i < rule.literals.size();) {
        auto trial = rule.literals;
        trial.erase(trial.begin() + static_cast<std::ptrdiff_t>(i));
        const auto trial_hist = satisfying_histogram(trial, ds);
        const auto trial_errors = total_of(trial_hist) - trial_hist[rule.class_id];
        if (trial_errors <= errors) {
          rule.literals = std::move(trial);
          hist = trial_hist;
          errors = trial_errors;
          changed = true;
        } else {
          ++i;
        }
      }
    }
    rule.coverage = hist[rule.class_id];
    rule.pure = errors == 0;
  }

  // Pass 2: drop duplicates and rules subsumed by a shorter same-class rule.
  std::vector<std::vector<Literal>> sorted_bodies;
  for (const auto& rule : rb.rules) {
    auto body = rule.literals;
    std::sort(body.begin(), body.end());
    sorted_bodies.push_back(std::move(body));
  }
  std::vector<char> drop(rb.rules.size(), 0);
  for (std::size_t i = 0; i < rb.rules.size(); ++i) {
    for (std::size_t j = 0; j < rb.rules.size() && !drop[i]; ++j) {
      if (i == j || drop[j] || rb.rules[i].class_id != rb.rules[j].class_id) continue;
      const auto& a = sorted_bodies[i];
      const auto& b = sorted_bodies[j];
      const bool duplicate = a == b && j < i;
      const bool subsumed = b.size() < a.size() && std::includes(a.begin(), a.end(), b.begin(), b.end());
      if (duplicate || subsumed) drop[i] = 1;
    }
  }
  std::vector<Rule> kept;
  for (std::size_t i = 0; i < rb.rules.size(); ++i) {
    if (!drop[i]) kept.push_back(std::move(rb.rules[i]));
  }
  rb.default_class = uncovered_majority(kept, ds);
  std::erase_if(kept, [&](const Rule& r) { return r.coverage == 0 && r.class_id == rb.default_class; });
  rb.rules = std::move(kept);
  return rb;
}

// ---------------------------------------------------------------------------
// Application

std::size_t test_rule(const Rule& rule, const FeatureVector& x) {
  std::size_t violated = 0;
  for (const auto& l : rule.literals) {
    if (!l.holds(x)) ++violated;
  }
  return violated;
}

namespace {

struct Firing {
  ClassId class_id;
  std::uint32_t coverage;
  std::size_t divergence;
};

RankedPrediction rank_firings(const std::vector<Firing>& firings, std::size_t num_classes,
                              ClassId default_class, std::size_t k) {
  require_positive_k(k);
  RankedPrediction out;
  std::vector<char> listed(num_classes, 0);
  for (std::size_t tier = 0; tier <= 1; ++tier) {
    std::vector<std::int64_t> best(num_classes, -1);
    for (const auto& f : firings) {
      if (f.divergence == tier && !listed[f.class_id]) {
        best[f.class_id] = std::max<std::int64_t>(best[f.class_id], f.coverage);
      }
    }
    std::vector<RankedClass> entries;
    for (ClassId j = 0; j < num_classes; ++j) {
      if (best[j] >= 0) entries.push_back({j, static_cast<double>(best[j]),
                                           tier == 0 ? Basis::exact : Basis::approximate});
    }
    std::sort(entries.begin(), entries.end(), [](const RankedClass& a, const RankedClass& b) {
      if (a.score != b.score) return a.score > b.score;
      return a.class_id < b.class_id;
    });
    for (const auto& e : entries) {
      listed[e.class_id] = 1;
      out.entries.push_back(e);
    }
  }
  if (out.entries.size() < k && default_class < num_classes && !listed[default_class]) {
    out.entries.push_back({default_class, 0.0, Basis::fallback});
  }
  if (out.entries.size() > k) out.entries.resize(k);
  return out;
}

}  // namespace

RankedPrediction classify_rules(const RuleBase& rb, const FeatureVector& x, std::size_t k) {
  std::vector<Firing> firings;
  for (const auto& rule : rb.rules) {
    const auto d = test_rule(rule, x);
    if (d <= 1) firings.push_back({rule.class_id, rule.coverage, d});
  }
  return rank_firings(firings, rb.num_classes, rb.default_class, k);
}

SETree::SETree(std::vector<SETreeNode> nodes, ClassId default_class, std::size_t num_classes,
               std::size_t rule_count)
    : nodes_(std::move(nodes)), default_class_(default_class), num_classes_(num_classes),
      rule_count_(rule_count) {
  if (nodes_.empty()) throw_invariant("SE-tree has no root");
}

SETree build_se_tree(const RuleBase& rb) {
  if (rb.rules.empty()) throw DataError("cannot build an SE-tree from an empty rule base");
  std::vector<SETreeNode> nodes(1);
  for (std::uint32_t r = 0; r < rb.rules.size(); ++r) {
    auto body = rb.rules[r].literals;
    std::sort(body.begin(), body.end());
    std::int32_t at = 0;
    for (const auto& lit : body) {
      auto& children = nodes[at].children;
      auto it = std::lower_bound(children.begin(), children.end(), lit,
                                 [](const auto& child, const Literal& l) { return child.first < l; });
      if (it != children.end() && it->first == lit) {
        at = it->second;
        continue;
      }
      const auto next = static_cast<std::int32_t>(nodes.size());
      children.insert(it, {lit, next});
      SETreeNode child;
      child.edge = lit;
      nodes.push_back(std::move(child));
      at = next;
    }
    nodes[at].terminals.push_back({rb.rules[r].class_id, rb.rules[r].coverage, r});
  }
  return SETree(std::move(nodes), rb.default_class, rb.num_classes, rb.rules.size());
}

RankedPrediction classify_rules(const SETree& tree, const FeatureVector& x, std::size_t k) {
  std::vector<Firing> firings;
  const auto& nodes = tree.nodes();
  std::vector<std::pair<std::int32_t, std::size_t>> stack{{0, 0}};
  while (!stack.empty()) {
    auto [i, divergence] = stack.back();
    stack.pop_back();
    const auto& node = nodes[i];
    for (const auto& t : node.terminals) firings.push_back({t.class_id, t.coverage, divergence});
    for (const auto& [lit, child] : node.children) {
      const auto d = divergence + (lit.holds(x) ? 0 : 1);
      if (d <= 1) stack.push_back({child, d});
    }
  }
  return rank_firings(firings, tree.num_classes(), tree.default_class(), k);
}

RuleMetrics rule_metrics(const RuleBase& rb) {
  RuleMetrics m;
  m.rules = rb.rules.size();
  for (const auto& r : rb.rules) {
    m.literals += r.literals.size();
    m.max_length = std::max(m.max_length, r.literals.size());
  }
  return m;
}

TreeMetrics se_tree_metrics(const SETree& tree) {
  TreeMetrics m;
  std::vector<std::pair<std::int32_t, std::size_t>> stack{{0, 1}};
  while (!stack.empty()) {
    auto [i, level] = stack.back();
    stack.pop_back();
    ++m.nodes;
    m.levels = std::max(m.levels, level);
    const auto& node = tree.nodes()[i];
    if (node.children.empty()) ++m.leaves;
    for (const auto& child : node.children) stack.push_back({child.second, level + 1});
  }
  return m;
}

std::string format_rule(const Rule& rule, const FeatureDictionary& dict) {
  std::ostringstream out;
  out << "IF ";
  if (rule.literals.empty()) out << "TRUE";
  for (std::size_t i = 0; i < rule.literals.size(); ++i) {
    const auto& l = rule.literals[i];
    if (i > 0) out << " AND ";
    if (l.sign == Sign::negative) out << "NOT ";
    out << "f(" << dict.feature(l.feature).name << ")";
  }
  out << " THEN class=" << dict.class_name(rule.class_id) << " (cov=" << rule.coverage << ")";
  return out.str();
}

std::string dump_rules(const RuleBase& rb, const FeatureDictionary& dict) {
  std::string out;
  for (const auto& rule : rb.rules) {
    out += format_rule(rule, dict);
    out += '\n';
  }
  out += "DEFAULT class=" + dict.class_name(rb.default_class) + "\n";
  return out;
}

// ---------------------------------------------------------------------------
// Serialization

json RuleBase::to_json(const FeatureDictionary& dict) const {
  json rules_json = json::array();
  for (const auto& r : rules) {
    json lits = json::array();
    for (const auto& l : r.literals) lits.push_back({l.feature, l.sign == Sign::positive ? "+" : "-"});
    rules_json.push_back({{"class", dict.class_name(r.class_id)},
                          {"lits", std::move(lits)},
                          {"cov", r.coverage},
                          {"pure", r.pure}});
  }
  return {{"origin", cmdlearn::to_string(origin)},
          {"default", dict.class_name(default_class)},
          {"rules", std::move(rules_json)}};
}

RuleBase RuleBase::from_json(const json& j, const FeatureDictionary& dict) {
  RuleBase rb;
  rb.num_classes = dict.num_classes();
  auto class_of = [&](const std::string& name) {
    auto cls = dict.find_class(name);
    if (!cls) throw DataError("rule base names unknown class '" + name + "'");
    return *cls;
  };
  try {
    rb.origin = parse_rule_origin(j.at("origin").get<std::string>());
    rb.default_class = class_of(j.at("default").get<std::string>());
    for (const auto& r : j.at("rules")) {
      Rule rule;
      rule.class_id = class_of(r.at("class").get<std::string>());
      for (const auto& l : r.at("lits")) {
        const auto f = l.at(0).get<std::int64_t>();
        const auto s = l.at(1).get<std::string>();
        if (f < 0 || static_cast<std::size_t>(f) >= dict.num_features()) {
          throw DataError("rule literal feature out of range");
        }
        if (s != "+" && s != "-") throw DataError("rule literal sign must be '+' or '-'");
        rule.literals.push_back({static_cast<FeatureId>(f), s == "+" ? Sign::positive : Sign::negative});
      }
      rule.coverage = r.at("cov").get<std::uint32_t>();
      rule.pure = r.at("pure").get<bool>();
      rb.rules.push_back(std::move(rule));
    }
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed rule base: ") + e.what());
  }
  return rb;
}

}  // namespace cmdlearn
