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

#include <random>

#include "cmdlearn/error.hpp"
#include "cmdlearn/rules.hpp"
#include "cmdlearn/stats.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace cmdlearn;

namespace {

constexpr Literal pos(FeatureId f) { return {f, Sign::positive}; }
constexpr Literal neg(FeatureId f) { return {f, Sign::negative}; }

Rule make_rule(ClassId cls, std::vector<Literal> lits, std::uint32_t cov = 1) {
  Rule r;
  r.class_id = cls;
  r.literals = std::move(lits);
  r.coverage = cov;
  return r;
}

RuleBase make_base(std::vector<Rule> rules, std::size_t num_classes, ClassId def = 0) {
  RuleBase rb;
  rb.rules = std::move(rules);
  rb.num_classes = num_classes;
  rb.default_class = def;
  return rb;
}

std::size_t brute_coverage(const Rule& rule, const Dataset& ds) {
  std::size_t n = 0;
  for (const auto& inst : ds.instances) n += inst.class_id == rule.class_id && test_rule(rule, inst.vector) == 0;
  return n;
}

double training_accuracy(const RuleBase& rb, const Dataset& ds) {
  std::size_t ok = 0;
  for (const auto& inst : ds.instances) ok += classify_rules(rb, inst.vector, 1).top() == inst.class_id;
  return static_cast<double>(ok) / static_cast<double>(ds.size());
}

RuleBase learn(const Dataset& ds, bool bin) {
  return bin ? learn_bin_rules(ds, compute_stats(ds)) : learn_foil(ds);
}

// Dataset where class A is exactly the rows with f5, plus noise features.
Dataset separable_on_f5(std::mt19937_64& rng) {
  Dataset ds;
  for (int f = 0; f < 8; ++f) ds.dictionary.add_feature("f" + std::to_string(f), FeatureSource::dfl);
  ds.dictionary.add_class("A");
  ds.dictionary.add_class("B");
  std::bernoulli_distribution bit(0.5);
  for (int r = 0; r < 24; ++r) {
    std::vector<FeatureId> ids;
    for (FeatureId f = 0; f < 8; ++f) {
      if (f != 5 && bit(rng)) ids.push_back(f);
    }
    const bool a = r % 2 == 0;
    if (a) ids.push_back(5);
    std::sort(ids.begin(), ids.end());
    ds.instances.push_back({"r" + std::to_string(r), FeatureVector(ids), a ? 0u : 1u});
  }
  return ds;
}

}  // namespace

TEST_CASE("test_rule counts violated literals") {
  CHECK(test_rule(make_rule(0, {}), FeatureVector{}) == 0);
  CHECK(test_rule(make_rule(0, {}), FeatureVector{1, 2, 3}) == 0);
  const auto r = make_rule(0, {pos(1), neg(2)});
  CHECK(test_rule(r, FeatureVector{1}) == 0);
  CHECK(test_rule(r, FeatureVector{2}) == 2);
  CHECK(test_rule(r, FeatureVector{1, 2}) == 1);
}

TEST_CASE("FOIL gain and BIN-rules score") {
  CHECK(foil_gain(0, 3, 4, 4) == 0.0);
  // 2 * (log2(2/2) - log2(4/8)) = 2
  CHECK(foil_gain(2, 0, 4, 4) == doctest::Approx(2.0));
  CHECK(bin_rules_score(3, 5, 1, 0.5) == doctest::Approx(6.0));
  CHECK(bin_rules_score(3, 5, 5, 0.5) == 0.0);
  CHECK_THROWS_AS(bin_rules_score(3, 2, 5, 0.5), InvariantError);
}

TEST_CASE("separable single-feature class yields one rule on that feature") {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    const auto ds = separable_on_f5(rng);
    for (bool bin : {false, true}) {
      const auto rb = learn(ds, bin);
      std::vector<const Rule*> a_rules;
      for (const auto& r : rb.rules) {
        if (r.class_id == 0) a_rules.push_back(&r);
      }
      REQUIRE(a_rules.size() == 1);
      CHECK(a_rules[0]->literals == std::vector<Literal>{pos(5)});
      CHECK(a_rules[0]->coverage == 12);
      CHECK(a_rules[0]->pure);
    }
  }
}

TEST_CASE("duplicate vectors of different classes give an impure rule") {
  const auto ds = oracle::tiny(2, {{{0}, "A"}, {{0}, "B"}, {{1}, "B"}});
  for (bool bin : {false, true}) {
    const auto rb = learn(ds, bin);
    const bool any_impure = std::any_of(rb.rules.begin(), rb.rules.end(), [](const Rule& r) { return !r.pure; });
    CHECK(any_impure);
    for (const auto& r : rb.rules) CHECK(r.coverage >= 1);
  }
}

TEST_CASE("classes keyed by one distinct feature give c rules of length 1") {
  const auto ds = oracle::tiny(4, {{{0}, "A"},
                                   {{0}, "A"},
                                   {{1}, "B"},
                                   {{1}, "B"},
                                   {{2}, "C"},
                                   {{2}, "C"},
                                   {{3}, "D"},
                                   {{3}, "D"}});
  for (bool bin : {false, true}) {
    const auto rb = learn(ds, bin);
    REQUIRE(rb.rules.size() == 4);
    for (ClassId j = 0; j < 4; ++j) {
      CHECK(rb.rules[j].class_id == j);
      CHECK(rb.rules[j].literals == std::vector<Literal>{pos(j)});
      CHECK(rb.rules[j].coverage == 2);
    }
  }
}

TEST_CASE("BIN-rules never picks a literal that keeps every negative binding") {
  // f0 is present everywhere, so its positive test removes no negatives even
  // though it has the highest p for class A.
  const auto ds = oracle::tiny(2, {{{0, 1}, "A"}, {{0, 1}, "A"}, {{0}, "B"}});
  const auto stats = compute_stats(ds);
  auto state = start_rule(ds, 0, {0, 1});
  const auto cands = score_candidates(state, ds, stats, LiteralCriterion::bin_rules);
  const auto best = select_literal(cands, state.b_minus());
  REQUIRE(best);
  CHECK(best->literal == pos(1));
  for (const auto& c : cands) {
    if (c.literal == pos(0)) CHECK(c.score == 0.0);
  }
}

TEST_CASE("candidate scores match the dense oracle") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 100; ++trial) {
    const auto ds = oracle::random_dataset(rng, 20, 8, 4);
    const auto stats = compute_stats(ds);
    const auto dense = oracle::Dense::from(ds);
    const ClassId target = rng() % ds.dictionary.num_classes();
    std::vector<std::uint32_t> positives;
    for (std::uint32_t r = 0; r < ds.size(); ++r) {
      if (ds.instances[r].class_id == target) positives.push_back(r);
    }
    auto state = start_rule(ds, target, positives);
    // grow one step so the bindings are a proper subset
    if (auto first = select_literal(score_candidates(state, ds, stats, LiteralCriterion::foil_gain),
                                    state.b_minus())) {
      add_literal(state, first->literal, ds);
    }
    for (auto crit : {LiteralCriterion::foil_gain, LiteralCriterion::bin_rules}) {
      const auto cands = score_candidates(state, ds, stats, crit);
      CHECK(cands.size() == 2 * (ds.dictionary.num_features() - state.literals.size()));
      CHECK(std::is_sorted(cands.begin(), cands.end(),
                           [](const CandidateScore& a, const CandidateScore& b) { return a.literal < b.literal; }));
      for (const auto& c : cands) {
        const bool positive = c.literal.sign == Sign::positive;
        const auto b = oracle::bindings_after(dense, state.positives, state.negatives, c.literal.feature, positive);
        CHECK(c.b_plus == static_cast<std::uint32_t>(b.plus));
        CHECK(c.b_minus == static_cast<std::uint32_t>(b.minus));
        if (crit == LiteralCriterion::bin_rules) {
          const double w = oracle::bin_rules_w(dense, c.literal.feature, positive, target, b,
                                               static_cast<int>(state.b_minus()));
          CHECK(c.score == doctest::Approx(w).epsilon(1e-12));
          CHECK(c.score >= 0.0);
        } else {
          double g = 0.0;
          if (b.plus > 0) {
            const double bp = static_cast<double>(state.b_plus());
            const double bm = static_cast<double>(state.b_minus());
            g = b.plus * (std::log2(b.plus / double(b.plus + b.minus)) - std::log2(bp / (bp + bm)));
          }
          CHECK(c.score == doctest::Approx(g).epsilon(1e-12));
        }
      }
    }
  }
}

TEST_CASE("select_literal breaks ties toward the canonically smaller literal") {
  std::vector<CandidateScore> cands{{neg(0), 2, 0, 1.0}, {pos(1), 2, 0, 1.0}, {pos(0), 2, 0, 1.0}};
  CHECK(select_literal(cands, 3)->literal == pos(0));
  // non-reducing and zero-positive candidates are ineligible
  std::vector<CandidateScore> none{{pos(0), 2, 3, 9.0}, {pos(1), 0, 0, 9.0}};
  CHECK_FALSE(select_literal(none, 3));
}

TEST_CASE("properties: coverage, completeness, purity and monotone growth") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 80; ++trial) {
    const auto raw = oracle::random_dataset(rng, 24, 10, 5);
    const bool separable = trial % 2 == 0;
    const auto ds = separable ? oracle::make_separable(raw) : raw;
    for (bool bin : {false, true}) {
      const auto rb = learn(ds, bin);
      CHECK(rb.origin == (bin ? RuleOrigin::bin_rules : RuleOrigin::foil));
      for (const auto& r : rb.rules) {
        CHECK(r.coverage == brute_coverage(r, ds));
        CHECK(r.coverage >= 1);
        std::vector<FeatureId> fs;
        for (const auto& l : r.literals) fs.push_back(l.feature);
        std::sort(fs.begin(), fs.end());
        CHECK(std::adjacent_find(fs.begin(), fs.end()) == fs.end());
        if (separable) CHECK(r.pure);
      }
      for (const auto& inst : ds.instances) {
        const bool covered = std::any_of(rb.rules.begin(), rb.rules.end(), [&](const Rule& r) {
          return r.class_id == inst.class_id && test_rule(r, inst.vector) == 0;
        });
        CHECK(covered);
      }
      if (separable) CHECK(training_accuracy(rb, ds) == doctest::Approx(1.0));
    }
  }
}

TEST_CASE("add_literal shrinks both binding sets") {
  const auto ds = oracle::tiny(2, {{{0}, "A"}, {{0, 1}, "A"}, {{1}, "B"}, {{}, "B"}});
  auto state = start_rule(ds, 0, {0, 1});
  CHECK(state.b_minus() == 2);
  add_literal(state, pos(0), ds);
  CHECK(state.b_plus() == 2);
  CHECK(state.b_minus() == 0);
  add_literal(state, neg(1), ds);
  CHECK(state.positives == std::vector<std::uint32_t>{0});
}

TEST_CASE("empty datasets are rejected") {
  Dataset ds;
  ds.dictionary.add_feature("x", FeatureSource::dfl);
  ds.dictionary.add_class("A");
  CHECK_THROWS_AS(learn_foil(ds), DataError);
  CHECK_THROWS_AS(learn_bin_rules(ds, compute_stats(ds)), DataError);
}

TEST_CASE("tree rule extraction: minimal tree and sibling merge") {
  const auto ds1 = oracle::tiny(1, {{{0}, "A"}, {{}, "B"}});
  const auto rb1 = extract_rules_from_tree(build_tree(ds1, TreeVariant::c45), ds1);
  CHECK(rb1.rules.size() <= 2);
  for (const auto& r : rb1.rules) CHECK(r.literals.size() <= 1);
  CHECK(training_accuracy(rb1, ds1) == 1.0);

  // root f0: absent -> A, present -> f1 with two B leaves.
  const auto ds = oracle::tiny(2, {{{}, "A"}, {{1}, "A"}, {{0}, "B"}, {{0, 1}, "B"}});
  TreeNode root, a, inner, b1, b2;
  root.feature = 0;
  root.absent = 1;
  root.present = 2;
  a.hist = {2, 0};
  a.majority = 0;
  inner.feature = 1;
  inner.absent = 3;
  inner.present = 4;
  b1.hist = {0, 1};
  b1.majority = 1;
  b2.hist = {0, 1};
  b2.majority = 1;
  const DecisionTree tree(TreeVariant::c45, 2, {root, a, inner, b1, b2});
  const auto paths = path_rules(tree, ds);
  CHECK(paths.rules.size() == 3);
  const auto rb = extract_rules_from_tree(tree, ds);
  CHECK(rb.origin == RuleOrigin::c45_rules);
  std::size_t b_rules = 0;
  for (const auto& r : rb.rules) {
    if (r.class_id == 1) {
      ++b_rules;
      CHECK(r.literals == std::vector<Literal>{pos(0)});
      CHECK(r.coverage == 2);
    }
  }
  CHECK(b_rules == 1);
  CHECK(training_accuracy(rb, ds) == 1.0);
}

TEST_CASE("pruning never lowers whole-base training accuracy") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 80; ++trial) {
    const auto ds = oracle::random_dataset(rng, 30, 10, 4);
    for (auto v : {TreeVariant::c45, TreeVariant::igtree}) {
      const auto tree = build_tree(ds, v);
      const auto before = training_accuracy(path_rules(tree, ds), ds);
      const auto rb = extract_rules_from_tree(tree, ds);
      CHECK(training_accuracy(rb, ds) >= before - 1e-12);
      for (const auto& r : rb.rules) {
        const auto hist = satisfying_histogram(r.literals, ds);
        CHECK(r.coverage == hist[r.class_id]);
      }
    }
  }
}

TEST_CASE("SE-tree shares prefixes") {
  const auto rb = make_base({make_rule(0, {pos(1), pos(2)}), make_rule(1, {neg(3), pos(1)})}, 2);
  const auto se = build_se_tree(rb);
  const auto& root = se.root();
  REQUIRE(root.children.size() == 1);
  CHECK(root.children[0].first == pos(1));
  const auto& f1 = se.nodes()[root.children[0].second];
  REQUIRE(f1.children.size() == 2);
  CHECK(f1.children[0].first == pos(2));
  CHECK(f1.children[1].first == neg(3));
  CHECK(se_tree_metrics(se) == TreeMetrics{4, 2, 3});

  const auto single = build_se_tree(make_base({make_rule(1, {})}, 2));
  CHECK(single.nodes().size() == 1);
  REQUIRE(single.root().terminals.size() == 1);
  CHECK(single.root().terminals[0].class_id == 1);

  CHECK_THROWS_AS(build_se_tree(make_base({}, 2)), DataError);
}

TEST_CASE("rule classification tiers and fallback") {
  const auto rb = make_base({make_rule(0, {pos(0), pos(1)}, 5), make_rule(1, {pos(2)}, 3)}, 3, 2);
  const auto exact = classify_rules(rb, FeatureVector{0, 1}, 3);
  REQUIRE(exact.size() == 3);
  CHECK(exact.entries[0] == RankedClass{0, 5.0, Basis::exact});
  CHECK(exact.entries[1] == RankedClass{1, 3.0, Basis::approximate});
  CHECK(exact.entries[2] == RankedClass{2, 0.0, Basis::fallback});

  const auto approx = classify_rules(rb, FeatureVector{0}, 1);
  CHECK(approx.entries == std::vector<RankedClass>{{0, 5.0, Basis::approximate}});

  const auto nothing = classify_rules(make_base({make_rule(0, {pos(0), pos(1)}, 5)}, 3, 2), FeatureVector{}, 3);
  CHECK(nothing.entries == std::vector<RankedClass>{{2, 0.0, Basis::fallback}});
  CHECK_THROWS_AS(classify_rules(rb, FeatureVector{}, 0), UsageError);
}

TEST_CASE("SE-tree classification equals a linear scan") {
  std::mt19937_64 rng(5);
  // exhaustive over a 5-feature universe
  for (int trial = 0; trial < 30; ++trial) {
    const auto ds = oracle::random_dataset(rng, 20, 5, 4);
    const auto rb = learn_bin_rules(ds, compute_stats(ds));
    const auto se = build_se_tree(rb);
    CHECK(se_tree_metrics(se).levels <= rule_metrics(rb).max_length + 1);
    const auto n = ds.dictionary.num_features();
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
      std::vector<FeatureId> ids;
      for (FeatureId f = 0; f < n; ++f) {
        if (mask >> f & 1u) ids.push_back(f);
      }
      const FeatureVector x(ids);
      for (std::size_t k : {1, 3, 10}) CHECK(classify_rules(se, x, k) == classify_rules(rb, x, k));
    }
  }
  // randomized at a larger scale
  for (int trial = 0; trial < 20; ++trial) {
    const auto ds = oracle::random_dataset(rng, 60, 30, 8);
    const auto rb = learn_foil(ds);
    const auto se = build_se_tree(rb);
    for (int q = 0; q < 50; ++q) {
      const auto x = oracle::random_vector(rng, ds.dictionary.num_features());
      CHECK(classify_rules(se, x, 5) == classify_rules(rb, x, 5));
    }
  }
}

TEST_CASE("rule metrics") {
  CHECK(rule_metrics(make_base({}, 1)) == RuleMetrics{0, 0, 0});
  CHECK(rule_metrics(make_base({make_rule(0, {pos(1)}), make_rule(1, {pos(1), neg(2)})}, 2)) ==
        RuleMetrics{2, 3, 2});
}

TEST_CASE("rule formatting and JSON") {
  Dataset ds;
  ds.dictionary.add_feature("update", FeatureSource::dfl);
  ds.dictionary.add_feature("delete", FeatureSource::dfl);
  ds.dictionary.add_class("UPDATE_PRICE");
  const auto rule = make_rule(0, {pos(0), neg(1)}, 9);
  CHECK(format_rule(rule, ds.dictionary) == "IF f(update) AND NOT f(delete) THEN class=UPDATE_PRICE (cov=9)");
  CHECK(format_rule(make_rule(0, {}, 2), ds.dictionary) == "IF TRUE THEN class=UPDATE_PRICE (cov=2)");
  auto rb = make_base({rule}, 1);
  rb.origin = RuleOrigin::bin_rules;
  CHECK(dump_rules(rb, ds.dictionary) ==
        "IF f(update) AND NOT f(delete) THEN class=UPDATE_PRICE (cov=9)\nDEFAULT class=UPDATE_PRICE\n");
  const auto j = rb.to_json(ds.dictionary);
  CHECK(j["rules"][0]["lits"] == nlohmann::json::parse(R"([[0,"+"],[1,"-"]])"));
  CHECK(RuleBase::from_json(j, ds.dictionary) == rb);
  auto bad = j;
  bad["rules"][0]["lits"][0][1] = "?";
  CHECK_THROWS_AS(RuleBase::from_json(bad, ds.dictionary), DataError);
  bad = j;
  bad["rules"][0]["lits"][0][0] = 7;
  CHECK_THROWS_AS(RuleBase::from_json(bad, ds.dictionary), DataError);
}
