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

#include "cmdlearn/harness.hpp"
#include "cmdlearn/kernels.hpp"
#include "cmdlearn/synth.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace cmdlearn;

TEST_CASE("parallel instance and prototype scoring equals serial") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 30; ++trial) {
    const auto ds = oracle::random_dataset(rng, 200, 40, 10);
    const auto x = oracle::random_vector(rng, ds.dictionary.num_features());
    for (auto v : {InstanceVariant::ib1, InstanceVariant::ib1_ig, InstanceVariant::bin_cat}) {
      const auto model = InstanceModel::train(v, ds);
      std::vector<double> a(ds.size()), b(ds.size());
      kernels::score_instances(model, x, a);
      kernels::serial::score_instances(model, x, b);
      CHECK(a == b);
    }
    const auto proto = PrototypeModel::train(ds);
    std::vector<double> a(proto.prototypes().size()), b(proto.prototypes().size());
    kernels::score_prototypes(proto, x, a);
    kernels::serial::score_prototypes(proto, x, b);
    CHECK(a == b);
  }
}

TEST_CASE("parallel criterion scores and histograms equal serial") {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 30; ++trial) {
    const auto ds = oracle::random_dataset(rng, 300, 30, 6);
    const auto stats = compute_stats(ds);
    for (auto crit : {SplitCriterion::weight, SplitCriterion::info_gain}) {
      std::vector<double> a(stats.num_features()), b(stats.num_features());
      kernels::criterion_scores(stats, crit, a);
      kernels::serial::criterion_scores(stats, crit, b);
      CHECK(a == b);
    }
    std::vector<Literal> lits;
    for (FeatureId f = 0; f < ds.dictionary.num_features() && lits.size() < 2; f += 3) {
      lits.push_back({f, rng() % 2 ? Sign::positive : Sign::negative});
    }
    std::vector<std::uint32_t> a(ds.dictionary.num_classes()), b(ds.dictionary.num_classes());
    kernels::satisfying_histogram(lits, ds, a);
    kernels::serial::satisfying_histogram(lits, ds, b);
    CHECK(a == b);
  }
}

TEST_CASE("parallel evaluation equals serial evaluation") {
  SynthConfig cfg;
  cfg.classes = 20;
  cfg.features = 80;
  const auto [train_set, test_set] = synthesize(cfg);
  for (auto algo : kAllAlgorithms) {
    const auto model = train(algo, train_set);
    const auto a = evaluate(model, test_set, 3);
    const auto b = evaluate_serial(model, test_set, 3);
    CHECK(a.correct == b.correct);
    CHECK(a.correct_top3 == b.correct_top3);
    CHECK(a.confusion == b.confusion);
    CHECK(a.success == b.success);
  }
  CHECK(kernels::max_threads() >= 1);
}
