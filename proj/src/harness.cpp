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

#include "cmdlearn/harness.hpp"

#include <chrono>
#include <fstream>

#include "cmdlearn/error.hpp"

namespace cmdlearn {

using nlohmann::json;

namespace {

using Clock = std::chrono::steady_clock;

std::int64_t elapsed_ms(Clock::time_point since) {
  return std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - since).count();
}

void check_inputs(const Model& model, const Dataset& test, std::size_t k) {
  require_positive_k(k);
  if (test.empty()) throw DataError("cannot evaluate on an empty test set");
  model.require_dictionary(test.dictionary);
}

EvalResult tally(const Model& model, const Dataset& test, std::size_t k,
                 const std::vector<RankedPrediction>& ranked) {
  EvalResult r;
  r.algo = model.algo();
  r.k = k;
  r.total = test.size();
  r.num_classes = test.dictionary.num_classes();
  r.confusion.assign(r.num_classes * r.num_classes, 0);
  for (std::size_t i = 0; i < test.size(); ++i) {
    const auto truth = test.instances[i].class_id;
    const auto& pred = ranked[i];
    if (auto top = pred.top()) {
      ++r.confusion[truth * r.num_classes + *top];
      if (*top == truth) ++r.correct;
    } else {
      ++r.unanswered;
    }
    if (pred.within(truth, 3)) ++r.correct_top3;
    if (pred.within(truth, k)) ++r.correct_topk;
  }
  const auto n = static_cast<double>(r.total);
  r.success = static_cast<double>(r.correct) / n;
  r.top3 = static_cast<double>(r.correct_top3) / n;
  r.topk = static_cast<double>(r.correct_topk) / n;
  r.metrics = model.metrics();
  if (r.top3 < r.success) throw_invariant("top-3 rate below success rate");
  return r;
}

}  // namespace

EvalResult evaluate(const Model& model, const Dataset& test, std::size_t k) {
  check_inputs(model, test, k);
  const auto depth = std::max<std::size_t>(k, 3);
  std::vector<RankedPrediction> ranked(test.size());
  const auto start = Clock::now();
  const auto count = static_cast<std::int64_t>(test.size());
  bool failed = false;
  std::string failure;
#pragma omp parallel for schedule(dynamic, 4)
  for (std::int64_t i = 0; i < count; ++i) {
    try {
      ranked[i] = model.rank(test.instances[i].vector, depth);
    } catch (const std::exception& e) {
#pragma omp critical
      {
        failed = true;
        failure = e.what();
      }
    }
  }
  if (failed) throw DataError("classification failed: " + failure);
  auto r = tally(model, test, k, ranked);
  r.classify_ms = elapsed_ms(start);
  return r;
}

EvalResult evaluate_serial(const Model& model, const Dataset& test, std::size_t k) {
  check_inputs(model, test, k);
  const auto depth = std::max<std::size_t>(k, 3);
  std::vector<RankedPrediction> ranked;
  ranked.reserve(test.size());
  const auto start = Clock::now();
  for (const auto& inst : test.instances) ranked.push_back(model.rank(inst.vector, depth));
  auto r = tally(model, test, k, ranked);
  r.classify_ms = elapsed_ms(start);
  return r;
}

EvalReport compare(const std::vector<AlgorithmId>& algos, const Dataset& train_set,
                   const Dataset& test_set, std::size_t k, json config) {
  if (algos.empty()) throw UsageError("compare needs at least one algorithm");
  require_positive_k(k);
  EvalReport report;
  report.config = std::move(config);
  report.config["k"] = k;
  report.config["train_size"] = train_set.size();
  report.config["test_size"] = test_set.size();
  report.config["dict_hash"] = train_set.dictionary.hash();
  report.dictionary = train_set.dictionary;
  for (auto algo : algos) {
    EvalResult r;
    r.algo = algo;
    r.k = k;
    try {
      const auto start = Clock::now();
      const auto model = cmdlearn::train(algo, train_set);
      const auto train_ms = elapsed_ms(start);
      r = evaluate(model, test_set, k);
      r.train_ms = train_ms;
    } catch (const std::exception& e) {
      r.error = e.what();
    }
    report.results.push_back(std::move(r));
  }
  return report;
}

const EvalResult* EvalReport::find(AlgorithmId algo) const {
  for (const auto& r : results) {
    if (r.algo == algo) return &r;
  }
  return nullptr;
}

json EvalResult::to_json(const FeatureDictionary& dict) const {
  json j = {{"algo", to_string(algo)}, {"train_ms", train_ms}, {"classify_ms", classify_ms}};
  if (error) {
    j["error"] = *error;
    return j;
  }
  j["success"] = success;
  j["top3"] = top3;
  j["k"] = k;
  j["topk"] = topk;
  j["total"] = total;
  j["correct"] = correct;
  j["correct_top3"] = correct_top3;
  j["metrics"] = metrics;
  json conf = json::array();
  for (ClassId t = 0; t < num_classes; ++t) {
    for (ClassId p = 0; p < num_classes; ++p) {
      if (const auto n = confusion_at(t, p)) conf.push_back({dict.class_name(t), dict.class_name(p), n});
    }
  }
  j["confusion"] = std::move(conf);
  return j;
}

json EvalReport::to_json() const {
  json results_json = json::array();
  for (const auto& r : results) results_json.push_back(r.to_json(dictionary));
  return {{"config", config}, {"results", std::move(results_json)}};
}

void write_report(const EvalReport& report, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write '" + path + "'");
  out << report.to_json().dump(2) << '\n';
}

}  // namespace cmdlearn
