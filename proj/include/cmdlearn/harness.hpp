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

// Success and top-3 evaluation of trained models and multi-algorithm
// comparisons on shared train/test data.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cmdlearn/corpus.hpp"
#include "cmdlearn/model.hpp"
#include "json.hpp"

namespace cmdlearn {

struct EvalResult {
  AlgorithmId algo = AlgorithmId::ib1;
  std::size_t k = 3;
  std::size_t total = 0;
  std::size_t correct = 0;       // rank-1 hits
  std::size_t correct_top3 = 0;  // true class within the first 3
  std::size_t correct_topk = 0;  // true class within the first k
  double success = 0.0;
  double top3 = 0.0;
  double topk = 0.0;
  std::vector<std::uint32_t> confusion;  // [true][predicted], rank-1, c x c
  std::size_t num_classes = 0;
  std::size_t unanswered = 0;            // cases with an empty ranking
  nlohmann::json metrics = nlohmann::json::object();
  std::int64_t train_ms = 0;
  std::int64_t classify_ms = 0;
  std::optional<std::string> error;

  std::uint32_t confusion_at(ClassId truth, ClassId predicted) const {
    return confusion[truth * num_classes + predicted];
  }
  nlohmann::json to_json(const FeatureDictionary& dict) const;
};

struct EvalReport {
  nlohmann::json config = nlohmann::json::object();
  std::vector<EvalResult> results;
  FeatureDictionary dictionary;

  const EvalResult* find(AlgorithmId algo) const;
  nlohmann::json to_json() const;
};

// Ranks every test case (in parallel) and tallies rank-1, top-3 and top-k
// hits. Throws DataError on a dictionary mismatch or an empty test set.
EvalResult evaluate(const Model& model, const Dataset& test, std::size_t k = 3);
// Single-threaded reference for evaluate.
EvalResult evaluate_serial(const Model& model, const Dataset& test, std::size_t k = 3);

// Trains and evaluates each algorithm in order. A failing algorithm is
// recorded in its result's error field and does not stop the others.
EvalReport compare(const std::vector<AlgorithmId>& algos, const Dataset& train_set, const Dataset& test_set,
                   std::size_t k = 3, nlohmann::json config = nlohmann::json::object());

void write_report(const EvalReport& report, const std::string& path);

}  // namespace cmdlearn
