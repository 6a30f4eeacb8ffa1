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

// Deterministic synthetic command corpora: each class owns a signature of
// features, instances keep each signature feature with probability
// 1 - drop_prob and pick up uniform distractor features.

#include <cstdint>
#include <utility>

#include "cmdlearn/corpus.hpp"
#include "json.hpp"

namespace cmdlearn {

struct SynthConfig {
  std::size_t classes = 100;
  std::size_t per_class = 10;
  std::size_t features = 316;
  std::size_t signature_size = 6;
  double drop_prob = 0.1;
  std::size_t noise_features = 3;
  std::uint64_t seed = 42;
  // Signatures are drawn independently per class (overlap allowed) unless set.
  bool disjoint_signatures = false;
  double test_fraction = 0.1;

  // Throws UsageError on an unusable configuration.
  void validate() const;
  nlohmann::json to_json() const;
};

// Whole corpus before the holdout split.
Dataset synthesize_corpus(const SynthConfig& cfg);
// Corpus split into stratified train and test sets.
std::pair<Dataset, Dataset> synthesize(const SynthConfig& cfg);

}  // namespace cmdlearn
