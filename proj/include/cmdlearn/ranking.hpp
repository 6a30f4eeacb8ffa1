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

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "cmdlearn/corpus.hpp"

namespace cmdlearn {

// How a ranked class was reached: by the exact model path, by a relaxed
// (one-deviation) search, or as the model's default.
enum class Basis { exact, approximate, fallback };

std::string_view to_string(Basis basis);

struct RankedClass {
  ClassId class_id = 0;
  double score = 0.0;
  Basis basis = Basis::exact;

  friend bool operator==(const RankedClass&, const RankedClass&) = default;
};

// Classes in rank order, rank 1 first; each class appears at most once.
struct RankedPrediction {
  std::vector<RankedClass> entries;

  std::size_t size() const { return entries.size(); }
  bool empty() const { return entries.empty(); }
  std::optional<ClassId> top() const {
    if (entries.empty()) return std::nullopt;
    return entries.front().class_id;
  }
  // True when cls is among the first k entries.
  bool within(ClassId cls, std::size_t k) const {
    for (std::size_t i = 0; i < entries.size() && i < k; ++i) {
      if (entries[i].class_id == cls) return true;
    }
    return false;
  }

  friend bool operator==(const RankedPrediction&, const RankedPrediction&) = default;
};

void require_positive_k(std::size_t k);

}  // namespace cmdlearn
