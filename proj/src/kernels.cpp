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

#include "cmdlearn/kernels.hpp"

#include <omp.h>

#include <algorithm>
#include <cstdint>
#include <vector>

#include "cmdlearn/error.hpp"

namespace cmdlearn::kernels {

namespace {

void check_size(std::size_t expected, std::size_t got) {
  if (expected != got) throw_invariant("kernel output span has the wrong size");
}

bool all_hold(std::span<const Literal> literals, const FeatureVector& x) {
  for (const auto& l : literals) {
    if (!l.holds(x)) return false;
  }
  return true;
}

}  // namespace

void score_instances(const InstanceModel& model, const FeatureVector& x, std::span<double> out) {
  const auto& instances = model.instances();
  check_size(instances.size(), out.size());
  const auto count = static_cast<std::int64_t>(instances.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < count; ++i) {
    out[i] = model.score(x, instances[i]);
  }
}

void score_prototypes(const PrototypeModel& model, const FeatureVector& x, std::span<double> out) {
  const auto& protos = model.prototypes();
  check_size(protos.size(), out.size());
  const auto count = static_cast<std::int64_t>(protos.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < count; ++i) {
    out[i] = binpro_similarity(x, protos[i].class_id, model);
  }
}

void criterion_scores(const FeatureStats& stats, SplitCriterion criterion, std::span<double> out) {
  check_size(stats.num_features(), out.size());
  const auto count = static_cast<std::int64_t>(out.size());
#pragma omp parallel for schedule(dynamic, 16)
  for (std::int64_t f = 0; f < count; ++f) {
    out[f] = criterion_value(stats, static_cast<FeatureId>(f), criterion);
  }
}

void satisfying_histogram(std::span<const Literal> literals, const Dataset& ds,
                          std::span<std::uint32_t> out) {
  check_size(ds.dictionary.num_classes(), out.size());
  std::fill(out.begin(), out.end(), 0u);
  const auto rows = static_cast<std::int64_t>(ds.size());
#pragma omp parallel
  {
    std::vector<std::uint32_t> local(out.size(), 0);
#pragma omp for schedule(static) nowait
    for (std::int64_t r = 0; r < rows; ++r) {
      const auto& inst = ds.instances[r];
      if (all_hold(literals, inst.vector)) ++local[inst.class_id];
    }
#pragma omp critical
    for (std::size_t j = 0; j < out.size(); ++j) out[j] += local[j];
  }
}

namespace serial {

void score_instances(const InstanceModel& model, const FeatureVector& x, std::span<double> out) {
  const auto& instances = model.instances();
  check_size(instances.size(), out.size());
  for (std::size_t i = 0; i < instances.size(); ++i) out[i] = model.score(x, instances[i]);
}

void score_prototypes(const PrototypeModel& model, const FeatureVector& x, std::span<double> out) {
  const auto& protos = model.prototypes();
  check_size(protos.size(), out.size());
  for (std::size_t i = 0; i < protos.size(); ++i) {
    out[i] = binpro_similarity(x, protos[i].class_id, model);
  }
}

void criterion_scores(const FeatureStats& stats, SplitCriterion criterion, std::span<double> out) {
  check_size(stats.num_features(), out.size());
  for (FeatureId f = 0; f < out.size(); ++f) out[f] = criterion_value(stats, f, criterion);
}

void satisfying_histogram(std::span<const Literal> literals, const Dataset& ds,
                          std::span<std::uint32_t> out) {
  check_size(ds.dictionary.num_classes(), out.size());
  std::fill(out.begin(), out.end(), 0u);
  for (const auto& inst : ds.instances) {
    if (all_hold(literals, inst.vector)) ++out[inst.class_id];
  }
}

}  // namespace serial

int max_threads() { return omp_get_max_threads(); }

}  // namespace cmdlearn::kernels
