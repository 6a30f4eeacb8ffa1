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

// Data-parallel scoring loops. Every kernel has a serial reference in
// kernels::serial that the tests compare against; the OpenMP versions must
// produce bit-identical output because each slot is computed independently.

#include <span>

#include "cmdlearn/corpus.hpp"
#include "cmdlearn/instance_based.hpp"
#include "cmdlearn/rules.hpp"
#include "cmdlearn/stats.hpp"

namespace cmdlearn::kernels {

// out[i] = model.score(x, model.instances()[i])
void score_instances(const InstanceModel& model, const FeatureVector& x, std::span<double> out);

// out[i] = binpro_similarity(x, prototypes()[i].class_id, model)
void score_prototypes(const PrototypeModel& model, const FeatureVector& x, std::span<double> out);

// out[f] = criterion_value(stats, f, criterion) for every feature.
void criterion_scores(const FeatureStats& stats, SplitCriterion criterion, std::span<double> out);

// out[j] = number of rows of class j satisfying every literal.
void satisfying_histogram(std::span<const Literal> literals, const Dataset& ds,
                          std::span<std::uint32_t> out);

namespace serial {

void score_instances(const InstanceModel& model, const FeatureVector& x, std::span<double> out);
void score_prototypes(const PrototypeModel& model, const FeatureVector& x, std::span<double> out);
void criterion_scores(const FeatureStats& stats, SplitCriterion criterion, std::span<double> out);
void satisfying_histogram(std::span<const Literal> literals, const Dataset& ds,
                          std::span<std::uint32_t> out);

}  // namespace serial

// Number of OpenMP threads the parallel kernels will use.
int max_threads();

}  // namespace cmdlearn::kernels
