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

#include "cmdlearn/synth.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>
#include <random>

#include "cmdlearn/error.hpp"

namespace cmdlearn {

void SynthConfig::validate() const {
  if (classes < 1) throw UsageError("synth: classes must be >= 1");
  if (per_class < 1) throw UsageError("synth: per-class must be >= 1");
  if (classes * per_class < 2) throw UsageError("synth: need at least 2 instances");
  if (features < 1) throw UsageError("synth: features must be >= 1");
  if (signature_size < 1 || signature_size > features) {
    throw UsageError("synth: signature size must lie in [1, features]");
  }
  if (noise_features > features) throw UsageError("synth: noise exceeds feature count");
  if (!(drop_prob >= 0.0 && drop_prob <= 1.0)) throw UsageError("synth: drop probability must lie in [0, 1]");
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    throw UsageError("synth: test fraction must lie in (0, 1)");
  }
  if (disjoint_signatures && classes * signature_size > features) {
    throw UsageError("synth: disjoint signatures need classes * signature <= features");
  }
}

nlohmann::json SynthConfig::to_json() const {
  return {{"classes", classes},
          {"per_class", per_class},
          {"features", features},
          {"signature_size", signature_size},
          {"drop_prob", drop_prob},
          {"noise_features", noise_features},
          {"seed", seed},
          {"disjoint_signatures", disjoint_signatures},
          {"test_fraction", test_fraction}};
}

namespace {

std::string padded(const char* prefix, std::size_t i, std::size_t count) {
  const int width = static_cast<int>(std::to_string(count > 0 ? count - 1 : 0).size());
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s%0*zu", prefix, std::max(width, 3), i);
  return buf;
}

}  // namespace

Dataset synthesize_corpus(const SynthConfig& cfg) {
  cfg.validate();
  Dataset ds;
  for (std::size_t f = 0; f < cfg.features; ++f) {
    ds.dictionary.add_feature(padded("concept_", f, cfg.features), FeatureSource::dfl);
  }
  for (std::size_t c = 0; c < cfg.classes; ++c) ds.dictionary.add_class(padded("CMD_", c, cfg.classes));

  std::mt19937_64 rng(cfg.seed);
  std::vector<FeatureId> universe(cfg.features);
  std::iota(universe.begin(), universe.end(), FeatureId{0});

  std::vector<std::vector<FeatureId>> signatures(cfg.classes);
  if (cfg.disjoint_signatures) {
    std::shuffle(universe.begin(), universe.end(), rng);
    for (std::size_t c = 0; c < cfg.classes; ++c) {
      auto first = universe.begin() + static_cast<std::ptrdiff_t>(c * cfg.signature_size);
      signatures[c].assign(first, first + static_cast<std::ptrdiff_t>(cfg.signature_size));
    }
  } else {
    for (auto& sig : signatures) {
      std::sample(universe.begin(), universe.end(), std::back_inserter(sig), cfg.signature_size, rng);
    }
  }

  std::bernoulli_distribution keep(1.0 - cfg.drop_prob);
  std::uniform_int_distribution<FeatureId> any_feature(0, static_cast<FeatureId>(cfg.features - 1));
  for (std::size_t c = 0; c < cfg.classes; ++c) {
    for (std::size_t i = 0; i < cfg.per_class; ++i) {
      std::vector<FeatureId> ids;
      for (FeatureId f : signatures[c]) {
        if (keep(rng)) ids.push_back(f);
      }
      for (std::size_t k = 0; k < cfg.noise_features; ++k) ids.push_back(any_feature(rng));
      Instance inst;
      inst.id = padded("s", c * cfg.per_class + i, cfg.classes * cfg.per_class);
      inst.vector = FeatureVector(std::move(ids));
      inst.class_id = static_cast<ClassId>(c);
      ds.instances.push_back(std::move(inst));
    }
  }
  return ds;
}

std::pair<Dataset, Dataset> synthesize(const SynthConfig& cfg) {
  return split(synthesize_corpus(cfg), cfg.test_fraction, cfg.seed);
}

}  // namespace cmdlearn
