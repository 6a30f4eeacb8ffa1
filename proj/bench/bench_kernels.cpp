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

// Serial vs OpenMP kernels on the default synthetic benchmark.

#include <benchmark/benchmark.h>

#include "cmdlearn/harness.hpp"
#include "cmdlearn/kernels.hpp"
#include "cmdlearn/synth.hpp"

using namespace cmdlearn;

namespace {

const std::pair<Dataset, Dataset>& corpus() {
  static const auto data = synthesize(SynthConfig{});
  return data;
}

const InstanceModel& bincat_model() {
  static const auto m = InstanceModel::train(InstanceVariant::bin_cat, corpus().first);
  return m;
}

template <bool Parallel>
void BM_ScoreInstances(benchmark::State& state) {
  const auto& model = bincat_model();
  const auto& test = corpus().second;
  std::vector<double> out(model.instances().size());
  std::size_t i = 0;
  for (auto _ : state) {
    const auto& x = test.instances[i++ % test.size()].vector;
    if constexpr (Parallel) {
      kernels::score_instances(model, x, out);
    } else {
      kernels::serial::score_instances(model, x, out);
    }
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(out.size()));
}

template <bool Parallel>
void BM_CriterionScores(benchmark::State& state) {
  const auto stats = compute_stats(corpus().first);
  std::vector<double> out(stats.num_features());
  for (auto _ : state) {
    if constexpr (Parallel) {
      kernels::criterion_scores(stats, SplitCriterion::info_gain, out);
    } else {
      kernels::serial::criterion_scores(stats, SplitCriterion::info_gain, out);
    }
    benchmark::DoNotOptimize(out.data());
  }
}

template <bool Parallel>
void BM_SatisfyingHistogram(benchmark::State& state) {
  const auto& ds = corpus().first;
  const std::vector<Literal> lits{{3, Sign::negative}, {17, Sign::negative}};
  std::vector<std::uint32_t> out(ds.dictionary.num_classes());
  for (auto _ : state) {
    if constexpr (Parallel) {
      kernels::satisfying_histogram(lits, ds, out);
    } else {
      kernels::serial::satisfying_histogram(lits, ds, out);
    }
    benchmark::DoNotOptimize(out.data());
  }
}

template <bool Parallel>
void BM_Evaluate(benchmark::State& state) {
  static const auto model = train(AlgorithmId::ib1, corpus().first);
  for (auto _ : state) {
    auto r = Parallel ? evaluate(model, corpus().second) : evaluate_serial(model, corpus().second);
    benchmark::DoNotOptimize(r.correct);
  }
}

}  // namespace

BENCHMARK(BM_ScoreInstances<false>)->Name("score_instances/serial");
BENCHMARK(BM_ScoreInstances<true>)->Name("score_instances/omp");
BENCHMARK(BM_CriterionScores<false>)->Name("criterion_scores/serial");
BENCHMARK(BM_CriterionScores<true>)->Name("criterion_scores/omp");
BENCHMARK(BM_SatisfyingHistogram<false>)->Name("satisfying_histogram/serial");
BENCHMARK(BM_SatisfyingHistogram<true>)->Name("satisfying_histogram/omp");
BENCHMARK(BM_Evaluate<false>)->Name("evaluate_ib1/serial")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Evaluate<true>)->Name("evaluate_ib1/omp")->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
