/*
 * Copyright 2026 The prequel authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <benchmark/benchmark.h>

#include "prequel/calibration.hpp"
#include "prequel/forecasters.hpp"
#include "prequel/intervals.hpp"
#include "prequel/processes.hpp"
#include "prequel/rng.hpp"

namespace {

using namespace prequel;

void BM_SplitMix64(benchmark::State& state) {
  rng::SplitMix64 gen(42);
  for (auto _ : state) {
    benchmark::DoNotOptimize(gen.next());
  }
}
BENCHMARK(BM_SplitMix64);

void BM_GenBernoulli(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(processes::gen_bernoulli(0.3, n, 42));
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                          static_cast<std::int64_t>(n));
}
BENCHMARK(BM_GenBernoulli)->Arg(1000)->Arg(100000);

void BM_GenPolya(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(processes::gen_polya(1, 1, n, 42));
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                          static_cast<std::int64_t>(n));
}
BENCHMARK(BM_GenPolya)->Arg(1000)->Arg(100000);

void BM_LaplaceForecast(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const OutcomeSequence seq = processes::gen_bernoulli(0.3, n, 42);
  const InformationBase info = InformationBase::from_sequence(seq);
  const forecasters::ForecasterSpec spec{forecasters::Laplace{}};
  for (auto _ : state) {
    benchmark::DoNotOptimize(forecasters::run_forecaster(spec, seq, info));
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                          static_cast<std::int64_t>(n));
}
BENCHMARK(BM_LaplaceForecast)->Arg(1000)->Arg(100000);

void BM_HCalibration(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const OutcomeSequence seq = processes::gen_bernoulli(0.3, n, 42);
  const InformationBase info = InformationBase::from_sequence(seq);
  const forecasters::ForecasterSpec spec{forecasters::Laplace{}};
  const ValidatedRun run =
      align_run(seq, forecasters::run_forecaster(spec, seq, info));
  const std::vector<SelectionRule> rules = calibration::default_rule_family();
  for (auto _ : state) {
    benchmark::DoNotOptimize(calibration::h_calibration(run, info, rules));
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                          static_cast<std::int64_t>(n));
}
BENCHMARK(BM_HCalibration)->Arg(1000)->Arg(10000);

void BM_WilsonInterval(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(intervals::wilson_interval(0.75, 100, 0.95));
  }
}
BENCHMARK(BM_WilsonInterval);

}  // namespace

BENCHMARK_MAIN();
