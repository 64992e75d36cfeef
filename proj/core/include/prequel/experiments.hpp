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

#ifndef PREQUEL_EXPERIMENTS_HPP_
#define PREQUEL_EXPERIMENTS_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "prequel/forecasters.hpp"
#include "prequel/processes.hpp"
#include "prequel/run.hpp"

namespace prequel::experiments {

// Two forecasters, one generated sequence, and the step-by-step gap
// between their forecasts. When both forecasters are sound for the
// process the gap must shrink; the tail maximum (over the second half of
// the sequence) summarizes how far it got.
struct IdentificationResult {
  OutcomeSequence outcomes;
  ForecastSeries forecasts_a;
  ForecastSeries forecasts_b;
  std::vector<double> divergence;  // |p_k - q_k|
  double tail_max = 0.0;           // max over steps k with 2k > n
};

IdentificationResult run_identification(const processes::ProcessSpec& process,
                                        const forecasters::ForecasterSpec& a,
                                        const forecasters::ForecasterSpec& b,
                                        std::uint64_t seed);

// Refinement experiment on a two-level process: a coarse forecaster that
// never sees the per-step rate assignment, and a deep forecaster that
// reads it as a covariate. Steps where the coarse forecast sits within
// `tolerance` of `target` form the test subsequence; on it the averages
// of the deep forecasts and of the outcomes are both reported.
struct InfoBaseResult {
  std::size_t total_steps = 0;
  std::size_t selected_steps = 0;
  double target = 0.0;
  double tolerance = 0.0;
  double coarse_mean = 0.0;   // mean coarse forecast on the subsequence
  double deep_mean = 0.0;     // mean deep forecast
  double outcome_mean = 0.0;  // outcome frequency
};

InfoBaseResult run_info_base(const processes::ProcessSpec& process,
                             const forecasters::ForecasterSpec& coarse,
                             const forecasters::ForecasterSpec& deep,
                             std::uint64_t seed, double target,
                             double tolerance);

// Replicated urn runs: one final draw frequency per replicate, plus the
// Kolmogorov-Smirnov distance between those frequencies and the
// beta(r0, b0) law they should follow (uniform when r0 = b0 = 1). The
// distance is computed after the probability integral transform, so it
// is a distance to the uniform law either way.
struct DefinettiResult {
  std::uint64_t r0 = 1;
  std::uint64_t b0 = 1;
  std::size_t n = 0;
  std::vector<double> frequencies;  // ordered by replicate index
  double ks_distance = 0.0;
};

// Replicate i uses the derived seed (seed, "definetti/replicate", i), so
// the whole experiment reproduces from one integer.
DefinettiResult run_definetti(std::uint64_t r0, std::uint64_t b0,
                              std::size_t n, std::size_t replicates,
                              std::uint64_t seed);

// Student x examination pass/fail array. Row effects are student
// abilities, column effects examination difficulties, both on the
// failure log-odds scale: failure probability = logistic(ability +
// difficulty), so an able student carries a negative ability effect.
enum class ResitMode : std::uint8_t {
  kIid,    // resits are independent draws at the cell probability
  kPolya,  // resits reinforce: each realized result is added to the
           // cell's urn, so the cell's own limiting frequency is random
};

struct CrossedArraySpec {
  std::vector<double> abilities;
  std::vector<double> difficulties;
  std::size_t resits = 1;
  ResitMode resit_mode = ResitMode::kIid;
  // Initial urn mass for reinforced resits: failure weight
  // strength * p, pass weight strength * (1 - p). Smaller strength means
  // wilder per-cell frequencies.
  double polya_strength = 2.0;

  std::size_t students() const { return abilities.size(); }
  std::size_t exams() const { return difficulties.size(); }
  void validate() const;
  double failure_probability(std::size_t student, std::size_t exam) const;
};

struct CrossedArray {
  CrossedArraySpec spec;
  // Flattened [student][exam][resit], 1 = fail.
  std::vector<Outcome> outcomes;

  Outcome at(std::size_t student, std::size_t exam, std::size_t resit) const;
};

// Every cell draws from its own derived substream, so the array is
// reproducible cell-by-cell regardless of traversal order.
CrossedArray make_crossed_array(CrossedArraySpec spec, std::uint64_t seed);

// The three answers to "how likely is this student to fail this exam",
// each conditioned on different information: the student's record on the
// other exams, the exam's record with the other students, and the
// generating link value itself. They need not agree, and typically do
// not.
struct CrossedRisks {
  double row_margin = 0.0;
  double column_margin = 0.0;
  double cell_probability = 0.0;
  std::size_t row_draws = 0;
  std::size_t column_draws = 0;
};

CrossedRisks run_crossed_array(const CrossedArray& array, std::size_t student,
                               std::size_t exam);

enum class ExperimentKind : std::uint8_t {
  kIdentification,
  kInfoBase,
  kDefinetti,
  kCrossedArray,
};

// Declarative experiment description, the unit of CLI configuration.
// Fields outside the chosen kind are ignored.
struct ExperimentSpec {
  ExperimentKind kind = ExperimentKind::kIdentification;

  // identification + info_base
  processes::ProcessSpec process;
  forecasters::ForecasterSpec forecaster_a;  // coarse, for info_base
  forecasters::ForecasterSpec forecaster_b;  // deep, for info_base

  // info_base
  double target = 0.4;
  double tolerance = 0.01;

  // definetti
  std::uint64_t r0 = 1;
  std::uint64_t b0 = 1;
  std::size_t n = 10000;
  std::size_t replicates = 2000;

  // crossed_array
  CrossedArraySpec crossed;
  std::size_t student = 0;
  std::size_t exam = 0;

  std::string id() const;
  void validate() const;
};

}  // namespace prequel::experiments

#endif  // PREQUEL_EXPERIMENTS_HPP_
