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

#include "prequel/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "prequel/rng.hpp"
#include "prequel/stats.hpp"

namespace prequel::experiments {

using rng::SplitMix64;

IdentificationResult run_identification(const processes::ProcessSpec& process,
                                        const forecasters::ForecasterSpec& a,
                                        const forecasters::ForecasterSpec& b,
                                        std::uint64_t seed) {
  process.validate();
  a.validate();
  b.validate();
  if (!a.h_based() || !b.h_based()) {
    throw std::invalid_argument(
        "identification compares record-based forecasters; the crystal ball "
        "does not qualify");
  }
  processes::GeneratedRun gen = processes::generate(process, seed);
  const InformationBase info =
      InformationBase::from_sequence(gen.sequence, gen.covariates);

  IdentificationResult result;
  result.forecasts_a = forecasters::run_forecaster(a, gen.sequence, info);
  result.forecasts_b = forecasters::run_forecaster(b, gen.sequence, info);
  const std::size_t n = gen.sequence.size();
  result.divergence.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    result.divergence[i] = std::fabs(result.forecasts_a.forecasts[i] -
                                     result.forecasts_b.forecasts[i]);
    if (2 * (i + 1) > n) {
      result.tail_max = std::max(result.tail_max, result.divergence[i]);
    }
  }
  result.outcomes = std::move(gen.sequence);
  return result;
}

InfoBaseResult run_info_base(const processes::ProcessSpec& process,
                             const forecasters::ForecasterSpec& coarse,
                             const forecasters::ForecasterSpec& deep,
                             std::uint64_t seed, double target,
                             double tolerance) {
  process.validate();
  coarse.validate();
  deep.validate();
  if (!std::holds_alternative<processes::TwoLevel>(process.kind)) {
    throw std::invalid_argument(
        "the refinement experiment needs a two-level process");
  }
  if (!coarse.h_based() || !deep.h_based()) {
    throw std::invalid_argument(
        "both forecasters must be record-based; the crystal ball does not "
        "qualify");
  }
  if (!(tolerance >= 0.0) || !(target >= 0.0 && target <= 1.0)) {
    throw std::invalid_argument(
        "target must lie in [0, 1] and tolerance must be >= 0");
  }

  processes::GeneratedRun gen = processes::generate(process, seed);
  const InformationBase info =
      InformationBase::from_sequence(gen.sequence, gen.covariates);
  const ForecastSeries coarse_series =
      forecasters::run_forecaster(coarse, gen.sequence, info);
  const ForecastSeries deep_series =
      forecasters::run_forecaster(deep, gen.sequence, info);

  InfoBaseResult result;
  result.total_steps = gen.sequence.size();
  result.target = target;
  result.tolerance = tolerance;
  double sum_p = 0.0, sum_q = 0.0, sum_e = 0.0;
  for (std::size_t i = 0; i < gen.sequence.size(); ++i) {
    const double p = coarse_series.forecasts[i];
    if (std::fabs(p - target) > tolerance) continue;
    result.selected_steps += 1;
    sum_p += p;
    sum_q += deep_series.forecasts[i];
    sum_e += gen.sequence.outcomes[i];
  }
  if (result.selected_steps == 0) {
    throw std::runtime_error(
        "no step's coarse forecast fell within the target window");
  }
  const auto count = static_cast<double>(result.selected_steps);
  result.coarse_mean = sum_p / count;
  result.deep_mean = sum_q / count;
  result.outcome_mean = sum_e / count;
  return result;
}

DefinettiResult run_definetti(std::uint64_t r0, std::uint64_t b0,
                              std::size_t n, std::size_t replicates,
                              std::uint64_t seed) {
  if (r0 == 0 || b0 == 0) {
    throw std::invalid_argument("urn must start with r0 >= 1, b0 >= 1");
  }
  if (n == 0) throw std::invalid_argument("n must be >= 1");
  if (replicates < 100) {
    throw std::invalid_argument(
        "the frequency distribution needs at least 100 replicates");
  }

  DefinettiResult result;
  result.r0 = r0;
  result.b0 = b0;
  result.n = n;
  result.frequencies.reserve(replicates);
  for (std::size_t i = 0; i < replicates; ++i) {
    const std::uint64_t rep_seed =
        SplitMix64::derive(seed, "definetti/replicate", i);
    const processes::PolyaResult run = processes::gen_polya(r0, b0, n, rep_seed);
    std::size_t reds = 0;
    for (Outcome e : run.sequence.outcomes) reds += e;
    result.frequencies.push_back(static_cast<double>(reds) /
                                 static_cast<double>(n));
  }

  // Probability integral transform: under the conjectured law the
  // transformed frequencies are uniform, whatever (r0, b0) is.
  std::vector<double> transformed;
  transformed.reserve(replicates);
  for (double f : result.frequencies) {
    transformed.push_back(stats::beta_cdf(f, static_cast<double>(r0),
                                          static_cast<double>(b0)));
  }
  result.ks_distance = stats::ks_statistic_uniform(transformed);
  return result;
}

void CrossedArraySpec::validate() const {
  if (abilities.empty() || difficulties.empty()) {
    throw std::invalid_argument("the array needs at least one row and column");
  }
  for (double a : abilities) {
    if (!std::isfinite(a)) {
      throw std::invalid_argument("ability effects must be finite");
    }
  }
  for (double d : difficulties) {
    if (!std::isfinite(d)) {
      throw std::invalid_argument("difficulty effects must be finite");
    }
  }
  if (resits == 0) throw std::invalid_argument("resits must be >= 1");
  if (resit_mode == ResitMode::kPolya && !(polya_strength > 0.0)) {
    throw std::invalid_argument("reinforcement strength must be positive");
  }
}

double CrossedArraySpec::failure_probability(std::size_t student,
                                             std::size_t exam) const {
  if (student >= students() || exam >= exams()) {
    throw std::out_of_range("cell index outside the array");
  }
  return stats::logistic(abilities[student] + difficulties[exam]);
}

Outcome CrossedArray::at(std::size_t student, std::size_t exam,
                         std::size_t resit) const {
  if (student >= spec.students() || exam >= spec.exams() ||
      resit >= spec.resits) {
    throw std::out_of_range("cell index outside the array");
  }
  return outcomes[(student * spec.exams() + exam) * spec.resits + resit];
}

CrossedArray make_crossed_array(CrossedArraySpec spec, std::uint64_t seed) {
  spec.validate();
  CrossedArray array;
  array.outcomes.resize(spec.students() * spec.exams() * spec.resits);
  for (std::size_t i = 0; i < spec.students(); ++i) {
    for (std::size_t j = 0; j < spec.exams(); ++j) {
      const std::size_t flat = i * spec.exams() + j;
      SplitMix64 gen(SplitMix64::derive(seed, "crossed/cell", flat));
      const double p = spec.failure_probability(i, j);
      double fail_mass = spec.polya_strength * p;
      double pass_mass = spec.polya_strength * (1.0 - p);
      for (std::size_t t = 0; t < spec.resits; ++t) {
        Outcome e;
        if (spec.resit_mode == ResitMode::kIid) {
          e = gen.bernoulli(p) ? 1 : 0;
        } else {
          const double total = fail_mass + pass_mass;
          e = gen.bernoulli(total > 0.0 ? fail_mass / total : p) ? 1 : 0;
          if (e == 1) {
            fail_mass += 1.0;
          } else {
            pass_mass += 1.0;
          }
        }
        array.outcomes[flat * spec.resits + t] = e;
      }
    }
  }
  array.spec = std::move(spec);
  return array;
}

CrossedRisks run_crossed_array(const CrossedArray& array, std::size_t student,
                               std::size_t exam) {
  const CrossedArraySpec& spec = array.spec;
  spec.validate();
  if (student >= spec.students() || exam >= spec.exams()) {
    throw std::out_of_range("cell index outside the array");
  }
  if (spec.students() < 2 || spec.exams() < 2) {
    throw std::invalid_argument(
        "margins need at least one other student and one other exam");
  }
  if (array.outcomes.size() != spec.students() * spec.exams() * spec.resits) {
    throw std::invalid_argument("outcome tensor does not match the spec");
  }

  CrossedRisks risks;
  risks.cell_probability = spec.failure_probability(student, exam);

  std::size_t row_fails = 0;
  for (std::size_t j = 0; j < spec.exams(); ++j) {
    if (j == exam) continue;
    for (std::size_t t = 0; t < spec.resits; ++t) {
      row_fails += array.at(student, j, t);
      risks.row_draws += 1;
    }
  }
  std::size_t column_fails = 0;
  for (std::size_t i = 0; i < spec.students(); ++i) {
    if (i == student) continue;
    for (std::size_t t = 0; t < spec.resits; ++t) {
      column_fails += array.at(i, exam, t);
      risks.column_draws += 1;
    }
  }
  risks.row_margin =
      static_cast<double>(row_fails) / static_cast<double>(risks.row_draws);
  risks.column_margin = static_cast<double>(column_fails) /
                        static_cast<double>(risks.column_draws);
  return risks;
}

std::string ExperimentSpec::id() const {
  switch (kind) {
    case ExperimentKind::kIdentification:
      return "identification(" + process.id() + "," + forecaster_a.id() +
             "," + forecaster_b.id() + ")";
    case ExperimentKind::kInfoBase:
      return "info_base(" + process.id() + "," + forecaster_a.id() + "," +
             forecaster_b.id() + ")";
    case ExperimentKind::kDefinetti:
      return "definetti(r0=" + std::to_string(r0) +
             ",b0=" + std::to_string(b0) + ",n=" + std::to_string(n) +
             ",replicates=" + std::to_string(replicates) + ")";
    case ExperimentKind::kCrossedArray:
      return "crossed_array(" + std::to_string(crossed.students()) + "x" +
             std::to_string(crossed.exams()) + ")";
  }
  throw std::logic_error("unhandled experiment kind");
}

void ExperimentSpec::validate() const {
  switch (kind) {
    case ExperimentKind::kIdentification:
    case ExperimentKind::kInfoBase:
      process.validate();
      forecaster_a.validate();
      forecaster_b.validate();
      if (!forecaster_a.h_based() || !forecaster_b.h_based()) {
        throw std::invalid_argument(
            "experiment forecasters must be record-based");
      }
      if (kind == ExperimentKind::kInfoBase) {
        if (!(target >= 0.0 && target <= 1.0) || !(tolerance >= 0.0)) {
          throw std::invalid_argument(
              "target must lie in [0, 1] and tolerance must be >= 0");
        }
      }
      return;
    case ExperimentKind::kDefinetti:
      if (r0 == 0 || b0 == 0) {
        throw std::invalid_argument("urn must start with r0 >= 1, b0 >= 1");
      }
      if (n == 0) throw std::invalid_argument("n must be >= 1");
      if (replicates < 100) {
        throw std::invalid_argument(
            "the frequency distribution needs at least 100 replicates");
      }
      return;
    case ExperimentKind::kCrossedArray:
      crossed.validate();
      if (student >= crossed.students() || exam >= crossed.exams()) {
        throw std::invalid_argument("query cell outside the array");
      }
      return;
  }
  throw std::logic_error("unhandled experiment kind");
}

}  // namespace prequel::experiments
