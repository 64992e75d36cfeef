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

#ifndef PREQUEL_RUN_HPP_
#define PREQUEL_RUN_HPP_

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace prequel {

// Binary outcome e_k. Only the values 0 and 1 are legal.
using Outcome = std::uint8_t;

class length_mismatch_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class forecast_range_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class outcome_domain_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// An ordered sequence of binary outcomes together with the provenance
// needed to regenerate it: the generating process label and its seed.
// Immutable after construction by convention; all evaluators take it const.
struct OutcomeSequence {
  std::vector<Outcome> outcomes;
  std::string process_id;
  std::uint64_t seed = 0;

  std::size_t size() const { return outcomes.size(); }
  bool empty() const { return outcomes.empty(); }

  // Throws outcome_domain_error if any element is not 0 or 1.
  void validate() const;
};

// Named per-step background attributes (e.g. a risk category index, a
// hidden deep rate). Stream i holds the value attached to step i+1.
using CovariateStreams = std::map<std::string, std::vector<double>>;

// The background record H_k available when forecasting step k: the
// outcome history e_1..e_{k-1} plus this step's covariates. A record is
// a cheap view into the owning InformationBase; by construction it can
// never expose the outcome at step k or later.
struct InformationRecord {
  std::size_t step = 1;                        // k, 1-based
  std::span<const Outcome> outcome_history{};  // e_1..e_{k-1}
  const CovariateStreams* streams = nullptr;

  std::optional<double> covariate(std::string_view name) const;

  // Number of 1s in the history.
  std::size_t successes() const {
    std::size_t s = 0;
    for (Outcome e : outcome_history) s += e;
    return s;
  }
};

// The full information base: the outcome sequence plus covariate streams,
// exposed step-by-step as InformationRecord views. Covariate streams are
// produced by the generating process before the step's outcome is drawn,
// so no record can depend on present or future outcomes.
class InformationBase {
 public:
  InformationBase() = default;
  InformationBase(std::shared_ptr<const std::vector<Outcome>> outcomes,
                  CovariateStreams covariates = {});

  static InformationBase from_sequence(const OutcomeSequence& seq,
                                       CovariateStreams covariates = {});

  std::size_t size() const { return outcomes_ ? outcomes_->size() : 0; }

  // Record for step k (1-based). Throws std::out_of_range outside [1, n].
  InformationRecord record(std::size_t step) const;

  const CovariateStreams& covariates() const { return covariates_; }

  const std::shared_ptr<const std::vector<Outcome>>& outcome_storage() const {
    return outcomes_;
  }

 private:
  std::shared_ptr<const std::vector<Outcome>> outcomes_;
  CovariateStreams covariates_;
};

// Probability forecasts p_1..p_N aligned with an outcome sequence. The
// h_based flag asserts that every forecast was computed from the
// information record alone (the crystal-ball forecaster is the one
// built-in exception).
struct ForecastSeries {
  std::vector<double> forecasts;
  std::string forecaster_id;
  bool h_based = true;

  std::size_t size() const { return forecasts.size(); }
  bool empty() const { return forecasts.empty(); }

  // Throws forecast_range_error if any forecast leaves [0,1].
  void validate() const;
};

// An outcome sequence and a forecast series that have passed alignment.
struct ValidatedRun {
  OutcomeSequence outcomes;
  ForecastSeries forecasts;

  std::size_t size() const { return outcomes.size(); }
};

// Pairs outcomes with forecasts, enforcing the run invariants. Reports
// each violation as a distinct error type: length_mismatch_error,
// forecast_range_error, outcome_domain_error.
ValidatedRun align_run(OutcomeSequence outcomes, ForecastSeries forecasts);

}  // namespace prequel

#endif  // PREQUEL_RUN_HPP_
