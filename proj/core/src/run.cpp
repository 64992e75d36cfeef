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

#include "prequel/run.hpp"

#include <utility>

namespace prequel {

void OutcomeSequence::validate() const {
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    if (outcomes[i] > 1) {
      throw outcome_domain_error("outcome at step " + std::to_string(i + 1) +
                                 " is " + std::to_string(outcomes[i]) +
                                 ", expected 0 or 1");
    }
  }
}

void ForecastSeries::validate() const {
  for (std::size_t i = 0; i < forecasts.size(); ++i) {
    const double p = forecasts[i];
    if (!(p >= 0.0 && p <= 1.0)) {
      throw forecast_range_error("forecast at step " + std::to_string(i + 1) +
                                 " is " + std::to_string(p) +
                                 ", expected a probability in [0,1]");
    }
  }
}

std::optional<double> InformationRecord::covariate(std::string_view name) const {
  if (streams == nullptr) return std::nullopt;
  auto it = streams->find(std::string(name));
  if (it == streams->end() || it->second.size() < step) return std::nullopt;
  return it->second[step - 1];
}

InformationBase::InformationBase(
    std::shared_ptr<const std::vector<Outcome>> outcomes,
    CovariateStreams covariates)
    : outcomes_(std::move(outcomes)), covariates_(std::move(covariates)) {}

InformationBase InformationBase::from_sequence(const OutcomeSequence& seq,
                                               CovariateStreams covariates) {
  return InformationBase(
      std::make_shared<const std::vector<Outcome>>(seq.outcomes),
      std::move(covariates));
}

InformationRecord InformationBase::record(std::size_t step) const {
  if (step < 1 || step > size()) {
    throw std::out_of_range("InformationBase::record: step " +
                            std::to_string(step) + " outside [1, " +
                            std::to_string(size()) + "]");
  }
  InformationRecord rec;
  rec.step = step;
  rec.outcome_history = std::span<const Outcome>(outcomes_->data(), step - 1);
  rec.streams = &covariates_;
  return rec;
}

ValidatedRun align_run(OutcomeSequence outcomes, ForecastSeries forecasts) {
  if (outcomes.empty() || forecasts.empty()) {
    throw length_mismatch_error("align_run: both inputs must be non-empty");
  }
  if (outcomes.size() != forecasts.size()) {
    throw length_mismatch_error(
        "align_run: " + std::to_string(outcomes.size()) + " outcomes vs " +
        std::to_string(forecasts.size()) + " forecasts");
  }
  outcomes.validate();
  forecasts.validate();
  return ValidatedRun{std::move(outcomes), std::move(forecasts)};
}

}  // namespace prequel
