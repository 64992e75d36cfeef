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

#ifndef PREQUEL_FORECASTERS_HPP_
#define PREQUEL_FORECASTERS_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "prequel/processes.hpp"
#include "prequel/run.hpp"

namespace prequel::forecasters {

struct Constant {
  double c = 0.5;
};
// Running outcome frequency shrunk towards 1/2 by a pseudo-count weight:
// p_k = (s + w/2) / (k - 1 + w). With an empty history it returns 1/2.
struct Climatology {
  double prior_weight = 2.0;
};
// Rule of succession: p_k = (s + 1) / (k + 1) after s successes in k - 1
// trials; 1/2 at step 1.
struct Laplace {};
// Predictive probability of the reinforcement urn: r / (r + b) at the
// current counts.
struct PolyaPredictive {
  std::uint64_t r0 = 1;
  std::uint64_t b0 = 1;
};
// Crystal ball: announces the realized outcome itself. The only built-in
// forecaster that is not information-based.
struct Oracle {};
// Looks up a named integer covariate (1-based) in a rate table.
struct CategoryTable {
  std::vector<double> rates;
  std::string covariate_name = "category";
};
// Conjugate Bayes predictive under a mixture prior, updated sequentially.
// uniform01 and beta(a,b) carry posterior counts; a point prior is a
// constant forecaster in disguise.
struct BayesMixture {
  processes::MixturePrior prior;
};

using ForecasterKind = std::variant<Constant, Climatology, Laplace,
                                    PolyaPredictive, Oracle, CategoryTable,
                                    BayesMixture>;

struct ForecasterSpec {
  ForecasterKind kind;

  bool h_based() const { return !std::holds_alternative<Oracle>(kind); }
  std::string id() const;
  void validate() const;
};

// Digested history: everything the built-in forecasters need from
// e_1..e_{k-1}, threaded explicitly so runs can be checkpointed.
struct ForecasterState {
  std::size_t steps_seen = 0;  // k - 1
  std::size_t successes = 0;   // s
  double posterior_a = 0.0;    // bayes_mixture only
  double posterior_b = 0.0;
};

ForecasterState init_state(const ForecasterSpec& spec);

// Forecast for the step described by `record`. The state must digest
// exactly record.step - 1 outcomes. For the oracle, the realized outcome
// must be supplied via `actual`; every information-based kind ignores it.
double forecast_next(const ForecasterSpec& spec, const InformationRecord& record,
                     const ForecasterState& state,
                     std::optional<Outcome> actual = std::nullopt);

ForecasterState advance(const ForecasterSpec& spec, ForecasterState state,
                        Outcome observed);

// Sequential driver: forecasts every step of `outcomes` against the
// records of `info`, observing each outcome after forecasting it.
ForecastSeries run_forecaster(const ForecasterSpec& spec,
                              const OutcomeSequence& outcomes,
                              const InformationBase& info);

}  // namespace prequel::forecasters

#endif  // PREQUEL_FORECASTERS_HPP_
