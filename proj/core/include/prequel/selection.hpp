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

#ifndef PREQUEL_SELECTION_HPP_
#define PREQUEL_SELECTION_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "prequel/run.hpp"

namespace prequel {

enum class RuleKind : std::uint8_t {
  kAll,
  kEveryMth,
  kIndexSet,
  kHistoryPredicate,
};

// Declarative condition over the information record at step k. All listed
// clauses must hold (conjunction). The grammar can only reach the outcome
// history, this step's covariates, and this step's forecast; membership
// that peeks at e_j for j >= k is unrepresentable.
struct HistoryPredicate {
  // Step congruence: k mod modulus == residue (k is 1-based).
  struct StepMod {
    std::uint32_t modulus = 1;
    std::uint32_t residue = 0;
  };
  // The w most recent outcomes e_{k-w}..e_{k-1}, oldest first, must equal
  // this pattern. w <= 8. Steps with fewer than w past outcomes never match.
  std::optional<std::vector<Outcome>> last_window;
  std::optional<StepMod> step_mod;
  // Covariate at step k equals the given value exactly (intended for
  // discrete covariates such as category indices).
  struct CovariateEq {
    std::string name;
    double value = 0.0;
  };
  std::optional<CovariateEq> covariate_eq;
  // Forecast threshold on p_k. Forecasts are themselves functions of the
  // record, so a threshold clause keeps the rule information-based.
  struct ForecastThreshold {
    enum class Op : std::uint8_t { kLessEq, kGreater };
    Op op = Op::kLessEq;
    double value = 0.5;
  };
  std::optional<ForecastThreshold> forecast_threshold;
};

// A rule choosing a test subset of steps. Static kinds (all, every mth,
// index set) ignore the record entirely; history predicates read it and
// are therefore information-based.
struct SelectionRule {
  std::string rule_id;
  RuleKind kind = RuleKind::kAll;

  // every_mth: member iff (k - 1) % m == offset.
  std::uint64_t m = 1;
  std::uint64_t offset = 0;

  // index_set: sorted 1-based step indices.
  std::vector<std::size_t> indices;

  HistoryPredicate predicate;

  bool h_based() const { return kind == RuleKind::kHistoryPredicate; }
  bool uses_forecast() const {
    return kind == RuleKind::kHistoryPredicate &&
           predicate.forecast_threshold.has_value();
  }

  // Throws std::invalid_argument on malformed rules (m == 0, window wider
  // than 8, non-binary pattern, unsorted index set, ...).
  void validate() const;

  static SelectionRule all(std::string id = "all");
  static SelectionRule every_mth(std::uint64_t m, std::uint64_t offset,
                                 std::string id);
  static SelectionRule index_set(std::vector<std::size_t> indices,
                                 std::string id);
  static SelectionRule history(HistoryPredicate predicate, std::string id);
};

// Pure membership test for step k. `forecast` must be supplied for rules
// with a forecast-threshold clause (std::invalid_argument otherwise).
bool rule_member(const SelectionRule& rule, std::size_t step,
                 const InformationRecord& record,
                 std::optional<double> forecast = std::nullopt);

}  // namespace prequel

#endif  // PREQUEL_SELECTION_HPP_
