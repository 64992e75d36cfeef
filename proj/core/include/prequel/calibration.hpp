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

#ifndef PREQUEL_CALIBRATION_HPP_
#define PREQUEL_CALIBRATION_HPP_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "prequel/forecasters.hpp"
#include "prequel/report.hpp"
#include "prequel/run.hpp"
#include "prequel/selection.hpp"

namespace prequel::calibration {

// Forecast-value binning for the probability criterion. The unit interval
// is split into 1/width half-open bins; a forecast of exactly 1 lands in
// the last bin.
struct BinSpec {
  double width = 0.05;
  std::size_t m_min = 30;

  // Throws std::invalid_argument unless width ∈ (0, 1], 1/width is an
  // integer (to within 1e-9), and m_min >= 1.
  void validate() const;

  std::size_t bin_count() const;
  std::size_t bin_index(double forecast) const;
  std::string bin_label(std::size_t index) const;
};

struct EvalParams {
  double significance = 0.05;
  std::size_t m_min = 30;

  void validate() const;
};

// Verdict for one cell: empty when no member steps, insufficient below
// m_min, otherwise a two-sided z test at the given significance. When the
// variance mass is zero (every member forecast is 0 or 1) the z statistic
// is undefined and the verdict degenerates to an exact check delta == 0.
Verdict calibration_z_test(const ReportCell& cell, double significance,
                           std::size_t m_min);

// Whole-sequence agreement between mean forecast and outcome frequency.
CalibrationReport overall_calibration(const ValidatedRun& run,
                                      const EvalParams& params = {});

// Agreement within groups of steps whose forecasts share a bin.
CalibrationReport probability_calibration(const ValidatedRun& run,
                                          const BinSpec& bins = {},
                                          double significance = 0.05);

// Agreement on subsets chosen by static rules (all, every mth, index
// set). A history-predicate rule is rejected here: membership that reads
// the record belongs to h_calibration.
CalibrationReport subset_calibration(const ValidatedRun& run,
                                     std::span<const SelectionRule> rules,
                                     const EvalParams& params = {});

// Agreement on subsets chosen by any rule over the information record,
// including rules thresholding the forecast itself. Requires forecasts
// that were computed from the record alone.
CalibrationReport h_calibration(const ValidatedRun& run,
                                const InformationBase& info,
                                std::span<const SelectionRule> rules,
                                const EvalParams& params = {});

struct AdversaryResult {
  OutcomeSequence outcomes;
  ForecastSeries forecasts;
  // Threshold rule (p <= 1/2 or its complement, whichever captured at
  // least half the steps) on which the coupled run is maximally
  // miscalibrated: restricted delta >= 1/2.
  SelectionRule defeat_rule;
};

// Plays against the forecaster: at each step the forecast is computed
// first and the outcome is then set to 1 when p <= 1/2 and to 0
// otherwise. Works for any forecaster that reads only the record; the
// crystal ball is rejected. Covariate streams may be supplied for
// forecasters that look attributes up (they are threaded into the record
// but carry no outcome information).
AdversaryResult adversarial_outcomes(const forecasters::ForecasterSpec& spec,
                                     std::size_t n,
                                     CovariateStreams covariates = {});

// Built-in rule family for h_calibration sweeps: the full sequence,
// outcome windows up to width 3, step congruences with modulus up to 7,
// forecast thresholds at 1/4, 1/2, 3/4, and one membership rule per
// category when `categories` > 0. A finite family can only sample the
// continuum of record-based rules; this one covers the shapes the
// built-in processes can distinguish.
std::vector<SelectionRule> default_rule_family(std::size_t categories = 0);

}  // namespace prequel::calibration

#endif  // PREQUEL_CALIBRATION_HPP_
