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

#include "prequel/calibration.hpp"

#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

#include "prequel/stats.hpp"

namespace prequel::calibration {

namespace {

void check_run(const ValidatedRun& run) {
  if (run.outcomes.empty() || run.forecasts.empty()) {
    throw std::invalid_argument("calibration needs a non-empty run");
  }
  if (run.outcomes.size() != run.forecasts.size()) {
    throw length_mismatch_error(
        "run has " + std::to_string(run.outcomes.size()) + " outcomes but " +
        std::to_string(run.forecasts.size()) + " forecasts");
  }
  run.outcomes.validate();
  run.forecasts.validate();
}

// Cell verdicts, then the fold: any failing cell fails the report; with
// no failures the report passes as soon as one cell had enough data.
void finalize(CalibrationReport& report) {
  bool any_fail = false;
  bool any_pass = false;
  bool any_insufficient = false;
  for (ReportCell& cell : report.cells) {
    cell.verdict = calibration_z_test(cell, report.significance, report.m_min);
    any_fail = any_fail || cell.verdict == Verdict::kFail;
    any_pass = any_pass || cell.verdict == Verdict::kPass;
    any_insufficient = any_insufficient || cell.verdict == Verdict::kInsufficient;
  }
  if (any_fail) {
    report.global_verdict = Verdict::kFail;
  } else if (any_pass) {
    report.global_verdict = Verdict::kPass;
  } else if (any_insufficient) {
    report.global_verdict = Verdict::kInsufficient;
  } else {
    report.global_verdict = Verdict::kEmpty;
  }
}

std::string fmt(double x) {
  std::ostringstream os;
  os << x;
  return os.str();
}

}  // namespace

void BinSpec::validate() const {
  if (!(width > 0.0 && width <= 1.0)) {
    throw std::invalid_argument("bin width must lie in (0, 1]");
  }
  const double inverse = 1.0 / width;
  if (std::fabs(inverse - std::round(inverse)) > 1e-9) {
    throw std::invalid_argument("1/width must be an integer, got width " +
                                fmt(width));
  }
  if (m_min < 1) throw std::invalid_argument("m_min must be >= 1");
}

std::size_t BinSpec::bin_count() const {
  return static_cast<std::size_t>(std::llround(1.0 / width));
}

std::size_t BinSpec::bin_index(double forecast) const {
  if (!(forecast >= 0.0 && forecast <= 1.0)) {
    throw forecast_range_error("forecast must lie in [0, 1], got " +
                               fmt(forecast));
  }
  const std::size_t bins = bin_count();
  auto index = static_cast<std::size_t>(forecast / width);
  if (index >= bins) index = bins - 1;  // forecast == 1
  return index;
}

std::string BinSpec::bin_label(std::size_t index) const {
  const std::size_t bins = bin_count();
  if (index >= bins) throw std::out_of_range("bin index past the unit interval");
  const double lo = static_cast<double>(index) * width;
  const double hi = static_cast<double>(index + 1) * width;
  std::ostringstream os;
  os << "[" << fmt(lo) << "," << fmt(hi) << (index + 1 == bins ? "]" : ")");
  return os.str();
}

void EvalParams::validate() const {
  if (!(significance > 0.0 && significance < 1.0)) {
    throw std::invalid_argument("significance must lie in (0, 1)");
  }
  if (m_min < 1) throw std::invalid_argument("m_min must be >= 1");
}

Verdict calibration_z_test(const ReportCell& cell, double significance,
                           std::size_t m_min) {
  if (!(significance > 0.0 && significance < 1.0)) {
    throw std::invalid_argument("significance must lie in (0, 1)");
  }
  if (cell.count == 0) return Verdict::kEmpty;
  if (cell.count < m_min) return Verdict::kInsufficient;
  if (!cell.z_defined()) {
    // Every member forecast was 0 or 1: no sampling variance, so require
    // exact agreement.
    return cell.delta() == 0.0 ? Verdict::kPass : Verdict::kFail;
  }
  const double critical = stats::two_sided_critical(significance);
  return std::fabs(cell.z()) <= critical ? Verdict::kPass : Verdict::kFail;
}

CalibrationReport overall_calibration(const ValidatedRun& run,
                                      const EvalParams& params) {
  check_run(run);
  params.validate();
  CalibrationReport report;
  report.criterion = Criterion::kOverall;
  report.significance = params.significance;
  report.m_min = params.m_min;
  ReportCell cell;
  cell.id = "overall";
  for (std::size_t i = 0; i < run.size(); ++i) {
    cell.add(run.forecasts.forecasts[i], run.outcomes.outcomes[i]);
  }
  report.cells.push_back(std::move(cell));
  finalize(report);
  return report;
}

CalibrationReport probability_calibration(const ValidatedRun& run,
                                          const BinSpec& bins,
                                          double significance) {
  check_run(run);
  bins.validate();
  if (!(significance > 0.0 && significance < 1.0)) {
    throw std::invalid_argument("significance must lie in (0, 1)");
  }
  std::map<std::size_t, ReportCell> occupied;
  for (std::size_t i = 0; i < run.size(); ++i) {
    const double p = run.forecasts.forecasts[i];
    const std::size_t index = bins.bin_index(p);
    ReportCell& cell = occupied[index];
    if (cell.count == 0) cell.id = bins.bin_label(index);
    cell.add(p, run.outcomes.outcomes[i]);
  }
  CalibrationReport report;
  report.criterion = Criterion::kProbability;
  report.significance = significance;
  report.m_min = bins.m_min;
  report.bin_width = bins.width;
  report.cells.reserve(occupied.size());
  for (auto& [index, cell] : occupied) report.cells.push_back(std::move(cell));
  finalize(report);
  return report;
}

CalibrationReport subset_calibration(const ValidatedRun& run,
                                     std::span<const SelectionRule> rules,
                                     const EvalParams& params) {
  check_run(run);
  params.validate();
  if (rules.empty()) {
    throw std::invalid_argument("subset calibration needs at least one rule");
  }
  CalibrationReport report;
  report.criterion = Criterion::kSubset;
  report.significance = params.significance;
  report.m_min = params.m_min;
  for (const SelectionRule& rule : rules) {
    rule.validate();
    if (rule.h_based()) {
      throw std::invalid_argument(
          "rule '" + rule.rule_id +
          "' reads the information record; evaluate it with h_calibration");
    }
    ReportCell cell;
    cell.id = rule.rule_id;
    for (std::size_t k = 1; k <= run.size(); ++k) {
      // Static rules ignore the record, so an empty one suffices.
      const InformationRecord record{k, {}, nullptr};
      if (!rule_member(rule, k, record)) continue;
      cell.add(run.forecasts.forecasts[k - 1], run.outcomes.outcomes[k - 1]);
    }
    report.cells.push_back(std::move(cell));
  }
  finalize(report);
  return report;
}

CalibrationReport h_calibration(const ValidatedRun& run,
                                const InformationBase& info,
                                std::span<const SelectionRule> rules,
                                const EvalParams& params) {
  check_run(run);
  params.validate();
  if (!run.forecasts.h_based) {
    throw std::invalid_argument(
        "forecasts were not computed from the information record; the "
        "information-based criterion does not apply");
  }
  if (info.outcome_storage() == nullptr ||
      *info.outcome_storage() != run.outcomes.outcomes) {
    throw std::invalid_argument(
        "information base does not describe the run's outcome sequence");
  }
  if (rules.empty()) {
    throw std::invalid_argument(
        "information-based calibration needs at least one rule");
  }
  CalibrationReport report;
  report.criterion = Criterion::kHBased;
  report.significance = params.significance;
  report.m_min = params.m_min;
  for (const SelectionRule& rule : rules) {
    rule.validate();
    ReportCell cell;
    cell.id = rule.rule_id;
    for (std::size_t k = 1; k <= run.size(); ++k) {
      const InformationRecord record = info.record(k);
      const double p = run.forecasts.forecasts[k - 1];
      if (!rule_member(rule, k, record, p)) continue;
      cell.add(p, run.outcomes.outcomes[k - 1]);
    }
    report.cells.push_back(std::move(cell));
  }
  finalize(report);
  return report;
}

AdversaryResult adversarial_outcomes(const forecasters::ForecasterSpec& spec,
                                     std::size_t n,
                                     CovariateStreams covariates) {
  spec.validate();
  if (!spec.h_based()) {
    throw std::invalid_argument(
        "the crystal-ball forecaster reads the outcome itself and cannot be "
        "defeated by outcome choice");
  }
  if (n == 0) throw std::invalid_argument("n must be >= 1");
  for (const auto& [name, values] : covariates) {
    if (values.size() < n) {
      throw std::invalid_argument("covariate stream '" + name +
                                  "' is shorter than n");
    }
  }

  AdversaryResult result;
  result.outcomes.outcomes.reserve(n);
  result.outcomes.process_id = "adversary(" + spec.id() + ")";
  result.outcomes.seed = 0;
  result.forecasts.forecasts.reserve(n);
  result.forecasts.forecaster_id = spec.id();
  result.forecasts.h_based = true;

  forecasters::ForecasterState state = forecasters::init_state(spec);
  std::size_t at_most_half = 0;  // steps with p <= 1/2
  for (std::size_t k = 1; k <= n; ++k) {
    const InformationRecord record{
        k,
        std::span<const Outcome>(result.outcomes.outcomes.data(), k - 1),
        &covariates};
    const double p = forecasters::forecast_next(spec, record, state);
    // The defeating move: claim the side the forecaster finds no more
    // likely than its opposite. Ties at 1/2 resolve to outcome 1.
    const Outcome e = p <= 0.5 ? 1 : 0;
    at_most_half += (p <= 0.5);
    result.forecasts.forecasts.push_back(p);
    result.outcomes.outcomes.push_back(e);
    state = forecasters::advance(spec, state, e);
  }

  HistoryPredicate predicate;
  HistoryPredicate::ForecastThreshold threshold;
  threshold.value = 0.5;
  if (2 * at_most_half >= n) {
    threshold.op = HistoryPredicate::ForecastThreshold::Op::kLessEq;
    predicate.forecast_threshold = threshold;
    result.defeat_rule = SelectionRule::history(predicate, "p<=0.5");
  } else {
    threshold.op = HistoryPredicate::ForecastThreshold::Op::kGreater;
    predicate.forecast_threshold = threshold;
    result.defeat_rule = SelectionRule::history(predicate, "p>0.5");
  }
  return result;
}

std::vector<SelectionRule> default_rule_family(std::size_t categories) {
  std::vector<SelectionRule> rules;
  rules.push_back(SelectionRule::all());

  // Outcome windows: every 0/1 pattern of width 1..3, oldest first.
  for (std::size_t width = 1; width <= 3; ++width) {
    for (std::size_t bits = 0; bits < (std::size_t{1} << width); ++bits) {
      std::vector<Outcome> pattern(width);
      std::string label;
      for (std::size_t j = 0; j < width; ++j) {
        const Outcome bit = (bits >> (width - 1 - j)) & 1;
        pattern[j] = bit;
        label += static_cast<char>('0' + bit);
      }
      HistoryPredicate predicate;
      predicate.last_window = std::move(pattern);
      rules.push_back(SelectionRule::history(predicate, "window(" + label + ")"));
    }
  }

  // Step congruences.
  for (std::uint32_t modulus = 2; modulus <= 7; ++modulus) {
    for (std::uint32_t residue = 0; residue < modulus; ++residue) {
      HistoryPredicate predicate;
      predicate.step_mod = HistoryPredicate::StepMod{modulus, residue};
      rules.push_back(SelectionRule::history(
          predicate, "mod(" + std::to_string(modulus) + "," +
                         std::to_string(residue) + ")"));
    }
  }

  // Forecast thresholds.
  using Op = HistoryPredicate::ForecastThreshold::Op;
  const struct {
    Op op;
    double value;
    const char* label;
  } thresholds[] = {
      {Op::kLessEq, 0.25, "p<=0.25"},
      {Op::kLessEq, 0.5, "p<=0.5"},
      {Op::kGreater, 0.5, "p>0.5"},
      {Op::kGreater, 0.75, "p>0.75"},
  };
  for (const auto& t : thresholds) {
    HistoryPredicate predicate;
    predicate.forecast_threshold =
        HistoryPredicate::ForecastThreshold{t.op, t.value};
    rules.push_back(SelectionRule::history(predicate, t.label));
  }

  // Category cells.
  for (std::size_t c = 1; c <= categories; ++c) {
    HistoryPredicate predicate;
    predicate.covariate_eq = HistoryPredicate::CovariateEq{
        "category", static_cast<double>(c)};
    rules.push_back(SelectionRule::history(
        predicate, "category=" + std::to_string(c)));
  }
  return rules;
}

}  // namespace prequel::calibration
