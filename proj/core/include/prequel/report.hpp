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

#ifndef PREQUEL_REPORT_HPP_
#define PREQUEL_REPORT_HPP_

#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace prequel {

enum class Criterion : std::uint8_t { kOverall, kProbability, kSubset, kHBased };

enum class Verdict : std::uint8_t {
  kPass,
  kFail,
  kInsufficient,  // too few members to judge
  kEmpty,         // no members at all; carries no discrepancy
};

std::string_view to_string(Criterion c);
std::string_view to_string(Verdict v);

// One evaluation cell (a selection rule or a forecast bin). Stores the
// sufficient statistics, so every derived quantity can be recomputed from
// the report alone.
struct ReportCell {
  std::string id;
  std::size_t count = 0;
  double sum_p = 0.0;   // sum of forecasts over members
  double sum_e = 0.0;   // sum of outcomes over members
  double sum_pq = 0.0;  // sum of p(1-p), the conditional variance mass

  double mean_p() const { return count ? sum_p / static_cast<double>(count) : 0.0; }
  double freq_e() const { return count ? sum_e / static_cast<double>(count) : 0.0; }
  double delta() const { return count ? std::fabs(freq_e() - mean_p()) : 0.0; }

  // z = sum(e - p) / sqrt(sum p(1-p)). Undefined when every member
  // forecast is 0 or 1; such cells are judged on delta alone.
  bool z_defined() const { return count > 0 && sum_pq > 0.0; }
  double z() const { return (sum_e - sum_p) / std::sqrt(sum_pq); }

  Verdict verdict = Verdict::kEmpty;

  void add(double forecast, double outcome) {
    ++count;
    sum_p += forecast;
    sum_e += outcome;
    sum_pq += forecast * (1.0 - forecast);
  }
};

// Result of one calibration criterion over a run.
struct CalibrationReport {
  Criterion criterion = Criterion::kOverall;
  double significance = 0.05;
  std::size_t m_min = 30;
  std::optional<double> bin_width;  // probability criterion only
  std::vector<ReportCell> cells;
  Verdict global_verdict = Verdict::kEmpty;
};

}  // namespace prequel

#endif  // PREQUEL_REPORT_HPP_
