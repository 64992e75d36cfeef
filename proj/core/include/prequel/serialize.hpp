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

#ifndef PREQUEL_SERIALIZE_HPP_
#define PREQUEL_SERIALIZE_HPP_

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "prequel/experiments.hpp"
#include "prequel/forecasters.hpp"
#include "prequel/intervals.hpp"
#include "prequel/processes.hpp"
#include "prequel/report.hpp"
#include "prequel/run.hpp"
#include "prequel/selection.hpp"

namespace prequel::serialize {

inline constexpr int kFormatVersion = 1;

// Thrown when a parsed document is structurally sound JSON but not a
// valid spec/artifact (missing keys, bad enum strings, version skew).
class parse_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Everything needed to replay a simulate/forecast run: the generating
// spec and seed, the realized outcomes and covariates, and, when a
// forecasting stage ran, the forecaster and its forecasts.
struct RunArtifact {
  int format_version = kFormatVersion;
  processes::ProcessSpec process;
  std::uint64_t seed = 0;
  OutcomeSequence outcomes;
  CovariateStreams covariates;
  std::optional<forecasters::ForecasterSpec> forecaster;
  std::optional<ForecastSeries> forecasts;
};

nlohmann::json to_json(const processes::ProcessSpec& spec);
processes::ProcessSpec process_from_json(const nlohmann::json& j);

nlohmann::json to_json(const forecasters::ForecasterSpec& spec);
forecasters::ForecasterSpec forecaster_from_json(const nlohmann::json& j);

nlohmann::json to_json(const SelectionRule& rule);
SelectionRule rule_from_json(const nlohmann::json& j);

nlohmann::json to_json(const experiments::ExperimentSpec& spec);
experiments::ExperimentSpec experiment_from_json(const nlohmann::json& j);

nlohmann::json to_json(const CalibrationReport& report);
CalibrationReport report_from_json(const nlohmann::json& j);

nlohmann::json to_json(const RunArtifact& artifact);
RunArtifact artifact_from_json(const nlohmann::json& j);

// Shortest representation that parses back to the same double; integers
// print without a decimal point. Keeps CSV goldens byte-stable.
std::string format_double(double x);

// CSV emitters. Every table carries a header row; numeric fields use
// format_double; an undefined z prints as an empty field.
std::string report_csv(const CalibrationReport& report);
// step,e,p,rule_memberships (memberships ';'-joined). Rules that
// threshold the forecast require stored forecasts.
std::string run_csv(const RunArtifact& artifact,
                    std::span<const SelectionRule> rules = {});
std::string wilson_csv(std::span<const intervals::IntervalResult> rows);
std::string divergence_csv(std::span<const double> divergence);

// Write-to-temp-then-rename in the target directory, so a crash never
// leaves a half-written file under the final name.
void write_file_atomic(const std::filesystem::path& path,
                       std::string_view content);
std::string read_file(const std::filesystem::path& path);

}  // namespace prequel::serialize

#endif  // PREQUEL_SERIALIZE_HPP_
