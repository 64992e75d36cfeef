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

#include <doctest.h>

#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "prequel/experiments.hpp"
#include "prequel/forecasters.hpp"
#include "prequel/intervals.hpp"
#include "prequel/processes.hpp"
#include "prequel/serialize.hpp"

using namespace prequel;
using namespace prequel::serialize;
using nlohmann::json;

namespace {

// Serialize, parse, serialize again; stable documents must agree exactly.
template <typename Spec, typename FromJson>
void check_roundtrip(const Spec& spec, FromJson from) {
  const json once = to_json(spec);
  const json twice = to_json(from(once));
  CHECK(once == twice);
}

struct TempDir {
  std::filesystem::path path;
  TempDir() {
    path = std::filesystem::temp_directory_path() /
           ("prequel_test_" + std::to_string(::getpid()));
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
};

}  // namespace

TEST_CASE("process specs survive a JSON round trip") {
  using namespace prequel::processes;
  auto from = [](const json& j) { return process_from_json(j); };
  check_roundtrip(ProcessSpec{Bernoulli{0.3}, 100}, from);
  check_roundtrip(ProcessSpec{Mixture{Uniform01Prior{}}, 10}, from);
  check_roundtrip(ProcessSpec{Mixture{PointPrior{0.25}}, 10}, from);
  check_roundtrip(ProcessSpec{Mixture{BetaPrior{2.0, 5.0}}, 10}, from);
  check_roundtrip(ProcessSpec{Polya{3, 2}, 50}, from);
  check_roundtrip(ProcessSpec{Deterministic{{1, 0, 1}}, 9}, from);
  check_roundtrip(ProcessSpec{Markov{0.5, 0.2, 0.8}, 25}, from);
  Category cat;
  cat.rates = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
  cat.assignment_seed = 99;
  check_roundtrip(ProcessSpec{cat, 1000}, from);
  check_roundtrip(ProcessSpec{TwoLevel{{0.2, 0.6}, {0.5, 0.5}, 0.4}, 500},
                  from);
}

TEST_CASE("forecaster specs survive a JSON round trip") {
  using namespace prequel::forecasters;
  auto from = [](const json& j) { return forecaster_from_json(j); };
  check_roundtrip(ForecasterSpec{Constant{0.7}}, from);
  check_roundtrip(ForecasterSpec{Climatology{4.0}}, from);
  check_roundtrip(ForecasterSpec{Laplace{}}, from);
  check_roundtrip(ForecasterSpec{PolyaPredictive{2, 5}}, from);
  check_roundtrip(ForecasterSpec{Oracle{}}, from);
  check_roundtrip(ForecasterSpec{CategoryTable{{0.2, 0.8}, "category"}}, from);
  check_roundtrip(
      ForecasterSpec{BayesMixture{processes::BetaPrior{1.5, 2.5}}}, from);
  check_roundtrip(ForecasterSpec{BayesMixture{processes::Uniform01Prior{}}},
                  from);
}

TEST_CASE("selection rules survive a JSON round trip") {
  auto from = [](const json& j) { return rule_from_json(j); };
  check_roundtrip(SelectionRule::all("all"), from);
  check_roundtrip(SelectionRule::every_mth(3, 1, "thirds"), from);
  check_roundtrip(SelectionRule::index_set({2, 5, 9}, "picks"), from);

  HistoryPredicate everything;
  everything.last_window = std::vector<Outcome>{1, 0};
  everything.step_mod = HistoryPredicate::StepMod{5, 2};
  everything.covariate_eq = HistoryPredicate::CovariateEq{"category", 3.0};
  everything.forecast_threshold = HistoryPredicate::ForecastThreshold{
      HistoryPredicate::ForecastThreshold::Op::kLessEq, 0.25};
  check_roundtrip(SelectionRule::history(everything, "kitchen-sink"), from);

  HistoryPredicate greater;
  greater.forecast_threshold = HistoryPredicate::ForecastThreshold{
      HistoryPredicate::ForecastThreshold::Op::kGreater, 0.75};
  check_roundtrip(SelectionRule::history(greater, "p>0.75"), from);

  // Parsed rules are validated, so corrupt documents are refused.
  json bad = to_json(SelectionRule::every_mth(3, 1, "thirds"));
  bad["m"] = 0;
  CHECK_THROWS_AS(rule_from_json(bad), std::exception);
}

TEST_CASE("experiment specs survive a JSON round trip") {
  using namespace prequel::experiments;
  auto from = [](const json& j) { return experiment_from_json(j); };

  ExperimentSpec ident;
  ident.kind = ExperimentKind::kIdentification;
  ident.process = processes::ProcessSpec{processes::Bernoulli{0.3}, 1000};
  ident.forecaster_a = forecasters::ForecasterSpec{forecasters::Laplace{}};
  ident.forecaster_b = forecasters::ForecasterSpec{
      forecasters::BayesMixture{processes::BetaPrior{2.0, 2.0}}};
  check_roundtrip(ident, from);

  ExperimentSpec info;
  info.kind = ExperimentKind::kInfoBase;
  info.process = processes::ProcessSpec{
      processes::TwoLevel{{0.2, 0.6}, {0.5, 0.5}, 0.4}, 5000};
  info.forecaster_a = forecasters::ForecasterSpec{forecasters::Constant{0.4}};
  info.forecaster_b = forecasters::ForecasterSpec{
      forecasters::CategoryTable{{0.2, 0.6}, "category"}};
  info.target = 0.4;
  info.tolerance = 0.005;
  check_roundtrip(info, from);

  ExperimentSpec defi;
  defi.kind = ExperimentKind::kDefinetti;
  defi.r0 = 2;
  defi.b0 = 1;
  defi.n = 500;
  defi.replicates = 300;
  check_roundtrip(defi, from);

  ExperimentSpec crossed;
  crossed.kind = ExperimentKind::kCrossedArray;
  crossed.crossed.abilities = {-1.0, 0.0, 1.0};
  crossed.crossed.difficulties = {0.0, 0.5};
  crossed.crossed.resits = 3;
  crossed.crossed.resit_mode = ResitMode::kPolya;
  crossed.crossed.polya_strength = 1.5;
  crossed.student = 2;
  crossed.exam = 1;
  check_roundtrip(crossed, from);
}

TEST_CASE("reports round trip through their sufficient statistics") {
  CalibrationReport report;
  report.criterion = Criterion::kProbability;
  report.significance = 0.01;
  report.m_min = 10;
  report.bin_width = 0.25;
  ReportCell cell;
  cell.id = "[0.25,0.5)";
  cell.add(0.3, 1.0);
  cell.add(0.4, 0.0);
  cell.add(0.3, 1.0);
  cell.verdict = Verdict::kInsufficient;
  report.cells.push_back(cell);
  report.global_verdict = Verdict::kInsufficient;

  const json j = to_json(report);
  const CalibrationReport back = report_from_json(j);
  CHECK(to_json(back) == j);
  REQUIRE(back.cells.size() == 1);
  CHECK(back.cells[0].sum_p == cell.sum_p);
  CHECK(back.cells[0].sum_e == cell.sum_e);
  CHECK(back.cells[0].sum_pq == cell.sum_pq);
  CHECK(back.cells[0].count == 3);
  // Derived quantities are recomputed, not stored authoritatively.
  CHECK(back.cells[0].mean_p() == cell.mean_p());
  CHECK(back.cells[0].z() == cell.z());
  CHECK(back.bin_width == 0.25);

  json missing = j;
  missing.erase("cells");
  CHECK_THROWS_AS(report_from_json(missing), parse_error);
}

TEST_CASE("undefined z serializes as null") {
  CalibrationReport report;
  ReportCell degenerate;
  degenerate.id = "sure";
  degenerate.add(1.0, 1.0);
  degenerate.verdict = Verdict::kPass;
  report.cells.push_back(degenerate);
  const json j = to_json(report);
  CHECK(j["cells"][0]["z"].is_null());
}

TEST_CASE("artifacts round trip and regenerate identically") {
  processes::ProcessSpec spec;
  processes::Category cat;
  cat.rates = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
  cat.assignment_seed = 4;
  spec.kind = cat;
  spec.n = 200;
  auto gen = processes::generate(spec, 555);

  RunArtifact artifact;
  artifact.process = spec;
  artifact.seed = 555;
  artifact.outcomes = gen.sequence;
  artifact.covariates = gen.covariates;
  artifact.forecaster = forecasters::ForecasterSpec{forecasters::Laplace{}};
  auto info = InformationBase::from_sequence(gen.sequence, gen.covariates);
  artifact.forecasts =
      forecasters::run_forecaster(*artifact.forecaster, gen.sequence, info);

  const json j = to_json(artifact);
  const RunArtifact back = artifact_from_json(j);
  CHECK(to_json(back) == j);
  CHECK(back.outcomes.outcomes == artifact.outcomes.outcomes);
  CHECK(back.covariates == artifact.covariates);
  REQUIRE(back.forecasts.has_value());
  CHECK(back.forecasts->forecasts == artifact.forecasts->forecasts);
  CHECK(back.forecasts->h_based);

  // Replaying the stored process and seed reproduces the stored outcomes.
  auto regen = processes::generate(back.process, back.seed);
  CHECK(regen.sequence.outcomes == back.outcomes.outcomes);
}

TEST_CASE("artifact parsing rejects inconsistent documents") {
  RunArtifact artifact;
  artifact.process = processes::ProcessSpec{processes::Bernoulli{0.5}, 3};
  artifact.seed = 1;
  artifact.outcomes.outcomes = {1, 0, 1};
  const json good = to_json(artifact);
  CHECK_NOTHROW(artifact_from_json(good));

  json skew = good;
  skew["format_version"] = kFormatVersion + 1;
  CHECK_THROWS_AS(artifact_from_json(skew), parse_error);

  json orphan = good;
  orphan["forecasts"] = {0.5, 0.5, 0.5};
  CHECK_THROWS_AS(artifact_from_json(orphan), parse_error);

  json ragged = good;
  ragged["forecaster"] = to_json(forecasters::ForecasterSpec{forecasters::Laplace{}});
  ragged["forecasts"] = {0.5, 0.5};
  CHECK_THROWS_AS(artifact_from_json(ragged), parse_error);

  json unknown = good;
  unknown["process"]["kind"] = "weather";
  CHECK_THROWS_AS(artifact_from_json(unknown), parse_error);
}

TEST_CASE("doubles format to their shortest faithful form") {
  CHECK(format_double(0.5) == "0.5");
  CHECK(format_double(1.0) == "1");
  CHECK(format_double(0.0) == "0");
  CHECK(format_double(-0.25) == "-0.25");
  CHECK(format_double(0.1) == "0.1");
  for (double x : {1.0 / 3.0, 0.1 + 0.2, 1e-17, 12345.6789, -9.99e300}) {
    CHECK(std::stod(format_double(x)) == x);
  }
}

TEST_CASE("report tables print one line per cell") {
  CalibrationReport report;
  report.criterion = Criterion::kSubset;

  ReportCell balanced;
  balanced.id = "balanced";
  balanced.add(0.5, 1.0);
  balanced.add(0.5, 1.0);
  balanced.add(0.5, 0.0);
  balanced.add(0.5, 0.0);
  balanced.verdict = Verdict::kPass;
  report.cells.push_back(balanced);

  ReportCell degenerate;
  degenerate.id = "a,b";
  degenerate.add(1.0, 1.0);
  degenerate.add(1.0, 0.0);
  degenerate.verdict = Verdict::kFail;
  report.cells.push_back(degenerate);

  CHECK(report_csv(report) ==
        "criterion,rule_or_bin,count,mean_p,freq_e,delta,z,verdict\n"
        "subset,balanced,4,0.5,0.5,0,0,pass\n"
        "subset,\"a,b\",2,1,0.5,0.5,,fail\n");
}

TEST_CASE("run tables list step, outcome, forecast and memberships") {
  RunArtifact artifact;
  artifact.process = processes::ProcessSpec{processes::Bernoulli{0.5}, 3};
  artifact.seed = 9;
  artifact.outcomes.outcomes = {1, 0, 1};
  artifact.forecaster = forecasters::ForecasterSpec{forecasters::Constant{0.5}};
  ForecastSeries series;
  series.forecasts = {0.5, 0.25, 1.0};
  artifact.forecasts = series;

  HistoryPredicate low;
  low.forecast_threshold = HistoryPredicate::ForecastThreshold{
      HistoryPredicate::ForecastThreshold::Op::kLessEq, 0.5};
  std::vector<SelectionRule> rules{
      SelectionRule::every_mth(2, 0, "odd"),
      SelectionRule::history(low, "p<=0.5"),
  };
  CHECK(run_csv(artifact, rules) ==
        "step,e,p,rule_memberships\n"
        "1,1,0.5,\"odd;p<=0.5\"\n"
        "2,0,0.25,p<=0.5\n"
        "3,1,1,odd\n");

  // Without stored forecasts the forecast column is empty and threshold
  // rules are refused.
  RunArtifact bare = artifact;
  bare.forecaster.reset();
  bare.forecasts.reset();
  std::vector<SelectionRule> static_only{SelectionRule::every_mth(2, 0, "odd")};
  CHECK(run_csv(bare, static_only) ==
        "step,e,p,rule_memberships\n"
        "1,1,,odd\n"
        "2,0,,\n"
        "3,1,,odd\n");
  CHECK_THROWS_AS(run_csv(bare, rules), std::invalid_argument);
}

TEST_CASE("interval tables carry raw and rounded endpoints") {
  std::vector<intervals::IntervalResult> rows{
      intervals::wilson_interval(0.75, 1, 0.95)};
  const std::string csv = wilson_csv(rows);
  CHECK(csv.find("p_hat,n,confidence,lower,upper,lower_2dp,upper_2dp\n") == 0);
  CHECK(csv.find("0.75,1,0.95,") != std::string::npos);
  CHECK(csv.find(",0.12,0.99\n") != std::string::npos);
}

TEST_CASE("divergence tables number their steps from one") {
  std::vector<double> d{0.25, 0.5};
  CHECK(divergence_csv(d) == "step,d_k\n1,0.25\n2,0.5\n");
}

TEST_CASE("atomic writes land complete and leave no temp file") {
  TempDir dir;
  const auto target = dir.path / "nested" / "out.txt";
  write_file_atomic(target, "hello\n");
  CHECK(read_file(target) == "hello\n");
  CHECK_FALSE(std::filesystem::exists(target.string() + ".tmp"));

  write_file_atomic(target, "replaced");
  CHECK(read_file(target) == "replaced");

  CHECK_THROWS_AS(read_file(dir.path / "absent.txt"), std::runtime_error);
}
