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

// Command-line front end. Every command validates its inputs, writes its
// artifacts atomically under --out, and prints a single JSON line to
// stdout. Exit codes: 0 success, 1 invalid input, 2 runtime failure.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "prequel/calibration.hpp"
#include "prequel/experiments.hpp"
#include "prequel/forecasters.hpp"
#include "prequel/intervals.hpp"
#include "prequel/processes.hpp"
#include "prequel/run.hpp"
#include "prequel/serialize.hpp"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using namespace prequel;

struct Options {
  std::string command;
  std::string config_path;
  std::string artifact_path;
  std::uint64_t seed = 0;
  std::string out_dir = ".";
  std::string format = "csv";
  // wilson
  double p_hat = 0.75;
  std::optional<std::uint64_t> trials;
  double confidence = 0.95;
  // adversary fallback length when the config carries none
  std::size_t adversary_n = 10000;
};

json load_config(const std::string& path) {
  if (path.empty()) {
    throw serialize::parse_error("this command needs --config");
  }
  const std::string text = serialize::read_file(path);
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw serialize::parse_error("config '" + path +
                                 "' is not valid JSON: " + e.what());
  }
}

void emit(const json& summary) { std::cout << summary.dump() << "\n"; }

fs::path out_path(const Options& opt, const std::string& name) {
  return fs::path(opt.out_dir) / name;
}

serialize::RunArtifact build_run_artifact(const processes::ProcessSpec& spec,
                                          std::uint64_t seed) {
  processes::GeneratedRun gen = processes::generate(spec, seed);
  serialize::RunArtifact artifact;
  artifact.process = spec;
  artifact.seed = seed;
  artifact.outcomes = std::move(gen.sequence);
  artifact.covariates = std::move(gen.covariates);
  return artifact;
}

void attach_forecasts(serialize::RunArtifact& artifact,
                      const forecasters::ForecasterSpec& forecaster) {
  const InformationBase info =
      InformationBase::from_sequence(artifact.outcomes, artifact.covariates);
  artifact.forecaster = forecaster;
  artifact.forecasts =
      forecasters::run_forecaster(forecaster, artifact.outcomes, info);
}

std::vector<SelectionRule> rules_from_config(const json& config) {
  std::vector<SelectionRule> rules;
  for (const json& r : config.at("rules")) {
    rules.push_back(serialize::rule_from_json(r));
  }
  return rules;
}

// Loads a run with forecasts: either from an existing artifact file or by
// generating + forecasting from inline specs.
serialize::RunArtifact load_forecast_run(const Options& opt,
                                         const json& config) {
  if (config.contains("artifact")) {
    serialize::RunArtifact artifact = serialize::artifact_from_json(
        json::parse(serialize::read_file(config["artifact"].get<std::string>())));
    return artifact;
  }
  if (!config.contains("process") || !config.contains("forecaster")) {
    throw serialize::parse_error(
        "config needs either 'artifact' or both 'process' and 'forecaster'");
  }
  serialize::RunArtifact artifact = build_run_artifact(
      serialize::process_from_json(config["process"]), opt.seed);
  attach_forecasts(artifact,
                   serialize::forecaster_from_json(config["forecaster"]));
  return artifact;
}

int cmd_simulate(const Options& opt) {
  const json config = load_config(opt.config_path);
  const processes::ProcessSpec spec =
      serialize::process_from_json(config.at("process"));
  const serialize::RunArtifact artifact = build_run_artifact(spec, opt.seed);

  const fs::path artifact_path = out_path(opt, "run.json");
  serialize::write_file_atomic(artifact_path, serialize::to_json(artifact).dump(2) + "\n");
  json summary = {{"command", "simulate"},
                  {"process", spec.id()},
                  {"seed", opt.seed},
                  {"n", artifact.outcomes.size()},
                  {"artifact", artifact_path.string()}};
  if (opt.format == "csv") {
    const fs::path csv_path = out_path(opt, "run.csv");
    serialize::write_file_atomic(csv_path, serialize::run_csv(artifact));
    summary["csv"] = csv_path.string();
  }
  emit(summary);
  return 0;
}

int cmd_forecast(const Options& opt) {
  const json config = load_config(opt.config_path);
  serialize::RunArtifact artifact;
  if (config.contains("artifact")) {
    artifact = serialize::artifact_from_json(
        json::parse(serialize::read_file(config["artifact"].get<std::string>())));
  } else {
    artifact = build_run_artifact(
        serialize::process_from_json(config.at("process")), opt.seed);
  }
  attach_forecasts(artifact,
                   serialize::forecaster_from_json(config.at("forecaster")));

  const fs::path artifact_path = out_path(opt, "run.json");
  serialize::write_file_atomic(artifact_path, serialize::to_json(artifact).dump(2) + "\n");
  json summary = {{"command", "forecast"},
                  {"process", artifact.process.id()},
                  {"forecaster", artifact.forecaster->id()},
                  {"seed", artifact.seed},
                  {"n", artifact.outcomes.size()},
                  {"artifact", artifact_path.string()}};
  if (opt.format == "csv") {
    const fs::path csv_path = out_path(opt, "run.csv");
    serialize::write_file_atomic(csv_path, serialize::run_csv(artifact));
    summary["csv"] = csv_path.string();
  }
  emit(summary);
  return 0;
}

int cmd_evaluate(const Options& opt) {
  const json config = load_config(opt.config_path);
  const serialize::RunArtifact artifact = load_forecast_run(opt, config);
  if (!artifact.forecasts) {
    throw serialize::parse_error("evaluation needs forecasts in the run");
  }
  const ValidatedRun run =
      align_run(artifact.outcomes, *artifact.forecasts);

  calibration::EvalParams params;
  if (config.contains("significance")) {
    params.significance = config["significance"].get<double>();
  }
  if (config.contains("m_min")) {
    params.m_min = config["m_min"].get<std::size_t>();
  }
  const std::string criterion = config.value("criterion", std::string("overall"));

  CalibrationReport report;
  if (criterion == "overall") {
    report = calibration::overall_calibration(run, params);
  } else if (criterion == "probability") {
    calibration::BinSpec bins;
    if (config.contains("bin_width")) {
      bins.width = config["bin_width"].get<double>();
    }
    bins.m_min = params.m_min;
    report = calibration::probability_calibration(run, bins, params.significance);
  } else if (criterion == "subset") {
    const std::vector<SelectionRule> rules = rules_from_config(config);
    report = calibration::subset_calibration(run, rules, params);
  } else if (criterion == "h_based") {
    const InformationBase info =
        InformationBase::from_sequence(artifact.outcomes, artifact.covariates);
    std::vector<SelectionRule> rules;
    if (config.contains("rules")) {
      rules = rules_from_config(config);
    } else {
      rules = calibration::default_rule_family();
    }
    report = calibration::h_calibration(run, info, rules, params);
  } else {
    throw serialize::parse_error("unknown criterion '" + criterion + "'");
  }

  json summary = {{"command", "evaluate"},
                  {"criterion", std::string(to_string(report.criterion))},
                  {"cells", report.cells.size()},
                  {"verdict", std::string(to_string(report.global_verdict))}};
  if (opt.format == "json") {
    const fs::path path = out_path(opt, "report.json");
    serialize::write_file_atomic(path, serialize::to_json(report).dump(2) + "\n");
    summary["report"] = path.string();
  } else {
    const fs::path path = out_path(opt, "report.csv");
    serialize::write_file_atomic(path, serialize::report_csv(report));
    summary["report"] = path.string();
  }
  emit(summary);
  return 0;
}

int cmd_adversary(const Options& opt) {
  const json config = load_config(opt.config_path);
  const forecasters::ForecasterSpec forecaster =
      serialize::forecaster_from_json(config.at("forecaster"));
  const std::size_t n = config.value("n", opt.adversary_n);

  calibration::AdversaryResult result =
      calibration::adversarial_outcomes(forecaster, n);
  const ValidatedRun run = align_run(result.outcomes, result.forecasts);
  const InformationBase info = InformationBase::from_sequence(run.outcomes);
  const std::vector<SelectionRule> rules = {SelectionRule::all(),
                                            result.defeat_rule};
  const CalibrationReport report =
      calibration::h_calibration(run, info, rules, {});

  double defeat_delta = 0.0;
  for (const ReportCell& cell : report.cells) {
    if (cell.id == result.defeat_rule.rule_id) defeat_delta = cell.delta();
  }

  json summary = {{"command", "adversary"},
                  {"forecaster", forecaster.id()},
                  {"n", n},
                  {"defeat_rule", result.defeat_rule.rule_id},
                  {"delta", defeat_delta},
                  {"verdict", std::string(to_string(report.global_verdict))}};
  if (opt.format == "json") {
    const fs::path path = out_path(opt, "adversary.json");
    serialize::write_file_atomic(path, serialize::to_json(report).dump(2) + "\n");
    summary["report"] = path.string();
  } else {
    const fs::path path = out_path(opt, "adversary.csv");
    serialize::write_file_atomic(path, serialize::report_csv(report));
    summary["report"] = path.string();
  }
  emit(summary);
  return 0;
}

int cmd_experiment(const Options& opt) {
  const json config = load_config(opt.config_path);
  const experiments::ExperimentSpec spec = serialize::experiment_from_json(
      config.contains("experiment") ? config["experiment"] : config);

  json summary = {{"command", "experiment"}, {"experiment", spec.id()}};
  switch (spec.kind) {
    case experiments::ExperimentKind::kIdentification: {
      const experiments::IdentificationResult result =
          experiments::run_identification(spec.process, spec.forecaster_a,
                                          spec.forecaster_b, opt.seed);
      const fs::path path = out_path(opt, "divergence.csv");
      serialize::write_file_atomic(path,
                                   serialize::divergence_csv(result.divergence));
      summary["tail_max"] = result.tail_max;
      summary["csv"] = path.string();
      break;
    }
    case experiments::ExperimentKind::kInfoBase: {
      const experiments::InfoBaseResult result = experiments::run_info_base(
          spec.process, spec.forecaster_a, spec.forecaster_b, opt.seed,
          spec.target, spec.tolerance);
      summary["selected_steps"] = result.selected_steps;
      summary["coarse_mean"] = result.coarse_mean;
      summary["deep_mean"] = result.deep_mean;
      summary["outcome_mean"] = result.outcome_mean;
      break;
    }
    case experiments::ExperimentKind::kDefinetti: {
      const experiments::DefinettiResult result = experiments::run_definetti(
          spec.r0, spec.b0, spec.n, spec.replicates, opt.seed);
      std::string csv = "replicate,frequency\n";
      for (std::size_t i = 0; i < result.frequencies.size(); ++i) {
        csv += std::to_string(i) + "," +
               serialize::format_double(result.frequencies[i]) + "\n";
      }
      const fs::path path = out_path(opt, "frequencies.csv");
      serialize::write_file_atomic(path, csv);
      summary["ks_distance"] = result.ks_distance;
      summary["replicates"] = result.frequencies.size();
      summary["csv"] = path.string();
      break;
    }
    case experiments::ExperimentKind::kCrossedArray: {
      const experiments::CrossedArray array =
          experiments::make_crossed_array(spec.crossed, opt.seed);
      const experiments::CrossedRisks risks =
          experiments::run_crossed_array(array, spec.student, spec.exam);
      std::string csv =
          "row_margin,column_margin,cell_probability,row_draws,column_draws\n";
      csv += serialize::format_double(risks.row_margin) + "," +
             serialize::format_double(risks.column_margin) + "," +
             serialize::format_double(risks.cell_probability) + "," +
             std::to_string(risks.row_draws) + "," +
             std::to_string(risks.column_draws) + "\n";
      const fs::path path = out_path(opt, "risks.csv");
      serialize::write_file_atomic(path, csv);
      summary["row_margin"] = risks.row_margin;
      summary["column_margin"] = risks.column_margin;
      summary["cell_probability"] = risks.cell_probability;
      summary["csv"] = path.string();
      break;
    }
  }
  emit(summary);
  return 0;
}

int cmd_wilson(const Options& opt) {
  std::vector<intervals::IntervalResult> rows;
  if (opt.trials) {
    rows.push_back(intervals::wilson_interval(opt.p_hat, *opt.trials,
                                              opt.confidence));
  } else {
    for (std::size_t n : {10000, 1000, 100, 1}) {
      rows.push_back(intervals::wilson_interval(opt.p_hat, n, opt.confidence));
    }
  }

  json summary = {{"command", "wilson"}, {"rows", rows.size()}};
  if (rows.size() == 1) {
    summary["p_hat"] = rows[0].p_hat;
    summary["n"] = rows[0].n;
    summary["lower"] = rows[0].lower;
    summary["upper"] = rows[0].upper;
    summary["lower_2dp"] = intervals::round2(rows[0].lower);
    summary["upper_2dp"] = intervals::round2(rows[0].upper);
  }
  if (opt.format == "json") {
    json table = json::array();
    for (const auto& r : rows) {
      table.push_back({{"p_hat", r.p_hat},
                       {"n", r.n},
                       {"confidence", r.confidence},
                       {"lower", r.lower},
                       {"upper", r.upper},
                       {"lower_2dp", intervals::round2(r.lower)},
                       {"upper_2dp", intervals::round2(r.upper)},
                       {"method", r.method}});
    }
    const fs::path path = out_path(opt, "wilson.json");
    serialize::write_file_atomic(path, table.dump(2) + "\n");
    summary["table"] = path.string();
  } else {
    const fs::path path = out_path(opt, "wilson.csv");
    serialize::write_file_atomic(path, serialize::wilson_csv(rows));
    summary["table"] = path.string();
  }
  emit(summary);
  return 0;
}

int cmd_replay(const Options& opt) {
  if (opt.artifact_path.empty()) {
    throw serialize::parse_error("replay needs --artifact");
  }
  const serialize::RunArtifact stored = serialize::artifact_from_json(
      json::parse(serialize::read_file(opt.artifact_path)));

  serialize::RunArtifact regenerated =
      build_run_artifact(stored.process, stored.seed);
  if (stored.forecaster) {
    attach_forecasts(regenerated, *stored.forecaster);
  }

  const bool outcomes_match =
      regenerated.outcomes.outcomes == stored.outcomes.outcomes;
  bool forecasts_match = true;
  if (stored.forecasts) {
    forecasts_match = regenerated.forecasts &&
                      regenerated.forecasts->forecasts ==
                          stored.forecasts->forecasts;
  }

  json summary = {{"command", "replay"},
                  {"artifact", opt.artifact_path},
                  {"process", stored.process.id()},
                  {"seed", stored.seed},
                  {"outcomes_match", outcomes_match},
                  {"forecasts_match", forecasts_match}};
  if (stored.forecasts && outcomes_match && forecasts_match) {
    const ValidatedRun stored_run =
        align_run(stored.outcomes, *stored.forecasts);
    const ValidatedRun regen_run =
        align_run(regenerated.outcomes, *regenerated.forecasts);
    const CalibrationReport a = calibration::overall_calibration(stored_run);
    const CalibrationReport b = calibration::overall_calibration(regen_run);
    const double drift =
        std::fabs(a.cells[0].delta() - b.cells[0].delta());
    summary["report_drift"] = drift;
  }
  emit(summary);
  if (!outcomes_match || !forecasts_match) {
    std::cerr << "replay mismatch: the stored run does not reproduce from "
                 "its spec and seed\n";
    return 2;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  Options opt;
  CLI::App app{"prequential calibration workbench"};
  app.require_subcommand(1);

  const auto add_common = [&opt](CLI::App* cmd) {
    cmd->add_option("--seed", opt.seed, "top-level random seed");
    cmd->add_option("--out", opt.out_dir, "output directory");
    cmd->add_option("--format", opt.format, "report format")
        ->check(CLI::IsMember({"csv", "json"}));
  };

  CLI::App* simulate =
      app.add_subcommand("simulate", "generate an outcome sequence");
  simulate->add_option("--config", opt.config_path, "process config JSON")
      ->required();
  add_common(simulate);

  CLI::App* forecast =
      app.add_subcommand("forecast", "run a forecaster over a sequence");
  forecast->add_option("--config", opt.config_path,
                       "process + forecaster config JSON")
      ->required();
  add_common(forecast);

  CLI::App* evaluate =
      app.add_subcommand("evaluate", "score forecasts against outcomes");
  evaluate->add_option("--config", opt.config_path, "evaluation config JSON")
      ->required();
  add_common(evaluate);

  CLI::App* adversary = app.add_subcommand(
      "adversary", "generate outcomes that defeat a forecaster");
  adversary->add_option("--config", opt.config_path, "forecaster config JSON")
      ->required();
  add_common(adversary);

  CLI::App* experiment =
      app.add_subcommand("experiment", "run a composite experiment");
  experiment->add_option("--config", opt.config_path, "experiment spec JSON")
      ->required();
  add_common(experiment);

  CLI::App* wilson =
      app.add_subcommand("wilson", "binomial score intervals");
  wilson->add_option("--phat", opt.p_hat, "observed proportion");
  wilson->add_option("--n", opt.trials, "number of trials");
  wilson->add_option("--conf", opt.confidence, "confidence level");
  add_common(wilson);

  CLI::App* replay =
      app.add_subcommand("replay", "re-run a stored artifact and compare");
  replay->add_option("--artifact", opt.artifact_path, "run artifact path")
      ->required();
  add_common(replay);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    app.exit(e);
    emit({{"error", e.what()}});
    return 1;
  }

  try {
    if (simulate->parsed()) return cmd_simulate(opt);
    if (forecast->parsed()) return cmd_forecast(opt);
    if (evaluate->parsed()) return cmd_evaluate(opt);
    if (adversary->parsed()) return cmd_adversary(opt);
    if (experiment->parsed()) return cmd_experiment(opt);
    if (wilson->parsed()) return cmd_wilson(opt);
    if (replay->parsed()) return cmd_replay(opt);
    emit({{"error", "no command"}});
    return 1;
  } catch (const serialize::parse_error& e) {
    std::cerr << e.what() << "\n";
    emit({{"error", e.what()}});
    return 1;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << e.what() << "\n";
    emit({{"error", e.what()}});
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << e.what() << "\n";
    emit({{"error", e.what()}});
    return 1;
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    emit({{"error", e.what()}});
    return 2;
  }
}
