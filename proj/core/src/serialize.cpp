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

#include "prequel/serialize.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <system_error>

namespace prequel::serialize {

namespace {

using nlohmann::json;

const json& require(const json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end()) {
    throw parse_error(std::string("missing key '") + key + "'");
  }
  return *it;
}

std::string kind_string(const json& j) {
  return require(j, "kind").get<std::string>();
}

json prior_to_json(const processes::MixturePrior& prior) {
  json j;
  std::visit(
      [&j](const auto& pr) {
        using P = std::decay_t<decltype(pr)>;
        if constexpr (std::is_same_v<P, processes::Uniform01Prior>) {
          j["kind"] = "uniform01";
        } else if constexpr (std::is_same_v<P, processes::PointPrior>) {
          j["kind"] = "point";
          j["p"] = pr.p;
        } else {
          j["kind"] = "beta";
          j["a"] = pr.a;
          j["b"] = pr.b;
        }
      },
      prior);
  return j;
}

processes::MixturePrior prior_from_json(const json& j) {
  const std::string kind = kind_string(j);
  if (kind == "uniform01") return processes::Uniform01Prior{};
  if (kind == "point") {
    return processes::PointPrior{require(j, "p").get<double>()};
  }
  if (kind == "beta") {
    return processes::BetaPrior{require(j, "a").get<double>(),
                                require(j, "b").get<double>()};
  }
  throw parse_error("unknown prior kind '" + kind + "'");
}

Verdict verdict_from_string(const std::string& s) {
  if (s == "pass") return Verdict::kPass;
  if (s == "fail") return Verdict::kFail;
  if (s == "insufficient") return Verdict::kInsufficient;
  if (s == "empty") return Verdict::kEmpty;
  throw parse_error("unknown verdict '" + s + "'");
}

Criterion criterion_from_string(const std::string& s) {
  if (s == "overall") return Criterion::kOverall;
  if (s == "probability") return Criterion::kProbability;
  if (s == "subset") return Criterion::kSubset;
  if (s == "h_based") return Criterion::kHBased;
  throw parse_error("unknown criterion '" + s + "'");
}

// RFC-4180 style: quote a field when it contains a separator, a quote,
// or a line break; double any embedded quotes.
std::string csv_escape(std::string_view field) {
  const bool needs_quotes =
      field.find_first_of(",\"\n\r;") != std::string_view::npos;
  if (!needs_quotes) return std::string(field);
  std::string out;
  out.reserve(field.size() + 2);
  out.push_back('"');
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

}  // namespace

json to_json(const processes::ProcessSpec& spec) {
  json j;
  j["n"] = spec.n;
  std::visit(
      [&j](const auto& k) {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, processes::Bernoulli>) {
          j["kind"] = "bernoulli";
          j["p"] = k.p;
        } else if constexpr (std::is_same_v<T, processes::Mixture>) {
          j["kind"] = "mixture";
          j["prior"] = prior_to_json(k.prior);
        } else if constexpr (std::is_same_v<T, processes::Polya>) {
          j["kind"] = "polya";
          j["r0"] = k.r0;
          j["b0"] = k.b0;
        } else if constexpr (std::is_same_v<T, processes::Deterministic>) {
          j["kind"] = "deterministic";
          j["pattern"] = k.pattern;
        } else if constexpr (std::is_same_v<T, processes::Markov>) {
          j["kind"] = "markov";
          j["p_initial"] = k.p_initial;
          j["p_after_0"] = k.p_after_0;
          j["p_after_1"] = k.p_after_1;
        } else if constexpr (std::is_same_v<T, processes::Category>) {
          j["kind"] = "category";
          j["rates"] = k.rates;
          j["assignment_seed"] = k.assignment_seed;
        } else {
          j["kind"] = "two_level";
          j["rates"] = k.rates;
          j["weights"] = k.weights;
          j["coarse"] = k.coarse;
        }
      },
      spec.kind);
  return j;
}

processes::ProcessSpec process_from_json(const json& j) {
  processes::ProcessSpec spec;
  spec.n = require(j, "n").get<std::size_t>();
  const std::string kind = kind_string(j);
  if (kind == "bernoulli") {
    spec.kind = processes::Bernoulli{require(j, "p").get<double>()};
  } else if (kind == "mixture") {
    spec.kind = processes::Mixture{prior_from_json(require(j, "prior"))};
  } else if (kind == "polya") {
    spec.kind = processes::Polya{require(j, "r0").get<std::uint64_t>(),
                                 require(j, "b0").get<std::uint64_t>()};
  } else if (kind == "deterministic") {
    spec.kind = processes::Deterministic{
        require(j, "pattern").get<std::vector<Outcome>>()};
  } else if (kind == "markov") {
    spec.kind = processes::Markov{require(j, "p_initial").get<double>(),
                                  require(j, "p_after_0").get<double>(),
                                  require(j, "p_after_1").get<double>()};
  } else if (kind == "category") {
    processes::Category category;
    category.rates = require(j, "rates").get<std::array<double, 9>>();
    category.assignment_seed = require(j, "assignment_seed").get<std::uint64_t>();
    spec.kind = category;
  } else if (kind == "two_level") {
    spec.kind = processes::TwoLevel{
        require(j, "rates").get<std::vector<double>>(),
        require(j, "weights").get<std::vector<double>>(),
        require(j, "coarse").get<double>()};
  } else {
    throw parse_error("unknown process kind '" + kind + "'");
  }
  spec.validate();
  return spec;
}

json to_json(const forecasters::ForecasterSpec& spec) {
  json j;
  std::visit(
      [&j](const auto& f) {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, forecasters::Constant>) {
          j["kind"] = "constant";
          j["c"] = f.c;
        } else if constexpr (std::is_same_v<T, forecasters::Climatology>) {
          j["kind"] = "climatology";
          j["prior_weight"] = f.prior_weight;
        } else if constexpr (std::is_same_v<T, forecasters::Laplace>) {
          j["kind"] = "laplace";
        } else if constexpr (std::is_same_v<T, forecasters::PolyaPredictive>) {
          j["kind"] = "polya_predictive";
          j["r0"] = f.r0;
          j["b0"] = f.b0;
        } else if constexpr (std::is_same_v<T, forecasters::Oracle>) {
          j["kind"] = "oracle";
        } else if constexpr (std::is_same_v<T, forecasters::CategoryTable>) {
          j["kind"] = "category_table";
          j["rates"] = f.rates;
          j["covariate"] = f.covariate_name;
        } else {
          j["kind"] = "bayes_mixture";
          j["prior"] = prior_to_json(f.prior);
        }
      },
      spec.kind);
  return j;
}

forecasters::ForecasterSpec forecaster_from_json(const json& j) {
  forecasters::ForecasterSpec spec;
  const std::string kind = kind_string(j);
  if (kind == "constant") {
    spec.kind = forecasters::Constant{require(j, "c").get<double>()};
  } else if (kind == "climatology") {
    spec.kind =
        forecasters::Climatology{require(j, "prior_weight").get<double>()};
  } else if (kind == "laplace") {
    spec.kind = forecasters::Laplace{};
  } else if (kind == "polya_predictive") {
    spec.kind =
        forecasters::PolyaPredictive{require(j, "r0").get<std::uint64_t>(),
                                     require(j, "b0").get<std::uint64_t>()};
  } else if (kind == "oracle") {
    spec.kind = forecasters::Oracle{};
  } else if (kind == "category_table") {
    spec.kind = forecasters::CategoryTable{
        require(j, "rates").get<std::vector<double>>(),
        require(j, "covariate").get<std::string>()};
  } else if (kind == "bayes_mixture") {
    spec.kind =
        forecasters::BayesMixture{prior_from_json(require(j, "prior"))};
  } else {
    throw parse_error("unknown forecaster kind '" + kind + "'");
  }
  spec.validate();
  return spec;
}

json to_json(const SelectionRule& rule) {
  json j;
  j["id"] = rule.rule_id;
  switch (rule.kind) {
    case RuleKind::kAll:
      j["kind"] = "all";
      break;
    case RuleKind::kEveryMth:
      j["kind"] = "every_mth";
      j["m"] = rule.m;
      j["offset"] = rule.offset;
      break;
    case RuleKind::kIndexSet:
      j["kind"] = "index_set";
      j["indices"] = rule.indices;
      break;
    case RuleKind::kHistoryPredicate: {
      j["kind"] = "history";
      const HistoryPredicate& p = rule.predicate;
      if (p.last_window) j["last_window"] = *p.last_window;
      if (p.step_mod) {
        j["step_mod"] = {{"modulus", p.step_mod->modulus},
                         {"residue", p.step_mod->residue}};
      }
      if (p.covariate_eq) {
        j["covariate_eq"] = {{"name", p.covariate_eq->name},
                             {"value", p.covariate_eq->value}};
      }
      if (p.forecast_threshold) {
        using Op = HistoryPredicate::ForecastThreshold::Op;
        j["forecast_threshold"] = {
            {"op", p.forecast_threshold->op == Op::kLessEq ? "<=" : ">"},
            {"value", p.forecast_threshold->value}};
      }
      break;
    }
  }
  return j;
}

SelectionRule rule_from_json(const json& j) {
  const std::string kind = kind_string(j);
  const std::string id = require(j, "id").get<std::string>();
  SelectionRule rule;
  if (kind == "all") {
    rule = SelectionRule::all(id);
  } else if (kind == "every_mth") {
    rule = SelectionRule::every_mth(require(j, "m").get<std::uint64_t>(),
                                    require(j, "offset").get<std::uint64_t>(),
                                    id);
  } else if (kind == "index_set") {
    rule = SelectionRule::index_set(
        require(j, "indices").get<std::vector<std::size_t>>(), id);
  } else if (kind == "history") {
    HistoryPredicate predicate;
    if (j.contains("last_window")) {
      predicate.last_window = j["last_window"].get<std::vector<Outcome>>();
    }
    if (j.contains("step_mod")) {
      predicate.step_mod = HistoryPredicate::StepMod{
          require(j["step_mod"], "modulus").get<std::uint32_t>(),
          require(j["step_mod"], "residue").get<std::uint32_t>()};
    }
    if (j.contains("covariate_eq")) {
      predicate.covariate_eq = HistoryPredicate::CovariateEq{
          require(j["covariate_eq"], "name").get<std::string>(),
          require(j["covariate_eq"], "value").get<double>()};
    }
    if (j.contains("forecast_threshold")) {
      const json& t = j["forecast_threshold"];
      const std::string op = require(t, "op").get<std::string>();
      using Op = HistoryPredicate::ForecastThreshold::Op;
      if (op != "<=" && op != ">") {
        throw parse_error("unknown threshold op '" + op + "'");
      }
      predicate.forecast_threshold = HistoryPredicate::ForecastThreshold{
          op == "<=" ? Op::kLessEq : Op::kGreater,
          require(t, "value").get<double>()};
    }
    rule = SelectionRule::history(std::move(predicate), id);
  } else {
    throw parse_error("unknown rule kind '" + kind + "'");
  }
  rule.validate();
  return rule;
}

json to_json(const experiments::ExperimentSpec& spec) {
  json j;
  switch (spec.kind) {
    case experiments::ExperimentKind::kIdentification:
      j["kind"] = "identification";
      j["process"] = to_json(spec.process);
      j["forecaster_a"] = to_json(spec.forecaster_a);
      j["forecaster_b"] = to_json(spec.forecaster_b);
      break;
    case experiments::ExperimentKind::kInfoBase:
      j["kind"] = "info_base";
      j["process"] = to_json(spec.process);
      j["coarse"] = to_json(spec.forecaster_a);
      j["deep"] = to_json(spec.forecaster_b);
      j["target"] = spec.target;
      j["tolerance"] = spec.tolerance;
      break;
    case experiments::ExperimentKind::kDefinetti:
      j["kind"] = "definetti";
      j["r0"] = spec.r0;
      j["b0"] = spec.b0;
      j["n"] = spec.n;
      j["replicates"] = spec.replicates;
      break;
    case experiments::ExperimentKind::kCrossedArray:
      j["kind"] = "crossed_array";
      j["abilities"] = spec.crossed.abilities;
      j["difficulties"] = spec.crossed.difficulties;
      j["resits"] = spec.crossed.resits;
      j["resit_mode"] = spec.crossed.resit_mode ==
                                experiments::ResitMode::kPolya
                            ? "polya"
                            : "iid";
      j["polya_strength"] = spec.crossed.polya_strength;
      j["student"] = spec.student;
      j["exam"] = spec.exam;
      break;
  }
  return j;
}

experiments::ExperimentSpec experiment_from_json(const json& j) {
  experiments::ExperimentSpec spec;
  const std::string kind = kind_string(j);
  if (kind == "identification") {
    spec.kind = experiments::ExperimentKind::kIdentification;
    spec.process = process_from_json(require(j, "process"));
    spec.forecaster_a = forecaster_from_json(require(j, "forecaster_a"));
    spec.forecaster_b = forecaster_from_json(require(j, "forecaster_b"));
  } else if (kind == "info_base") {
    spec.kind = experiments::ExperimentKind::kInfoBase;
    spec.process = process_from_json(require(j, "process"));
    spec.forecaster_a = forecaster_from_json(require(j, "coarse"));
    spec.forecaster_b = forecaster_from_json(require(j, "deep"));
    spec.target = require(j, "target").get<double>();
    spec.tolerance = require(j, "tolerance").get<double>();
  } else if (kind == "definetti") {
    spec.kind = experiments::ExperimentKind::kDefinetti;
    spec.r0 = require(j, "r0").get<std::uint64_t>();
    spec.b0 = require(j, "b0").get<std::uint64_t>();
    spec.n = require(j, "n").get<std::size_t>();
    spec.replicates = require(j, "replicates").get<std::size_t>();
  } else if (kind == "crossed_array") {
    spec.kind = experiments::ExperimentKind::kCrossedArray;
    spec.crossed.abilities = require(j, "abilities").get<std::vector<double>>();
    spec.crossed.difficulties =
        require(j, "difficulties").get<std::vector<double>>();
    if (j.contains("resits")) {
      spec.crossed.resits = j["resits"].get<std::size_t>();
    }
    if (j.contains("resit_mode")) {
      const std::string mode = j["resit_mode"].get<std::string>();
      if (mode == "iid") {
        spec.crossed.resit_mode = experiments::ResitMode::kIid;
      } else if (mode == "polya") {
        spec.crossed.resit_mode = experiments::ResitMode::kPolya;
      } else {
        throw parse_error("unknown resit mode '" + mode + "'");
      }
    }
    if (j.contains("polya_strength")) {
      spec.crossed.polya_strength = j["polya_strength"].get<double>();
    }
    spec.student = require(j, "student").get<std::size_t>();
    spec.exam = require(j, "exam").get<std::size_t>();
  } else {
    throw parse_error("unknown experiment kind '" + kind + "'");
  }
  spec.validate();
  return spec;
}

json to_json(const CalibrationReport& report) {
  json j;
  j["criterion"] = std::string(to_string(report.criterion));
  j["significance"] = report.significance;
  j["m_min"] = report.m_min;
  if (report.bin_width) j["bin_width"] = *report.bin_width;
  j["global_verdict"] = std::string(to_string(report.global_verdict));
  json cells = json::array();
  for (const ReportCell& cell : report.cells) {
    json c;
    c["id"] = cell.id;
    c["count"] = cell.count;
    c["sum_p"] = cell.sum_p;
    c["sum_e"] = cell.sum_e;
    c["sum_pq"] = cell.sum_pq;
    c["mean_p"] = cell.mean_p();
    c["freq_e"] = cell.freq_e();
    c["delta"] = cell.delta();
    if (cell.z_defined()) {
      c["z"] = cell.z();
    } else {
      c["z"] = nullptr;
    }
    c["verdict"] = std::string(to_string(cell.verdict));
    cells.push_back(std::move(c));
  }
  j["cells"] = std::move(cells);
  return j;
}

CalibrationReport report_from_json(const json& j) {
  CalibrationReport report;
  report.criterion =
      criterion_from_string(require(j, "criterion").get<std::string>());
  report.significance = require(j, "significance").get<double>();
  report.m_min = require(j, "m_min").get<std::size_t>();
  if (j.contains("bin_width") && !j["bin_width"].is_null()) {
    report.bin_width = j["bin_width"].get<double>();
  }
  report.global_verdict =
      verdict_from_string(require(j, "global_verdict").get<std::string>());
  for (const json& c : require(j, "cells")) {
    ReportCell cell;
    cell.id = require(c, "id").get<std::string>();
    cell.count = require(c, "count").get<std::size_t>();
    cell.sum_p = require(c, "sum_p").get<double>();
    cell.sum_e = require(c, "sum_e").get<double>();
    cell.sum_pq = require(c, "sum_pq").get<double>();
    cell.verdict = verdict_from_string(require(c, "verdict").get<std::string>());
    report.cells.push_back(std::move(cell));
  }
  return report;
}

json to_json(const RunArtifact& artifact) {
  json j;
  j["format_version"] = artifact.format_version;
  j["process"] = to_json(artifact.process);
  j["seed"] = artifact.seed;
  j["outcomes"] = artifact.outcomes.outcomes;
  if (!artifact.covariates.empty()) j["covariates"] = artifact.covariates;
  if (artifact.forecaster) j["forecaster"] = to_json(*artifact.forecaster);
  if (artifact.forecasts) j["forecasts"] = artifact.forecasts->forecasts;
  return j;
}

RunArtifact artifact_from_json(const json& j) {
  RunArtifact artifact;
  artifact.format_version = require(j, "format_version").get<int>();
  if (artifact.format_version != kFormatVersion) {
    throw parse_error("artifact format version " +
                      std::to_string(artifact.format_version) +
                      " does not match this build's version " +
                      std::to_string(kFormatVersion));
  }
  artifact.process = process_from_json(require(j, "process"));
  artifact.seed = require(j, "seed").get<std::uint64_t>();
  artifact.outcomes.outcomes =
      require(j, "outcomes").get<std::vector<Outcome>>();
  artifact.outcomes.process_id = artifact.process.id();
  artifact.outcomes.seed = artifact.seed;
  artifact.outcomes.validate();
  if (j.contains("covariates")) {
    artifact.covariates = j["covariates"].get<CovariateStreams>();
  }
  if (j.contains("forecaster")) {
    artifact.forecaster = forecaster_from_json(j["forecaster"]);
  }
  if (j.contains("forecasts")) {
    if (!artifact.forecaster) {
      throw parse_error("artifact stores forecasts without a forecaster");
    }
    ForecastSeries series;
    series.forecasts = j["forecasts"].get<std::vector<double>>();
    series.forecaster_id = artifact.forecaster->id();
    series.h_based = artifact.forecaster->h_based();
    series.validate();
    if (series.size() != artifact.outcomes.size()) {
      throw parse_error("artifact forecasts and outcomes differ in length");
    }
    artifact.forecasts = std::move(series);
  }
  return artifact;
}

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  char buffer[64];
  const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), x);
  if (ec != std::errc()) throw std::runtime_error("double formatting failed");
  return std::string(buffer, ptr);
}

std::string report_csv(const CalibrationReport& report) {
  std::ostringstream os;
  os << "criterion,rule_or_bin,count,mean_p,freq_e,delta,z,verdict\n";
  const std::string criterion(to_string(report.criterion));
  for (const ReportCell& cell : report.cells) {
    os << criterion << ',' << csv_escape(cell.id) << ',' << cell.count << ','
       << format_double(cell.mean_p()) << ',' << format_double(cell.freq_e())
       << ',' << format_double(cell.delta()) << ',';
    if (cell.z_defined()) os << format_double(cell.z());
    os << ',' << to_string(cell.verdict) << '\n';
  }
  return os.str();
}

std::string run_csv(const RunArtifact& artifact,
                    std::span<const SelectionRule> rules) {
  for (const SelectionRule& rule : rules) {
    rule.validate();
    if (rule.uses_forecast() && !artifact.forecasts) {
      throw std::invalid_argument("rule '" + rule.rule_id +
                                  "' thresholds the forecast, but the "
                                  "artifact stores no forecasts");
    }
  }
  const InformationBase info =
      InformationBase::from_sequence(artifact.outcomes, artifact.covariates);
  std::ostringstream os;
  os << "step,e,p,rule_memberships\n";
  for (std::size_t k = 1; k <= artifact.outcomes.size(); ++k) {
    os << k << ',' << static_cast<int>(artifact.outcomes.outcomes[k - 1])
       << ',';
    std::optional<double> forecast;
    if (artifact.forecasts) {
      forecast = artifact.forecasts->forecasts[k - 1];
      os << format_double(*forecast);
    }
    os << ',';
    std::string memberships;
    const InformationRecord record = info.record(k);
    for (const SelectionRule& rule : rules) {
      if (!rule_member(rule, k, record, forecast)) continue;
      if (!memberships.empty()) memberships.push_back(';');
      memberships += rule.rule_id;
    }
    os << csv_escape(memberships) << '\n';
  }
  return os.str();
}

std::string wilson_csv(std::span<const intervals::IntervalResult> rows) {
  std::ostringstream os;
  os << "p_hat,n,confidence,lower,upper,lower_2dp,upper_2dp\n";
  for (const intervals::IntervalResult& r : rows) {
    os << format_double(r.p_hat) << ',' << r.n << ','
       << format_double(r.confidence) << ',' << format_double(r.lower) << ','
       << format_double(r.upper) << ','
       << format_double(intervals::round2(r.lower)) << ','
       << format_double(intervals::round2(r.upper)) << '\n';
  }
  return os.str();
}

std::string divergence_csv(std::span<const double> divergence) {
  std::ostringstream os;
  os << "step,d_k\n";
  for (std::size_t i = 0; i < divergence.size(); ++i) {
    os << (i + 1) << ',' << format_double(divergence[i]) << '\n';
  }
  return os.str();
}

void write_file_atomic(const std::filesystem::path& path,
                       std::string_view content) {
  const std::filesystem::path dir = path.parent_path();
  if (!dir.empty()) std::filesystem::create_directories(dir);
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw std::runtime_error("cannot open '" + tmp.string() +
                               "' for writing");
    }
    out.write(content.data(),
              static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      throw std::runtime_error("short write to '" + tmp.string() + "'");
    }
  }
  std::filesystem::rename(tmp, path);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("cannot open '" + path.string() +
                             "' for reading");
  }
  std::ostringstream os;
  os << in.rdbuf();
  if (in.bad()) {
    throw std::runtime_error("read failure on '" + path.string() + "'");
  }
  return os.str();
}

}  // namespace prequel::serialize
