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

// Release gate: every shipped claim checked end-to-end, one line per
// criterion. Statistical criteria run at the scale and tolerance stated
// in their line; seeds are fixed so the gate is deterministic.

#include <cmath>
#include <cstdint>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "prequel/calibration.hpp"
#include "prequel/experiments.hpp"
#include "prequel/forecasters.hpp"
#include "prequel/intervals.hpp"
#include "prequel/processes.hpp"
#include "prequel/rng.hpp"
#include "prequel/run.hpp"
#include "prequel/serialize.hpp"
#include "prequel/stats.hpp"

namespace {

using namespace prequel;
using rng::SplitMix64;

constexpr std::uint64_t kGateSeed = 20260817;

int failures = 0;

void report(int index, const std::string& name, bool ok,
            const std::string& detail) {
  std::cout << (ok ? "PASS" : "FAIL") << " criterion " << index << " ("
            << name << "): " << detail << "\n";
  if (!ok) ++failures;
}

template <typename Fn>
void guarded(int index, const std::string& name, Fn&& fn) {
  try {
    fn();
  } catch (const std::exception& e) {
    report(index, name, false, std::string("exception: ") + e.what());
  }
}

std::string fmt(double x) {
  std::ostringstream os;
  os << x;
  return os.str();
}

// 1. Wilson table: the four worked intervals at p_hat = 0.75, 95%.
void criterion_wilson() {
  struct Row {
    std::size_t n;
    double lo, hi;
  };
  const Row expected[] = {
      {10000, 0.74, 0.76}, {1000, 0.72, 0.78}, {100, 0.66, 0.82}, {1, 0.12, 0.99}};
  bool ok = true;
  std::string detail;
  for (const Row& row : expected) {
    const intervals::IntervalResult r =
        intervals::wilson_interval(0.75, row.n, 0.95);
    const double lo = intervals::round2(r.lower);
    const double hi = intervals::round2(r.upper);
    if (lo != row.lo || hi != row.hi) ok = false;
    if (!detail.empty()) detail += ", ";
    detail += "n=" + std::to_string(row.n) + " (" + fmt(lo) + "," + fmt(hi) + ")";
  }
  report(1, "wilson table", ok, detail);
}

// 2. Exact urn path probabilities vs the closed form a!b!/(a+b+1)!,
// enumerated over every sequence of length <= 10, plus the two quoted
// 7-step paths at 1/280.
void criterion_polya_exact() {
  const auto factorial = [](unsigned n) {
    mpz_class f = 1;
    for (unsigned i = 2; i <= n; ++i) f *= i;
    return f;
  };
  std::size_t checked = 0;
  bool ok = true;
  for (unsigned len = 1; len <= 10 && ok; ++len) {
    for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << len); ++bits) {
      std::vector<Outcome> seq(len);
      unsigned a = 0;
      for (unsigned i = 0; i < len; ++i) {
        seq[i] = (bits >> i) & 1;
        a += seq[i];
      }
      const unsigned b = len - a;
      mpq_class expected(factorial(a) * factorial(b), factorial(len + 1));
      expected.canonicalize();
      if (processes::polya_sequence_prob(seq, 1, 1) != expected) {
        ok = false;
        break;
      }
      ++checked;
    }
  }
  const std::vector<Outcome> hhtthth = {1, 1, 0, 0, 1, 0, 1};
  const std::vector<Outcome> hthhtht = {1, 0, 1, 1, 0, 1, 0};
  const mpq_class target(1, 280);
  const bool perms_ok =
      processes::polya_sequence_prob(hhtthth, 1, 1) == target &&
      processes::polya_sequence_prob(hthhtht, 1, 1) == target;
  ok = ok && perms_ok;
  report(2, "urn exact probabilities", ok,
         std::to_string(checked) + " sequences match the closed form; the "
         "two 7-step paths both have probability 1/280: " +
         (perms_ok ? "yes" : "no"));
}

// 3. Limiting frequencies of the balanced urn are uniform: KS distance
// below the 1% critical value at 2000 replicates.
void criterion_definetti() {
  const experiments::DefinettiResult result =
      experiments::run_definetti(1, 1, 10000, 2000, kGateSeed);
  const double critical = stats::ks_critical_value(2000, 0.01);
  const bool ok = result.ks_distance < critical;
  report(3, "limiting-frequency uniformity", ok,
         "KS=" + fmt(result.ks_distance) + " vs 1% critical " + fmt(critical));
}

// 4. The criteria separate: on a 10-periodic alternating sequence the
// coin-flip forecaster passes the whole-sequence and per-bin checks but
// fails the odd-steps subset; the crystal ball passes everything with
// zero discrepancy.
void criterion_hierarchy() {
  processes::ProcessSpec spec;
  spec.kind = processes::Deterministic{{1, 0}};
  spec.n = 10000;
  const processes::GeneratedRun gen = processes::generate(spec, 0);
  const InformationBase info = InformationBase::from_sequence(gen.sequence);

  const std::vector<SelectionRule> odd = {
      SelectionRule::every_mth(2, 0, "odd")};

  bool ok = true;
  std::string detail;

  {
    const forecasters::ForecasterSpec half{forecasters::Constant{0.5}};
    const ValidatedRun run = align_run(
        gen.sequence, forecasters::run_forecaster(half, gen.sequence, info));
    const CalibrationReport overall = calibration::overall_calibration(run);
    const CalibrationReport probability =
        calibration::probability_calibration(run);
    const CalibrationReport subset = calibration::subset_calibration(run, odd);
    ok = ok && overall.cells[0].delta() < 0.02 &&
         overall.global_verdict == Verdict::kPass;
    for (const ReportCell& cell : probability.cells) {
      ok = ok && cell.delta() < 0.02;
    }
    ok = ok && probability.global_verdict == Verdict::kPass;
    const double odd_delta = subset.cells[0].delta();
    ok = ok && std::fabs(odd_delta - 0.5) <= 0.001 &&
         subset.cells[0].verdict == Verdict::kFail;
    detail += "constant(0.5): overall delta " + fmt(overall.cells[0].delta()) +
              " pass, odd-steps delta " + fmt(odd_delta) + " fail";
  }
  {
    const forecasters::ForecasterSpec oracle{forecasters::Oracle{}};
    const ValidatedRun run = align_run(
        gen.sequence, forecasters::run_forecaster(oracle, gen.sequence, info));
    const CalibrationReport overall = calibration::overall_calibration(run);
    const CalibrationReport probability =
        calibration::probability_calibration(run);
    const CalibrationReport subset = calibration::subset_calibration(run, odd);
    bool oracle_ok = overall.cells[0].delta() == 0.0 &&
                     overall.global_verdict == Verdict::kPass;
    for (const ReportCell& cell : probability.cells) {
      oracle_ok = oracle_ok && cell.delta() == 0.0;
    }
    oracle_ok = oracle_ok && probability.global_verdict == Verdict::kPass &&
                subset.cells[0].delta() == 0.0 &&
                subset.global_verdict == Verdict::kPass;
    ok = ok && oracle_ok;
    detail += "; oracle: all deltas exactly 0";
  }
  report(4, "criteria separation", ok, detail);
}

// 5. The adversary defeats every record-based built-in forecaster: on the
// majority threshold rule the restricted discrepancy is at least 1/2, for
// 20 seeds each, no exceptions.
void criterion_adversary() {
  std::vector<forecasters::ForecasterSpec> specs = {
      {forecasters::Constant{0.5}},
      {forecasters::Constant{0.9}},
      {forecasters::Climatology{2.0}},
      {forecasters::Laplace{}},
      {forecasters::PolyaPredictive{1, 1}},
      {forecasters::PolyaPredictive{3, 2}},
      {forecasters::CategoryTable{{0.2, 0.5, 0.8}, "category"}},
      {forecasters::BayesMixture{processes::Uniform01Prior{}}},
      {forecasters::BayesMixture{processes::PointPrior{0.3}}},
      {forecasters::BayesMixture{processes::BetaPrior{2.0, 5.0}}},
  };
  const std::size_t n = 10000;
  double min_delta = 1.0;
  std::size_t runs = 0;
  bool ok = true;
  for (const auto& spec : specs) {
    for (std::uint64_t seed = 1; seed <= 20 && ok; ++seed) {
      CovariateStreams covariates;
      if (std::holds_alternative<forecasters::CategoryTable>(spec.kind)) {
        SplitMix64 gen(SplitMix64::derive(seed, "acceptance/category", 0));
        std::vector<double> stream(n);
        for (double& v : stream) {
          v = static_cast<double>(gen.below(3) + 1);
        }
        covariates["category"] = std::move(stream);
      }
      calibration::AdversaryResult result =
          calibration::adversarial_outcomes(spec, n, covariates);
      const ValidatedRun run = align_run(result.outcomes, result.forecasts);
      const InformationBase info =
          InformationBase::from_sequence(run.outcomes, covariates);
      const std::vector<SelectionRule> rules = {result.defeat_rule};
      const CalibrationReport rep = calibration::h_calibration(run, info, rules);
      const double delta = rep.cells[0].delta();
      min_delta = std::min(min_delta, delta);
      if (!(delta >= 0.5 - 1e-12)) ok = false;
      ++runs;
    }
  }
  report(5, "adversary guarantee", ok,
         std::to_string(runs) + " forecaster/seed runs, minimum restricted "
         "delta " + fmt(min_delta));
}

// 6. Two sound forecasters with different priors agree asymptotically:
// the second-half maximum gap stays under 0.01 for 10 seeds.
void criterion_identification() {
  processes::ProcessSpec process;
  process.kind = processes::Bernoulli{0.3};
  process.n = 100000;
  const forecasters::ForecasterSpec a{
      forecasters::BayesMixture{processes::BetaPrior{1.0, 1.0}}};
  const forecasters::ForecasterSpec b{
      forecasters::BayesMixture{processes::BetaPrior{2.0, 2.0}}};
  double worst = 0.0;
  bool ok = true;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const experiments::IdentificationResult result =
        experiments::run_identification(process, a, b, seed);
    worst = std::max(worst, result.tail_max);
    if (!(result.tail_max < 0.01)) ok = false;
  }
  report(6, "asymptotic identification", ok,
         "worst second-half max gap " + fmt(worst) + " over 10 seeds");
}

// 7. Refining the information base: on the steps where the coarse
// forecast is 0.4, both the deep forecasts and the outcomes average 0.4.
void criterion_info_base() {
  processes::ProcessSpec process;
  process.kind = processes::TwoLevel{{0.2, 0.6}, {0.5, 0.5}, 0.4};
  process.n = 100000;
  const forecasters::ForecasterSpec coarse{forecasters::Constant{0.4}};
  const forecasters::ForecasterSpec deep{
      forecasters::CategoryTable{{0.2, 0.6}, "category"}};
  const experiments::InfoBaseResult result = experiments::run_info_base(
      process, coarse, deep, kGateSeed, 0.4, 1e-9);
  const bool ok = std::fabs(result.deep_mean - 0.4) < 0.01 &&
                  std::fabs(result.outcome_mean - 0.4) < 0.01;
  report(7, "information-base refinement", ok,
         "deep-forecast mean " + fmt(result.deep_mean) + ", outcome mean " +
             fmt(result.outcome_mean) + " on " +
             std::to_string(result.selected_steps) + " selected steps");
}

// 8. Self-calibration: a forecaster matched to its process produces an
// asymptotically standard-normal z; the |z| <= 1.96 fraction over 500
// replicates at n = 10000 must land in [0.93, 0.97] for both pairs.
void criterion_self_calibration() {
  const auto fraction_within = [](const processes::ProcessSpec& process,
                                  const forecasters::ForecasterSpec& spec,
                                  const char* tag) {
    std::size_t within = 0;
    const std::size_t reps = 500;
    for (std::size_t i = 0; i < reps; ++i) {
      const std::uint64_t seed = SplitMix64::derive(kGateSeed, tag, i);
      const processes::GeneratedRun gen = processes::generate(process, seed);
      const InformationBase info =
          InformationBase::from_sequence(gen.sequence, gen.covariates);
      const ValidatedRun run = align_run(
          gen.sequence, forecasters::run_forecaster(spec, gen.sequence, info));
      ReportCell cell;
      for (std::size_t k = 0; k < run.size(); ++k) {
        cell.add(run.forecasts.forecasts[k], run.outcomes.outcomes[k]);
      }
      if (cell.z_defined() && std::fabs(cell.z()) <= 1.96) ++within;
    }
    return static_cast<double>(within) / static_cast<double>(reps);
  };

  processes::ProcessSpec mixture;
  mixture.kind = processes::Mixture{processes::Uniform01Prior{}};
  mixture.n = 10000;
  const double frac_mixture = fraction_within(
      mixture, {forecasters::BayesMixture{processes::Uniform01Prior{}}},
      "acceptance/selfcal_mixture");

  processes::ProcessSpec polya;
  polya.kind = processes::Polya{1, 1};
  polya.n = 10000;
  const double frac_polya = fraction_within(
      polya, {forecasters::PolyaPredictive{1, 1}}, "acceptance/selfcal_polya");

  const bool ok = frac_mixture >= 0.93 && frac_mixture <= 0.97 &&
                  frac_polya >= 0.93 && frac_polya <= 0.97;
  report(8, "self-calibration coverage", ok,
         "|z|<=1.96 fraction: mixture pair " + fmt(frac_mixture) +
             ", urn pair " + fmt(frac_polya));
}

// 9. Determinism: regeneration from (spec, seed) is bit-identical, the
// artifact JSON round-trips, and the emitted CSV bytes are stable.
void criterion_determinism() {
  processes::ProcessSpec spec;
  spec.kind = processes::Polya{2, 3};
  spec.n = 5000;

  const processes::GeneratedRun first = processes::generate(spec, kGateSeed);
  const processes::GeneratedRun second = processes::generate(spec, kGateSeed);
  bool ok = first.sequence.outcomes == second.sequence.outcomes;

  serialize::RunArtifact artifact;
  artifact.process = spec;
  artifact.seed = kGateSeed;
  artifact.outcomes = first.sequence;
  artifact.covariates = first.covariates;
  const forecasters::ForecasterSpec laplace{forecasters::Laplace{}};
  const InformationBase info =
      InformationBase::from_sequence(artifact.outcomes, artifact.covariates);
  artifact.forecaster = laplace;
  artifact.forecasts =
      forecasters::run_forecaster(laplace, artifact.outcomes, info);

  const serialize::RunArtifact reloaded =
      serialize::artifact_from_json(serialize::to_json(artifact));
  const processes::GeneratedRun replay =
      processes::generate(reloaded.process, reloaded.seed);
  ok = ok && replay.sequence.outcomes == reloaded.outcomes.outcomes;
  const ForecastSeries refits = forecasters::run_forecaster(
      *reloaded.forecaster,
      reloaded.outcomes,
      InformationBase::from_sequence(reloaded.outcomes, reloaded.covariates));
  ok = ok && refits.forecasts == reloaded.forecasts->forecasts;

  const std::string csv_a = serialize::run_csv(artifact);
  const std::string csv_b = serialize::run_csv(reloaded);
  ok = ok && csv_a == csv_b;

  const experiments::DefinettiResult ks_a =
      experiments::run_definetti(1, 1, 1000, 100, kGateSeed);
  const experiments::DefinettiResult ks_b =
      experiments::run_definetti(1, 1, 1000, 100, kGateSeed);
  ok = ok && ks_a.ks_distance == ks_b.ks_distance;

  report(9, "determinism", ok,
         "regeneration, JSON round-trip, and CSV bytes all stable");
}

}  // namespace

int main() {
  guarded(1, "wilson table", criterion_wilson);
  guarded(2, "urn exact probabilities", criterion_polya_exact);
  guarded(3, "limiting-frequency uniformity", criterion_definetti);
  guarded(4, "criteria separation", criterion_hierarchy);
  guarded(5, "adversary guarantee", criterion_adversary);
  guarded(6, "asymptotic identification", criterion_identification);
  guarded(7, "information-base refinement", criterion_info_base);
  guarded(8, "self-calibration coverage", criterion_self_calibration);
  guarded(9, "determinism", criterion_determinism);
  std::cout << (failures == 0 ? "acceptance: all 9 criteria passed"
                              : "acceptance: " + std::to_string(9 - failures) +
                                    "/9 criteria passed")
            << "\n";
  return failures == 0 ? 0 : 1;
}
