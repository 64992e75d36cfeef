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

#include <limits>
#include <stdexcept>
#include <vector>

#include "prequel/run.hpp"

using namespace prequel;

namespace {

OutcomeSequence make_seq(std::vector<Outcome> e) {
  OutcomeSequence s;
  s.outcomes = std::move(e);
  s.process_id = "test";
  s.seed = 1;
  return s;
}

ForecastSeries make_fore(std::vector<double> p) {
  ForecastSeries f;
  f.forecasts = std::move(p);
  f.forecaster_id = "test";
  return f;
}

}  // namespace

TEST_CASE("outcome validation only admits 0 and 1") {
  CHECK_NOTHROW(make_seq({0, 1, 1, 0}).validate());
  CHECK_NOTHROW(make_seq({}).validate());
  CHECK_THROWS_AS(make_seq({0, 2, 1}).validate(), outcome_domain_error);
  CHECK_THROWS_AS(make_seq({255}).validate(), outcome_domain_error);
}

TEST_CASE("forecast validation only admits probabilities") {
  CHECK_NOTHROW(make_fore({0.0, 0.5, 1.0}).validate());
  CHECK_THROWS_AS(make_fore({1.5}).validate(), forecast_range_error);
  CHECK_THROWS_AS(make_fore({-0.1}).validate(), forecast_range_error);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(make_fore({nan}).validate(), forecast_range_error);
}

TEST_CASE("domain errors stay distinguishable but share a base") {
  // Both derive from invalid_argument so callers can catch coarsely.
  CHECK_THROWS_AS(make_seq({3}).validate(), std::invalid_argument);
  CHECK_THROWS_AS(make_fore({2.0}).validate(), std::invalid_argument);
  CHECK_THROWS_AS(align_run(make_seq({0}), make_fore({0.5, 0.5})),
                  std::invalid_argument);
}

TEST_CASE("align_run pairs equal-length valid inputs") {
  auto run = align_run(make_seq({1, 0, 1}), make_fore({0.9, 0.2, 0.6}));
  CHECK(run.size() == 3);
  CHECK(run.outcomes.outcomes == std::vector<Outcome>{1, 0, 1});
  CHECK(run.forecasts.forecasts == std::vector<double>{0.9, 0.2, 0.6});
}

TEST_CASE("align_run rejects bad shapes and bad values") {
  CHECK_THROWS_AS(align_run(make_seq({}), make_fore({})),
                  length_mismatch_error);
  CHECK_THROWS_AS(align_run(make_seq({0, 1}), make_fore({0.5})),
                  length_mismatch_error);
  CHECK_THROWS_AS(align_run(make_seq({0, 2}), make_fore({0.5, 0.5})),
                  outcome_domain_error);
  CHECK_THROWS_AS(align_run(make_seq({0, 1}), make_fore({0.5, 1.5})),
                  forecast_range_error);
}

TEST_CASE("records expose exactly the strict past") {
  auto info = InformationBase::from_sequence(make_seq({1, 0, 1, 1}));
  CHECK(info.size() == 4);

  auto r1 = info.record(1);
  CHECK(r1.step == 1);
  CHECK(r1.outcome_history.empty());
  CHECK(r1.successes() == 0);

  auto r3 = info.record(3);
  CHECK(r3.outcome_history.size() == 2);
  CHECK(r3.outcome_history[0] == 1);
  CHECK(r3.outcome_history[1] == 0);
  CHECK(r3.successes() == 1);

  auto r4 = info.record(4);
  CHECK(r4.outcome_history.size() == 3);
  CHECK(r4.successes() == 2);
}

TEST_CASE("record indices are 1-based and bounded") {
  auto info = InformationBase::from_sequence(make_seq({1, 0}));
  CHECK_THROWS_AS(info.record(0), std::out_of_range);
  CHECK_NOTHROW(info.record(2));
  CHECK_THROWS_AS(info.record(3), std::out_of_range);
}

TEST_CASE("covariates attach per step") {
  CovariateStreams cov;
  cov["grade"] = {3.0, 1.0, 2.0};
  cov["short"] = {7.0};
  auto info = InformationBase::from_sequence(make_seq({1, 0, 1}), cov);

  CHECK(info.record(1).covariate("grade") == 3.0);
  CHECK(info.record(3).covariate("grade") == 2.0);
  // Unknown stream names resolve to nothing rather than throwing: rules
  // probe covariates speculatively.
  CHECK_FALSE(info.record(1).covariate("color").has_value());
  // A stream shorter than the run has no value at later steps.
  CHECK(info.record(1).covariate("short") == 7.0);
  CHECK_FALSE(info.record(2).covariate("short").has_value());
}

TEST_CASE("a record without streams has no covariates") {
  InformationRecord rec;
  rec.step = 5;
  rec.streams = nullptr;
  CHECK_FALSE(rec.covariate("anything").has_value());
}

TEST_CASE("the base shares one immutable outcome snapshot") {
  auto seq = make_seq({1, 1, 0});
  auto info = InformationBase::from_sequence(seq);
  auto storage = info.outcome_storage();
  REQUIRE(storage != nullptr);
  CHECK(*storage == seq.outcomes);
  // Mutating the source sequence afterwards must not alter the base.
  seq.outcomes[0] = 0;
  CHECK((*storage)[0] == 1);
}
