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

#ifndef PREQUEL_INTERVALS_HPP_
#define PREQUEL_INTERVALS_HPP_

#include <cstddef>
#include <string>

namespace prequel::intervals {

struct IntervalResult {
  double p_hat = 0.0;
  std::size_t n = 0;
  double confidence = 0.95;
  double lower = 0.0;
  double upper = 1.0;
  std::string method = "wilson";
};

// Score interval for a binomial proportion: center
// (p̂ + z²/2n) / (1 + z²/n), half-width
// z·sqrt(p̂(1−p̂)/n + z²/4n²) / (1 + z²/n). Never leaves [0, 1].
// Throws std::invalid_argument when n = 0, p̂ outside [0, 1], or
// confidence outside (0, 1).
IntervalResult wilson_interval(double p_hat, std::size_t n,
                               double confidence);

// Round to 2 decimals, halves away from zero. Interval endpoints are
// compared against whole-percent table values after this rounding.
double round2(double x);

// Critique exhibit: with a single trial the realized success rate is not
// an unknown near p but an exact two-point variable, 0 with probability
// 1−p and 1 with probability p. An interval procedure run at n = 1
// answers a question the data cannot pose; the struct juxtaposes both.
struct SingleTrialDemo {
  double p = 0.5;
  double mass_at_zero = 0.5;  // P(rate = 0) = 1 − p
  double mass_at_one = 0.5;   // P(rate = 1) = p
  IntervalResult misapplied;  // interval at n = 1, p̂ = p
  std::string label = "critique: interval misapplied at n=1";
};

SingleTrialDemo single_trial_demo(double p, double confidence = 0.95);

}  // namespace prequel::intervals

#endif  // PREQUEL_INTERVALS_HPP_
