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

#include "prequel/intervals.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "prequel/stats.hpp"

namespace prequel::intervals {

IntervalResult wilson_interval(double p_hat, std::size_t n,
                               double confidence) {
  if (n == 0) {
    throw std::invalid_argument("an interval needs at least one trial");
  }
  if (!(p_hat >= 0.0 && p_hat <= 1.0)) {
    std::ostringstream os;
    os << "proportion must lie in [0, 1], got " << p_hat;
    throw std::invalid_argument(os.str());
  }
  if (!(confidence > 0.0 && confidence < 1.0)) {
    throw std::invalid_argument("confidence level must lie in (0, 1)");
  }
  const double z = stats::two_sided_critical(1.0 - confidence);
  const double nn = static_cast<double>(n);
  const double z2 = z * z;
  const double denom = 1.0 + z2 / nn;
  const double center = (p_hat + z2 / (2.0 * nn)) / denom;
  const double half =
      z * std::sqrt(p_hat * (1.0 - p_hat) / nn + z2 / (4.0 * nn * nn)) /
      denom;
  IntervalResult result;
  result.p_hat = p_hat;
  result.n = n;
  result.confidence = confidence;
  // The score interval is contained in [0, 1] exactly; the clamp only
  // absorbs last-bit rounding.
  result.lower = std::max(0.0, center - half);
  result.upper = std::min(1.0, center + half);
  result.method = "wilson";
  return result;
}

double round2(double x) {
  return std::round(x * 100.0) / 100.0;
}

SingleTrialDemo single_trial_demo(double p, double confidence) {
  if (!(p >= 0.0 && p <= 1.0)) {
    std::ostringstream os;
    os << "probability must lie in [0, 1], got " << p;
    throw std::invalid_argument(os.str());
  }
  SingleTrialDemo demo;
  demo.p = p;
  demo.mass_at_zero = 1.0 - p;
  demo.mass_at_one = p;
  demo.misapplied = wilson_interval(p, 1, confidence);
  return demo;
}

}  // namespace prequel::intervals
