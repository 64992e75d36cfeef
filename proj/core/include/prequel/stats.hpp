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

#ifndef PREQUEL_STATS_HPP_
#define PREQUEL_STATS_HPP_

#include <cstddef>
#include <span>
#include <vector>

namespace prequel::stats {

// Inverse standard normal CDF. Wichura's algorithm AS 241 (PPND16),
// accurate to roughly 1e-16 relative error; pure rational approximation,
// so results are bit-stable across platforms.
double normal_quantile(double p);

// Standard normal CDF via erfc.
double normal_cdf(double x);

// Two-sided critical value: |z| <= two_sided_critical(alpha) holds with
// probability 1 - alpha under the standard normal.
double two_sided_critical(double alpha);

double logistic(double x);

// One-sample Kolmogorov-Smirnov statistic against the uniform law on [0,1]:
// sup_x |F_n(x) - x|.
double ks_statistic_uniform(std::span<const double> samples);

// Asymptotic KS critical value sqrt(-ln(alpha/2) / (2n)); adequate for
// n >= 35.
double ks_critical_value(std::size_t n, double alpha);

// Regularized incomplete beta I_x(a, b), i.e. the Beta(a, b) CDF.
double beta_cdf(double x, double a, double b);

}  // namespace prequel::stats

#endif  // PREQUEL_STATS_HPP_
