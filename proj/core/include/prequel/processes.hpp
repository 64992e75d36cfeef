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

#ifndef PREQUEL_PROCESSES_HPP_
#define PREQUEL_PROCESSES_HPP_

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <gmpxx.h>

#include "prequel/run.hpp"

namespace prequel::processes {

// Reinforcement urn: red counts successes, green counts failures. Each
// draw returns the drawn ball plus one more of the same colour.
struct UrnState {
  std::uint64_t red = 1;
  std::uint64_t green = 1;

  double red_probability() const {
    return static_cast<double>(red) / static_cast<double>(red + green);
  }
};

struct Uniform01Prior {};
struct PointPrior {
  double p = 0.5;
};
struct BetaPrior {
  double a = 1.0;
  double b = 1.0;
};
using MixturePrior = std::variant<Uniform01Prior, PointPrior, BetaPrior>;

std::string prior_id(const MixturePrior& prior);
void validate_prior(const MixturePrior& prior);

struct Bernoulli {
  double p = 0.5;
};
struct Mixture {
  MixturePrior prior;
};
struct Polya {
  std::uint64_t r0 = 1;
  std::uint64_t b0 = 1;
};
struct Deterministic {
  std::vector<Outcome> pattern;
};
// Two-state chain on {0,1}: the next outcome depends on the previous one.
struct Markov {
  double p_initial = 0.5;  // P(e_1 = 1)
  double p_after_0 = 0.5;  // P(e_k = 1 | e_{k-1} = 0)
  double p_after_1 = 0.5;  // P(e_k = 1 | e_{k-1} = 1)
};
// Nine-category scenario: each step lands in a category uniformly at
// random; the outcome is Bernoulli with that category's rate. The
// category index (1..9) is exposed as the covariate "category".
struct Category {
  std::array<double, 9> rates{};
  std::uint64_t assignment_seed = 0;
};
// Two-level randomness: each step first draws a hidden deep rate by
// weight, then the outcome from it. The weighted average of the deep
// rates must equal the coarse value. Covariates: "category" (1-based deep
// index) and "deep_rate" (the drawn rate).
struct TwoLevel {
  std::vector<double> rates;
  std::vector<double> weights;
  double coarse = 0.5;
};

using ProcessKind =
    std::variant<Bernoulli, Mixture, Polya, Deterministic, Markov, Category,
                 TwoLevel>;

struct ProcessSpec {
  ProcessKind kind;
  std::size_t n = 0;

  std::string id() const;
  // Throws std::invalid_argument on out-of-range parameters.
  void validate() const;
};

struct PolyaResult {
  OutcomeSequence sequence;
  std::vector<UrnState> trajectory;  // state before each draw
};

struct MixtureResult {
  OutcomeSequence sequence;
  double drawn_p = 0.0;
};

struct CategoryResult {
  OutcomeSequence sequence;
  std::vector<double> categories;  // 1..9 per step
};

struct TwoLevelResult {
  OutcomeSequence sequence;
  std::vector<double> deep_rates;    // drawn rate per step
  std::vector<double> deep_indices;  // 1-based index per step
};

OutcomeSequence gen_bernoulli(double p, std::size_t n, std::uint64_t seed);
PolyaResult gen_polya(std::uint64_t r0, std::uint64_t b0, std::size_t n,
                      std::uint64_t seed);
MixtureResult gen_mixture(const MixturePrior& prior, std::size_t n,
                          std::uint64_t seed);
OutcomeSequence gen_deterministic(std::span<const Outcome> pattern,
                                  std::size_t n);
OutcomeSequence gen_markov(const Markov& chain, std::size_t n,
                           std::uint64_t seed);
CategoryResult gen_category(std::span<const double> rates,
                            std::uint64_t assignment_seed, std::size_t n,
                            std::uint64_t seed);
TwoLevelResult gen_two_level(std::span<const double> rates,
                             std::span<const double> weights, double coarse,
                             std::size_t n, std::uint64_t seed);

// Exact probability of observing `seq` from an urn started at (r0, b0):
// the product of the sequential draw probabilities, in exact rational
// arithmetic. Depends on the sequence only through its colour counts.
mpq_class polya_sequence_prob(std::span<const Outcome> seq, std::uint64_t r0,
                              std::uint64_t b0);

// A generated run plus everything the process exposes as background
// information. `extras` carries process-specific scalars (drawn_p, ...).
struct GeneratedRun {
  OutcomeSequence sequence;
  CovariateStreams covariates;
  std::vector<std::pair<std::string, double>> extras;
};

// Dispatch over ProcessSpec. Deterministic given (spec, seed).
GeneratedRun generate(const ProcessSpec& spec, std::uint64_t seed);

}  // namespace prequel::processes

#endif  // PREQUEL_PROCESSES_HPP_
