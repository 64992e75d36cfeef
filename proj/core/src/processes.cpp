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

#include "prequel/processes.hpp"

#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "prequel/rng.hpp"
#include "prequel/stats.hpp"

namespace prequel::processes {

namespace {

using rng::SplitMix64;

void check_probability(double p, const char* what) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::invalid_argument(std::string(what) + " must lie in [0,1], got " +
                                std::to_string(p));
  }
}

std::string fmt(double x) {
  std::ostringstream os;
  os << x;
  return os.str();
}

// Inverse-CDF beta sampler. Only used once per mixture run, so the
// bisection cost is irrelevant; it keeps the draw bit-stable.
double draw_beta(double a, double b, SplitMix64& gen) {
  const double u = gen.next_double();
  double lo = 0.0, hi = 1.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (stats::beta_cdf(mid, a, b) < u) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

std::string prior_id(const MixturePrior& prior) {
  std::ostringstream os;
  std::visit(
      [&os](const auto& pr) {
        using P = std::decay_t<decltype(pr)>;
        if constexpr (std::is_same_v<P, Uniform01Prior>) {
          os << "uniform01";
        } else if constexpr (std::is_same_v<P, PointPrior>) {
          os << "point(" << pr.p << ")";
        } else {
          os << "beta(" << pr.a << "," << pr.b << ")";
        }
      },
      prior);
  return os.str();
}

void validate_prior(const MixturePrior& prior) {
  std::visit(
      [](const auto& pr) {
        using P = std::decay_t<decltype(pr)>;
        if constexpr (std::is_same_v<P, PointPrior>) {
          check_probability(pr.p, "point prior p");
        } else if constexpr (std::is_same_v<P, BetaPrior>) {
          if (!(pr.a > 0.0 && pr.b > 0.0)) {
            throw std::invalid_argument(
                "beta prior parameters must be positive");
          }
        }
      },
      prior);
}

std::string ProcessSpec::id() const {
  std::ostringstream os;
  std::visit(
      [&os](const auto& k) {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, Bernoulli>) {
          os << "bernoulli(p=" << k.p << ")";
        } else if constexpr (std::is_same_v<T, Mixture>) {
          os << "mixture(" << prior_id(k.prior) << ")";
        } else if constexpr (std::is_same_v<T, Polya>) {
          os << "polya(r0=" << k.r0 << ",b0=" << k.b0 << ")";
        } else if constexpr (std::is_same_v<T, Deterministic>) {
          os << "deterministic(len=" << k.pattern.size() << ")";
        } else if constexpr (std::is_same_v<T, Markov>) {
          os << "markov(" << k.p_initial << "," << k.p_after_0 << ","
             << k.p_after_1 << ")";
        } else if constexpr (std::is_same_v<T, Category>) {
          os << "category(9)";
        } else if constexpr (std::is_same_v<T, TwoLevel>) {
          os << "two_level(coarse=" << k.coarse << ")";
        }
      },
      kind);
  return os.str();
}

void ProcessSpec::validate() const {
  if (n == 0) throw std::invalid_argument("process length n must be >= 1");
  std::visit(
      [](const auto& k) {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, Bernoulli>) {
          check_probability(k.p, "bernoulli p");
        } else if constexpr (std::is_same_v<T, Mixture>) {
          validate_prior(k.prior);
        } else if constexpr (std::is_same_v<T, Polya>) {
          if (k.r0 == 0 || k.b0 == 0) {
            throw std::invalid_argument("urn must start with r0 >= 1, b0 >= 1");
          }
        } else if constexpr (std::is_same_v<T, Deterministic>) {
          if (k.pattern.empty()) {
            throw std::invalid_argument("deterministic pattern must be non-empty");
          }
          for (Outcome e : k.pattern) {
            if (e > 1) {
              throw std::invalid_argument("pattern elements must be 0 or 1");
            }
          }
        } else if constexpr (std::is_same_v<T, Markov>) {
          check_probability(k.p_initial, "markov p_initial");
          check_probability(k.p_after_0, "markov p_after_0");
          check_probability(k.p_after_1, "markov p_after_1");
        } else if constexpr (std::is_same_v<T, Category>) {
          for (double r : k.rates) check_probability(r, "category rate");
        } else if constexpr (std::is_same_v<T, TwoLevel>) {
          if (k.rates.empty() || k.rates.size() != k.weights.size()) {
            throw std::invalid_argument(
                "two_level: rates and weights must be non-empty and equal length");
          }
          for (double r : k.rates) check_probability(r, "deep rate");
          double wsum = 0.0, avg = 0.0;
          for (std::size_t i = 0; i < k.rates.size(); ++i) {
            if (k.weights[i] < 0.0) {
              throw std::invalid_argument("two_level: weights must be >= 0");
            }
            wsum += k.weights[i];
            avg += k.weights[i] * k.rates[i];
          }
          if (wsum <= 0.0) {
            throw std::invalid_argument("two_level: weights must sum to > 0");
          }
          avg /= wsum;
          if (std::fabs(avg - k.coarse) > 1e-12) {
            throw std::invalid_argument(
                "two_level: weighted deep-rate average " + fmt(avg) +
                " does not match coarse value " + fmt(k.coarse));
          }
        }
      },
      kind);
}

OutcomeSequence gen_bernoulli(double p, std::size_t n, std::uint64_t seed) {
  check_probability(p, "bernoulli p");
  if (n == 0) throw std::invalid_argument("n must be >= 1");
  SplitMix64 gen(seed);
  OutcomeSequence seq;
  seq.outcomes.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    seq.outcomes.push_back(gen.bernoulli(p) ? 1 : 0);
  }
  seq.process_id = ProcessSpec{Bernoulli{p}, n}.id();
  seq.seed = seed;
  return seq;
}

PolyaResult gen_polya(std::uint64_t r0, std::uint64_t b0, std::size_t n,
                      std::uint64_t seed) {
  if (r0 == 0 || b0 == 0) {
    throw std::invalid_argument("urn must start with r0 >= 1, b0 >= 1");
  }
  if (n == 0) throw std::invalid_argument("n must be >= 1");
  SplitMix64 gen(seed);
  PolyaResult out;
  out.sequence.outcomes.reserve(n);
  out.trajectory.reserve(n);
  UrnState urn{r0, b0};
  for (std::size_t i = 0; i < n; ++i) {
    out.trajectory.push_back(urn);
    const bool red = gen.bernoulli(urn.red_probability());
    out.sequence.outcomes.push_back(red ? 1 : 0);
    if (red) {
      ++urn.red;
    } else {
      ++urn.green;
    }
  }
  out.sequence.process_id = ProcessSpec{Polya{r0, b0}, n}.id();
  out.sequence.seed = seed;
  return out;
}

mpq_class polya_sequence_prob(std::span<const Outcome> seq, std::uint64_t r0,
                              std::uint64_t b0) {
  if (r0 == 0 || b0 == 0) {
    throw std::invalid_argument("urn must start with r0 >= 1, b0 >= 1");
  }
  mpq_class prob(1);
  std::uint64_t r = r0, b = b0;
  for (Outcome e : seq) {
    if (e > 1) throw outcome_domain_error("sequence elements must be 0 or 1");
    mpq_class term(e ? r : b, r + b);
    term.canonicalize();
    prob *= term;
    if (e) {
      ++r;
    } else {
      ++b;
    }
  }
  return prob;
}

MixtureResult gen_mixture(const MixturePrior& prior, std::size_t n,
                          std::uint64_t seed) {
  if (n == 0) throw std::invalid_argument("n must be >= 1");
  SplitMix64 prior_gen = SplitMix64(seed).split("mixture/prior", 0);
  double p = std::visit(
      [&prior_gen](const auto& pr) -> double {
        using P = std::decay_t<decltype(pr)>;
        if constexpr (std::is_same_v<P, Uniform01Prior>) {
          return prior_gen.next_double();
        } else if constexpr (std::is_same_v<P, PointPrior>) {
          check_probability(pr.p, "point prior p");
          return pr.p;
        } else {
          if (!(pr.a > 0.0 && pr.b > 0.0)) {
            throw std::invalid_argument("beta prior parameters must be positive");
          }
          return draw_beta(pr.a, pr.b, prior_gen);
        }
      },
      prior);
  SplitMix64 gen = SplitMix64(seed).split("mixture/outcomes", 0);
  MixtureResult out;
  out.drawn_p = p;
  out.sequence.outcomes.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.sequence.outcomes.push_back(gen.bernoulli(p) ? 1 : 0);
  }
  out.sequence.process_id = ProcessSpec{Mixture{prior}, n}.id();
  out.sequence.seed = seed;
  return out;
}

OutcomeSequence gen_deterministic(std::span<const Outcome> pattern,
                                  std::size_t n) {
  if (pattern.empty()) {
    throw std::invalid_argument("deterministic pattern must be non-empty");
  }
  if (n == 0) throw std::invalid_argument("n must be >= 1");
  OutcomeSequence seq;
  seq.outcomes.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Outcome e = pattern[i % pattern.size()];
    if (e > 1) throw outcome_domain_error("pattern elements must be 0 or 1");
    seq.outcomes.push_back(e);
  }
  seq.process_id =
      ProcessSpec{Deterministic{{pattern.begin(), pattern.end()}}, n}.id();
  seq.seed = 0;
  return seq;
}

OutcomeSequence gen_markov(const Markov& chain, std::size_t n,
                           std::uint64_t seed) {
  check_probability(chain.p_initial, "markov p_initial");
  check_probability(chain.p_after_0, "markov p_after_0");
  check_probability(chain.p_after_1, "markov p_after_1");
  if (n == 0) throw std::invalid_argument("n must be >= 1");
  SplitMix64 gen(seed);
  OutcomeSequence seq;
  seq.outcomes.reserve(n);
  Outcome prev = gen.bernoulli(chain.p_initial) ? 1 : 0;
  seq.outcomes.push_back(prev);
  for (std::size_t i = 1; i < n; ++i) {
    const double p = prev ? chain.p_after_1 : chain.p_after_0;
    prev = gen.bernoulli(p) ? 1 : 0;
    seq.outcomes.push_back(prev);
  }
  seq.process_id = ProcessSpec{chain, n}.id();
  seq.seed = seed;
  return seq;
}

CategoryResult gen_category(std::span<const double> rates,
                            std::uint64_t assignment_seed, std::size_t n,
                            std::uint64_t seed) {
  if (rates.size() != 9) {
    throw std::invalid_argument("category scenario expects exactly 9 rates, got " +
                                std::to_string(rates.size()));
  }
  for (double r : rates) check_probability(r, "category rate");
  if (n == 0) throw std::invalid_argument("n must be >= 1");
  SplitMix64 assign(assignment_seed);
  SplitMix64 gen(seed);
  CategoryResult out;
  out.sequence.outcomes.reserve(n);
  out.categories.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint64_t cat = assign.below(9);  // 0..8
    out.categories.push_back(static_cast<double>(cat + 1));
    out.sequence.outcomes.push_back(gen.bernoulli(rates[cat]) ? 1 : 0);
  }
  Category spec;
  std::copy(rates.begin(), rates.end(), spec.rates.begin());
  spec.assignment_seed = assignment_seed;
  out.sequence.process_id = ProcessSpec{spec, n}.id();
  out.sequence.seed = seed;
  return out;
}

TwoLevelResult gen_two_level(std::span<const double> rates,
                             std::span<const double> weights, double coarse,
                             std::size_t n, std::uint64_t seed) {
  TwoLevel spec{{rates.begin(), rates.end()}, {weights.begin(), weights.end()},
                coarse};
  ProcessSpec{spec, n == 0 ? 1 : n}.validate();
  if (n == 0) throw std::invalid_argument("n must be >= 1");

  const double wsum = std::accumulate(weights.begin(), weights.end(), 0.0);
  std::vector<double> cumulative(weights.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    acc += weights[i] / wsum;
    cumulative[i] = acc;
  }
  cumulative.back() = 1.0;

  SplitMix64 level = SplitMix64(seed).split("two_level/deep", 0);
  SplitMix64 gen = SplitMix64(seed).split("two_level/outcomes", 0);
  TwoLevelResult out;
  out.sequence.outcomes.reserve(n);
  out.deep_rates.reserve(n);
  out.deep_indices.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double u = level.next_double();
    std::size_t idx = 0;
    while (u >= cumulative[idx]) ++idx;
    out.deep_indices.push_back(static_cast<double>(idx + 1));
    out.deep_rates.push_back(rates[idx]);
    out.sequence.outcomes.push_back(gen.bernoulli(rates[idx]) ? 1 : 0);
  }
  out.sequence.process_id = ProcessSpec{spec, n}.id();
  out.sequence.seed = seed;
  return out;
}

GeneratedRun generate(const ProcessSpec& spec, std::uint64_t seed) {
  spec.validate();
  GeneratedRun run;
  std::visit(
      [&](const auto& k) {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, Bernoulli>) {
          run.sequence = gen_bernoulli(k.p, spec.n, seed);
        } else if constexpr (std::is_same_v<T, Mixture>) {
          auto res = gen_mixture(k.prior, spec.n, seed);
          run.sequence = std::move(res.sequence);
          run.extras.emplace_back("drawn_p", res.drawn_p);
        } else if constexpr (std::is_same_v<T, Polya>) {
          auto res = gen_polya(k.r0, k.b0, spec.n, seed);
          // Trajectory entries are pre-draw states; advance the last one by
          // its draw to report the urn as left after the run.
          UrnState last = res.trajectory.back();
          if (res.sequence.outcomes.back()) {
            ++last.red;
          } else {
            ++last.green;
          }
          run.sequence = std::move(res.sequence);
          run.extras.emplace_back("final_red", static_cast<double>(last.red));
          run.extras.emplace_back("final_green",
                                  static_cast<double>(last.green));
        } else if constexpr (std::is_same_v<T, Deterministic>) {
          run.sequence = gen_deterministic(k.pattern, spec.n);
          run.sequence.seed = seed;
        } else if constexpr (std::is_same_v<T, Markov>) {
          run.sequence = gen_markov(k, spec.n, seed);
        } else if constexpr (std::is_same_v<T, Category>) {
          auto res = gen_category(k.rates, k.assignment_seed, spec.n, seed);
          run.sequence = std::move(res.sequence);
          run.covariates.emplace("category", std::move(res.categories));
        } else if constexpr (std::is_same_v<T, TwoLevel>) {
          auto res = gen_two_level(k.rates, k.weights, k.coarse, spec.n, seed);
          run.sequence = std::move(res.sequence);
          run.covariates.emplace("category", std::move(res.deep_indices));
          run.covariates.emplace("deep_rate", std::move(res.deep_rates));
        }
      },
      spec.kind);
  return run;
}

}  // namespace prequel::processes
