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

#include "prequel/forecasters.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace prequel::forecasters {

namespace {

struct IdVisitor {
  std::string operator()(const Constant& f) const {
    std::ostringstream os;
    os << "constant(" << f.c << ")";
    return os.str();
  }
  std::string operator()(const Climatology& f) const {
    std::ostringstream os;
    os << "climatology(" << f.prior_weight << ")";
    return os.str();
  }
  std::string operator()(const Laplace&) const { return "laplace"; }
  std::string operator()(const PolyaPredictive& f) const {
    std::ostringstream os;
    os << "polya_predictive(" << f.r0 << "," << f.b0 << ")";
    return os.str();
  }
  std::string operator()(const Oracle&) const { return "oracle"; }
  std::string operator()(const CategoryTable& f) const {
    std::ostringstream os;
    os << "category_table(" << f.covariate_name << "," << f.rates.size()
       << ")";
    return os.str();
  }
  std::string operator()(const BayesMixture& f) const {
    return "bayes_mixture(" + processes::prior_id(f.prior) + ")";
  }
};

void check_probability(double p, const char* what) {
  if (!(p >= 0.0 && p <= 1.0)) {
    std::ostringstream os;
    os << what << " must lie in [0, 1], got " << p;
    throw std::invalid_argument(os.str());
  }
}

}  // namespace

std::string ForecasterSpec::id() const { return std::visit(IdVisitor{}, kind); }

void ForecasterSpec::validate() const {
  if (const auto* f = std::get_if<Constant>(&kind)) {
    check_probability(f->c, "constant forecast");
  } else if (const auto* f = std::get_if<Climatology>(&kind)) {
    if (!(f->prior_weight >= 0.0) || !std::isfinite(f->prior_weight)) {
      throw std::invalid_argument("climatology prior weight must be finite and >= 0");
    }
  } else if (const auto* f = std::get_if<PolyaPredictive>(&kind)) {
    if (f->r0 == 0 || f->b0 == 0) {
      throw std::invalid_argument("polya_predictive needs positive initial counts");
    }
  } else if (const auto* f = std::get_if<CategoryTable>(&kind)) {
    if (f->rates.empty()) {
      throw std::invalid_argument("category_table needs a non-empty rate table");
    }
    for (double r : f->rates) check_probability(r, "category rate");
    if (f->covariate_name.empty()) {
      throw std::invalid_argument("category_table needs a covariate name");
    }
  } else if (const auto* f = std::get_if<BayesMixture>(&kind)) {
    processes::validate_prior(f->prior);
  }
}

ForecasterState init_state(const ForecasterSpec& spec) {
  ForecasterState state;
  if (const auto* f = std::get_if<BayesMixture>(&spec.kind)) {
    if (const auto* beta = std::get_if<processes::BetaPrior>(&f->prior)) {
      state.posterior_a = beta->a;
      state.posterior_b = beta->b;
    } else {
      // uniform01 == beta(1,1); a point prior never updates, so the
      // counts are unused.
      state.posterior_a = 1.0;
      state.posterior_b = 1.0;
    }
  }
  return state;
}

double forecast_next(const ForecasterSpec& spec, const InformationRecord& record,
                     const ForecasterState& state,
                     std::optional<Outcome> actual) {
  if (record.step == 0) {
    throw std::invalid_argument("steps are 1-based; step 0 has no forecast");
  }
  if (state.steps_seen != record.step - 1) {
    std::ostringstream os;
    os << "forecaster state digests " << state.steps_seen
       << " outcomes but step " << record.step << " expects "
       << record.step - 1;
    throw std::invalid_argument(os.str());
  }

  if (const auto* f = std::get_if<Constant>(&spec.kind)) {
    return f->c;
  }
  if (const auto* f = std::get_if<Climatology>(&spec.kind)) {
    const double denom = static_cast<double>(state.steps_seen) + f->prior_weight;
    if (denom == 0.0) return 0.5;
    return (static_cast<double>(state.successes) + 0.5 * f->prior_weight) / denom;
  }
  if (std::holds_alternative<Laplace>(spec.kind)) {
    return (static_cast<double>(state.successes) + 1.0) /
           (static_cast<double>(state.steps_seen) + 2.0);
  }
  if (const auto* f = std::get_if<PolyaPredictive>(&spec.kind)) {
    const double red = static_cast<double>(f->r0) +
                       static_cast<double>(state.successes);
    const double total = static_cast<double>(f->r0) +
                         static_cast<double>(f->b0) +
                         static_cast<double>(state.steps_seen);
    return red / total;
  }
  if (std::holds_alternative<Oracle>(spec.kind)) {
    if (!actual.has_value()) {
      throw std::invalid_argument("oracle forecaster needs the realized outcome");
    }
    return *actual == 1 ? 1.0 : 0.0;
  }
  if (const auto* f = std::get_if<CategoryTable>(&spec.kind)) {
    const auto value = record.covariate(f->covariate_name);
    if (!value.has_value()) {
      throw std::invalid_argument("category_table covariate '" +
                                  f->covariate_name + "' missing at step " +
                                  std::to_string(record.step));
    }
    const double raw = *value;
    const auto index = static_cast<long long>(std::llround(raw));
    if (static_cast<double>(index) != raw || index < 1 ||
        static_cast<std::size_t>(index) > f->rates.size()) {
      std::ostringstream os;
      os << "category_table covariate value " << raw
         << " is not a valid 1-based index into a table of "
         << f->rates.size();
      throw std::invalid_argument(os.str());
    }
    return f->rates[static_cast<std::size_t>(index - 1)];
  }
  if (const auto* f = std::get_if<BayesMixture>(&spec.kind)) {
    if (const auto* point = std::get_if<processes::PointPrior>(&f->prior)) {
      return point->p;
    }
    return state.posterior_a / (state.posterior_a + state.posterior_b);
  }
  throw std::logic_error("unhandled forecaster kind");
}

ForecasterState advance(const ForecasterSpec& spec, ForecasterState state,
                        Outcome observed) {
  if (observed > 1) {
    throw outcome_domain_error("outcome must be 0 or 1, got " +
                               std::to_string(static_cast<int>(observed)));
  }
  state.steps_seen += 1;
  state.successes += observed;
  if (std::holds_alternative<BayesMixture>(spec.kind)) {
    state.posterior_a += static_cast<double>(observed);
    state.posterior_b += 1.0 - static_cast<double>(observed);
  }
  return state;
}

ForecastSeries run_forecaster(const ForecasterSpec& spec,
                              const OutcomeSequence& outcomes,
                              const InformationBase& info) {
  spec.validate();
  outcomes.validate();
  if (info.outcome_storage() == nullptr ||
      *info.outcome_storage() != outcomes.outcomes) {
    throw std::invalid_argument(
        "information base does not describe the supplied outcome sequence");
  }
  const bool is_oracle = std::holds_alternative<Oracle>(spec.kind);
  ForecastSeries series;
  series.forecaster_id = spec.id();
  series.h_based = spec.h_based();
  series.forecasts.reserve(outcomes.outcomes.size());
  ForecasterState state = init_state(spec);
  for (std::size_t k = 1; k <= outcomes.outcomes.size(); ++k) {
    const InformationRecord record = info.record(k);
    const Outcome e = outcomes.outcomes[k - 1];
    std::optional<Outcome> actual;
    if (is_oracle) actual = e;
    series.forecasts.push_back(forecast_next(spec, record, state, actual));
    state = advance(spec, state, e);
  }
  series.validate();
  return series;
}

}  // namespace prequel::forecasters
