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

#include "prequel/selection.hpp"

#include <algorithm>
#include <stdexcept>

namespace prequel {

namespace {

constexpr std::size_t kMaxWindow = 8;

bool window_matches(const std::vector<Outcome>& pattern,
                    std::span<const Outcome> history) {
  const std::size_t w = pattern.size();
  if (history.size() < w) return false;
  return std::equal(pattern.begin(), pattern.end(),
                    history.end() - static_cast<std::ptrdiff_t>(w));
}

}  // namespace

void SelectionRule::validate() const {
  if (rule_id.empty()) {
    throw std::invalid_argument("selection rule needs a non-empty id");
  }
  switch (kind) {
    case RuleKind::kAll:
      break;
    case RuleKind::kEveryMth:
      if (m == 0) throw std::invalid_argument("every_mth: m must be >= 1");
      if (offset >= m) {
        throw std::invalid_argument("every_mth: offset must lie in [0, m)");
      }
      break;
    case RuleKind::kIndexSet:
      if (!std::is_sorted(indices.begin(), indices.end())) {
        throw std::invalid_argument("index_set: indices must be sorted");
      }
      if (!indices.empty() && indices.front() == 0) {
        throw std::invalid_argument("index_set: steps are 1-based");
      }
      break;
    case RuleKind::kHistoryPredicate: {
      const auto& p = predicate;
      if (!p.last_window && !p.step_mod && !p.covariate_eq &&
          !p.forecast_threshold) {
        throw std::invalid_argument("history_predicate: empty condition");
      }
      if (p.last_window) {
        if (p.last_window->empty() || p.last_window->size() > kMaxWindow) {
          throw std::invalid_argument(
              "history_predicate: window length must lie in [1, 8]");
        }
        for (Outcome e : *p.last_window) {
          if (e > 1) {
            throw std::invalid_argument(
                "history_predicate: window pattern must be binary");
          }
        }
      }
      if (p.step_mod && p.step_mod->modulus == 0) {
        throw std::invalid_argument("history_predicate: modulus must be >= 1");
      }
      if (p.step_mod && p.step_mod->residue >= p.step_mod->modulus) {
        throw std::invalid_argument(
            "history_predicate: residue must lie in [0, modulus)");
      }
      if (p.covariate_eq && p.covariate_eq->name.empty()) {
        throw std::invalid_argument(
            "history_predicate: covariate clause needs a name");
      }
      break;
    }
  }
}

SelectionRule SelectionRule::all(std::string id) {
  SelectionRule r;
  r.rule_id = std::move(id);
  r.kind = RuleKind::kAll;
  return r;
}

SelectionRule SelectionRule::every_mth(std::uint64_t m, std::uint64_t offset,
                                       std::string id) {
  SelectionRule r;
  r.rule_id = std::move(id);
  r.kind = RuleKind::kEveryMth;
  r.m = m;
  r.offset = offset;
  r.validate();
  return r;
}

SelectionRule SelectionRule::index_set(std::vector<std::size_t> indices,
                                       std::string id) {
  SelectionRule r;
  r.rule_id = std::move(id);
  r.kind = RuleKind::kIndexSet;
  r.indices = std::move(indices);
  std::sort(r.indices.begin(), r.indices.end());
  r.validate();
  return r;
}

SelectionRule SelectionRule::history(HistoryPredicate predicate,
                                     std::string id) {
  SelectionRule r;
  r.rule_id = std::move(id);
  r.kind = RuleKind::kHistoryPredicate;
  r.predicate = std::move(predicate);
  r.validate();
  return r;
}

bool rule_member(const SelectionRule& rule, std::size_t step,
                 const InformationRecord& record,
                 std::optional<double> forecast) {
  if (step < 1) throw std::invalid_argument("rule_member: steps are 1-based");
  switch (rule.kind) {
    case RuleKind::kAll:
      return true;
    case RuleKind::kEveryMth:
      return (step - 1) % rule.m == rule.offset;
    case RuleKind::kIndexSet:
      return std::binary_search(rule.indices.begin(), rule.indices.end(), step);
    case RuleKind::kHistoryPredicate: {
      const auto& p = rule.predicate;
      if (p.step_mod && step % p.step_mod->modulus != p.step_mod->residue) {
        return false;
      }
      if (p.last_window && !window_matches(*p.last_window, record.outcome_history)) {
        return false;
      }
      if (p.covariate_eq) {
        auto v = record.covariate(p.covariate_eq->name);
        if (!v || *v != p.covariate_eq->value) return false;
      }
      if (p.forecast_threshold) {
        if (!forecast) {
          throw std::invalid_argument(
              "rule '" + rule.rule_id +
              "' thresholds the forecast, but no forecast was supplied");
        }
        using Op = HistoryPredicate::ForecastThreshold::Op;
        const auto& t = *p.forecast_threshold;
        if (t.op == Op::kLessEq ? !(*forecast <= t.value)
                                : !(*forecast > t.value)) {
          return false;
        }
      }
      return true;
    }
  }
  throw std::logic_error("rule_member: unreachable rule kind");
}

}  // namespace prequel
