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

#include "prequel/report.hpp"

namespace prequel {

std::string_view to_string(Criterion c) {
  switch (c) {
    case Criterion::kOverall: return "overall";
    case Criterion::kProbability: return "probability";
    case Criterion::kSubset: return "subset";
    case Criterion::kHBased: return "h_based";
  }
  return "unknown";
}

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::kPass: return "pass";
    case Verdict::kFail: return "fail";
    case Verdict::kInsufficient: return "insufficient";
    case Verdict::kEmpty: return "empty";
  }
  return "unknown";
}

}  // namespace prequel
