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

#ifndef PREQUEL_RNG_HPP_
#define PREQUEL_RNG_HPP_

#include <cstdint>
#include <string_view>

namespace prequel::rng {

// SplitMix64 (Steele, Lea & Flood 2014). Counter-based: the state is a
// 64-bit counter advanced by a fixed odd increment, each output is a
// finalizing hash of the counter. Pure integer arithmetic, so sequences
// are bit-exact on every platform. Substreams are derived by hashing
// (seed, tag, index), which keeps replicate streams decoupled.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit constexpr SplitMix64(std::uint64_t seed) : state_(seed) {}

  static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;

  // Finalizer from the reference implementation.
  static constexpr std::uint64_t mix(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ULL;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBULL;
    z ^= z >> 31;
    return z;
  }

  constexpr std::uint64_t next() {
    state_ += kGamma;
    return mix(state_);
  }

  constexpr std::uint64_t operator()() { return next(); }

  // Uniform double in [0, 1) with 53 random bits.
  double next_double() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

  // True with probability p. p = 0 never fires, p = 1 always does.
  bool bernoulli(double p) { return next_double() < p; }

  // Uniform integer in [0, bound). Multiply-shift reduction; the bias is
  // bound/2^64 and irrelevant at the bounds used here.
  std::uint64_t below(std::uint64_t bound) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next()) * bound) >> 64);
  }

  // Independent substream for replicate `index` of the stream named `tag`.
  SplitMix64 split(std::string_view tag, std::uint64_t index) const {
    return SplitMix64(derive(state_, tag, index));
  }

  // Documented substream derivation: child = mix(mix(seed ^ fnv1a(tag)) +
  // gamma * (index + 1)). Every run of the tool draws all randomness from
  // one top-level seed through this function.
  static constexpr std::uint64_t derive(std::uint64_t seed,
                                        std::string_view tag,
                                        std::uint64_t index) {
    std::uint64_t h = fnv1a(tag);
    std::uint64_t s = mix(seed ^ h);
    return mix(s + kGamma * (index + 1));
  }

  constexpr std::uint64_t state() const { return state_; }

  static constexpr std::uint64_t fnv1a(std::string_view text) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (char c : text) {
      h ^= static_cast<unsigned char>(c);
      h *= 0x100000001B3ULL;
    }
    return h;
  }

 private:
  std::uint64_t state_;
};

}  // namespace prequel::rng

#endif  // PREQUEL_RNG_HPP_
