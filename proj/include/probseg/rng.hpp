// Copyright 2026 The Probseg Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PROBSEG_RNG_HPP
#define PROBSEG_RNG_HPP

#include <cmath>
#include <cstdint>
#include <numbers>

namespace probseg {

/// SplitMix64: the 64-bit shift-multiply generator of Steele, Lea and
/// Flood (state advances by the golden-ratio increment, output is a
/// two-round xor-shift-multiply finalizer). Chosen as the fixture
/// generator because the algorithm is fully specified by these constants,
/// so seeded fixtures reproduce identically on any platform, unlike the
/// unspecified standard-library distributions.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0, 1), 53 random bits.
  double next_double() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

  /// Standard normal deviate via Box-Muller (one value per call).
  double next_gaussian() {
    const double u1 = 1.0 - next_double();  // (0, 1]
    const double u2 = next_double();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  std::uint64_t state_;
};

/// Stable per-index seed derivation: seeds the generator with the base
/// seed offset by (index+1) golden-ratio increments and takes one output.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
  return SplitMix64(base + 0x9E3779B97F4A7C15ull * (index + 1)).next();
}

}  // namespace probseg

#endif  // PROBSEG_RNG_HPP
