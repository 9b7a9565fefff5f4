// Copyright 2026 The qpart Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>

namespace qpart {

// SplitMix64 (Steele/Lea/Flood). Chosen over <random> engines because the
// standard distributions are not bit-reproducible across library
// implementations, and ensemble reproducibility across platforms is a hard
// requirement here. The generator itself is fully specified by its
// constants.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform over {0, ..., 2^bits - 1}, taking the high bits of the stream.
  std::uint64_t next_bits(int bits) { return next() >> (64 - bits); }

  // Uniform double in (0, 1]: 53-bit mantissa, zero excluded so that
  // weights drawn from it satisfy w > 0.
  double next_unit() {
    return static_cast<double>((next() >> 11) + 1) * 0x1.0p-53;
  }

 private:
  std::uint64_t state_;
};

// SplitMix64 output scrambler, used standalone to derive per-instance seeds.
inline std::uint64_t splitmix_scramble(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Per-instance seed derivation: independent of evaluation order, so parallel
// ensemble generation is reproducible by construction.
inline std::uint64_t mix_seed(std::uint64_t master, std::uint64_t index) {
  return splitmix_scramble(master + 0x9e3779b97f4a7c15ULL * (index + 1));
}

}  // namespace qpart
