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

#include <complex>
#include <cstdint>
#include <map>
#include <vector>

namespace qpart {

// Dense complex state over n qubits. Index bit i carries spin i:
// bit clear = spin up (s_i = +1), bit set = spin down (s_i = -1).
// Amplitudes are never renormalized; with decay the missing norm is the
// accumulated failure probability and is reported, not hidden.
struct StateVector {
  int n = 0;
  std::vector<std::complex<double>> amps;

  std::size_t size() const { return amps.size(); }
};

inline constexpr int kQubitCap = 22;  // 4M amplitudes, 64 MiB

StateVector init_uniform(int n);

// In-place normalized fast Walsh-Hadamard transform; self-inverse.
void walsh_hadamard(StateVector& state);

double total_norm(const StateVector& state);

double success_probability(const StateVector& state,
                           const std::vector<std::uint32_t>& solutions);

// Probability mass grouped by integer imbalance. Keys are D values; the sum
// over bins equals the surviving norm.
std::map<std::int64_t, double> sz_histogram(
    const StateVector& state, const std::vector<std::int64_t>& table);

}  // namespace qpart
