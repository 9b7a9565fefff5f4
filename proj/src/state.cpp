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

#include "qpart/state.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace qpart {

StateVector init_uniform(int n) {
  if (n < 1 || n > kQubitCap) {
    throw std::invalid_argument("state size n must be in [1, " +
                                std::to_string(kQubitCap) + "], got " +
                                std::to_string(n));
  }
  StateVector state;
  state.n = n;
  const std::size_t size = std::size_t{1} << n;
  state.amps.assign(size, std::complex<double>(
                              1.0 / std::sqrt(static_cast<double>(size)), 0.0));
  return state;
}

void walsh_hadamard(StateVector& state) {
  auto& a = state.amps;
  const std::size_t size = a.size();
  for (std::size_t h = 1; h < size; h <<= 1) {
    for (std::size_t i = 0; i < size; i += 2 * h) {
      for (std::size_t j = i; j < i + h; ++j) {
        const std::complex<double> x = a[j];
        const std::complex<double> y = a[j + h];
        a[j] = x + y;
        a[j + h] = x - y;
      }
    }
  }
  const double scale = 1.0 / std::sqrt(static_cast<double>(size));
  for (auto& c : a) c *= scale;
}

double total_norm(const StateVector& state) {
  double sum = 0.0;
  for (const auto& c : state.amps) sum += std::norm(c);
  return sum;
}

double success_probability(const StateVector& state,
                           const std::vector<std::uint32_t>& solutions) {
  double sum = 0.0;
  for (std::uint32_t x : solutions) sum += std::norm(state.amps[x]);
  return sum;
}

std::map<std::int64_t, double> sz_histogram(
    const StateVector& state, const std::vector<std::int64_t>& table) {
  if (table.size() != state.size()) {
    throw std::invalid_argument("sz_histogram: table/state size mismatch");
  }
  std::map<std::int64_t, double> bins;
  for (std::size_t x = 0; x < table.size(); ++x) {
    bins[table[x]] += std::norm(state.amps[x]);
  }
  return bins;
}

}  // namespace qpart
