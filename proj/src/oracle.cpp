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

#include "qpart/oracle.hpp"

#include <bit>
#include <cmath>
#include <complex>
#include <stdexcept>

#include "qpart/phasor.hpp"

namespace qpart {
namespace {

void check_table(const StateVector& state,
                 std::size_t table_size) {
  if (table_size != state.size()) {
    throw std::invalid_argument("oracle: table/state size mismatch");
  }
}

void check_spec(const OracleSpec& spec) {
  if (!(spec.gamma > 0.0)) {
    throw std::invalid_argument("oracle: gamma must be positive");
  }
  if (spec.r < 0.0) {
    throw std::invalid_argument("oracle: decay r must be non-negative");
  }
  if (spec.modulus != 0) {
    if (spec.modulus < 2 || !std::has_single_bit(
                                static_cast<std::uint64_t>(spec.modulus))) {
      throw std::invalid_argument("oracle: modulus must be a power of two >= 2");
    }
  }
}

// Offset modulo into [-M/2, M/2) for M a power of two; two's-complement
// masking handles negative inputs.
inline std::int64_t wrap_centered(std::int64_t d, std::int64_t m) {
  return ((d + m / 2) & (m - 1)) - m / 2;
}

}  // namespace

void apply_oracle(StateVector& state, const std::vector<std::int64_t>& table,
                  const OracleSpec& spec) {
  check_table(state, table.size());
  check_spec(spec);
  auto& amps = state.amps;

  if (spec.modulus != 0) {
    const std::int64_t m = spec.modulus;
    // Wrapped offsets take only M distinct values; precompute the factor for
    // each unless the comb is wider than the state itself.
    if (static_cast<std::size_t>(m) <= table.size()) {
      std::vector<std::complex<double>> lut(static_cast<std::size_t>(m));
      const double inv = 1.0 / (static_cast<double>(m) * spec.gamma);
      for (std::int64_t d = -m / 2; d < m / 2; ++d) {
        std::complex<double> chi = phase_factor(static_cast<double>(d) * inv,
                                                spec.r);
        lut[static_cast<std::size_t>(d + m / 2)] =
            spec.conjugate ? std::conj(chi) : chi;
      }
      for (std::size_t x = 0; x < table.size(); ++x) {
        const std::int64_t d = wrap_centered(table[x] - spec.target, m);
        amps[x] *= lut[static_cast<std::size_t>(d + m / 2)];
      }
    } else {
      const double inv = 1.0 / (static_cast<double>(m) * spec.gamma);
      for (std::size_t x = 0; x < table.size(); ++x) {
        const std::int64_t d = wrap_centered(table[x] - spec.target, m);
        std::complex<double> chi =
            phase_factor(static_cast<double>(d) * inv, spec.r);
        amps[x] *= spec.conjugate ? std::conj(chi) : chi;
      }
    }
    return;
  }

  const double inv = 1.0 / std::ldexp(spec.gamma, spec.k_scale);
  for (std::size_t x = 0; x < table.size(); ++x) {
    const double mu = static_cast<double>(table[x] - spec.target) * inv;
    const std::complex<double> chi = phase_factor(mu, spec.r);
    amps[x] *= spec.conjugate ? std::conj(chi) : chi;
  }
}

void apply_oracle_real(StateVector& state, const std::vector<double>& table,
                       double gamma, double r, double target, bool conjugate) {
  check_table(state, table.size());
  if (!(gamma > 0.0)) {
    throw std::invalid_argument("oracle: gamma must be positive");
  }
  const double inv = 1.0 / gamma;
  for (std::size_t x = 0; x < table.size(); ++x) {
    const std::complex<double> chi =
        phase_factor((table[x] - target) * inv, r);
    state.amps[x] *= conjugate ? std::conj(chi) : chi;
  }
}

void apply_ideal_oracle(StateVector& state,
                        const std::vector<std::int64_t>& table,
                        std::int64_t target) {
  check_table(state, table.size());
  for (std::size_t x = 0; x < table.size(); ++x) {
    if (table[x] == target) state.amps[x] = -state.amps[x];
  }
}

void apply_diffusion(StateVector& state, const DiffusionSpec& spec) {
  if (spec.kind == DiffusionSpec::Kind::ideal) {
    std::complex<double> mean(0.0, 0.0);
    for (const auto& c : state.amps) mean += c;
    mean /= static_cast<double>(state.amps.size());
    const std::complex<double> twice = 2.0 * mean;
    for (auto& c : state.amps) c = twice - c;
    return;
  }
  if (!(spec.gamma_d > 0.0) || spec.gamma_d >= 1.0) {
    throw std::invalid_argument("diffusion: gamma_d must be in (0, 1)");
  }
  // H R_gamma H with all weights equal to one: in the transformed frame the
  // imbalance of y is n - 2*popcount(y), and targeting D = n marks |0...0>.
  walsh_hadamard(state);
  const double inv = 1.0 / spec.gamma_d;
  for (std::size_t y = 0; y < state.size(); ++y) {
    const double d = -2.0 * static_cast<double>(std::popcount(y));
    state.amps[y] *= phase_factor(d * inv, spec.r_d);
  }
  walsh_hadamard(state);
}

void grover_pair(StateVector& state, const std::vector<std::int64_t>& table,
                 const OracleSpec& oracle, const DiffusionSpec& diffusion) {
  OracleSpec forward = oracle;
  forward.conjugate = false;
  OracleSpec echoed = oracle;
  echoed.conjugate = true;
  apply_oracle(state, table, forward);
  apply_diffusion(state, diffusion);
  apply_oracle(state, table, echoed);
  apply_diffusion(state, diffusion);
}

}  // namespace qpart
