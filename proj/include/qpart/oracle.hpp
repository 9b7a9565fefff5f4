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
#include <vector>

#include "qpart/state.hpp"

namespace qpart {

// Diagonal phase oracle over an integer imbalance table.
//
// Without a modulus, the detuning of basis state x is
//   mu = (D(x) - target) / (2^k_scale * gamma),
// i.e. mu = 2*S_z/gamma with S_z = D/2^{k+1}. With a modulus M = 2^{l*m},
// the offset d = D - target is first wrapped into [-M/2, M/2) and
//   mu = d_wrapped / (M * gamma),
// which places a phase-step comb with spacing M on the imbalance axis. With
// M = 2^k_scale the two forms agree on every state with |d| < M/2, and a
// state at d = M is treated exactly as d = 0.
struct OracleSpec {
  double gamma = 1.0;
  int k_scale = 0;
  std::int64_t target = 0;
  double r = 0.0;          // decay per query; 0 = unitary
  std::int64_t modulus = 0;  // 0 = none; else a power of two >= 2
  bool conjugate = false;    // apply conj(chi): the echo partner query
};

void apply_oracle(StateVector& state, const std::vector<std::int64_t>& table,
                  const OracleSpec& spec);

// Real-weight variant: table entries are real imbalances, mu = d/gamma.
void apply_oracle_real(StateVector& state, const std::vector<double>& table,
                       double gamma, double r, double target, bool conjugate);

// Textbook marking oracle: amps[x] *= -1 exactly when D(x) = target.
void apply_ideal_oracle(StateVector& state,
                        const std::vector<std::int64_t>& table,
                        std::int64_t target = 0);

struct DiffusionSpec {
  enum class Kind { ideal, generalized };
  Kind kind = Kind::ideal;
  double gamma_d = 0.5;  // step width of the generalized reflection; < 1
  double r_d = 0.0;      // decay during the generalized reflection
};

// Inversion about the mean (ideal), or the finite-width realization
// H R_gamma H built from an all-equal-weight phase step (generalized).
// The generalized form converges to the ideal one as gamma_d -> 0, up to a
// global sign.
void apply_diffusion(StateVector& state, const DiffusionSpec& spec);

// One echo pair: U, V, conj(U), V. Two oracle queries, two diffusions.
void grover_pair(StateVector& state, const std::vector<std::int64_t>& table,
                 const OracleSpec& oracle, const DiffusionSpec& diffusion);

}  // namespace qpart
