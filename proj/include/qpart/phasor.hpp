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

#include <cmath>
#include <complex>

namespace qpart {

// Per-basis-state factor applied by one oracle query.
//
//   chi(mu, r) = -(1 + i*mu - r) / (1 - i*mu + r)
//
// mu is the detuning in units of the step half-width (mu = 2*S_z/gamma) and
// r >= 0 the decay probability scale per query. For r = 0 this is the pure
// phase exp(i * (2*atan(mu) + pi)): a state exactly on target (mu = 0) gets
// the full pi flip, far-detuned states are left almost untouched. For r > 0
// the modulus drops below one, which is how lost norm (a decay event during
// the query) enters the simulation.
inline std::complex<double> phase_factor(double mu, double r) {
  const std::complex<double> num(1.0 - r, mu);
  const std::complex<double> den(1.0 + r, -mu);
  return -num / den;
}

// Phase step of the decay-free oracle, in radians; rises from 0 to 2*pi as
// mu sweeps across the step. phase_factor(mu, 0) == exp(i*oracle_phase(mu)).
inline double oracle_phase(double mu) {
  return 2.0 * std::atan(mu) + 4.0 * std::atan(1.0);
}

}  // namespace qpart
