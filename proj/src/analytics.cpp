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

#include "qpart/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "qpart/phasor.hpp"

namespace qpart {

double trials_needed(double p, double eps) {
  if (!(eps > 0.0) || !(eps < 1.0)) {
    throw std::invalid_argument("trials_needed: eps must lie in (0, 1)");
  }
  if (p < 0.0 || p > 1.0) {
    throw std::invalid_argument("trials_needed: p must lie in [0, 1]");
  }
  if (p == 1.0) return 1.0;
  if (p == 0.0) return std::numeric_limits<double>::infinity();
  return std::log(eps) / std::log1p(-p);
}

double critical_bit_depth(double n) {
  if (!(n >= 1.0)) {
    throw std::invalid_argument("critical_bit_depth: n must be >= 1");
  }
  return n - 0.5 * std::log2(n * std::numbers::pi / 6.0);
}

double critical_step_width(double n, double k) {
  return std::exp2(-std::min(critical_bit_depth(n), k));
}

double expected_solutions(double n, double k) {
  if (!(n >= 1.0)) {
    throw std::invalid_argument("expected_solutions: n must be >= 1");
  }
  return std::sqrt(6.0 / (std::numbers::pi * n)) * std::exp2(n - k);
}

double erfcx(double x) {
  if (x < 2.5) {
    // exp(x^2) stays finite here and std::erfc carries the accuracy.
    return std::exp(x * x) * std::erfc(x);
  }
  // Laplace continued fraction, evaluated bottom-up. Depth 80 leaves the
  // result at double precision for every x >= 2.5.
  double t = 0.0;
  for (int term = 80; term >= 1; --term) {
    t = 0.5 * static_cast<double>(term) / (x + t);
  }
  return 1.0 / (std::sqrt(std::numbers::pi) * (x + t));
}

double chibar(double sigma, double r) {
  if (!(sigma > 0.0)) {
    throw std::invalid_argument("chibar: sigma must be positive");
  }
  if (r < 0.0) {
    throw std::invalid_argument("chibar: r must be non-negative");
  }
  const double z = (1.0 + r) / (std::numbers::sqrt2 * sigma);
  return 1.0 - std::sqrt(2.0 * std::numbers::pi) * erfcx(z) / sigma;
}

double sigma_from_gamma(double n, double gamma, double w_rms) {
  if (!(gamma > 0.0) || !(w_rms > 0.0) || !(n > 0.0)) {
    throw std::invalid_argument("sigma_from_gamma: arguments must be positive");
  }
  return w_rms * std::sqrt(n) / gamma;
}

double gain_curve(double mu, double chibar_value, double r) {
  return std::norm(2.0 * chibar_value - phase_factor(mu, r));
}

double g0_bound_from_chibar(double chibar_value, double r) {
  if (r < 0.0) {
    throw std::invalid_argument("g0_bound: r must be non-negative");
  }
  const double base = (1.0 - r) / (1.0 + r);
  return base * base + (8.0 / (1.0 + r) - 4.0) * chibar_value +
         4.0 * chibar_value * chibar_value;
}

double g0_bound(double sigma, double r) {
  return g0_bound_from_chibar(chibar(sigma, r), r);
}

QoptModel qopt_model(double rho, double n, double c, double d) {
  if (!(rho > 0.0) || !(n > 0.0) || !(c > 0.0) || !(d > 0.0)) {
    throw std::invalid_argument("qopt_model: arguments must be positive");
  }
  const double pi = std::numbers::pi;
  const double n_term = pi * n / 6.0;
  QoptModel out;
  out.q_opt = std::pow(4.0 / pi, 4.0 / 3.0) * std::pow(n_term, 1.0 / 6.0) *
              std::exp(-c) * std::cbrt(c * rho / d);
  out.gamma_opt = std::pow(pi * d / (4.0 * c * rho), 2.0 / 3.0) *
                  std::pow(n_term, 1.0 / 6.0);
  out.t_opt_star =
      pi / (4.0 * std::sqrt(out.gamma_opt)) * std::pow(n_term, 0.25);
  return out;
}

ClassicalBaselines classical_baselines(double big_n, double n_a) {
  if (!(big_n >= 1.0) || !(n_a > 0.0) || n_a > big_n) {
    throw std::invalid_argument(
        "classical_baselines: need 0 < N_A <= N, N >= 1");
  }
  ClassicalBaselines out;
  out.memoryless_expected = big_n / n_a;
  out.linear_expected = (big_n + 1.0) / (n_a + 1.0);
  return out;
}

double classical_quantile(double big_n, double n_a, double p) {
  if (!(big_n >= 1.0) || !(n_a > 0.0) || n_a > big_n) {
    throw std::invalid_argument("classical_quantile: need 0 < N_A <= N");
  }
  return trials_needed(n_a / big_n, 1.0 - p);
}

double cooperativity_to_decay(double sigma, double eta) {
  if (!(sigma > 0.0) || !(eta > 0.0)) {
    throw std::invalid_argument(
        "cooperativity_to_decay: arguments must be positive");
  }
  return 4.0 * sigma * sigma / eta;
}

double effective_bit_depth(double gamma) {
  if (!(gamma > 0.0)) {
    throw std::invalid_argument("effective_bit_depth: gamma must be positive");
  }
  return -std::log2(gamma);
}

}  // namespace qpart
