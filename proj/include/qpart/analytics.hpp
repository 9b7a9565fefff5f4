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

namespace qpart {

// Root-mean-square of a weight drawn uniformly from (0, 1]: 1/sqrt(3).
inline constexpr double kUniformWrms = 0.5773502691896258;

// Expected repetitions until the failure probability drops below eps,
// for a per-shot success probability p: ln(eps) / ln(1 - p).
// Sentinels: p = 1 -> 1, p = 0 -> +infinity. No clamping.
double trials_needed(double p, double eps);

// Bit depth at which the expected number of perfect partitions of n
// uniform weights crosses one: n - log2(n*pi/6)/2.
double critical_bit_depth(double n);

// Oracle width at the easy/hard phase boundary: 2^(-min(k_c(n), k)).
double critical_step_width(double n, double k);

// Ensemble-average count of perfect partitions: sqrt(6/(pi*n)) * 2^(n-k).
double expected_solutions(double n, double k);

// Scaled complementary error function exp(x^2) * erfc(x), stable for
// large positive x where the unscaled product overflows.
double erfcx(double x);

// Gaussian-ensemble average of the real part of the oracle phase factor
// over offsets with standard deviation sigma (in units of the width):
// 1 - sqrt(2*pi) * erfcx((1+r)/(sqrt(2)*sigma)) / sigma.
double chibar(double sigma, double r = 0.0);

// Offset spread in width units for an n-weight instance at width gamma.
double sigma_from_gamma(double n, double gamma, double w_rms = kUniformWrms);

// Single-cycle amplification of a solution amplitude when the bulk phase
// factor averages to chibar_value: |2*chibar - chi(mu, r)|^2, evaluated at
// the solution's own offset mu.
double gain_curve(double mu, double chibar_value, double r = 0.0);

// Ensemble-average amplification floor at mu = 0, as a polynomial in the
// averaged phase factor. Equal to gain_curve(0, chibar, r); capped at 9
// when r = 0 and chibar = 1.
double g0_bound_from_chibar(double chibar_value, double r = 0.0);
double g0_bound(double sigma, double r = 0.0);

struct QoptModel {
  double q_opt = 0.0;       // best achievable speedup over memoryless search
  double gamma_opt = 0.0;   // width that attains it
  double t_opt_star = 0.0;  // iteration count at that width
};

// Closed-form optimum of the speedup as a function of the
// interaction-to-decay ratio rho, with empirical constants c and d.
QoptModel qopt_model(double rho, double n, double c = 1.0 / 3.0,
                     double d = 1.2);

struct ClassicalBaselines {
  double memoryless_expected = 0.0;  // N / N_A
  double linear_expected = 0.0;      // (N + 1) / (N_A + 1)
};

ClassicalBaselines classical_baselines(double big_n, double n_a);

// Trials needed by memoryless guessing to succeed with probability p.
double classical_quantile(double big_n, double n_a, double p);

// Decay per width unit for a lossy interaction at cooperativity eta:
// r = 4*sigma^2/eta.
double cooperativity_to_decay(double sigma, double eta);

// Effective bit depth of a width-gamma oracle: -log2(gamma).
double effective_bit_depth(double gamma);

}  // namespace qpart
