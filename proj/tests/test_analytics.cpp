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

#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>

#include "doctest.h"
#include "qpart/analytics.hpp"
#include "qpart/phasor.hpp"

namespace {
// Reference erfcx values cross-checked against an independent
// arbitrary-precision evaluation.
constexpr double kErfcx001 = 0.98881546104634255;
constexpr double kErfcx1 = 0.427583576155807;
constexpr double kErfcx25 = 0.21080636406114361;
constexpr double kErfcx10 = 0.056140992743822594;
constexpr double kErfcx707 = 0.00079800427042352141;
}  // namespace

TEST_CASE("erfcx matches frozen references") {
  CHECK(qpart::erfcx(0.01) == doctest::Approx(kErfcx001).epsilon(1e-13));
  CHECK(qpart::erfcx(1.0) == doctest::Approx(kErfcx1).epsilon(1e-13));
  CHECK(qpart::erfcx(2.5) == doctest::Approx(kErfcx25).epsilon(1e-13));
  CHECK(qpart::erfcx(10.0) == doctest::Approx(kErfcx10).epsilon(1e-13));
  CHECK(qpart::erfcx(707.0) == doctest::Approx(kErfcx707).epsilon(1e-13));
  CHECK(qpart::erfcx(0.0) == doctest::Approx(1.0).epsilon(1e-15));
  // No overflow where exp(x^2) alone would blow up.
  CHECK(std::isfinite(qpart::erfcx(1e4)));
  CHECK(qpart::erfcx(1e4) > 0.0);
}

TEST_CASE("trials_needed sentinels and reference value") {
  CHECK(qpart::trials_needed(0.5, 0.01) ==
        doctest::Approx(6.6438561897747244).epsilon(1e-14));
  CHECK(qpart::trials_needed(1.0, 0.01) == 1.0);
  CHECK(std::isinf(qpart::trials_needed(0.0, 0.01)));
  CHECK_THROWS_AS(qpart::trials_needed(0.5, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(qpart::trials_needed(0.5, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(qpart::trials_needed(-0.1, 0.01), std::invalid_argument);
  CHECK_THROWS_AS(qpart::trials_needed(1.1, 0.01), std::invalid_argument);
}

TEST_CASE("critical bit depth and step width") {
  CHECK(qpart::critical_bit_depth(6.0) ==
        doctest::Approx(5.1742519352638405).epsilon(1e-14));
  CHECK(qpart::critical_bit_depth(8.0) ==
        doctest::Approx(6.9667331856244186).epsilon(1e-14));
  CHECK(qpart::critical_bit_depth(12.0) ==
        doctest::Approx(10.67425193526384).epsilon(1e-14));
  // Above the critical depth the width saturates at 2^{-k_c}.
  CHECK(qpart::critical_step_width(8.0, 12.0) ==
        doctest::Approx(0.0079947399058319414).epsilon(1e-14));
  // Below it the least significant bit sets the width.
  CHECK(qpart::critical_step_width(8.0, 5.0) ==
        doctest::Approx(0.03125).epsilon(1e-14));
}

TEST_CASE("expected solution counts") {
  CHECK(qpart::expected_solutions(10.0, 7.0) ==
        doctest::Approx(3.496154977894653).epsilon(1e-14));
  CHECK(qpart::expected_solutions(12.0, 12.0) ==
        doctest::Approx(0.3989422804014327).epsilon(1e-14));
  // Crossing k = k_c(n) means crossing <N_A> = 1.
  const double kc = qpart::critical_bit_depth(10.0);
  CHECK(qpart::expected_solutions(10.0, kc) ==
        doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("averaged phase factor limits and frozen values") {
  CHECK(qpart::chibar(1.0) ==
        doctest::Approx(-0.31135908483759689).epsilon(1e-13));
  CHECK(qpart::chibar(5.0) ==
        doctest::Approx(0.56962214403391453).epsilon(1e-13));
  CHECK(qpart::chibar(5.0, 0.1) ==
        doctest::Approx(0.57582784656371122).epsilon(1e-13));
  // Narrow spread: everything sits inside the step, chibar -> -1.
  CHECK(qpart::chibar(1e-4) == doctest::Approx(-1.0).epsilon(1e-3));
  // Wide spread: almost nothing is phased, chibar -> 1.
  CHECK(qpart::chibar(1e6) == doctest::Approx(1.0).epsilon(1e-5));
  // Monotone in sigma, finite at extreme arguments.
  double last = -1.1;
  for (double sigma : {0.01, 0.1, 0.5, 1.0, 3.0, 10.0, 100.0}) {
    const double value = qpart::chibar(sigma);
    CHECK(value > last);
    CHECK(value >= -1.0);
    CHECK(value <= 1.0);
    last = value;
  }
  CHECK(std::isfinite(qpart::chibar(1e-9, 0.3)));
}

TEST_CASE("sigma_from_gamma scales as w_rms sqrt(n) / gamma") {
  CHECK(qpart::sigma_from_gamma(9.0, 0.1) ==
        doctest::Approx(17.320508075688775).epsilon(1e-14));
  CHECK(qpart::sigma_from_gamma(4.0, 0.5, 1.0) ==
        doctest::Approx(4.0).epsilon(1e-14));
}

TEST_CASE("gain curve and its mu = 0 bound agree") {
  for (double chi : {-0.9, -0.3, 0.2, 0.7, 1.0}) {
    for (double r : {0.0, 0.05, 0.2}) {
      CHECK(qpart::g0_bound_from_chibar(chi, r) ==
            doctest::Approx(qpart::gain_curve(0.0, chi, r)).epsilon(1e-12));
    }
  }
  // Perfectly separated step: the textbook factor-9 single-cycle gain.
  CHECK(qpart::gain_curve(0.0, 1.0, 0.0) == doctest::Approx(9.0));
  CHECK(qpart::g0_bound_from_chibar(1.0, 0.0) <= 9.0 + 1e-12);
  // Fully captured bulk gives no relative gain.
  CHECK(qpart::g0_bound_from_chibar(-1.0, 0.0) == doctest::Approx(1.0));
  // Far-detuned solution states are not amplified.
  CHECK(qpart::gain_curve(1e9, 1.0, 0.0) == doctest::Approx(1.0).epsilon(1e-6));
  // g0_bound(sigma) is the chibar composition.
  CHECK(qpart::g0_bound(5.0) ==
        doctest::Approx(4.5763661240308329).epsilon(1e-12));
  // And matches the direct complex-phasor expression.
  for (double mu : {0.0, 0.5, 3.0}) {
    const double direct =
        std::norm(2.0 * qpart::chibar(5.0) - qpart::phase_factor(mu, 0.0));
    CHECK(qpart::gain_curve(mu, qpart::chibar(5.0), 0.0) ==
          doctest::Approx(direct).epsilon(1e-12));
  }
}

TEST_CASE("dissipation optimum model frozen values") {
  const qpart::QoptModel model = qpart::qopt_model(1e3, 8.0);
  CHECK(model.q_opt == doctest::Approx(8.1914842175015252).epsilon(1e-13));
  CHECK(model.gamma_opt ==
        doctest::Approx(0.025386901012668054).epsilon(1e-13));
  CHECK(model.t_opt_star ==
        doctest::Approx(7.0519169479633455).epsilon(1e-13));
  const qpart::QoptModel low = qpart::qopt_model(1e2, 8.0);
  CHECK(low.q_opt == doctest::Approx(3.802150167467039).epsilon(1e-13));
  // Q_opt grows as rho^{1/3}.
  CHECK(model.q_opt / low.q_opt ==
        doctest::Approx(std::cbrt(10.0)).epsilon(1e-12));
}

TEST_CASE("classical baselines") {
  const qpart::ClassicalBaselines bl = qpart::classical_baselines(256.0, 2.0);
  CHECK(bl.memoryless_expected == doctest::Approx(128.0).epsilon(1e-14));
  CHECK(bl.linear_expected ==
        doctest::Approx(257.0 / 3.0).epsilon(1e-14));
  CHECK(qpart::classical_quantile(100.0, 1.0, 0.5) ==
        doctest::Approx(68.967563936528421).epsilon(1e-13));
  CHECK_THROWS(qpart::classical_baselines(256.0, 0.0));
}

TEST_CASE("cooperativity to decay and effective bit depth") {
  CHECK(qpart::cooperativity_to_decay(2.0, 200.0) ==
        doctest::Approx(0.08).epsilon(1e-14));
  CHECK(qpart::effective_bit_depth(0.25) == doctest::Approx(2.0));
  CHECK(qpart::effective_bit_depth(std::exp2(-12)) == doctest::Approx(12.0));
}
