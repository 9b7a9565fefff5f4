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
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "qpart/instances.hpp"
#include "qpart/runner.hpp"

TEST_CASE("ideal oracle and diffusion reproduce textbook amplification") {
  const int n = 8;
  const qpart::SearchProblem problem = qpart::abstract_problem(n, {37});
  qpart::RunConfig config;
  config.ideal_oracle = true;
  config.t_max = 20;
  const qpart::RunTrace trace = qpart::run_standard(problem, config);
  const double theta = std::asin(1.0 / std::sqrt(std::exp2(n)));
  REQUIRE(trace.probs.size() == 21);
  for (int t = 0; t <= 20; ++t) {
    const double expected = std::pow(std::sin((2 * t + 1) * theta), 2);
    CHECK(trace.probs[t] == doctest::Approx(expected).epsilon(1e-10));
  }
  for (double norm : trace.norms) {
    CHECK(norm == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("trace starts at the uniform success probability") {
  const qpart::ProblemInstance inst = qpart::gen_instance(8, 6, 19);
  const qpart::SearchProblem problem = qpart::make_problem(inst);
  qpart::RunConfig config;
  config.gamma = 0.01;
  config.t_max = 5;
  const qpart::RunTrace trace = qpart::run_standard(problem, config);
  CHECK(trace.probs[0] ==
        doctest::Approx(static_cast<double>(problem.solutions.size()) / 256.0)
            .epsilon(1e-14));
  CHECK(trace.instance_id == inst.seed);
}

TEST_CASE("echo recovers the peak probability in the two-phase scenario") {
  // Non-solutions collect phase exactly eps when gamma = tan(eps / 2).
  // The echo must never lose peak probability against the naive sequence,
  // and it keeps the peak high even for coarse phase offsets.
  const qpart::SearchProblem problem = qpart::abstract_problem(10, {512});
  auto peak_at = [&](double eps, bool echo) {
    qpart::RunConfig config;
    config.gamma = std::tan(eps / 2.0);
    config.echo = echo;
    config.t_max = 40;
    const qpart::RunTrace trace = qpart::run_standard(problem, config);
    double peak = 0.0;
    for (double p : trace.probs) peak = std::max(peak, p);
    return peak;
  };
  for (double eps : {0.05, 0.1, 0.25}) {
    const double echoed = peak_at(eps, true);
    const double naive = peak_at(eps, false);
    CHECK(echoed >= naive - 1e-12);
    CHECK(echoed > 0.99);
  }
  // Without the echo, the coarse offset visibly caps the peak.
  CHECK(peak_at(0.25, false) < 0.9);
}

TEST_CASE("decay bounds the success probability by the surviving norm") {
  const qpart::ProblemInstance inst = qpart::gen_instance(8, 8, 31);
  const qpart::SearchProblem problem = qpart::make_problem(inst);
  qpart::RunConfig config;
  config.gamma = std::exp2(-8);
  config.r = 0.05;
  config.t_max = 12;
  const qpart::RunTrace trace = qpart::run_standard(problem, config);
  for (std::size_t t = 1; t < trace.norms.size(); ++t) {
    CHECK(trace.norms[t] < trace.norms[t - 1]);
    CHECK(trace.probs[t] <= trace.norms[t] + 1e-14);
  }
}

TEST_CASE("instance_optimal_t minimizes the repetition-weighted cost") {
  qpart::RunTrace trace;
  trace.probs = {0.0, 0.5, 0.9};
  // T=1: 1 * ln(0.01)/ln(0.5) = 6.64; T=2: 2 * ln(0.01)/ln(0.1) = 4.
  CHECK(qpart::instance_optimal_t(trace, 0.01) == 2);
  trace.probs = {0.0, 0.5, 0.5};
  CHECK(qpart::instance_optimal_t(trace, 0.01) == 1);  // tie -> smaller T
  trace.probs = {0.0, 0.0, 0.0};
  CHECK_THROWS_AS(qpart::instance_optimal_t(trace, 0.01),
                  std::runtime_error);
}

TEST_CASE("peak_probability_t picks the probability argmax") {
  qpart::RunTrace trace;
  trace.probs = {0.1, 0.5, 0.9, 0.4};
  CHECK(qpart::peak_probability_t(trace) == 2);
  trace.probs = {0.0, 0.7, 0.7};
  CHECK(qpart::peak_probability_t(trace) == 1);  // tie -> smaller T
  // The two definitions can disagree: a small early peak can beat a late
  // large one on repetition cost.
  trace.probs = {0.0, 0.5, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.51};
  CHECK(qpart::peak_probability_t(trace) == 8);
  CHECK(qpart::instance_optimal_t(trace, 0.01) == 1);
}

TEST_CASE("ensemble optimum is epsilon-invariant") {
  qpart::EnsembleSpec spec;
  spec.n = 8;
  spec.k = 6;
  spec.count = 16;
  spec.seed = 3;
  spec.rule = qpart::PostselectRule::has_solution;
  const qpart::GeneratedEnsemble ens = qpart::generate_ensemble(spec);
  qpart::RunConfig config;
  config.gamma = std::exp2(-6);
  config.t_max = 24;
  std::vector<qpart::RunTrace> traces;
  for (const auto& inst : ens.instances) {
    traces.push_back(qpart::run_standard(qpart::make_problem(inst), config));
  }
  const qpart::GroverOutcome tight = qpart::optimal_iterations(traces, 0.01);
  const qpart::GroverOutcome loose = qpart::optimal_iterations(traces, 0.3);
  CHECK(tight.t_opt == loose.t_opt);
  CHECK(tight.t_opt >= 1);
  CHECK(tight.p_opt_median >= 0.0);
  CHECK(tight.p_opt_median <= 1.0);
  REQUIRE(tight.p_opt.size() == traces.size());
  CHECK(tight.t_total_median > 0.0);
  CHECK(std::isfinite(tight.t_total_median));
}

TEST_CASE("speedup matches memoryless guessing when the trace does") {
  // P_opt = 1 - (1 - N_A/N)^T is exactly what T memoryless guesses give.
  const double p = 1.0 - std::pow(7.0 / 8.0, 3);
  CHECK(qpart::speedup(p, 3.0, 2.0, 16.0) ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::isinf(qpart::speedup(1.0, 5.0, 1.0, 1024.0)));
  CHECK(qpart::speedup(0.0, 5.0, 1.0, 1024.0) == 0.0);
  CHECK_THROWS(qpart::speedup(0.5, 0.0, 1.0, 16.0));
  CHECK_THROWS(qpart::speedup(0.5, 3.0, 0.0, 16.0));
  CHECK_THROWS(qpart::speedup(0.5, 3.0, 16.0, 16.0));
}

TEST_CASE("real-weight runs report the exact argmin success set") {
  const qpart::RealInstance inst = qpart::gen_real_instance(8, 41);
  qpart::RunConfig config;
  config.gamma = std::exp2(-6);
  config.t_max = 10;
  qpart::SolutionReport report;
  const qpart::RunTrace trace = qpart::run_standard_real(inst, config, &report);
  REQUIRE(!report.argmin_set.empty());
  CHECK(trace.probs[0] ==
        doctest::Approx(static_cast<double>(report.argmin_set.size()) / 256.0)
            .epsilon(1e-14));
  qpart::RunConfig bad = config;
  bad.ideal_oracle = true;
  CHECK_THROWS(qpart::run_standard_real(inst, bad));
}

TEST_CASE("standard ledger charges oracle time per query") {
  qpart::RunConfig config;
  config.gamma = 0.25;
  const qpart::QueryLedger plain = qpart::standard_ledger(10, config);
  CHECK(plain.oracle_queries == 10);
  CHECK(plain.physical_time == doctest::Approx(40.0).epsilon(1e-14));
  config.diffusion.kind = qpart::DiffusionSpec::Kind::generalized;
  config.diffusion.gamma_d = 0.5;
  const qpart::QueryLedger gen = qpart::standard_ledger(10, config);
  CHECK(gen.oracle_queries == 20);
  CHECK(gen.physical_time == doctest::Approx(40.0 + 20.0).epsilon(1e-14));
}

TEST_CASE("run configuration is validated") {
  const qpart::SearchProblem problem = qpart::abstract_problem(4, {1});
  qpart::RunConfig config;
  config.gamma = 0.0;
  CHECK_THROWS(qpart::run_standard(problem, config));
  config.gamma = 0.1;
  config.r = -0.5;
  CHECK_THROWS(qpart::run_standard(problem, config));
  config.r = 0.0;
  config.t_max = 0;
  CHECK_THROWS(qpart::run_standard(problem, config));
}

TEST_CASE("abstract problems validate their inputs") {
  CHECK_THROWS(qpart::abstract_problem(0, {0}));
  CHECK_THROWS(qpart::abstract_problem(4, {16}));       // out of range
  CHECK_THROWS(qpart::abstract_problem(4, {1}, 0));     // unmarked == target
  const qpart::SearchProblem problem = qpart::abstract_problem(4, {3, 5});
  CHECK(problem.table.size() == 16);
  CHECK(problem.table[3] == 0);
  CHECK(problem.table[7] == -1);
  CHECK(problem.solutions == std::vector<std::uint32_t>{3, 5});
}
