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
#include <limits>
#include <vector>

#include "qpart/instances.hpp"
#include "qpart/runner.hpp"

namespace qpart {

// How the oracle width is chosen at each grid point.
enum class GammaRule {
  fixed,     // use SweepSpec::gamma_fixed as-is
  lsb,       // 2^{-k}; recursive sweeps use their default 2^{-(m+1)}
  critical,  // 2^{-min(k_c(n), k)}: the phase-boundary width
  optimize,  // scalar search minimizing the median total iteration count
};

enum class Algorithm { standard, recursive };

struct SweepSpec {
  std::vector<int> n_values;
  std::vector<int> k_values;
  GammaRule gamma_rule = GammaRule::lsb;
  double gamma_fixed = 0.0;
  // Interaction-to-decay ratio; decay enters runs as r = 1/(rho * gamma).
  double rho = std::numeric_limits<double>::infinity();
  Algorithm algorithm = Algorithm::standard;
  int recursive_m = 0;  // layer width when algorithm == recursive
  int ensemble = 500;
  std::uint64_t seed = 1;
  PostselectRule postselect = PostselectRule::none;
  std::int64_t solution_count = 0;
  double epsilon = 0.01;
  int t_max = 64;
  bool echo = true;
  DiffusionSpec diffusion;
  std::vector<double> quantiles = {0.01, 0.25, 0.5, 0.75, 0.99};
  unsigned threads = 0;
};

struct SweepRecord {
  int n = 0;
  int k = 0;
  double gamma = 0.0;
  double r = 0.0;
  int t_opt = 0;  // total oracle queries for the recursive algorithm
  double p_opt_median = 0.0;
  double t_total_median = 0.0;
  double mean_solutions = 0.0;
  double q_median = 0.0;
  std::vector<double> q_quantiles;  // aligned with SweepSpec::quantiles
  double physical_time_median = 0.0;
  int instances_used = 0;
  int attempts = 0;
  bool flagged = false;  // postselection yield fell short of the request
};

// One record per (n, k) grid point; bit-identical for identical specs.
// Instances whose success set is empty contribute Q = 0.
std::vector<SweepRecord> run_sweep(const SweepSpec& spec);

enum class GammaObjective { min_median_t_total, max_q };

struct GammaOptResult {
  double gamma = 0.0;
  double objective = 0.0;  // median T_total (or -median Q) at the optimum
  bool fallback = false;   // bracket failed; coarse-scan winner returned
};

// Width optimization over log2(gamma) in [-(k+2), 0]: a 9-point coarse
// scan to bracket the optimum, then golden-section refinement. An optimum
// on the scan boundary is returned as-is and flagged.
GammaOptResult optimize_gamma(const std::vector<SearchProblem>& problems,
                              int k, double rho, const RunConfig& base,
                              GammaObjective objective =
                                  GammaObjective::min_median_t_total,
                              unsigned threads = 0);

struct GammaTargetResult {
  double gamma = 0.0;
  double p_opt = 0.0;
  bool reachable = false;
};

// Bisection on log2(gamma) in [-(k+4), 0] for the width whose ensemble
// median P_opt crosses target_p. Capture improves monotonically as gamma
// shrinks, which makes the bracket sound; `reachable` reports whether the
// target was bracketed at all. The discrete ensemble median can leave the
// achieved p_opt a finite distance from the target.
GammaTargetResult gamma_for_target_popt(
    const std::vector<SearchProblem>& problems, int k, double target_p,
    const RunConfig& base, unsigned threads = 0);

struct ScheduleOptResult {
  std::vector<int> schedule;
  double median_t_total = 0.0;
  int evaluations = 0;
};

// Cyclic coordinate descent over the integer schedule, starting from
// default_schedule. Each coordinate gets an exact line search over
// T in [1, max(24, default + 2)]; objective is the median over instances
// of ledger_queries * M(P_final, eps); ties prefer the smaller T.
ScheduleOptResult optimize_schedule(
    const std::vector<ProblemInstance>& instances,
    const RecursiveConfig& base, unsigned threads = 0);

struct CaptureHistogram {
  std::vector<double> gammas;
  std::vector<double> sz_centers;
  // density[g][bin]: instance-averaged probability mass near S_z, scaled
  // so each gamma column peaks at 1.
  std::vector<std::vector<double>> density;
  std::vector<int> t_opt;  // iterations used for each gamma column
};

// Unpostselected capture-range picture: for each width, run to the
// T_opt determined on the solvable subset and bin the final probability
// mass by S_z over the whole ensemble.
CaptureHistogram capture_histogram(
    const std::vector<ProblemInstance>& instances,
    const std::vector<double>& gammas, const RunConfig& base, int bins = 129,
    unsigned threads = 0);

struct RealSweepRecord {
  int n = 0;
  double k_eff = 0.0;
  double gamma = 0.0;
  int t_opt = 0;
  double p_opt_median = 0.0;
  double q_median = 0.0;
  int tie_count = 0;  // instances whose |D| argmin is degenerate (> 1 pair)
};

// Optimization-problem sweep with real weights: the success set is the
// exact argmin of |D| and gamma = 2^{-k_eff}.
std::vector<RealSweepRecord> real_weight_sweep(
    const std::vector<int>& n_values, const std::vector<double>& k_eff_values,
    int ensemble, std::uint64_t seed, const RunConfig& base,
    unsigned threads = 0);

}  // namespace qpart
