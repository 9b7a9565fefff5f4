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

#include "qpart/instances.hpp"
#include "qpart/oracle.hpp"
#include "qpart/state.hpp"

namespace qpart {

// Everything a run needs to know about the search target: the imbalance
// table, the detuning scale, and which basis states count as success.
struct SearchProblem {
  int n = 0;
  int k_scale = 0;
  std::int64_t target = 0;
  std::vector<std::int64_t> table;
  std::vector<std::uint32_t> solutions;
  std::uint64_t instance_id = 0;
};

// Problem with the success set taken from the instance's exact solutions
// of D(x) = target.
SearchProblem make_problem(const ProblemInstance& inst,
                           std::int64_t target = 0);

// Synthetic single-table problem: D = 0 on the marked states and
// `unmarked_value` elsewhere, detuning scale 0. With gamma = tan(eps/2)
// the unmarked phase is exactly eps while marked states get the full pi.
SearchProblem abstract_problem(int n,
                               const std::vector<std::uint32_t>& marked,
                               std::int64_t unmarked_value = -1);

struct RunConfig {
  double gamma = 1.0;
  double r = 0.0;
  int t_max = 64;
  bool echo = true;
  DiffusionSpec diffusion;
  double epsilon = 0.01;
  bool ideal_oracle = false;  // replace the phase step with the -1 flip
};

struct RunTrace {
  std::vector<double> probs;  // success probability at T = 0..t_max
  std::vector<double> norms;  // surviving norm at T = 0..t_max
  std::uint64_t instance_id = 0;
};

RunTrace run_standard(const SearchProblem& problem, const RunConfig& config,
                      StateVector* final_state = nullptr);

// Real-weight variant for the optimization problem: mu = D(x)/gamma and the
// success set is the exact argmin of |D| over basis states.
RunTrace run_standard_real(const RealInstance& inst, const RunConfig& config,
                           SolutionReport* report = nullptr);

// Per-layer slice of the recursive query ledger.
struct LayerLedger {
  int layer = 0;              // 1-based
  int t_l = 0;                // amplification cycles scheduled at this layer
  std::int64_t tau_l = 0;     // oracle calls per cycle (recurrence value)
  std::int64_t queries = 0;   // oracle calls actually issued
};

struct QueryLedger {
  std::int64_t oracle_queries = 0;
  double physical_time = 0.0;  // sum over queries of 1/gamma_query
  std::vector<LayerLedger> layers;
};

// Ledger of a standard run of t iterations (for side-by-side comparisons
// with recursive ledgers). Generalized diffusion is charged one query of
// width gamma_d per application; ideal diffusion is free.
QueryLedger standard_ledger(int t, const RunConfig& config);

struct RecursiveConfig {
  int m = 1;
  double gamma = 0.0;           // 0 = default 2^{-m-1}
  std::vector<int> schedule;    // T_l per layer; empty = default_schedule
  double r = 0.0;
  DiffusionSpec diffusion;      // reflection used inside every layer
  std::int64_t target = 0;
  double epsilon = 0.01;
};

struct RecursiveResult {
  std::vector<double> layer_probs;  // success probability after each layer
  double final_probability = 0.0;
  double final_norm = 1.0;
  QueryLedger ledger;
  StateVector state;
};

// Modular-oracle recursion: layer l of L amplifies states whose imbalance
// vanishes mod 2^{l*m} using the reduced-weight table, the final layer
// searches with the full-resolution oracle, and each layer's reflection is
// realized by replaying the lower layers forward and inverted.
RecursiveResult run_recursive(const ProblemInstance& inst,
                              const RecursiveConfig& config);

// T_l per layer: round-to-even((pi/4) * 2^{m/2}) for every layer but the
// last, which gets a sqrt(n) boost before rounding. Length ceil(k/m).
std::vector<int> default_schedule(int m, int k, int n);

// tau_l recurrence for a given schedule: tau_1 = 1,
// tau_l = tau_{l-1} * (1 + 2*T_{l-1}). Returns tau per layer.
std::vector<std::int64_t> schedule_taus(const std::vector<int>& schedule);

struct ClosedFormQueries {
  double exact = 0.0;       // geometric series with the un-rounded T
  double asymptotic = 0.0;  // 2^{k(1/2 + c/m) - 1}, c = log2(pi/2)
};

ClosedFormQueries closed_form_queries(int k, int m);

// Expected repetition-weighted cost T * M(P_T, eps) minimized over T >= 1
// for one trace; ties resolve to the smaller T. This is the default T_opt
// definition used everywhere a report says "T_opt".
int instance_optimal_t(const RunTrace& trace, double epsilon);

// Alternative definition T_opt*: the T >= 1 that maximizes P_T outright,
// ignoring repetition cost; ties resolve to the smaller T.
int peak_probability_t(const RunTrace& trace);

struct GroverOutcome {
  int t_opt = 0;
  double t_total_median = 0.0;
  double p_opt_median = 0.0;
  std::vector<double> p_opt;  // per instance, at t_opt
};

// Ensemble optimum: T_opt minimizes the median over instances of
// T * M(P_T, eps); the argmin is independent of eps.
GroverOutcome optimal_iterations(const std::vector<RunTrace>& traces,
                                 double epsilon);

// Speedup over memoryless classical guessing:
//   Q = ln(1 - P_opt) / (T_opt * ln(1 - N_A/N)).
// P_opt = 1 maps to +infinity, P_opt = 0 to 0.
double speedup(double p_opt, double t_opt, double n_solutions, double big_n);

}  // namespace qpart
