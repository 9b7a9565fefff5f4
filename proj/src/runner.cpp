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

#include "qpart/runner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <utility>

#include "qpart/analytics.hpp"
#include "qpart/stats.hpp"

namespace qpart {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Probabilities computed from amplitudes can exceed 1 by a few ulps;
// trials_needed treats that as a domain error, so clamp first.
double clamp_prob(double p) { return std::min(1.0, std::max(0.0, p)); }

double repeat_cost(int t, double p, double epsilon) {
  return static_cast<double>(t) * trials_needed(clamp_prob(p), epsilon);
}

void check_run_config(const RunConfig& config) {
  if (config.t_max < 1) {
    throw std::invalid_argument("run: t_max must be >= 1");
  }
  if (!(config.epsilon > 0.0) || !(config.epsilon < 1.0)) {
    throw std::invalid_argument("run: epsilon must lie in (0, 1)");
  }
  if (!config.ideal_oracle && !(config.gamma > 0.0)) {
    throw std::invalid_argument("run: gamma must be positive");
  }
}

int round_to_even(double x) {
  const long half = std::lround(x / 2.0);
  return static_cast<int>(std::max(1L, half)) * 2;
}

}  // namespace

SearchProblem make_problem(const ProblemInstance& inst, std::int64_t target) {
  SearchProblem problem;
  problem.n = inst.n;
  problem.k_scale = inst.k;
  problem.target = target;
  problem.table = build_imbalance_table(inst);
  problem.solutions = count_solutions_table(problem.table, target).solutions;
  problem.instance_id = inst.seed;
  return problem;
}

SearchProblem abstract_problem(int n, const std::vector<std::uint32_t>& marked,
                               std::int64_t unmarked_value) {
  if (n < 1 || n > kQubitCap) {
    throw std::invalid_argument("abstract_problem: n out of range");
  }
  if (unmarked_value == 0) {
    throw std::invalid_argument(
        "abstract_problem: unmarked value must differ from 0");
  }
  SearchProblem problem;
  problem.n = n;
  problem.table.assign(std::size_t{1} << n, unmarked_value);
  for (std::uint32_t x : marked) {
    if (x >= problem.table.size()) {
      throw std::invalid_argument("abstract_problem: marked index out of range");
    }
    problem.table[x] = 0;
  }
  problem.solutions = marked;
  return problem;
}

RunTrace run_standard(const SearchProblem& problem, const RunConfig& config,
                      StateVector* final_state) {
  check_run_config(config);
  StateVector state = init_uniform(problem.n);
  if (state.size() != problem.table.size()) {
    throw std::invalid_argument("run: table size does not match 2^n");
  }

  RunTrace trace;
  trace.instance_id = problem.instance_id;
  trace.probs.reserve(config.t_max + 1);
  trace.norms.reserve(config.t_max + 1);
  trace.probs.push_back(success_probability(state, problem.solutions));
  trace.norms.push_back(total_norm(state));

  OracleSpec oracle;
  oracle.gamma = config.gamma;
  oracle.k_scale = problem.k_scale;
  oracle.target = problem.target;
  oracle.r = config.r;

  for (int t = 1; t <= config.t_max; ++t) {
    if (config.ideal_oracle) {
      apply_ideal_oracle(state, problem.table, problem.target);
    } else {
      oracle.conjugate = config.echo && (t % 2 == 0);
      apply_oracle(state, problem.table, oracle);
    }
    apply_diffusion(state, config.diffusion);
    trace.probs.push_back(success_probability(state, problem.solutions));
    trace.norms.push_back(total_norm(state));
  }
  if (final_state != nullptr) *final_state = std::move(state);
  return trace;
}

RunTrace run_standard_real(const RealInstance& inst, const RunConfig& config,
                           SolutionReport* report) {
  check_run_config(config);
  if (config.ideal_oracle) {
    throw std::invalid_argument(
        "run_standard_real: the argmin success set has no marking oracle");
  }
  const std::vector<double> table = build_real_imbalance_table(inst);
  SolutionReport solutions = count_solutions_real(table);
  StateVector state = init_uniform(inst.n);

  RunTrace trace;
  trace.instance_id = inst.seed;
  trace.probs.reserve(config.t_max + 1);
  trace.norms.reserve(config.t_max + 1);
  trace.probs.push_back(success_probability(state, solutions.argmin_set));
  trace.norms.push_back(total_norm(state));
  for (int t = 1; t <= config.t_max; ++t) {
    const bool conjugate = config.echo && (t % 2 == 0);
    apply_oracle_real(state, table, config.gamma, config.r, 0.0, conjugate);
    apply_diffusion(state, config.diffusion);
    trace.probs.push_back(success_probability(state, solutions.argmin_set));
    trace.norms.push_back(total_norm(state));
  }
  if (report != nullptr) *report = std::move(solutions);
  return trace;
}

QueryLedger standard_ledger(int t, const RunConfig& config) {
  if (t < 0) throw std::invalid_argument("standard_ledger: negative t");
  QueryLedger ledger;
  ledger.oracle_queries = t;
  ledger.physical_time = static_cast<double>(t) / config.gamma;
  if (config.diffusion.kind == DiffusionSpec::Kind::generalized) {
    ledger.oracle_queries += t;
    ledger.physical_time += static_cast<double>(t) / config.diffusion.gamma_d;
  }
  ledger.layers.push_back(LayerLedger{1, t, 1, t});
  return ledger;
}

std::vector<int> default_schedule(int m, int k, int n) {
  if (m < 1 || k < 1 || n < 1) {
    throw std::invalid_argument("default_schedule: m, k, n must be >= 1");
  }
  const int layers = (k + m - 1) / m;
  const double base =
      std::numbers::pi / 4.0 * std::exp2(static_cast<double>(m) / 2.0);
  std::vector<int> schedule(layers, round_to_even(base));
  schedule.back() = round_to_even(base * std::sqrt(static_cast<double>(n)));
  return schedule;
}

std::vector<std::int64_t> schedule_taus(const std::vector<int>& schedule) {
  std::vector<std::int64_t> taus(schedule.size());
  std::int64_t tau = 1;
  for (std::size_t l = 0; l < schedule.size(); ++l) {
    if (l > 0) tau *= 1 + 2 * static_cast<std::int64_t>(schedule[l - 1]);
    taus[l] = tau;
  }
  return taus;
}

ClosedFormQueries closed_form_queries(int k, int m) {
  if (m < 1 || k < 1 || k % m != 0) {
    throw std::invalid_argument("closed_form_queries: need m >= 1 dividing k");
  }
  const double pi = std::numbers::pi;
  const double t_bar = pi / 4.0 * std::exp2(static_cast<double>(m) / 2.0);
  const double layers = static_cast<double>(k) / static_cast<double>(m);
  ClosedFormQueries out;
  out.exact = t_bar * (std::pow(1.0 + 2.0 * t_bar, layers) - 1.0) /
              (2.0 * t_bar);
  const double c = std::log2(pi / 2.0);
  out.asymptotic =
      std::exp2(static_cast<double>(k) * (0.5 + c / m) - 1.0);
  return out;
}

RecursiveResult run_recursive(const ProblemInstance& inst,
                              const RecursiveConfig& config) {
  if (config.m < 1) {
    throw std::invalid_argument("run_recursive: m must be >= 1");
  }
  const int k = inst.k;
  const int n = inst.n;
  // Bit depths that m does not divide behave as if the weights were padded
  // with leading zero bits: layer moduli below stay the same and the final
  // layer always runs at the instance's own scale.
  const int num_layers = (k + config.m - 1) / config.m;
  const double gamma =
      config.gamma > 0.0 ? config.gamma : std::exp2(-(config.m + 1));
  const std::vector<int> schedule = config.schedule.empty()
                                        ? default_schedule(config.m, k, n)
                                        : config.schedule;
  if (static_cast<int>(schedule.size()) != num_layers) {
    throw std::invalid_argument(
        "run_recursive: schedule length must equal the layer count");
  }
  for (int t_l : schedule) {
    if (t_l < 1) {
      throw std::invalid_argument("run_recursive: schedule entries must be >= 1");
    }
  }

  std::vector<std::vector<std::int64_t>> tables(num_layers);
  std::vector<std::int64_t> moduli(num_layers, 0);
  for (int l = 0; l + 1 < num_layers; ++l) {
    const int bits = (l + 1) * config.m;
    tables[l] = build_layer_table(inst, bits);
    moduli[l] = std::int64_t{1} << bits;
  }
  tables[num_layers - 1] = build_imbalance_table(inst);

  const std::vector<std::uint32_t> solutions =
      count_solutions_table(tables[num_layers - 1], config.target).solutions;

  StateVector state = init_uniform(n);
  QueryLedger ledger;
  const std::vector<std::int64_t> taus = schedule_taus(schedule);
  ledger.layers.resize(num_layers);
  for (int l = 0; l < num_layers; ++l) {
    ledger.layers[l] = LayerLedger{l + 1, schedule[l], taus[l], 0};
  }

  auto query = [&](int l, int t, bool dagger) {
    OracleSpec oracle;
    oracle.gamma = gamma;
    oracle.r = config.r;
    oracle.target = config.target;
    // Echo pairing: the forward pass conjugates even t; replaying the
    // sequence inverted flips that, so the pairing survives inside V.
    oracle.conjugate = ((t % 2) == 0) != dagger;
    if (moduli[l] != 0) {
      oracle.modulus = moduli[l];
    } else {
      oracle.k_scale = k;
    }
    apply_oracle(state, tables[l], oracle);
    ledger.layers[l].queries += 1;
    ledger.oracle_queries += 1;
    ledger.physical_time += 1.0 / gamma;
  };
  auto reflect = [&]() {
    apply_diffusion(state, config.diffusion);
    if (config.diffusion.kind == DiffusionSpec::Kind::generalized) {
      ledger.oracle_queries += 1;
      ledger.physical_time += 1.0 / config.diffusion.gamma_d;
    }
  };

  // The layer-l reflection is "replay everything below, reflect, restore":
  // V_l = G_{l-1} ... G_0 (H R H) G_0^dag ... G_{l-1}^dag applied to a ket.
  std::function<void(int)> amplify, amplify_dagger, reflect_layer;
  reflect_layer = [&](int l) {
    if (l == 0) {
      reflect();
      return;
    }
    for (int lp = l - 1; lp >= 0; --lp) amplify_dagger(lp);
    reflect();
    for (int lp = 0; lp < l; ++lp) amplify(lp);
  };
  amplify = [&](int l) {
    for (int t = 1; t <= schedule[l]; ++t) {
      query(l, t, false);
      reflect_layer(l);
    }
  };
  amplify_dagger = [&](int l) {
    for (int t = schedule[l]; t >= 1; --t) {
      reflect_layer(l);
      query(l, t, true);
    }
  };

  RecursiveResult out;
  out.layer_probs.reserve(num_layers);
  for (int l = 0; l < num_layers; ++l) {
    amplify(l);
    out.layer_probs.push_back(success_probability(state, solutions));
  }
  out.final_probability = out.layer_probs.back();
  out.final_norm = total_norm(state);
  out.ledger = std::move(ledger);
  out.state = std::move(state);
  return out;
}

int instance_optimal_t(const RunTrace& trace, double epsilon) {
  if (trace.probs.size() < 2) {
    throw std::invalid_argument("instance_optimal_t: trace has no iterations");
  }
  int best_t = 0;
  double best = kInf;
  for (std::size_t t = 1; t < trace.probs.size(); ++t) {
    const double cost =
        repeat_cost(static_cast<int>(t), trace.probs[t], epsilon);
    if (cost < best) {
      best = cost;
      best_t = static_cast<int>(t);
    }
  }
  if (best_t == 0) {
    throw std::runtime_error(
        "instance_optimal_t: success probability is zero at every T");
  }
  return best_t;
}

int peak_probability_t(const RunTrace& trace) {
  if (trace.probs.size() < 2) {
    throw std::invalid_argument("peak_probability_t: trace has no iterations");
  }
  int best_t = 1;
  double best = trace.probs[1];
  for (std::size_t t = 2; t < trace.probs.size(); ++t) {
    if (trace.probs[t] > best) {
      best = trace.probs[t];
      best_t = static_cast<int>(t);
    }
  }
  return best_t;
}

GroverOutcome optimal_iterations(const std::vector<RunTrace>& traces,
                                 double epsilon) {
  if (traces.empty()) {
    throw std::invalid_argument("optimal_iterations: no traces");
  }
  const std::size_t len = traces[0].probs.size();
  for (const RunTrace& trace : traces) {
    if (trace.probs.size() != len) {
      throw std::invalid_argument("optimal_iterations: ragged trace lengths");
    }
  }
  if (len < 2) {
    throw std::invalid_argument("optimal_iterations: traces have no iterations");
  }

  GroverOutcome outcome;
  double best = kInf;
  std::vector<double> costs(traces.size());
  for (std::size_t t = 1; t < len; ++t) {
    for (std::size_t i = 0; i < traces.size(); ++i) {
      costs[i] = repeat_cost(static_cast<int>(t), traces[i].probs[t], epsilon);
    }
    const double med = median(costs);
    if (med < best) {
      best = med;
      outcome.t_opt = static_cast<int>(t);
    }
  }
  if (outcome.t_opt == 0) {
    throw std::runtime_error(
        "optimal_iterations: median success probability is zero at every T");
  }
  outcome.t_total_median = best;
  outcome.p_opt.resize(traces.size());
  for (std::size_t i = 0; i < traces.size(); ++i) {
    outcome.p_opt[i] =
        clamp_prob(traces[i].probs[static_cast<std::size_t>(outcome.t_opt)]);
  }
  outcome.p_opt_median = median(outcome.p_opt);
  return outcome;
}

double speedup(double p_opt, double t_opt, double n_solutions, double big_n) {
  if (!(n_solutions > 0.0) || !(big_n > 1.0) || n_solutions >= big_n) {
    throw std::invalid_argument("speedup: need 0 < N_A < N");
  }
  if (!(t_opt > 0.0)) {
    throw std::invalid_argument("speedup: t_opt must be positive");
  }
  if (p_opt < 0.0 || p_opt > 1.0) {
    throw std::invalid_argument("speedup: p_opt must lie in [0, 1]");
  }
  if (p_opt == 1.0) return kInf;
  if (p_opt == 0.0) return 0.0;
  return std::log1p(-p_opt) / (t_opt * std::log1p(-n_solutions / big_n));
}

}  // namespace qpart
