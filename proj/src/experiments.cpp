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

#include "qpart/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

#include "qpart/analytics.hpp"
#include "qpart/parallel.hpp"
#include "qpart/rng.hpp"
#include "qpart/stats.hpp"

namespace qpart {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double decay_for(double rho, double gamma) {
  return std::isinf(rho) ? 0.0 : 1.0 / (rho * gamma);
}

std::vector<RunTrace> simulate_problems(
    const std::vector<SearchProblem>& problems, const RunConfig& config,
    unsigned threads) {
  std::vector<RunTrace> traces(problems.size());
  parallel_for(problems.size(), threads, [&](std::size_t i) {
    traces[i] = run_standard(problems[i], config);
  });
  return traces;
}

double clamp_prob(double p) { return std::min(1.0, std::max(0.0, p)); }

// Per-instance speedup against memoryless guessing; empty success sets
// contribute 0 (neither search ever succeeds).
std::vector<double> per_instance_q(const std::vector<SearchProblem>& problems,
                                   const GroverOutcome& outcome) {
  std::vector<double> qs(problems.size());
  for (std::size_t i = 0; i < problems.size(); ++i) {
    const double n_a = static_cast<double>(problems[i].solutions.size());
    const double big_n = static_cast<double>(problems[i].table.size());
    qs[i] = n_a > 0.0
                ? speedup(outcome.p_opt[i], outcome.t_opt, n_a, big_n)
                : 0.0;
  }
  return qs;
}

struct PointEval {
  bool ok = false;
  GroverOutcome outcome;
  std::vector<double> qs;
};

PointEval evaluate_point(const std::vector<SearchProblem>& problems,
                         const RunConfig& config, unsigned threads) {
  PointEval eval;
  const std::vector<RunTrace> traces =
      simulate_problems(problems, config, threads);
  try {
    eval.outcome = optimal_iterations(traces, config.epsilon);
  } catch (const std::runtime_error&) {
    // The ensemble median cost is infinite at every T (most instances are
    // unsolvable). Anchor T_opt on the solvable subset instead; the
    // unsolvable instances then contribute infinite repetition cost and
    // Q = 0, which is what actually happens when running them.
    std::vector<RunTrace> solvable;
    for (std::size_t i = 0; i < problems.size(); ++i) {
      if (!problems[i].solutions.empty()) solvable.push_back(traces[i]);
    }
    if (solvable.empty()) return eval;
    GroverOutcome sub;
    try {
      sub = optimal_iterations(solvable, config.epsilon);
    } catch (const std::runtime_error&) {
      return eval;
    }
    eval.outcome.t_opt = sub.t_opt;
    eval.outcome.p_opt.resize(traces.size());
    std::vector<double> costs(traces.size());
    for (std::size_t i = 0; i < traces.size(); ++i) {
      const double p = clamp_prob(traces[i].probs[sub.t_opt]);
      eval.outcome.p_opt[i] = p;
      costs[i] = sub.t_opt * trials_needed(p, config.epsilon);
    }
    eval.outcome.p_opt_median = median(eval.outcome.p_opt);
    eval.outcome.t_total_median = median(costs);
  }
  eval.qs = per_instance_q(problems, eval.outcome);
  eval.ok = true;
  return eval;
}

}  // namespace

std::vector<SweepRecord> run_sweep(const SweepSpec& spec) {
  if (spec.n_values.empty() || spec.k_values.empty()) {
    throw std::invalid_argument("run_sweep: empty grid");
  }
  if (spec.ensemble < 1) {
    throw std::invalid_argument("run_sweep: ensemble size must be >= 1");
  }
  if (spec.algorithm == Algorithm::recursive && spec.recursive_m < 1) {
    throw std::invalid_argument("run_sweep: recursive sweeps need m >= 1");
  }
  for (double q : spec.quantiles) {
    if (q < 0.0 || q > 1.0) {
      throw std::invalid_argument("run_sweep: quantile outside [0, 1]");
    }
  }

  std::vector<SweepRecord> records;
  records.reserve(spec.n_values.size() * spec.k_values.size());
  for (int n : spec.n_values) {
    for (int k : spec.k_values) {
      SweepRecord rec;
      rec.n = n;
      rec.k = k;

      EnsembleSpec es;
      es.n = n;
      es.k = k;
      es.count = spec.ensemble;
      es.seed = spec.seed;
      es.rule = spec.postselect;
      es.solution_count = spec.solution_count;
      GeneratedEnsemble ens = generate_ensemble(es);
      rec.attempts = ens.attempts;
      rec.instances_used = static_cast<int>(ens.instances.size());
      rec.flagged = ens.budget_exhausted;
      if (ens.instances.empty()) {
        rec.flagged = true;
        records.push_back(std::move(rec));
        continue;
      }

      std::vector<SearchProblem> problems(ens.instances.size());
      parallel_for(ens.instances.size(), spec.threads, [&](std::size_t i) {
        problems[i] = make_problem(ens.instances[i]);
      });
      {
        std::vector<double> counts(problems.size());
        for (std::size_t i = 0; i < problems.size(); ++i) {
          counts[i] = static_cast<double>(problems[i].solutions.size());
        }
        rec.mean_solutions = mean(counts);
      }

      RunConfig base;
      base.t_max = spec.t_max;
      base.echo = spec.echo;
      base.epsilon = spec.epsilon;
      base.diffusion = spec.diffusion;

      double gamma = 0.0;
      switch (spec.gamma_rule) {
        case GammaRule::fixed:
          gamma = spec.gamma_fixed;
          break;
        case GammaRule::lsb:
          // The recursion's layer oracles all share one width, and its
          // natural default is 2^{-(m+1)}, not the full-depth step.
          gamma = spec.algorithm == Algorithm::recursive
                      ? std::exp2(-(spec.recursive_m + 1))
                      : std::exp2(-k);
          break;
        case GammaRule::critical:
          if (spec.algorithm == Algorithm::recursive) {
            throw std::invalid_argument(
                "run_sweep: the critical-width rule applies to the standard "
                "algorithm only");
          }
          gamma = critical_step_width(n, k);
          break;
        case GammaRule::optimize: {
          if (spec.algorithm == Algorithm::recursive) {
            throw std::invalid_argument(
                "run_sweep: width optimization applies to the standard "
                "algorithm only");
          }
          GammaOptResult opt = optimize_gamma(problems, k, spec.rho, base,
                                              GammaObjective::min_median_t_total,
                                              spec.threads);
          gamma = opt.gamma;
          rec.flagged = rec.flagged || opt.fallback;
          break;
        }
      }
      if (spec.algorithm == Algorithm::recursive &&
          spec.gamma_rule == GammaRule::fixed && !(gamma > 0.0)) {
        gamma = std::exp2(-(spec.recursive_m + 1));
      }
      if (!(gamma > 0.0)) {
        throw std::invalid_argument("run_sweep: resolved gamma must be positive");
      }
      rec.gamma = gamma;
      rec.r = decay_for(spec.rho, gamma);

      if (spec.algorithm == Algorithm::standard) {
        RunConfig config = base;
        config.gamma = gamma;
        config.r = rec.r;
        PointEval eval = evaluate_point(problems, config, spec.threads);
        if (!eval.ok) {
          rec.flagged = true;
          records.push_back(std::move(rec));
          continue;
        }
        rec.t_opt = eval.outcome.t_opt;
        rec.p_opt_median = eval.outcome.p_opt_median;
        rec.t_total_median = eval.outcome.t_total_median;
        rec.q_median = median(eval.qs);
        for (double q : spec.quantiles) {
          rec.q_quantiles.push_back(quantile(eval.qs, q));
        }
        rec.physical_time_median =
            standard_ledger(rec.t_opt, config).physical_time;
      } else {
        RecursiveConfig rc;
        rc.m = spec.recursive_m;
        rc.gamma = gamma;
        rc.r = rec.r;
        rc.diffusion = spec.diffusion;
        rc.epsilon = spec.epsilon;
        std::vector<double> probs(problems.size());
        std::vector<double> costs(problems.size());
        std::vector<double> qs(problems.size());
        std::int64_t queries = 0;
        double physical_time = 0.0;
        parallel_for(problems.size(), spec.threads, [&](std::size_t i) {
          RecursiveResult res = run_recursive(ens.instances[i], rc);
          probs[i] = clamp_prob(res.final_probability);
          costs[i] = static_cast<double>(res.ledger.oracle_queries) *
                     trials_needed(probs[i], spec.epsilon);
          const double n_a =
              static_cast<double>(problems[i].solutions.size());
          const double big_n = static_cast<double>(problems[i].table.size());
          qs[i] = n_a > 0.0
                      ? speedup(probs[i],
                                static_cast<double>(res.ledger.oracle_queries),
                                n_a, big_n)
                      : 0.0;
          if (i == 0) {
            queries = res.ledger.oracle_queries;
            physical_time = res.ledger.physical_time;
          }
        });
        rec.t_opt = static_cast<int>(queries);
        rec.p_opt_median = median(probs);
        rec.t_total_median = median(costs);
        rec.q_median = median(qs);
        for (double q : spec.quantiles) {
          rec.q_quantiles.push_back(quantile(qs, q));
        }
        rec.physical_time_median = physical_time;
      }
      records.push_back(std::move(rec));
    }
  }
  return records;
}

GammaOptResult optimize_gamma(const std::vector<SearchProblem>& problems,
                              int k, double rho, const RunConfig& base,
                              GammaObjective objective, unsigned threads) {
  if (problems.empty()) {
    throw std::invalid_argument("optimize_gamma: no instances");
  }
  if (k < 1) throw std::invalid_argument("optimize_gamma: k must be >= 1");

  double best_x = 0.0;
  double best_val = kInf;
  auto evaluate = [&](double log2_gamma) {
    RunConfig config = base;
    config.gamma = std::exp2(log2_gamma);
    config.r = decay_for(rho, config.gamma);
    PointEval eval = evaluate_point(problems, config, threads);
    double value = kInf;
    if (eval.ok) {
      value = objective == GammaObjective::min_median_t_total
                  ? eval.outcome.t_total_median
                  : -median(eval.qs);
    }
    if (value < best_val) {
      best_val = value;
      best_x = log2_gamma;
    }
    return value;
  };

  // Coarse bracket over log2(gamma).
  constexpr int kCoarse = 9;
  const double lo = -static_cast<double>(k + 2);
  const double hi = 0.0;
  std::vector<double> xs(kCoarse);
  std::vector<double> vals(kCoarse);
  int best_i = 0;
  for (int i = 0; i < kCoarse; ++i) {
    xs[i] = lo + (hi - lo) * static_cast<double>(i) / (kCoarse - 1);
    vals[i] = evaluate(xs[i]);
    if (vals[i] < vals[best_i]) best_i = i;
  }
  GammaOptResult out;
  if (best_i == 0 || best_i == kCoarse - 1 || !std::isfinite(vals[best_i])) {
    out.gamma = std::exp2(xs[best_i]);
    out.objective = vals[best_i];
    out.fallback = true;
    return out;
  }

  // Golden-section refinement inside the bracketing neighbors.
  const double golden = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = xs[best_i - 1];
  double b = xs[best_i + 1];
  double c = b - golden * (b - a);
  double d = a + golden * (b - a);
  double fc = evaluate(c);
  double fd = evaluate(d);
  while (b - a > 0.05) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - golden * (b - a);
      fc = evaluate(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + golden * (b - a);
      fd = evaluate(d);
    }
  }
  out.gamma = std::exp2(best_x);
  out.objective = best_val;
  out.fallback = false;
  return out;
}

GammaTargetResult gamma_for_target_popt(
    const std::vector<SearchProblem>& problems, int k, double target_p,
    const RunConfig& base, unsigned threads) {
  if (problems.empty()) {
    throw std::invalid_argument("gamma_for_target_popt: no instances");
  }
  if (!(target_p > 0.0) || !(target_p < 1.0)) {
    throw std::invalid_argument("gamma_for_target_popt: target outside (0, 1)");
  }
  auto p_at = [&](double log2_gamma) {
    RunConfig config = base;
    config.gamma = std::exp2(log2_gamma);
    config.r = base.r;
    PointEval eval = evaluate_point(problems, config, threads);
    return eval.ok ? eval.outcome.p_opt_median : 0.0;
  };

  double lo = -static_cast<double>(k + 4);  // narrow step: strongest capture
  double hi = 0.0;
  GammaTargetResult out;
  const double p_lo = p_at(lo);
  if (p_lo < target_p) {
    // Even the narrowest width in range cannot capture this much.
    out.gamma = std::exp2(lo);
    out.p_opt = p_lo;
    out.reachable = false;
    return out;
  }
  const double p_hi = p_at(hi);
  if (p_hi >= target_p) {
    out.gamma = 1.0;
    out.p_opt = p_hi;
    out.reachable = true;
    return out;
  }
  // The target is bracketed; bisect the crossing. The ensemble median
  // moves in jumps as T_opt shifts, so the achieved P_opt can sit a
  // finite distance from the target even at the crossing width.
  double best = lo;
  double p_best = p_lo;
  for (int iter = 0; iter < 60 && hi - lo > 1e-3; ++iter) {
    const double mid = 0.5 * (lo + hi);
    const double p_mid = p_at(mid);
    if (std::abs(p_mid - target_p) < std::abs(p_best - target_p)) {
      best = mid;
      p_best = p_mid;
    }
    if (p_mid >= target_p) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  out.gamma = std::exp2(best);
  out.p_opt = p_best;
  out.reachable = true;
  return out;
}

ScheduleOptResult optimize_schedule(
    const std::vector<ProblemInstance>& instances, const RecursiveConfig& base,
    unsigned threads) {
  if (instances.empty()) {
    throw std::invalid_argument("optimize_schedule: no instances");
  }
  const int n = instances[0].n;
  const int k = instances[0].k;
  for (const ProblemInstance& inst : instances) {
    if (inst.n != n || inst.k != k) {
      throw std::invalid_argument("optimize_schedule: mixed instance shapes");
    }
  }
  const std::vector<int> start = base.schedule.empty()
                                     ? default_schedule(base.m, k, n)
                                     : base.schedule;
  const std::size_t layers = start.size();

  ScheduleOptResult out;
  out.schedule = start;
  auto evaluate = [&](const std::vector<int>& schedule) {
    RecursiveConfig config = base;
    config.schedule = schedule;
    std::vector<double> costs(instances.size());
    parallel_for(instances.size(), threads, [&](std::size_t i) {
      RecursiveResult res = run_recursive(instances[i], config);
      costs[i] = static_cast<double>(res.ledger.oracle_queries) *
                 trials_needed(clamp_prob(res.final_probability),
                               base.epsilon);
    });
    out.evaluations += 1;
    return median(costs);
  };

  double best = evaluate(out.schedule);
  // Cyclic coordinate descent with an exact line search per layer. The
  // objective has deep local valleys a few steps wide, so each coordinate
  // is scanned over its whole plausible range instead of stepping +-1.
  constexpr int kMaxSweeps = 12;
  constexpr double kTie = 1e-9;
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    bool moved = false;
    for (std::size_t l = 0; l < layers; ++l) {
      const int reach = std::max(24, start[l] + 2);
      int best_t = out.schedule[l];
      double best_v = best;
      std::vector<int> candidate = out.schedule;
      for (int t = 1; t <= reach; ++t) {
        if (t == out.schedule[l]) continue;
        candidate[l] = t;
        const double v = evaluate(candidate);
        if (v < best_v - kTie ||
            (std::abs(v - best_v) <= kTie && t < best_t)) {
          best_v = v;
          best_t = t;
        }
      }
      if (best_t != out.schedule[l]) {
        out.schedule[l] = best_t;
        best = best_v;
        moved = true;
      }
    }
    if (!moved) break;
  }
  out.median_t_total = best;
  return out;
}

CaptureHistogram capture_histogram(
    const std::vector<ProblemInstance>& instances,
    const std::vector<double>& gammas, const RunConfig& base, int bins,
    unsigned threads) {
  if (instances.empty()) {
    throw std::invalid_argument("capture_histogram: no instances");
  }
  if (gammas.empty()) {
    throw std::invalid_argument("capture_histogram: no widths");
  }
  if (bins < 3) {
    throw std::invalid_argument("capture_histogram: need at least 3 bins");
  }
  const int n = instances[0].n;
  const int k = instances[0].k;
  for (const ProblemInstance& inst : instances) {
    if (inst.n != n || inst.k != k) {
      throw std::invalid_argument("capture_histogram: mixed instance shapes");
    }
  }

  std::vector<SearchProblem> problems(instances.size());
  parallel_for(instances.size(), threads, [&](std::size_t i) {
    problems[i] = make_problem(instances[i]);
  });
  std::vector<SearchProblem> solvable;
  for (const SearchProblem& p : problems) {
    if (!p.solutions.empty()) solvable.push_back(p);
  }
  if (solvable.empty()) {
    throw std::runtime_error(
        "capture_histogram: no solvable instances to pick T_opt from");
  }

  CaptureHistogram hist;
  hist.gammas = gammas;
  hist.sz_centers.resize(bins);
  const double half_n = static_cast<double>(n) / 2.0;
  for (int b = 0; b < bins; ++b) {
    hist.sz_centers[b] =
        -half_n + (static_cast<double>(b) + 0.5) * n / bins;
  }
  // S_z = D / 2^{k+1}.
  const double sz_scale = std::exp2(-(k + 1));

  for (double gamma : gammas) {
    if (!(gamma > 0.0)) {
      throw std::invalid_argument("capture_histogram: widths must be positive");
    }
    RunConfig config = base;
    config.gamma = gamma;
    PointEval eval = evaluate_point(solvable, config, threads);
    const int t_opt = eval.ok ? eval.outcome.t_opt : config.t_max;
    hist.t_opt.push_back(t_opt);

    RunConfig short_config = config;
    short_config.t_max = t_opt;
    std::vector<std::vector<double>> partial(
        instances.size(), std::vector<double>(bins, 0.0));
    parallel_for(instances.size(), threads, [&](std::size_t i) {
      StateVector state;
      run_standard(problems[i], short_config, &state);
      for (std::size_t x = 0; x < state.size(); ++x) {
        const double sz =
            static_cast<double>(problems[i].table[x]) * sz_scale;
        int b = static_cast<int>((sz + half_n) / n * bins);
        b = std::min(bins - 1, std::max(0, b));
        partial[i][b] += std::norm(state.amps[x]);
      }
    });
    std::vector<double> column(bins, 0.0);
    for (const std::vector<double>& row : partial) {
      for (int b = 0; b < bins; ++b) column[b] += row[b];
    }
    double peak = 0.0;
    for (double v : column) peak = std::max(peak, v);
    if (peak > 0.0) {
      for (double& v : column) v /= peak;
    }
    hist.density.push_back(std::move(column));
  }
  return hist;
}

std::vector<RealSweepRecord> real_weight_sweep(
    const std::vector<int>& n_values, const std::vector<double>& k_eff_values,
    int ensemble, std::uint64_t seed, const RunConfig& base,
    unsigned threads) {
  if (n_values.empty() || k_eff_values.empty()) {
    throw std::invalid_argument("real_weight_sweep: empty grid");
  }
  if (ensemble < 1) {
    throw std::invalid_argument("real_weight_sweep: ensemble must be >= 1");
  }
  std::vector<RealSweepRecord> records;
  for (int n : n_values) {
    for (double k_eff : k_eff_values) {
      RealSweepRecord rec;
      rec.n = n;
      rec.k_eff = k_eff;
      rec.gamma = std::exp2(-k_eff);

      RunConfig config = base;
      config.gamma = rec.gamma;
      std::vector<RunTrace> traces(ensemble);
      std::vector<SolutionReport> reports(ensemble);
      parallel_for(static_cast<std::size_t>(ensemble), threads,
                   [&](std::size_t i) {
                     RealInstance inst = gen_real_instance(
                         n, mix_seed(seed, static_cast<std::uint64_t>(i)));
                     traces[i] =
                         run_standard_real(inst, config, &reports[i]);
                   });
      const GroverOutcome outcome = optimal_iterations(traces, config.epsilon);
      rec.t_opt = outcome.t_opt;
      rec.p_opt_median = outcome.p_opt_median;
      const double big_n = std::exp2(n);
      std::vector<double> qs(traces.size());
      for (std::size_t i = 0; i < traces.size(); ++i) {
        const double n_a = static_cast<double>(reports[i].argmin_set.size());
        qs[i] = speedup(outcome.p_opt[i], outcome.t_opt, n_a, big_n);
        if (reports[i].argmin_set.size() > 2) rec.tie_count += 1;
      }
      rec.q_median = median(qs);
      records.push_back(std::move(rec));
    }
  }
  return records;
}

}  // namespace qpart
