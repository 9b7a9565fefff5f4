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

#include "qpart/instances.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <stdexcept>
#include <string>

#include "qpart/rng.hpp"

namespace qpart {
namespace {

void check_dims(int n, int k) {
  if (n < 1 || n > 30) {
    throw std::invalid_argument("instance spin count n must be in [1, 30], got " +
                                std::to_string(n));
  }
  if (k < 1 || k > 40) {
    throw std::invalid_argument("instance bit depth k must be in [1, 40], got " +
                                std::to_string(k));
  }
}

}  // namespace

std::int64_t ProblemInstance::total() const {
  std::int64_t a = 0;
  for (std::int64_t w : raw_weights) a += w;
  return a;
}

ProblemInstance gen_instance(int n, int k, std::uint64_t seed) {
  check_dims(n, k);
  ProblemInstance inst;
  inst.n = n;
  inst.k = k;
  inst.seed = seed;
  inst.raw_weights.reserve(n);
  SplitMix64 rng(seed);
  for (int i = 0; i < n; ++i) {
    // Uniform over {1, ..., 2^k}: zero weight would violate w > 0.
    inst.raw_weights.push_back(
        1 + static_cast<std::int64_t>(rng.next_bits(k)));
  }
  return inst;
}

RealInstance gen_real_instance(int n, std::uint64_t seed) {
  check_dims(n, 1);
  RealInstance inst;
  inst.n = n;
  inst.seed = seed;
  inst.weights.reserve(n);
  SplitMix64 rng(seed);
  for (int i = 0; i < n; ++i) inst.weights.push_back(rng.next_unit());
  return inst;
}

namespace {

// Shared table builder. Entry 0 is the all-(+1) configuration, sum of all
// weights; flipping bit b subtracts 2*w_b, so the whole table fills in one
// pass over states in increasing index order.
template <typename T>
std::vector<T> fill_table(const std::vector<T>& weights, int n) {
  const std::size_t size = std::size_t{1} << n;
  std::vector<T> table(size);
  T total = T{0};
  for (T w : weights) total += w;
  table[0] = total;
  for (std::size_t x = 1; x < size; ++x) {
    const int b = std::countr_zero(x);
    table[x] = table[x ^ (std::size_t{1} << b)] - 2 * weights[b];
  }
  return table;
}

}  // namespace

std::vector<std::int64_t> build_imbalance_table(const ProblemInstance& inst) {
  if (inst.n > kEnumerationCap) {
    throw std::domain_error("imbalance table for n > enumeration cap");
  }
  return fill_table(inst.raw_weights, inst.n);
}

std::vector<std::int64_t> build_layer_table(const ProblemInstance& inst,
                                            int layer_bits) {
  if (layer_bits < 1 || layer_bits > 62) {
    throw std::invalid_argument("layer_bits out of range");
  }
  const std::int64_t m = std::int64_t{1} << layer_bits;
  std::vector<std::int64_t> reduced(inst.raw_weights.size());
  for (std::size_t i = 0; i < reduced.size(); ++i) {
    reduced[i] = inst.raw_weights[i] % m;  // weights are positive
  }
  return fill_table(reduced, inst.n);
}

std::vector<double> build_real_imbalance_table(const RealInstance& inst) {
  return fill_table(inst.weights, inst.n);
}

SolutionReport count_solutions_table(const std::vector<std::int64_t>& table,
                                     std::int64_t target) {
  SolutionReport report;
  report.min_abs_imbalance = std::numeric_limits<std::int64_t>::max();
  for (std::size_t x = 0; x < table.size(); ++x) {
    const std::int64_t d = table[x] - target;
    const std::int64_t a = d < 0 ? -d : d;
    if (a < report.min_abs_imbalance) {
      report.min_abs_imbalance = a;
      report.argmin_set.clear();
    }
    if (a == report.min_abs_imbalance) {
      report.argmin_set.push_back(static_cast<std::uint32_t>(x));
    }
    if (d == 0) report.solutions.push_back(static_cast<std::uint32_t>(x));
  }
  report.num_solutions = static_cast<std::int64_t>(report.solutions.size());
  return report;
}

SolutionReport count_solutions(const ProblemInstance& inst,
                               std::int64_t target, int enumeration_cap) {
  if (inst.n > enumeration_cap) {
    throw std::domain_error(
        "count_solutions: n exceeds the enumeration cap; use ckk_exists for "
        "the decision problem");
  }
  return count_solutions_table(build_imbalance_table(inst), target);
}

SolutionReport count_solutions_real(const std::vector<double>& table) {
  SolutionReport report;
  report.min_abs_imbalance = 0;  // integer field unused for real tables
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t x = 0; x < table.size(); ++x) {
    const double a = std::fabs(table[x]);
    if (a < best) {
      best = a;
      report.argmin_set.clear();
    }
    if (a == best) report.argmin_set.push_back(static_cast<std::uint32_t>(x));
  }
  // Exact zeros have probability zero for generated reals, but respect them
  // if present (e.g. hand-built instances).
  if (best == 0.0) {
    report.solutions = report.argmin_set;
    report.num_solutions = static_cast<std::int64_t>(report.solutions.size());
  }
  return report;
}

namespace {

// One complete-differencing node: weights kept sorted descending.
void ckk_search(std::vector<std::int64_t>& v, std::int64_t& best) {
  if (best == 0) return;
  if (v.size() == 1) {
    best = std::min(best, v[0]);
    return;
  }
  std::int64_t rest = 0;
  for (std::size_t i = 1; i < v.size(); ++i) rest += v[i];
  if (v[0] >= rest) {
    // Dominant element: every completion yields exactly v[0] - rest.
    best = std::min(best, v[0] - rest);
    return;
  }
  const std::int64_t a = v[0];
  const std::int64_t b = v[1];

  auto insert_sorted = [](std::vector<std::int64_t>& w, std::int64_t val) {
    w.insert(std::upper_bound(w.begin(), w.end(), val,
                              std::greater<std::int64_t>()),
             val);
  };

  // Difference branch first (the KK heuristic); zero differences vanish.
  std::vector<std::int64_t> child(v.begin() + 2, v.end());
  if (a - b > 0) insert_sorted(child, a - b);
  if (child.empty()) {
    best = std::min(best, std::int64_t{0});
  } else {
    ckk_search(child, best);
  }
  if (best == 0) return;

  child.assign(v.begin() + 2, v.end());
  insert_sorted(child, a + b);
  ckk_search(child, best);
}

}  // namespace

CkkResult ckk_exists(const ProblemInstance& inst) {
  std::vector<std::int64_t> v = inst.raw_weights;
  std::sort(v.begin(), v.end(), std::greater<std::int64_t>());
  std::int64_t best = std::numeric_limits<std::int64_t>::max();
  ckk_search(v, best);
  return CkkResult{best == 0, best};
}

GeneratedEnsemble generate_ensemble(const EnsembleSpec& spec,
                                    int budget_factor) {
  if (spec.count < 1) throw std::invalid_argument("ensemble count must be >= 1");
  check_dims(spec.n, spec.k);
  GeneratedEnsemble out;
  const long budget = static_cast<long>(budget_factor) * spec.count;
  for (long attempt = 0;
       attempt < budget && static_cast<int>(out.instances.size()) < spec.count;
       ++attempt) {
    out.attempts = static_cast<int>(attempt + 1);
    ProblemInstance inst =
        gen_instance(spec.n, spec.k, mix_seed(spec.seed, attempt));
    if (spec.rule != PostselectRule::none) {
      // Cheap existence test first; exact counting only for survivors.
      if (!ckk_exists(inst).exists) continue;
    }
    SolutionReport report = count_solutions(inst);
    if (spec.rule == PostselectRule::has_solution &&
        report.num_solutions == 0) {
      continue;  // unreachable after CKK, kept as a safety net
    }
    if (spec.rule == PostselectRule::exact_count &&
        report.num_solutions != spec.solution_count) {
      continue;
    }
    out.instances.push_back(std::move(inst));
    out.reports.push_back(std::move(report));
  }
  out.budget_exhausted =
      static_cast<int>(out.instances.size()) < spec.count;
  return out;
}

}  // namespace qpart
