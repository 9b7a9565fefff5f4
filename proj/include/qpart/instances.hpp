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

namespace qpart {

// Ceiling on exhaustive enumeration (2^n basis states); beyond it callers
// must fall back to ckk_exists for the decision problem.
inline constexpr int kEnumerationCap = 20;

// A number-partitioning / subset-sum instance with integer weights
// a_i in {1, ..., 2^k}. All imbalance arithmetic stays in exact integers;
// the physical weight is w_i = a_i / 2^k in (0, 1].
struct ProblemInstance {
  int n = 0;
  int k = 0;
  std::vector<std::int64_t> raw_weights;
  std::uint64_t seed = 0;

  std::int64_t total() const;
};

// Variant with real-valued weights in (0, 1]; used for the optimization
// problem, where the success set is the exact argmin of |D| instead of D = 0.
struct RealInstance {
  int n = 0;
  std::vector<double> weights;
  std::uint64_t seed = 0;
};

// Exact classical solution data for one instance. A "solution" is a basis
// state x with D(x) = target; complement symmetry (D(~x) = -D(x)) makes the
// count even whenever target = 0.
struct SolutionReport {
  std::int64_t num_solutions = 0;
  std::vector<std::uint32_t> solutions;
  std::int64_t min_abs_imbalance = 0;
  std::vector<std::uint32_t> argmin_set;
};

struct CkkResult {
  bool exists = false;
  std::int64_t best_residue = 0;
};

enum class PostselectRule { none, has_solution, exact_count };

struct EnsembleSpec {
  int n = 0;
  int k = 0;
  int count = 0;
  std::uint64_t seed = 0;
  PostselectRule rule = PostselectRule::none;
  std::int64_t solution_count = 0;  // used with exact_count
};

struct GeneratedEnsemble {
  std::vector<ProblemInstance> instances;
  std::vector<SolutionReport> reports;
  int attempts = 0;
  // Set when the attempt budget ran out before `count` instances passed
  // postselection; the partial ensemble is still returned.
  bool budget_exhausted = false;
};

ProblemInstance gen_instance(int n, int k, std::uint64_t seed);
RealInstance gen_real_instance(int n, std::uint64_t seed);

// D(x) = sum_i a_i * s_i with s_i = +1 for bit i clear, -1 for bit i set.
// The table has 2^n entries indexed by basis state.
std::vector<std::int64_t> build_imbalance_table(const ProblemInstance& inst);

// Layer table: same construction with weights reduced mod 2^layer_bits.
// D_layer(x) is congruent to D(x) mod 2^layer_bits for every x.
std::vector<std::int64_t> build_layer_table(const ProblemInstance& inst,
                                            int layer_bits);

std::vector<double> build_real_imbalance_table(const RealInstance& inst);

SolutionReport count_solutions(const ProblemInstance& inst,
                               std::int64_t target = 0,
                               int enumeration_cap = kEnumerationCap);
SolutionReport count_solutions_table(const std::vector<std::int64_t>& table,
                                     std::int64_t target = 0);
SolutionReport count_solutions_real(const std::vector<double>& table);

// Complete Karmarkar-Karp differencing with branch and bound; exact decision
// for "does a perfect partition exist" plus the best residue found, at any n.
CkkResult ckk_exists(const ProblemInstance& inst);

// Deterministic postselected ensemble generation. Attempt j uses seed
// mix_seed(spec.seed, j), so results are independent of how the work is
// scheduled. Attempts are capped at budget_factor * count.
GeneratedEnsemble generate_ensemble(const EnsembleSpec& spec,
                                    int budget_factor = 100);

}  // namespace qpart
