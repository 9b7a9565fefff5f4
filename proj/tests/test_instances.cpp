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

#include <algorithm>
#include <cstdint>
#include <set>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "qpart/instances.hpp"
#include "qpart/rng.hpp"

namespace {

// Independent imbalance computation: walk the bits one by one instead of
// building the table incrementally.
std::int64_t direct_imbalance(const qpart::ProblemInstance& inst,
                              std::uint32_t x) {
  std::int64_t d = 0;
  for (int i = 0; i < inst.n; ++i) {
    const std::int64_t sign = ((x >> i) & 1u) ? -1 : 1;
    d += sign * inst.raw_weights[i];
  }
  return d;
}

}  // namespace

TEST_CASE("gen_instance is deterministic with in-range weights") {
  const qpart::ProblemInstance a = qpart::gen_instance(10, 8, 42);
  const qpart::ProblemInstance b = qpart::gen_instance(10, 8, 42);
  CHECK(a.raw_weights == b.raw_weights);
  CHECK(a.n == 10);
  CHECK(a.k == 8);
  CHECK(a.seed == 42);
  REQUIRE(a.raw_weights.size() == 10);
  for (std::int64_t w : a.raw_weights) {
    CHECK(w >= 1);
    CHECK(w <= 256);
  }
  const qpart::ProblemInstance c = qpart::gen_instance(10, 8, 43);
  CHECK(a.raw_weights != c.raw_weights);
}

TEST_CASE("mix_seed produces distinct per-index seeds") {
  std::set<std::uint64_t> seen;
  for (std::uint64_t j = 0; j < 1000; ++j) {
    seen.insert(qpart::mix_seed(7, j));
  }
  CHECK(seen.size() == 1000);
}

TEST_CASE("imbalance table matches the bitwise definition") {
  const qpart::ProblemInstance inst = qpart::gen_instance(8, 6, 3);
  const std::vector<std::int64_t> table = qpart::build_imbalance_table(inst);
  REQUIRE(table.size() == 256);
  for (std::uint32_t x = 0; x < 256; ++x) {
    CHECK(table[x] == direct_imbalance(inst, x));
  }
  CHECK(table[0] == inst.total());
  CHECK(table[255] == -inst.total());
}

TEST_CASE("complement flips the imbalance sign") {
  const qpart::ProblemInstance inst = qpart::gen_instance(9, 5, 11);
  const std::vector<std::int64_t> table = qpart::build_imbalance_table(inst);
  const std::uint32_t mask = (1u << inst.n) - 1;
  for (std::uint32_t x = 0; x < table.size(); ++x) {
    CHECK(table[x] == -table[(~x) & mask]);
  }
}

TEST_CASE("layer tables are congruent to the full table") {
  const qpart::ProblemInstance inst = qpart::gen_instance(8, 9, 17);
  const std::vector<std::int64_t> full = qpart::build_imbalance_table(inst);
  for (int bits : {3, 6, 9}) {
    const std::vector<std::int64_t> layer =
        qpart::build_layer_table(inst, bits);
    const std::int64_t modulus = std::int64_t{1} << bits;
    REQUIRE(layer.size() == full.size());
    for (std::size_t x = 0; x < full.size(); ++x) {
      CHECK((full[x] - layer[x]) % modulus == 0);
    }
  }
}

TEST_CASE("count_solutions agrees with the table variant") {
  const qpart::ProblemInstance inst = qpart::gen_instance(10, 8, 5);
  const qpart::SolutionReport a = qpart::count_solutions(inst);
  const qpart::SolutionReport b =
      qpart::count_solutions_table(qpart::build_imbalance_table(inst));
  CHECK(a.num_solutions == b.num_solutions);
  CHECK(a.solutions == b.solutions);
  CHECK(a.min_abs_imbalance == b.min_abs_imbalance);
  CHECK(a.argmin_set == b.argmin_set);
}

TEST_CASE("solution counts at target zero are even") {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const qpart::ProblemInstance inst = qpart::gen_instance(10, 6, seed);
    const qpart::SolutionReport report = qpart::count_solutions(inst);
    CHECK(report.num_solutions % 2 == 0);
    CHECK(report.argmin_set.size() >= 1);
    // Every listed solution really is one.
    const std::vector<std::int64_t> table =
        qpart::build_imbalance_table(inst);
    for (std::uint32_t x : report.solutions) {
      CHECK(table[x] == 0);
    }
    for (std::uint32_t x : report.argmin_set) {
      CHECK(std::abs(table[x]) == report.min_abs_imbalance);
    }
  }
}

TEST_CASE("imbalance parity matches the weight-sum parity") {
  // D(x) = total - 2 * (sum over set bits), so D == total (mod 2) always.
  const qpart::ProblemInstance inst = qpart::gen_instance(11, 7, 29);
  const qpart::SolutionReport report = qpart::count_solutions(inst);
  if (inst.total() % 2 != 0) {
    CHECK(report.num_solutions == 0);
    CHECK(report.min_abs_imbalance % 2 != 0);
  }
}

TEST_CASE("count_solutions refuses to enumerate past the cap") {
  const qpart::ProblemInstance inst = qpart::gen_instance(6, 4, 1);
  CHECK_THROWS_AS(qpart::count_solutions(inst, 0, 5), std::domain_error);
}

TEST_CASE("ckk decision matches brute force") {
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    const qpart::ProblemInstance inst = qpart::gen_instance(11, 9, seed);
    const qpart::SolutionReport exact = qpart::count_solutions(inst);
    const qpart::CkkResult ckk = qpart::ckk_exists(inst);
    CHECK(ckk.exists == (exact.num_solutions > 0));
    CHECK(ckk.best_residue == exact.min_abs_imbalance);
  }
}

TEST_CASE("generate_ensemble honors postselection rules") {
  qpart::EnsembleSpec spec;
  spec.n = 8;
  spec.k = 8;
  spec.count = 20;
  spec.seed = 9;

  SUBCASE("unpostselected: one attempt per instance") {
    const qpart::GeneratedEnsemble ens = qpart::generate_ensemble(spec);
    CHECK(ens.instances.size() == 20);
    CHECK(ens.attempts == 20);
    CHECK_FALSE(ens.budget_exhausted);
    // Attempt j is seeded mix_seed(seed, j) regardless of scheduling.
    CHECK(ens.instances[7].raw_weights ==
          qpart::gen_instance(8, 8, qpart::mix_seed(9, 7)).raw_weights);
  }

  SUBCASE("has_solution keeps only solvable instances") {
    spec.rule = qpart::PostselectRule::has_solution;
    const qpart::GeneratedEnsemble ens = qpart::generate_ensemble(spec);
    CHECK(ens.instances.size() == 20);
    CHECK(ens.attempts >= 20);
    REQUIRE(ens.reports.size() == 20);
    for (const qpart::SolutionReport& report : ens.reports) {
      CHECK(report.num_solutions > 0);
    }
  }

  SUBCASE("exact_count pins the solution count") {
    spec.rule = qpart::PostselectRule::exact_count;
    spec.solution_count = 2;
    const qpart::GeneratedEnsemble ens = qpart::generate_ensemble(spec);
    for (const qpart::SolutionReport& report : ens.reports) {
      CHECK(report.num_solutions == 2);
    }
  }

  SUBCASE("deterministic across calls") {
    spec.rule = qpart::PostselectRule::has_solution;
    const qpart::GeneratedEnsemble a = qpart::generate_ensemble(spec);
    const qpart::GeneratedEnsemble b = qpart::generate_ensemble(spec);
    REQUIRE(a.instances.size() == b.instances.size());
    for (std::size_t i = 0; i < a.instances.size(); ++i) {
      CHECK(a.instances[i].raw_weights == b.instances[i].raw_weights);
      CHECK(a.instances[i].seed == b.instances[i].seed);
    }
  }

  SUBCASE("impossible postselection exhausts the budget") {
    spec.rule = qpart::PostselectRule::exact_count;
    spec.solution_count = 3;  // odd counts cannot occur at target 0
    spec.count = 2;
    const qpart::GeneratedEnsemble ens = qpart::generate_ensemble(spec, 10);
    CHECK(ens.budget_exhausted);
    CHECK(ens.instances.empty());
    CHECK(ens.attempts == 20);
  }
}

TEST_CASE("real instances live in (0, 1] and are deterministic") {
  const qpart::RealInstance a = qpart::gen_real_instance(12, 77);
  const qpart::RealInstance b = qpart::gen_real_instance(12, 77);
  CHECK(a.weights == b.weights);
  REQUIRE(a.weights.size() == 12);
  for (double w : a.weights) {
    CHECK(w > 0.0);
    CHECK(w <= 1.0);
  }
}

TEST_CASE("real solution report finds the exact argmin") {
  const qpart::RealInstance inst = qpart::gen_real_instance(8, 5);
  const std::vector<double> table = qpart::build_real_imbalance_table(inst);
  const qpart::SolutionReport report = qpart::count_solutions_real(table);
  REQUIRE(!report.argmin_set.empty());
  double best = std::abs(table[report.argmin_set[0]]);
  for (double d : table) {
    CHECK(std::abs(d) >= best - 1e-15);
  }
  // The argmin set always contains complement pairs.
  CHECK(report.argmin_set.size() % 2 == 0);
}
