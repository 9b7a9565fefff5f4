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

#include <limits>
#include <stdexcept>
#include <string>

#include "qpart/experiments.hpp"

namespace qpart {

// User-facing flag problem: the CLI maps these to exit code 2 plus usage
// text, as opposed to runtime failures (exit 1).
class FlagError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Width/decay settings shared by the simulation subcommands, before and
// after normalization.
struct CliConfig {
  int n = 0;
  int k = 0;
  GammaRule gamma_rule = GammaRule::fixed;
  double gamma = 0.0;  // input for the fixed rule; resolved output otherwise
  double rho = std::numeric_limits<double>::infinity();
  // NaN = not given; validate_config derives it from rho and gamma.
  double r = std::numeric_limits<double>::quiet_NaN();
  double epsilon = 0.01;
  int t_max = 64;
  unsigned threads = 0;
};

// Resolves the width rule to a concrete gamma, reconciles r with rho
// (r = 1/(rho * gamma)), and checks ranges. Idempotent: feeding the result
// back returns it unchanged. Contradictory --r/--rho pairs raise FlagError
// naming both flags.
CliConfig validate_config(const CliConfig& config);

GammaRule parse_gamma_rule(const std::string& text);
std::string gamma_rule_name(GammaRule rule);

PostselectRule parse_postselect_rule(const std::string& text);
std::string postselect_rule_name(PostselectRule rule);

// Accepts "inf" (any case) for no decay; otherwise a positive real.
double parse_rho(const std::string& text);

}  // namespace qpart
