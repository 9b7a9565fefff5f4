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

#include "qpart/cli_config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "qpart/analytics.hpp"
#include "qpart/io.hpp"
#include "qpart/state.hpp"

namespace qpart {
namespace {

std::string lower(std::string text) {
  std::transform(text.begin(), text.end(), text.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return text;
}

}  // namespace

CliConfig validate_config(const CliConfig& config) {
  CliConfig out = config;
  if (out.n < 1 || out.n > kQubitCap) {
    throw FlagError("--n must lie in [1, " + std::to_string(kQubitCap) + "]");
  }
  if (out.k < 1) {
    throw FlagError("--k must be >= 1");
  }
  if (!(out.epsilon > 0.0) || !(out.epsilon < 1.0)) {
    throw FlagError("--epsilon must lie in (0, 1)");
  }
  if (out.t_max < 1) {
    throw FlagError("--tmax must be >= 1");
  }
  if (!(out.rho > 0.0)) {
    throw FlagError("--rho must be positive (or inf)");
  }

  switch (out.gamma_rule) {
    case GammaRule::fixed:
      if (!(out.gamma > 0.0)) {
        throw FlagError("--gamma must be positive with --gamma-rule fixed");
      }
      break;
    case GammaRule::lsb:
      out.gamma = std::exp2(-out.k);
      break;
    case GammaRule::critical:
      out.gamma = critical_step_width(out.n, out.k);
      break;
    case GammaRule::optimize:
      // Resolved later by the width optimizer; decay then follows the
      // candidate width, so r stays underived here.
      out.gamma = 0.0;
      return out;
  }

  const bool r_given = !std::isnan(out.r);
  if (r_given && out.r < 0.0) {
    throw FlagError("--r must be non-negative");
  }
  if (!r_given) {
    out.r = std::isinf(out.rho) ? 0.0 : 1.0 / (out.rho * out.gamma);
  } else if (std::isinf(out.rho)) {
    // Only r was given: back-fill rho so the pair stays consistent.
    if (out.r > 0.0) out.rho = 1.0 / (out.r * out.gamma);
  } else {
    const double implied = 1.0 / (out.rho * out.gamma);
    if (std::abs(out.r - implied) >
        1e-6 * std::max({1.0, out.r, implied})) {
      throw FlagError("conflicting --r and --rho: --r gives r = " +
                      format_g17(out.r) +
                      " but --rho implies r = 1/(rho*gamma) = " +
                      format_g17(implied));
    }
  }
  return out;
}

GammaRule parse_gamma_rule(const std::string& text) {
  const std::string t = lower(text);
  if (t == "fixed") return GammaRule::fixed;
  if (t == "lsb") return GammaRule::lsb;
  if (t == "crit" || t == "critical") return GammaRule::critical;
  if (t == "opt" || t == "optimize") return GammaRule::optimize;
  throw FlagError("--gamma-rule must be one of fixed|lsb|crit|optimize, got '" +
                  text + "'");
}

std::string gamma_rule_name(GammaRule rule) {
  switch (rule) {
    case GammaRule::fixed:
      return "fixed";
    case GammaRule::lsb:
      return "lsb";
    case GammaRule::critical:
      return "crit";
    case GammaRule::optimize:
      return "optimize";
  }
  return "fixed";
}

PostselectRule parse_postselect_rule(const std::string& text) {
  const std::string t = lower(text);
  if (t == "none") return PostselectRule::none;
  if (t == "any" || t == "has-solution" || t == "has_solution") {
    return PostselectRule::has_solution;
  }
  if (t == "exact" || t == "exact-count" || t == "exact_count") {
    return PostselectRule::exact_count;
  }
  throw FlagError("--postselect must be one of none|any|exact, got '" + text +
                  "'");
}

std::string postselect_rule_name(PostselectRule rule) {
  switch (rule) {
    case PostselectRule::none:
      return "none";
    case PostselectRule::has_solution:
      return "any";
    case PostselectRule::exact_count:
      return "exact";
  }
  return "none";
}

double parse_rho(const std::string& text) {
  const std::string t = lower(text);
  if (t == "inf" || t == "infinity") {
    return std::numeric_limits<double>::infinity();
  }
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(t, &used);
  } catch (const std::exception&) {
    throw FlagError("--rho must be a positive real or 'inf', got '" + text +
                    "'");
  }
  if (used != t.size() || !(value > 0.0)) {
    throw FlagError("--rho must be a positive real or 'inf', got '" + text +
                    "'");
  }
  return value;
}

}  // namespace qpart
