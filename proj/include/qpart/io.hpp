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

#include <string>
#include <vector>

#include "qpart/experiments.hpp"
#include "qpart/instances.hpp"
#include "qpart/runner.hpp"

namespace qpart {

// 17 significant digits: doubles round-trip losslessly through text.
std::string format_g17(double value);

// Writes via a temp file in the same directory plus rename, so readers
// never observe a half-written file.
void atomic_write(const std::string& path, const std::string& content);

std::string read_file(const std::string& path);

// Instance interchange: one JSON object per line with n, k, weights, seed.
std::string instances_to_jsonl(const std::vector<ProblemInstance>& instances);
std::vector<ProblemInstance> instances_from_jsonl(const std::string& text);
void write_instances_jsonl(const std::string& path,
                           const std::vector<ProblemInstance>& instances);
std::vector<ProblemInstance> read_instances_jsonl(const std::string& path);

// Trace table: instance_id, T, P_T, norm.
std::string traces_to_csv(const std::vector<RunTrace>& traces);

// Sweep records: fixed columns followed by one Q-quantile column per
// requested quantile.
std::string sweep_records_to_csv(const std::vector<SweepRecord>& records,
                                 const std::vector<double>& quantiles);

// Recursive ledger: {"layers": [{"l", "T_l", "tau_l", "queries"}, ...],
// "total", "physical_time"}.
std::string ledger_to_json(const QueryLedger& ledger);

std::string histogram_to_csv(const CaptureHistogram& histogram);

std::string real_records_to_csv(const std::vector<RealSweepRecord>& records);

}  // namespace qpart
