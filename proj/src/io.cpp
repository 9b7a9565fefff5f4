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

#include "qpart/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace qpart {

std::string format_g17(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

void atomic_write(const std::string& path, const std::string& content) {
  const std::filesystem::path target(path);
  std::filesystem::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw std::runtime_error("atomic_write: cannot open " + tmp.string());
    }
    out << content;
    out.flush();
    if (!out) {
      throw std::runtime_error("atomic_write: short write to " + tmp.string());
    }
  }
  std::filesystem::rename(tmp, target);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("read_file: cannot open " + path);
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::string instances_to_jsonl(const std::vector<ProblemInstance>& instances) {
  std::string out;
  for (const ProblemInstance& inst : instances) {
    nlohmann::json line;
    line["n"] = inst.n;
    line["k"] = inst.k;
    line["weights"] = inst.raw_weights;
    line["seed"] = inst.seed;
    out += line.dump();
    out += '\n';
  }
  return out;
}

std::vector<ProblemInstance> instances_from_jsonl(const std::string& text) {
  std::vector<ProblemInstance> instances;
  std::istringstream stream(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(stream, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json parsed;
    try {
      parsed = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw std::runtime_error("instances_from_jsonl: line " +
                               std::to_string(line_no) + ": " + e.what());
    }
    ProblemInstance inst;
    inst.n = parsed.at("n").get<int>();
    inst.k = parsed.at("k").get<int>();
    inst.raw_weights = parsed.at("weights").get<std::vector<std::int64_t>>();
    inst.seed = parsed.at("seed").get<std::uint64_t>();
    if (static_cast<int>(inst.raw_weights.size()) != inst.n) {
      throw std::runtime_error("instances_from_jsonl: line " +
                               std::to_string(line_no) +
                               ": weight count does not match n");
    }
    instances.push_back(std::move(inst));
  }
  return instances;
}

void write_instances_jsonl(const std::string& path,
                           const std::vector<ProblemInstance>& instances) {
  atomic_write(path, instances_to_jsonl(instances));
}

std::vector<ProblemInstance> read_instances_jsonl(const std::string& path) {
  return instances_from_jsonl(read_file(path));
}

std::string traces_to_csv(const std::vector<RunTrace>& traces) {
  std::string out = "instance_id,T,P_T,norm\n";
  for (const RunTrace& trace : traces) {
    for (std::size_t t = 0; t < trace.probs.size(); ++t) {
      out += std::to_string(trace.instance_id);
      out += ',';
      out += std::to_string(t);
      out += ',';
      out += format_g17(trace.probs[t]);
      out += ',';
      out += format_g17(trace.norms[t]);
      out += '\n';
    }
  }
  return out;
}

std::string sweep_records_to_csv(const std::vector<SweepRecord>& records,
                                 const std::vector<double>& quantiles) {
  std::string out =
      "n,k,gamma,r,T_opt,P_opt,T_total_median,mean_NA,Q_median";
  for (double q : quantiles) {
    char label[32];
    std::snprintf(label, sizeof(label), ",Q_q%g", q);
    out += label;
  }
  out += ",physical_time,instances,attempts,flagged\n";
  for (const SweepRecord& rec : records) {
    out += std::to_string(rec.n) + ',' + std::to_string(rec.k) + ',' +
           format_g17(rec.gamma) + ',' + format_g17(rec.r) + ',' +
           std::to_string(rec.t_opt) + ',' + format_g17(rec.p_opt_median) +
           ',' + format_g17(rec.t_total_median) + ',' +
           format_g17(rec.mean_solutions) + ',' + format_g17(rec.q_median);
    for (std::size_t i = 0; i < quantiles.size(); ++i) {
      out += ',';
      out += i < rec.q_quantiles.size() ? format_g17(rec.q_quantiles[i])
                                        : std::string("nan");
    }
    out += ',' + format_g17(rec.physical_time_median) + ',' +
           std::to_string(rec.instances_used) + ',' +
           std::to_string(rec.attempts) + ',' +
           (rec.flagged ? std::string("1") : std::string("0"));
    out += '\n';
  }
  return out;
}

std::string ledger_to_json(const QueryLedger& ledger) {
  nlohmann::json doc;
  doc["layers"] = nlohmann::json::array();
  for (const LayerLedger& layer : ledger.layers) {
    doc["layers"].push_back({{"l", layer.layer},
                             {"T_l", layer.t_l},
                             {"tau_l", layer.tau_l},
                             {"queries", layer.queries}});
  }
  doc["total"] = ledger.oracle_queries;
  doc["physical_time"] = ledger.physical_time;
  return doc.dump(2) + "\n";
}

std::string histogram_to_csv(const CaptureHistogram& histogram) {
  std::string out = "gamma,T_opt,sz,density\n";
  for (std::size_t g = 0; g < histogram.gammas.size(); ++g) {
    for (std::size_t b = 0; b < histogram.sz_centers.size(); ++b) {
      out += format_g17(histogram.gammas[g]) + ',' +
             std::to_string(histogram.t_opt[g]) + ',' +
             format_g17(histogram.sz_centers[b]) + ',' +
             format_g17(histogram.density[g][b]) + '\n';
    }
  }
  return out;
}

std::string real_records_to_csv(const std::vector<RealSweepRecord>& records) {
  std::string out = "n,k_eff,gamma,T_opt,P_opt,Q_median,ties\n";
  for (const RealSweepRecord& rec : records) {
    out += std::to_string(rec.n) + ',' + format_g17(rec.k_eff) + ',' +
           format_g17(rec.gamma) + ',' + std::to_string(rec.t_opt) + ',' +
           format_g17(rec.p_opt_median) + ',' + format_g17(rec.q_median) +
           ',' + std::to_string(rec.tie_count) + '\n';
  }
  return out;
}

}  // namespace qpart
