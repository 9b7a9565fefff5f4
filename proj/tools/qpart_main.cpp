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

#include <cmath>
#include <cstdint>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "qpart/analytics.hpp"
#include "qpart/cli_config.hpp"
#include "qpart/experiments.hpp"
#include "qpart/instances.hpp"
#include "qpart/io.hpp"
#include "qpart/parallel.hpp"
#include "qpart/runner.hpp"
#include "qpart/stats.hpp"

namespace {

using nlohmann::json;

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> parts;
  std::string item;
  std::istringstream stream(text);
  while (std::getline(stream, item, ',')) {
    if (!item.empty()) parts.push_back(item);
  }
  return parts;
}

std::vector<int> parse_int_list(const std::string& text,
                                const std::string& flag) {
  std::vector<int> values;
  for (const std::string& item : split_list(text)) {
    try {
      values.push_back(std::stoi(item));
    } catch (const std::exception&) {
      throw qpart::FlagError(flag + ": '" + item + "' is not an integer");
    }
  }
  if (values.empty()) {
    throw qpart::FlagError(flag + ": empty list");
  }
  return values;
}

std::vector<double> parse_double_list(const std::string& text,
                                      const std::string& flag) {
  std::vector<double> values;
  for (const std::string& item : split_list(text)) {
    try {
      values.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw qpart::FlagError(flag + ": '" + item + "' is not a number");
    }
  }
  if (values.empty()) {
    throw qpart::FlagError(flag + ": empty list");
  }
  return values;
}

void write_manifest(const std::string& out_path, const json& config,
                    const std::vector<std::string>& inputs,
                    const std::vector<std::string>& outputs) {
  json doc;
  doc["tool"] = "qpart";
  doc["config"] = config;
  doc["inputs"] = inputs;
  doc["outputs"] = outputs;
  qpart::atomic_write(out_path + ".manifest.json", doc.dump(2) + "\n");
}

// Shared simulation flags for run/recursive/sweep.
struct SimFlags {
  std::string rho_text = "inf";
  double r = std::numeric_limits<double>::quiet_NaN();
  double gamma = 0.0;
  std::string gamma_rule;
  double epsilon = 0.01;
  int t_max = 64;
  bool echo = true;
  bool ideal_oracle = false;
  std::string diffusion = "ideal";
  double gamma_d = 0.5;
  double r_d = 0.0;
  std::int64_t target = 0;
  unsigned threads = 0;
};

void add_sim_flags(CLI::App* cmd, SimFlags* flags, bool with_oracle_width) {
  if (with_oracle_width) {
    cmd->add_option("--gamma", flags->gamma, "oracle step width");
    cmd->add_option("--gamma-rule", flags->gamma_rule,
                    "width rule: fixed|lsb|crit|optimize");
  }
  cmd->add_option("--rho", flags->rho_text,
                  "interaction-to-decay ratio, 'inf' for no decay");
  cmd->add_option("--r", flags->r, "decay per query (overrides nothing: must "
                                   "be consistent with --rho)");
  cmd->add_option("--epsilon", flags->epsilon, "target failure probability");
  cmd->add_option("--tmax", flags->t_max, "iteration cap");
  cmd->add_flag("--echo,!--no-echo", flags->echo,
                "conjugate every second oracle query (default on)");
  cmd->add_option("--diffusion", flags->diffusion,
                  "reflection kind: ideal|generalized");
  cmd->add_option("--gamma-d", flags->gamma_d,
                  "width of the generalized reflection");
  cmd->add_option("--r-d", flags->r_d, "decay of the generalized reflection");
  cmd->add_option("--target", flags->target, "target imbalance D");
  cmd->add_option("--threads", flags->threads, "worker threads, 0 = auto");
}

qpart::DiffusionSpec diffusion_from(const SimFlags& flags) {
  qpart::DiffusionSpec spec;
  if (flags.diffusion == "ideal") {
    spec.kind = qpart::DiffusionSpec::Kind::ideal;
  } else if (flags.diffusion == "generalized") {
    spec.kind = qpart::DiffusionSpec::Kind::generalized;
    spec.gamma_d = flags.gamma_d;
    spec.r_d = flags.r_d;
  } else {
    throw qpart::FlagError("--diffusion must be ideal or generalized, got '" +
                           flags.diffusion + "'");
  }
  return spec;
}

// Resolve width and decay against the first instance's shape.
qpart::CliConfig resolve_sim_config(const SimFlags& flags, int n, int k) {
  qpart::CliConfig config;
  config.n = n;
  config.k = k;
  if (!flags.gamma_rule.empty()) {
    config.gamma_rule = qpart::parse_gamma_rule(flags.gamma_rule);
  } else {
    config.gamma_rule =
        flags.gamma > 0.0 ? qpart::GammaRule::fixed : qpart::GammaRule::lsb;
  }
  config.gamma = flags.gamma;
  config.rho = qpart::parse_rho(flags.rho_text);
  config.r = flags.r;
  config.epsilon = flags.epsilon;
  config.t_max = flags.t_max;
  config.threads = flags.threads;
  return qpart::validate_config(config);
}

json sim_config_json(const SimFlags& flags, const qpart::CliConfig& resolved) {
  json doc;
  doc["gamma"] = resolved.gamma;
  doc["gamma_rule"] = qpart::gamma_rule_name(resolved.gamma_rule);
  doc["rho"] = std::isinf(resolved.rho) ? json("inf") : json(resolved.rho);
  doc["r"] = std::isnan(resolved.r) ? json(nullptr) : json(resolved.r);
  doc["epsilon"] = resolved.epsilon;
  doc["t_max"] = resolved.t_max;
  doc["echo"] = flags.echo;
  doc["ideal_oracle"] = flags.ideal_oracle;
  doc["diffusion"] = flags.diffusion;
  if (flags.diffusion == "generalized") {
    doc["gamma_d"] = flags.gamma_d;
    doc["r_d"] = flags.r_d;
  }
  doc["target"] = flags.target;
  doc["threads"] = flags.threads;
  return doc;
}

int run_cli(int argc, char** argv) {
  CLI::App app{
      "Grover search for number partitioning with a finite-width phase "
      "oracle: instance generation, simulation, sweeps, recursion, "
      "closed-form analytics, and classical baselines."};
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "Generate a problem-instance file");
  int gen_n = 0;
  int gen_k = 0;
  int gen_count = 0;
  std::uint64_t gen_seed = 1;
  std::string gen_out;
  std::string gen_postselect = "none";
  std::int64_t gen_solutions = 0;
  int gen_budget = 100;
  gen->add_option("--n", gen_n, "weights per instance")->required();
  gen->add_option("--k", gen_k, "bits per weight")->required();
  gen->add_option("--count", gen_count, "instances requested")->required();
  gen->add_option("--seed", gen_seed, "master seed");
  gen->add_option("--out", gen_out, "output JSON-lines path")->required();
  gen->add_option("--postselect", gen_postselect,
                  "none|any|exact (exact needs --solutions)");
  gen->add_option("--solutions", gen_solutions,
                  "required solution count with --postselect exact");
  gen->add_option("--budget-factor", gen_budget,
                  "attempt budget as a multiple of --count");

  // run
  auto* run = app.add_subcommand("run", "Run the standard algorithm");
  std::string run_instances;
  std::string run_out;
  std::string run_outcome;
  SimFlags run_flags;
  run->add_option("--instances", run_instances, "instance JSON-lines file")
      ->required();
  run->add_option("--out", run_out, "trace CSV path")->required();
  run->add_option("--outcome", run_outcome, "optional ensemble-optimum CSV");
  run->add_flag("--ideal-oracle", run_flags.ideal_oracle,
                "use the exact marking oracle instead of the phase step");
  add_sim_flags(run, &run_flags, /*with_oracle_width=*/true);

  // recursive
  auto* rec = app.add_subcommand("recursive", "Run the modular recursion");
  std::string rec_instances;
  std::string rec_out;
  std::string rec_probs;
  std::string rec_schedule;
  int rec_m = 0;
  SimFlags rec_flags;
  rec->add_option("--instances", rec_instances, "instance JSON-lines file")
      ->required();
  rec->add_option("--m", rec_m, "bits resolved per layer")->required();
  rec->add_option("--schedule", rec_schedule,
                  "comma-separated T_l per layer (default: built-in)");
  rec->add_option("--gamma", rec_flags.gamma,
                  "oracle width (default 2^-(m+1))");
  rec->add_option("--out", rec_out, "ledger JSON path")->required();
  rec->add_option("--probs", rec_probs,
                  "optional per-instance final-probability CSV");
  add_sim_flags(rec, &rec_flags, /*with_oracle_width=*/false);

  // sweep
  auto* sweep = app.add_subcommand("sweep", "Ensemble sweeps over a grid");
  std::string sweep_spec_path;
  std::string sweep_n = "8";
  std::string sweep_k = "8";
  std::string sweep_out;
  std::string sweep_algorithm = "standard";
  std::string sweep_postselect = "none";
  std::string sweep_quantiles = "0.01,0.25,0.5,0.75,0.99";
  std::string sweep_keff;
  std::string sweep_gammas;
  std::int64_t sweep_solutions = 0;
  int sweep_m = 0;
  int sweep_ensemble = 500;
  std::uint64_t sweep_seed = 1;
  int sweep_bins = 129;
  bool sweep_real = false;
  bool sweep_histogram = false;
  SimFlags sweep_flags;
  sweep->add_option("--spec", sweep_spec_path,
                    "JSON sweep spec (overrides grid flags)");
  sweep->add_option("--n", sweep_n, "comma list of n values");
  sweep->add_option("--k", sweep_k, "comma list of k values");
  sweep->add_option("--out", sweep_out, "records CSV path")->required();
  sweep->add_option("--algorithm", sweep_algorithm, "standard|recursive");
  sweep->add_option("--m", sweep_m, "layer width for recursive sweeps");
  sweep->add_option("--ensemble", sweep_ensemble, "instances per grid point");
  sweep->add_option("--seed", sweep_seed, "master seed");
  sweep->add_option("--postselect", sweep_postselect, "none|any|exact");
  sweep->add_option("--solutions", sweep_solutions,
                    "solution count for --postselect exact");
  sweep->add_option("--quantiles", sweep_quantiles,
                    "comma list of Q quantiles to record");
  sweep->add_flag("--real", sweep_real,
                  "real-weight optimization sweep over --keff");
  sweep->add_option("--keff", sweep_keff,
                    "comma list of effective bit depths (with --real)");
  sweep->add_flag("--histogram", sweep_histogram,
                  "capture-range histogram over --gammas");
  sweep->add_option("--gammas", sweep_gammas,
                    "comma list of widths (with --histogram)");
  sweep->add_option("--bins", sweep_bins, "S_z bins (with --histogram)");
  add_sim_flags(sweep, &sweep_flags, /*with_oracle_width=*/true);

  // analyze
  auto* analyze = app.add_subcommand(
      "analyze", "Evaluate closed-form model quantities on a grid");
  std::string an_formula;
  std::string an_out;
  std::string an_n = "";
  std::string an_k = "";
  std::string an_gamma = "";
  std::string an_sigma = "";
  std::string an_rho = "";
  std::string an_x = "";
  double an_r = 0.0;
  double an_eta = 0.0;
  double an_p = 0.0;
  double an_eps = 0.01;
  double an_mu = 0.0;
  double an_chibar = 1.0;
  double an_c = 1.0 / 3.0;
  double an_d = 1.2;
  double an_big_n = 0.0;
  double an_nsol = 0.0;
  double an_wrms = qpart::kUniformWrms;
  analyze
      ->add_option("--formula", an_formula,
                   "kc|gammac|keff|navg|trials|chibar|sigma|g0|gain|qopt|"
                   "classical|erfcx|decay")
      ->required();
  analyze->add_option("--out", an_out, "optional CSV path");
  analyze->add_option("--n", an_n, "n value or comma list");
  analyze->add_option("--k", an_k, "k value or comma list");
  analyze->add_option("--gamma", an_gamma, "width value or comma list");
  analyze->add_option("--sigma", an_sigma, "offset spread value or list");
  analyze->add_option("--rho", an_rho, "ratio value or comma list");
  analyze->add_option("--x", an_x, "argument value or comma list (erfcx)");
  analyze->add_option("--r", an_r, "decay per query");
  analyze->add_option("--eta", an_eta, "cooperativity");
  analyze->add_option("--p", an_p, "per-shot success probability");
  analyze->add_option("--eps", an_eps, "target failure probability");
  analyze->add_option("--mu", an_mu, "detuning in width units");
  analyze->add_option("--chibar", an_chibar, "averaged phase factor");
  analyze->add_option("--c", an_c, "dissipation model constant C");
  analyze->add_option("--d", an_d, "dissipation model constant D");
  analyze->add_option("--bign", an_big_n, "search-space size N");
  analyze->add_option("--nsol", an_nsol, "solution count N_A");
  analyze->add_option("--wrms", an_wrms, "weight RMS");

  // classical
  auto* classical =
      app.add_subcommand("classical", "Classical baselines per instance");
  std::string cl_instances;
  std::string cl_out;
  classical
      ->add_option("--instances", cl_instances, "instance JSON-lines file")
      ->required();
  classical->add_option("--out", cl_out, "baseline CSV path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  if (*gen) {
    qpart::EnsembleSpec spec;
    spec.n = gen_n;
    spec.k = gen_k;
    spec.count = gen_count;
    spec.seed = gen_seed;
    spec.rule = qpart::parse_postselect_rule(gen_postselect);
    spec.solution_count = gen_solutions;
    if (spec.rule == qpart::PostselectRule::exact_count &&
        spec.solution_count < 1) {
      throw qpart::FlagError("--postselect exact needs --solutions >= 1");
    }
    const qpart::GeneratedEnsemble ens =
        qpart::generate_ensemble(spec, gen_budget);
    qpart::write_instances_jsonl(gen_out, ens.instances);
    json config = {{"n", gen_n},
                   {"k", gen_k},
                   {"count", gen_count},
                   {"seed", gen_seed},
                   {"postselect", qpart::postselect_rule_name(spec.rule)},
                   {"solutions", gen_solutions},
                   {"budget_factor", gen_budget},
                   {"attempts", ens.attempts},
                   {"budget_exhausted", ens.budget_exhausted}};
    write_manifest(gen_out, config, {}, {gen_out});
    std::cout << "gen: wrote " << ens.instances.size() << " instances (n="
              << gen_n << ", k=" << gen_k << ") to " << gen_out
              << (ens.budget_exhausted ? " [budget exhausted]" : "") << "\n";
    return 0;
  }

  if (*run) {
    const std::vector<qpart::ProblemInstance> instances =
        qpart::read_instances_jsonl(run_instances);
    if (instances.empty()) {
      throw qpart::FlagError("--instances: file has no instances");
    }
    for (const qpart::ProblemInstance& inst : instances) {
      if (inst.n != instances[0].n || inst.k != instances[0].k) {
        throw qpart::FlagError(
            "--instances: mixed instance shapes; run them separately");
      }
    }
    const qpart::CliConfig resolved =
        resolve_sim_config(run_flags, instances[0].n, instances[0].k);
    if (resolved.gamma_rule == qpart::GammaRule::optimize) {
      throw qpart::FlagError(
          "--gamma-rule optimize belongs to the sweep subcommand");
    }
    qpart::RunConfig config;
    config.gamma = resolved.gamma;
    config.r = resolved.r;
    config.t_max = resolved.t_max;
    config.echo = run_flags.echo;
    config.epsilon = resolved.epsilon;
    config.ideal_oracle = run_flags.ideal_oracle;
    config.diffusion = diffusion_from(run_flags);

    std::vector<qpart::SearchProblem> problems(instances.size());
    qpart::parallel_for(instances.size(), run_flags.threads,
                        [&](std::size_t i) {
                          problems[i] = qpart::make_problem(instances[i],
                                                            run_flags.target);
                        });
    std::vector<qpart::RunTrace> traces(problems.size());
    qpart::parallel_for(problems.size(), run_flags.threads,
                        [&](std::size_t i) {
                          traces[i] = qpart::run_standard(problems[i], config);
                        });
    qpart::atomic_write(run_out, qpart::traces_to_csv(traces));

    std::string optimum_note = "no ensemble optimum (all-zero success)";
    std::vector<std::string> outputs = {run_out};
    try {
      const qpart::GroverOutcome outcome =
          qpart::optimal_iterations(traces, config.epsilon);
      std::vector<double> qs(problems.size());
      for (std::size_t i = 0; i < problems.size(); ++i) {
        const double n_a = static_cast<double>(problems[i].solutions.size());
        qs[i] = n_a > 0.0
                    ? qpart::speedup(outcome.p_opt[i], outcome.t_opt, n_a,
                                     static_cast<double>(
                                         problems[i].table.size()))
                    : 0.0;
      }
      optimum_note = "T_opt=" + std::to_string(outcome.t_opt) +
                     " median_P_opt=" + qpart::format_g17(outcome.p_opt_median) +
                     " median_Q=" + qpart::format_g17(qpart::median(qs));
      if (!run_outcome.empty()) {
        std::string csv =
            "n,k,gamma,r,T_opt,P_opt,Q_median,Q_q25,Q_q75\n";
        csv += std::to_string(instances[0].n) + ',' +
               std::to_string(instances[0].k) + ',' +
               qpart::format_g17(config.gamma) + ',' +
               qpart::format_g17(config.r) + ',' +
               std::to_string(outcome.t_opt) + ',' +
               qpart::format_g17(outcome.p_opt_median) + ',' +
               qpart::format_g17(qpart::median(qs)) + ',' +
               qpart::format_g17(qpart::quantile(qs, 0.25)) + ',' +
               qpart::format_g17(qpart::quantile(qs, 0.75)) + '\n';
        qpart::atomic_write(run_outcome, csv);
        outputs.push_back(run_outcome);
      }
    } catch (const std::runtime_error&) {
      // Traces are still valid output; the summary carries the diagnosis.
    }

    write_manifest(run_out, sim_config_json(run_flags, resolved),
                   {run_instances}, outputs);
    std::cout << "run: " << instances.size() << " instances, T_max="
              << config.t_max << ", gamma=" << qpart::format_g17(config.gamma)
              << ", r=" << qpart::format_g17(config.r) << "; " << optimum_note
              << "; trace -> " << run_out << "\n";
    return 0;
  }

  if (*rec) {
    const std::vector<qpart::ProblemInstance> instances =
        qpart::read_instances_jsonl(rec_instances);
    if (instances.empty()) {
      throw qpart::FlagError("--instances: file has no instances");
    }
    for (const qpart::ProblemInstance& inst : instances) {
      if (inst.n != instances[0].n || inst.k != instances[0].k) {
        throw qpart::FlagError("--instances: mixed instance shapes");
      }
    }
    if (rec_m < 1) throw qpart::FlagError("--m must be >= 1");
    const int k = instances[0].k;
    const int layers = (k + rec_m - 1) / rec_m;

    qpart::RecursiveConfig config;
    config.m = rec_m;
    config.gamma =
        rec_flags.gamma > 0.0 ? rec_flags.gamma : std::exp2(-(rec_m + 1));
    config.diffusion = diffusion_from(rec_flags);
    config.target = rec_flags.target;
    config.epsilon = rec_flags.epsilon;
    if (!rec_schedule.empty()) {
      config.schedule = parse_int_list(rec_schedule, "--schedule");
      if (static_cast<int>(config.schedule.size()) != layers) {
        throw qpart::FlagError(
            "--schedule: expected " + std::to_string(layers) +
            " entries for k=" + std::to_string(k) + ", m=" +
            std::to_string(rec_m) + ", got " +
            std::to_string(config.schedule.size()));
      }
    }
    const double rho = qpart::parse_rho(rec_flags.rho_text);
    if (!std::isnan(rec_flags.r)) {
      config.r = rec_flags.r;
    } else if (!std::isinf(rho)) {
      config.r = 1.0 / (rho * config.gamma);
    }

    std::vector<double> probs(instances.size());
    std::vector<qpart::QueryLedger> ledgers(instances.size());
    qpart::parallel_for(instances.size(), rec_flags.threads,
                        [&](std::size_t i) {
                          qpart::RecursiveResult res =
                              qpart::run_recursive(instances[i], config);
                          probs[i] = res.final_probability;
                          ledgers[i] = std::move(res.ledger);
                        });
    qpart::atomic_write(rec_out, qpart::ledger_to_json(ledgers[0]));
    std::vector<std::string> outputs = {rec_out};
    if (!rec_probs.empty()) {
      std::string csv = "instance_id,P_final\n";
      for (std::size_t i = 0; i < instances.size(); ++i) {
        csv += std::to_string(instances[i].seed) + ',' +
               qpart::format_g17(probs[i]) + '\n';
      }
      qpart::atomic_write(rec_probs, csv);
      outputs.push_back(rec_probs);
    }

    json config_json;
    config_json["m"] = rec_m;
    config_json["gamma"] = config.gamma;
    config_json["r"] = config.r;
    config_json["rho"] = std::isinf(rho) ? json("inf") : json(rho);
    config_json["epsilon"] = config.epsilon;
    config_json["diffusion"] = rec_flags.diffusion;
    config_json["target"] = rec_flags.target;
    config_json["threads"] = rec_flags.threads;
    config_json["schedule"] = config.schedule.empty()
                                  ? qpart::default_schedule(rec_m, k,
                                                            instances[0].n)
                                  : config.schedule;
    write_manifest(rec_out, config_json, {rec_instances}, outputs);

    std::ostringstream sched_text;
    const std::vector<int>& sched =
        config.schedule.empty()
            ? qpart::default_schedule(rec_m, k, instances[0].n)
            : config.schedule;
    for (std::size_t i = 0; i < sched.size(); ++i) {
      sched_text << (i ? "," : "") << sched[i];
    }
    std::cout << "recursive: " << instances.size() << " instances, m="
              << rec_m << ", layers=" << layers << ", schedule="
              << sched_text.str() << ", queries="
              << ledgers[0].oracle_queries << ", physical_time="
              << qpart::format_g17(ledgers[0].physical_time)
              << ", median_P=" << qpart::format_g17(qpart::median(probs))
              << "; ledger -> " << rec_out << "\n";
    return 0;
  }

  if (*sweep) {
    if (sweep_real && sweep_histogram) {
      throw qpart::FlagError("--real and --histogram are mutually exclusive");
    }
    const double rho = qpart::parse_rho(sweep_flags.rho_text);

    if (sweep_real) {
      if (sweep_keff.empty()) {
        throw qpart::FlagError("--real needs --keff");
      }
      qpart::RunConfig base;
      base.t_max = sweep_flags.t_max;
      base.echo = sweep_flags.echo;
      base.epsilon = sweep_flags.epsilon;
      base.diffusion = diffusion_from(sweep_flags);
      const std::vector<qpart::RealSweepRecord> records =
          qpart::real_weight_sweep(parse_int_list(sweep_n, "--n"),
                                   parse_double_list(sweep_keff, "--keff"),
                                   sweep_ensemble, sweep_seed, base,
                                   sweep_flags.threads);
      qpart::atomic_write(sweep_out, qpart::real_records_to_csv(records));
      json config = {{"mode", "real"},
                     {"n", sweep_n},
                     {"keff", sweep_keff},
                     {"ensemble", sweep_ensemble},
                     {"seed", sweep_seed},
                     {"epsilon", sweep_flags.epsilon},
                     {"t_max", sweep_flags.t_max}};
      write_manifest(sweep_out, config, {}, {sweep_out});
      std::cout << "sweep: " << records.size() << " real-weight points -> "
                << sweep_out << "\n";
      return 0;
    }

    if (sweep_histogram) {
      if (sweep_gammas.empty()) {
        throw qpart::FlagError("--histogram needs --gammas");
      }
      const std::vector<int> ns = parse_int_list(sweep_n, "--n");
      const std::vector<int> ks = parse_int_list(sweep_k, "--k");
      if (ns.size() != 1 || ks.size() != 1) {
        throw qpart::FlagError("--histogram takes a single (n, k) point");
      }
      qpart::EnsembleSpec espec;
      espec.n = ns[0];
      espec.k = ks[0];
      espec.count = sweep_ensemble;
      espec.seed = sweep_seed;
      const qpart::GeneratedEnsemble ens = qpart::generate_ensemble(espec);
      qpart::RunConfig base;
      base.t_max = sweep_flags.t_max;
      base.echo = sweep_flags.echo;
      base.epsilon = sweep_flags.epsilon;
      base.diffusion = diffusion_from(sweep_flags);
      const qpart::CaptureHistogram hist = qpart::capture_histogram(
          ens.instances, parse_double_list(sweep_gammas, "--gammas"), base,
          sweep_bins, sweep_flags.threads);
      qpart::atomic_write(sweep_out, qpart::histogram_to_csv(hist));
      json config = {{"mode", "histogram"}, {"n", ns[0]},      {"k", ks[0]},
                     {"gammas", sweep_gammas}, {"bins", sweep_bins},
                     {"ensemble", sweep_ensemble}, {"seed", sweep_seed}};
      write_manifest(sweep_out, config, {}, {sweep_out});
      std::cout << "sweep: histogram over " << hist.gammas.size()
                << " widths -> " << sweep_out << "\n";
      return 0;
    }

    qpart::SweepSpec spec;
    if (!sweep_spec_path.empty()) {
      const json doc = json::parse(qpart::read_file(sweep_spec_path));
      spec.n_values = doc.at("n").get<std::vector<int>>();
      spec.k_values = doc.at("k").get<std::vector<int>>();
      if (doc.contains("gamma_rule")) {
        spec.gamma_rule =
            qpart::parse_gamma_rule(doc["gamma_rule"].get<std::string>());
      }
      if (doc.contains("gamma")) spec.gamma_fixed = doc["gamma"].get<double>();
      if (doc.contains("rho")) {
        spec.rho = doc["rho"].is_string()
                       ? qpart::parse_rho(doc["rho"].get<std::string>())
                       : doc["rho"].get<double>();
      }
      if (doc.contains("algorithm")) {
        spec.algorithm = doc["algorithm"] == "recursive"
                             ? qpart::Algorithm::recursive
                             : qpart::Algorithm::standard;
      }
      if (doc.contains("m")) spec.recursive_m = doc["m"].get<int>();
      if (doc.contains("ensemble")) spec.ensemble = doc["ensemble"].get<int>();
      if (doc.contains("seed")) spec.seed = doc["seed"].get<std::uint64_t>();
      if (doc.contains("postselect")) {
        spec.postselect = qpart::parse_postselect_rule(
            doc["postselect"].get<std::string>());
      }
      if (doc.contains("solutions")) {
        spec.solution_count = doc["solutions"].get<std::int64_t>();
      }
      if (doc.contains("epsilon")) spec.epsilon = doc["epsilon"].get<double>();
      if (doc.contains("t_max")) spec.t_max = doc["t_max"].get<int>();
      if (doc.contains("echo")) spec.echo = doc["echo"].get<bool>();
      if (doc.contains("quantiles")) {
        spec.quantiles = doc["quantiles"].get<std::vector<double>>();
      }
      if (doc.contains("threads")) {
        spec.threads = doc["threads"].get<unsigned>();
      }
    } else {
      spec.n_values = parse_int_list(sweep_n, "--n");
      spec.k_values = parse_int_list(sweep_k, "--k");
      if (!sweep_flags.gamma_rule.empty()) {
        spec.gamma_rule = qpart::parse_gamma_rule(sweep_flags.gamma_rule);
      } else if (sweep_flags.gamma > 0.0) {
        spec.gamma_rule = qpart::GammaRule::fixed;
      }
      spec.gamma_fixed = sweep_flags.gamma;
      spec.rho = rho;
      spec.algorithm = sweep_algorithm == "recursive"
                           ? qpart::Algorithm::recursive
                           : qpart::Algorithm::standard;
      spec.recursive_m = sweep_m;
      spec.ensemble = sweep_ensemble;
      spec.seed = sweep_seed;
      spec.postselect = qpart::parse_postselect_rule(sweep_postselect);
      spec.solution_count = sweep_solutions;
      spec.epsilon = sweep_flags.epsilon;
      spec.t_max = sweep_flags.t_max;
      spec.echo = sweep_flags.echo;
      spec.diffusion = diffusion_from(sweep_flags);
      spec.quantiles = parse_double_list(sweep_quantiles, "--quantiles");
      spec.threads = sweep_flags.threads;
    }
    const std::vector<qpart::SweepRecord> records = qpart::run_sweep(spec);
    qpart::atomic_write(sweep_out,
                        qpart::sweep_records_to_csv(records, spec.quantiles));
    json config = {{"mode", spec.algorithm == qpart::Algorithm::recursive
                                ? "recursive"
                                : "standard"},
                   {"n", spec.n_values},
                   {"k", spec.k_values},
                   {"gamma_rule", qpart::gamma_rule_name(spec.gamma_rule)},
                   {"gamma", spec.gamma_fixed},
                   {"rho", std::isinf(spec.rho) ? json("inf") : json(spec.rho)},
                   {"ensemble", spec.ensemble},
                   {"seed", spec.seed},
                   {"postselect", qpart::postselect_rule_name(spec.postselect)},
                   {"solutions", spec.solution_count},
                   {"epsilon", spec.epsilon},
                   {"t_max", spec.t_max},
                   {"echo", spec.echo},
                   {"quantiles", spec.quantiles},
                   {"m", spec.recursive_m}};
    write_manifest(sweep_out, config,
                   sweep_spec_path.empty()
                       ? std::vector<std::string>{}
                       : std::vector<std::string>{sweep_spec_path},
                   {sweep_out});
    std::cout << "sweep: " << records.size() << " grid points -> "
              << sweep_out << "\n";
    return 0;
  }

  if (*analyze) {
    std::vector<std::string> lines;
    std::string csv;
    auto emit = [&](const std::string& label, const std::string& row) {
      lines.push_back(label);
      csv += row + '\n';
    };
    const std::string f = an_formula;
    if (f == "kc") {
      csv = "n,kc\n";
      for (double n : parse_double_list(an_n, "--n")) {
        const double v = qpart::critical_bit_depth(n);
        emit("kc(n=" + qpart::format_g17(n) + ") = " + qpart::format_g17(v),
             qpart::format_g17(n) + ',' + qpart::format_g17(v));
      }
    } else if (f == "gammac") {
      csv = "n,k,gammac\n";
      for (double n : parse_double_list(an_n, "--n")) {
        for (double k : parse_double_list(an_k, "--k")) {
          const double v = qpart::critical_step_width(n, k);
          emit("gammac(n=" + qpart::format_g17(n) + ",k=" +
                   qpart::format_g17(k) + ") = " + qpart::format_g17(v),
               qpart::format_g17(n) + ',' + qpart::format_g17(k) + ',' +
                   qpart::format_g17(v));
        }
      }
    } else if (f == "keff") {
      csv = "gamma,keff\n";
      for (double g : parse_double_list(an_gamma, "--gamma")) {
        const double v = qpart::effective_bit_depth(g);
        emit("keff(gamma=" + qpart::format_g17(g) + ") = " +
                 qpart::format_g17(v),
             qpart::format_g17(g) + ',' + qpart::format_g17(v));
      }
    } else if (f == "navg") {
      csv = "n,k,navg\n";
      for (double n : parse_double_list(an_n, "--n")) {
        for (double k : parse_double_list(an_k, "--k")) {
          const double v = qpart::expected_solutions(n, k);
          emit("navg(n=" + qpart::format_g17(n) + ",k=" +
                   qpart::format_g17(k) + ") = " + qpart::format_g17(v),
               qpart::format_g17(n) + ',' + qpart::format_g17(k) + ',' +
                   qpart::format_g17(v));
        }
      }
    } else if (f == "trials") {
      const double v = qpart::trials_needed(an_p, an_eps);
      csv = "p,eps,trials\n" + qpart::format_g17(an_p) + ',' +
            qpart::format_g17(an_eps) + ',' + qpart::format_g17(v) + '\n';
      lines.push_back("trials(p=" + qpart::format_g17(an_p) + ",eps=" +
                      qpart::format_g17(an_eps) + ") = " +
                      qpart::format_g17(v));
    } else if (f == "chibar") {
      csv = "sigma,r,chibar\n";
      for (double s : parse_double_list(an_sigma, "--sigma")) {
        const double v = qpart::chibar(s, an_r);
        emit("chibar(sigma=" + qpart::format_g17(s) + ",r=" +
                 qpart::format_g17(an_r) + ") = " + qpart::format_g17(v),
             qpart::format_g17(s) + ',' + qpart::format_g17(an_r) + ',' +
                 qpart::format_g17(v));
      }
    } else if (f == "sigma") {
      csv = "n,gamma,sigma\n";
      for (double n : parse_double_list(an_n, "--n")) {
        for (double g : parse_double_list(an_gamma, "--gamma")) {
          const double v = qpart::sigma_from_gamma(n, g, an_wrms);
          emit("sigma(n=" + qpart::format_g17(n) + ",gamma=" +
                   qpart::format_g17(g) + ") = " + qpart::format_g17(v),
               qpart::format_g17(n) + ',' + qpart::format_g17(g) + ',' +
                   qpart::format_g17(v));
        }
      }
    } else if (f == "g0") {
      csv = "sigma,r,g0\n";
      for (double s : parse_double_list(an_sigma, "--sigma")) {
        const double v = qpart::g0_bound(s, an_r);
        emit("g0(sigma=" + qpart::format_g17(s) + ",r=" +
                 qpart::format_g17(an_r) + ") = " + qpart::format_g17(v),
             qpart::format_g17(s) + ',' + qpart::format_g17(an_r) + ',' +
                 qpart::format_g17(v));
      }
    } else if (f == "gain") {
      const double v = qpart::gain_curve(an_mu, an_chibar, an_r);
      csv = "mu,chibar,r,gain\n" + qpart::format_g17(an_mu) + ',' +
            qpart::format_g17(an_chibar) + ',' + qpart::format_g17(an_r) +
            ',' + qpart::format_g17(v) + '\n';
      lines.push_back("gain(mu=" + qpart::format_g17(an_mu) + ",chibar=" +
                      qpart::format_g17(an_chibar) + ",r=" +
                      qpart::format_g17(an_r) + ") = " + qpart::format_g17(v));
    } else if (f == "qopt") {
      csv = "rho,n,Q_opt,gamma_opt,T_opt_star\n";
      for (double rho : parse_double_list(an_rho, "--rho")) {
        for (double n : parse_double_list(an_n, "--n")) {
          const qpart::QoptModel v = qpart::qopt_model(rho, n, an_c, an_d);
          emit("qopt(rho=" + qpart::format_g17(rho) + ",n=" +
                   qpart::format_g17(n) + ") = Q " +
                   qpart::format_g17(v.q_opt) + ", gamma " +
                   qpart::format_g17(v.gamma_opt) + ", T* " +
                   qpart::format_g17(v.t_opt_star),
               qpart::format_g17(rho) + ',' + qpart::format_g17(n) + ',' +
                   qpart::format_g17(v.q_opt) + ',' +
                   qpart::format_g17(v.gamma_opt) + ',' +
                   qpart::format_g17(v.t_opt_star));
        }
      }
    } else if (f == "classical") {
      const qpart::ClassicalBaselines v =
          qpart::classical_baselines(an_big_n, an_nsol);
      csv = "N,N_A,memoryless,linear\n" + qpart::format_g17(an_big_n) + ',' +
            qpart::format_g17(an_nsol) + ',' +
            qpart::format_g17(v.memoryless_expected) + ',' +
            qpart::format_g17(v.linear_expected) + '\n';
      lines.push_back("classical(N=" + qpart::format_g17(an_big_n) + ",N_A=" +
                      qpart::format_g17(an_nsol) + ") = memoryless " +
                      qpart::format_g17(v.memoryless_expected) + ", linear " +
                      qpart::format_g17(v.linear_expected));
    } else if (f == "erfcx") {
      csv = "x,erfcx\n";
      for (double x : parse_double_list(an_x, "--x")) {
        const double v = qpart::erfcx(x);
        emit("erfcx(" + qpart::format_g17(x) + ") = " + qpart::format_g17(v),
             qpart::format_g17(x) + ',' + qpart::format_g17(v));
      }
    } else if (f == "decay") {
      csv = "sigma,eta,r\n";
      for (double s : parse_double_list(an_sigma, "--sigma")) {
        const double v = qpart::cooperativity_to_decay(s, an_eta);
        emit("decay(sigma=" + qpart::format_g17(s) + ",eta=" +
                 qpart::format_g17(an_eta) + ") = " + qpart::format_g17(v),
             qpart::format_g17(s) + ',' + qpart::format_g17(an_eta) + ',' +
                 qpart::format_g17(v));
      }
    } else {
      throw qpart::FlagError("--formula: unknown formula '" + f + "'");
    }
    for (const std::string& line : lines) std::cout << line << "\n";
    if (!an_out.empty()) {
      qpart::atomic_write(an_out, csv);
      json config = {{"formula", an_formula}};
      write_manifest(an_out, config, {}, {an_out});
    }
    return 0;
  }

  if (*classical) {
    const std::vector<qpart::ProblemInstance> instances =
        qpart::read_instances_jsonl(cl_instances);
    if (instances.empty()) {
      throw qpart::FlagError("--instances: file has no instances");
    }
    std::string csv = "seed,n,k,N_A,memoryless_expected,linear_expected\n";
    std::vector<double> memoryless;
    for (const qpart::ProblemInstance& inst : instances) {
      const qpart::SolutionReport report = qpart::count_solutions(inst);
      const double big_n = std::exp2(inst.n);
      double mem = std::numeric_limits<double>::infinity();
      double lin = (big_n + 1.0) /
                   (static_cast<double>(report.num_solutions) + 1.0);
      if (report.num_solutions > 0) {
        const qpart::ClassicalBaselines baselines = qpart::classical_baselines(
            big_n, static_cast<double>(report.num_solutions));
        mem = baselines.memoryless_expected;
        lin = baselines.linear_expected;
      }
      memoryless.push_back(mem);
      csv += std::to_string(inst.seed) + ',' + std::to_string(inst.n) + ',' +
             std::to_string(inst.k) + ',' +
             std::to_string(report.num_solutions) + ',' +
             qpart::format_g17(mem) + ',' + qpart::format_g17(lin) + '\n';
    }
    qpart::atomic_write(cl_out, csv);
    json config = {{"instances", cl_instances}};
    write_manifest(cl_out, config, {cl_instances}, {cl_out});
    std::cout << "classical: " << instances.size()
              << " instances; median memoryless trials = "
              << qpart::format_g17(qpart::median(memoryless)) << "; -> "
              << cl_out << "\n";
    return 0;
  }

  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run_cli(argc, argv);
  } catch (const qpart::FlagError& e) {
    std::cerr << "flag error: " << e.what() << "\nRun with --help for usage."
              << std::endl;
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return 1;
  }
}
