// Copyright 2026 The augshuffle Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "augshuffle/accountant.hpp"
#include "augshuffle/harness.hpp"

namespace augshuffle {
namespace {

std::vector<std::string> SplitList(const std::string& text) {
  std::vector<std::string> parts;
  std::string current;
  for (const char c : text) {
    if (c == ',') {
      if (!current.empty()) parts.push_back(current);
      current.clear();
    } else {
      current += c;
    }
  }
  if (!current.empty()) parts.push_back(current);
  return parts;
}

struct CliOptions {
  std::string protocols = "sbin,sageo,s1geo";
  std::string eps = "1";
  double delta = 1e-12;
  double beta = 1.0;
  int runs = 100;
  int64_t n = 10000;
  int32_t d = 100;
  double zipf_exponent = 1.0;
  std::string dataset;
  std::string format = "auto";
  int alpha_bits = 2048;
  uint64_t seed = 1;
  double lambda = 0.1;
  int32_t targets = 2;
  std::string omega = "0,0.1,0.5,0.9";
  bool threshold = false;
  double alpha_sig = 0.05;
  bool normalize = false;
  double wang_a = 0.0;
  std::string out = "results.csv";
};

void AddCommonOptions(CLI::App* cmd, CliOptions* options) {
  cmd->add_option("--protocol", options->protocols,
                  "comma-separated protocol list (sbin,sageo,s1geo,grr,oue,"
                  "olh,rappor,bc20,cm22,lwy22)");
  cmd->add_option("--eps", options->eps, "comma-separated epsilon grid");
  cmd->add_option("--delta", options->delta, "delta");
  cmd->add_option("--beta", options->beta, "sampling probability");
  cmd->add_option("--runs", options->runs, "runs per cell");
  cmd->add_option("--n", options->n, "number of users (synthetic data)");
  cmd->add_option("--d", options->d, "number of items (synthetic data)");
  cmd->add_option("--zipf-exponent", options->zipf_exponent,
                  "synthetic Zipf exponent");
  cmd->add_option("--dataset", options->dataset,
                  "dataset file (one value per line); synthetic when absent");
  cmd->add_option("--format", options->format,
                  "dataset format: auto, int, csv");
  cmd->add_option("--alpha-bits", options->alpha_bits, "ciphertext bits");
  cmd->add_option("--seed", options->seed, "root seed");
  cmd->add_option("--lambda", options->lambda, "fraction of fake users");
  cmd->add_option("--targets", options->targets, "number of target items");
  cmd->add_option("--omega", options->omega,
                  "comma-separated colluding-user ratios");
  cmd->add_flag("--threshold", options->threshold,
                "apply the significance-threshold post-processing");
  cmd->add_option("--alpha-sig", options->alpha_sig,
                  "significance level for the threshold");
  cmd->add_flag("--normalize", options->normalize,
                "apply the min-to-zero normalization post-processing");
  cmd->add_option("--wang-a", options->wang_a,
                  "dummy-blanket defense fraction (randomized response only)");
  cmd->add_option("--out", options->out, "output CSV path");
}

ExperimentConfig BuildConfig(const CliOptions& options) {
  ExperimentConfig config;
  for (const std::string& name : SplitList(options.protocols)) {
    config.protocols.push_back(ParseProtocol(name));
  }
  for (const std::string& value : SplitList(options.eps)) {
    config.eps_grid.push_back(std::stod(value));
  }
  if (config.protocols.empty() || config.eps_grid.empty()) {
    throw std::invalid_argument("protocol and eps lists must be nonempty");
  }
  config.delta = options.delta;
  config.beta = options.beta;
  config.runs = options.runs;
  if (config.runs < 1) throw std::invalid_argument("runs must be >= 1");
  config.n = options.n;
  config.d = options.d;
  config.zipf_exponent = options.zipf_exponent;
  config.dataset_path = options.dataset;
  if (options.format == "auto") {
    config.dataset_format = DatasetFormat::kAuto;
  } else if (options.format == "int") {
    config.dataset_format = DatasetFormat::kIntegerLines;
  } else if (options.format == "csv") {
    config.dataset_format = DatasetFormat::kCsvCategories;
  } else {
    throw std::invalid_argument("unknown dataset format: " + options.format);
  }
  config.alpha_bits = options.alpha_bits;
  config.seed = options.seed;
  if (const char* env_seed = std::getenv("AUGSHUFFLE_SEED")) {
    config.seed = std::stoull(env_seed);
  }
  config.lambda = options.lambda;
  config.target_count = options.targets;
  for (const std::string& value : SplitList(options.omega)) {
    config.omega_ratios.push_back(std::stod(value));
  }
  config.defense.significance_threshold = options.threshold;
  config.defense.alpha_sig = options.alpha_sig;
  config.defense.normalize = options.normalize;
  config.wang_a = options.wang_a;
  return config;
}

void EmitRows(const std::vector<ResultRow>& rows, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file " + path);
  WriteCsv(rows, out);
  std::cout << rows.size() << " rows written to " << path << "\n";
}

void PrintSummary(const std::vector<ResultRow>& rows) {
  for (const ResultRow& row : rows) {
    std::cout << row.protocol << " eps=" << row.epsilon << " " << row.metric
              << " = " << row.value;
    if (row.std_err > 0.0) std::cout << " (stderr " << row.std_err << ")";
    std::cout << "\n";
  }
}

std::vector<ResultRow> AccountantRows(const ExperimentConfig& config) {
  std::vector<ResultRow> rows;
  for (const ProtocolKind kind : config.protocols) {
    for (const double eps : config.eps_grid) {
      ResultRow row;
      row.protocol = ProtocolName(kind);
      row.epsilon = eps;
      row.delta = config.delta;
      row.beta = config.beta;
      row.n = config.n;
      row.d = config.d;
      row.seed = config.seed;
      try {
        switch (kind) {
          case ProtocolKind::kSBin: {
            const SbinParams params = ResolveSbin(eps, config.delta, config.beta);
            row.metric = "binomial_trials";
            row.value = static_cast<double>(params.trials);
            rows.push_back(row);
            break;
          }
          case ProtocolKind::kSAGeo:
          case ProtocolKind::kS1Geo: {
            const SageoParams params =
                kind == ProtocolKind::kS1Geo
                    ? ResolveS1geo(eps)
                    : ResolveSageo(eps, config.beta, config.delta);
            row.beta = params.beta;
            row.metric = "mode_nu";
            row.value = static_cast<double>(params.mode);
            rows.push_back(row);
            row.metric = "q_l";
            row.value = params.q_l;
            rows.push_back(row);
            row.metric = "q_r";
            row.value = params.q_r;
            rows.push_back(row);
            break;
          }
          case ProtocolKind::kGrrShuffle: {
            row.metric = "eps_l";
            row.value = InvertAmplificationEpsL(AmplificationBoundKind::kGrr,
                                                eps, config.n, config.d,
                                                config.delta);
            rows.push_back(row);
            break;
          }
          case ProtocolKind::kOueShuffle:
          case ProtocolKind::kOlhShuffle:
          case ProtocolKind::kRapporShuffle: {
            row.metric = "eps_l";
            row.value = InvertAmplificationEpsL(
                AmplificationBoundKind::kGeneral, eps, config.n, config.d,
                config.delta);
            rows.push_back(row);
            break;
          }
          case ProtocolKind::kBc20: {
            row.metric = "q1";
            row.value = Bc20DummyProb(eps, config.delta, config.n);
            rows.push_back(row);
            break;
          }
          case ProtocolKind::kCm22: {
            const Cm22Params params = Cm22ParamsFor(eps, config.delta, config.n);
            row.metric = "q2";
            row.value = params.q2;
            rows.push_back(row);
            row.metric = "xi";
            row.value = static_cast<double>(params.xi);
            rows.push_back(row);
            break;
          }
          case ProtocolKind::kLwy22: {
            row.metric = "q3";
            row.value = Lwy22DummyProb(eps, config.delta, config.n, config.d);
            rows.push_back(row);
            break;
          }
        }
      } catch (const std::domain_error& error) {
        std::string reason = error.what();
        for (char& c : reason) {
          if (c == ',') c = ';';
        }
        row.metric = "skipped[" + reason + "]";
        row.value = 0.0;
        rows.push_back(row);
      }
    }
  }
  return rows;
}

}  // namespace

int CliDispatch(int argc, const char* const* argv) {
  CLI::App app{"augmented-shuffle frequency estimation toolkit"};
  app.require_subcommand(1);
  CliOptions options;

  CLI::App* simulate = app.add_subcommand("simulate", "MSE sweep");
  CLI::App* accountant =
      app.add_subcommand("accountant", "solved protocol parameters");
  CLI::App* attack = app.add_subcommand("attack", "poisoning gain sweep");
  CLI::App* collude = app.add_subcommand("collude", "collusion epsilon curve");
  CLI::App* cost = app.add_subcommand("cost", "communication cost");
  CLI::App* verify = app.add_subcommand("verify-dp", "exact delta profiling");
  for (CLI::App* cmd : {simulate, accountant, attack, collude, cost, verify}) {
    AddCommonOptions(cmd, &options);
    cmd->set_config("--config");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& help) {
    return app.exit(help);
  } catch (const CLI::ParseError& error) {
    app.exit(error);
    return 2;
  }

  try {
    const ExperimentConfig config = BuildConfig(options);
    std::vector<ResultRow> rows;
    if (simulate->parsed()) {
      rows = MseSweep(config);
    } else if (accountant->parsed()) {
      rows = AccountantRows(config);
    } else if (attack->parsed()) {
      rows = AttackSweep(config);
    } else if (collude->parsed()) {
      rows = CollusionSweep(config);
    } else if (cost->parsed()) {
      rows = CostSweep(config);
    } else if (verify->parsed()) {
      rows = VerifyDpSweep(config);
    }
    EmitRows(rows, options.out);
    PrintSummary(rows);
    return 0;
  } catch (const std::invalid_argument& error) {
    std::cerr << "config error: " << error.what() << "\n";
    return 2;
  } catch (const std::domain_error& error) {
    std::cerr << "config error: " << error.what() << "\n";
    return 2;
  } catch (const std::exception& error) {
    std::cerr << "error: " << error.what() << "\n";
    return 1;
  }
}

}  // namespace augshuffle
