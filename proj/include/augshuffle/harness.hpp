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

#ifndef AUGSHUFFLE_HARNESS_H_
#define AUGSHUFFLE_HARNESS_H_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "augshuffle/adversary.hpp"
#include "augshuffle/defenses.hpp"
#include "augshuffle/engine.hpp"
#include "augshuffle/protocol.hpp"

namespace augshuffle {

enum class DatasetFormat { kAuto, kIntegerLines, kCsvCategories };

// One item per line: either an integer index or a string category mapped to
// indices by first appearance. Throws with the offending line number on
// malformed input.
Dataset LoadDataset(const std::string& path, DatasetFormat format,
                    int32_t d_override = 0);
void SaveDataset(const Dataset& dataset, const std::string& path);

// i.i.d. draws with Pr(item k) proportional to k^(-exponent).
Dataset SynthZipf(int64_t n, int32_t d, double exponent, uint64_t seed);

struct ExperimentConfig {
  std::vector<ProtocolKind> protocols;
  std::vector<double> eps_grid;
  double delta = 1e-12;
  double beta = 1.0;
  int runs = 100;
  int64_t n = 10000;
  int32_t d = 100;
  double zipf_exponent = 1.0;
  std::string dataset_path;  // synthetic when empty
  DatasetFormat dataset_format = DatasetFormat::kAuto;
  int alpha_bits = 2048;
  uint64_t seed = 1;
  // attack
  double lambda = 0.1;
  int32_t target_count = 2;
  // collusion
  std::vector<double> omega_ratios;
  // defenses
  DefenseOptions defense;
  double wang_a = 0.0;
};

struct ResultRow {
  std::string protocol;
  double epsilon = 0.0;
  double delta = 0.0;
  double beta = 1.0;
  int64_t n = 0;
  int32_t d = 0;
  std::string metric;
  double value = 0.0;
  double std_err = 0.0;
  uint64_t seed = 0;
};

// Fixed schema: protocol,epsilon,delta,beta,n,d,metric,value,stderr,seed with
// %.12g numbers and LF line endings.
void WriteCsv(const std::vector<ResultRow>& rows, std::ostream& out);

// Runs R seeded executions per (protocol, epsilon) cell and reports the mean
// squared error with its standard error. Cells whose parameters are outside a
// protocol's validity range become `skipped` rows carrying the reason.
std::vector<ResultRow> MseSweep(const ExperimentConfig& config);

// Expected total communication in bits.
double CommCost(ProtocolKind kind, const ProtocolConfig& config, int64_t n,
                int32_t d);
std::vector<ResultRow> CostSweep(const ExperimentConfig& config);

std::vector<ResultRow> AttackSweep(const ExperimentConfig& config);
std::vector<ResultRow> CollusionSweep(const ExperimentConfig& config);

// Exact mechanism-level delta at eps/2 for the local-noise-free protocols,
// plus the implied protocol-level certificate (twice the mechanism value).
std::vector<ResultRow> VerifyDpSweep(const ExperimentConfig& config);

// Command-line front end: subcommands simulate, accountant, attack, collude,
// cost, verify-dp. Returns the process exit status (0 ok, 2 config error,
// 1 runtime error).
int CliDispatch(int argc, const char* const* argv);

}  // namespace augshuffle

#endif  // AUGSHUFFLE_HARNESS_H_
