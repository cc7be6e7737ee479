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

#include "augshuffle/harness.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "augshuffle/accountant.hpp"
#include "augshuffle/stats.hpp"

namespace augshuffle {
namespace {

std::string Trim(const std::string& text) {
  size_t begin = 0;
  size_t end = text.size();
  while (begin < end && std::isspace(static_cast<unsigned char>(text[begin]))) {
    ++begin;
  }
  while (end > begin && std::isspace(static_cast<unsigned char>(text[end - 1]))) {
    --end;
  }
  return text.substr(begin, end - begin);
}

bool ParseInteger(const std::string& text, int64_t* out) {
  if (text.empty()) return false;
  size_t pos = 0;
  try {
    const int64_t value = std::stoll(text, &pos);
    if (pos != text.size()) return false;
    *out = value;
    return true;
  } catch (const std::exception&) {
    return false;
  }
}

std::string FormatDouble(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.12g", value);
  return buffer;
}

// Commas and newlines inside metric strings would break the fixed schema.
std::string SanitizeMetric(std::string metric) {
  for (char& c : metric) {
    if (c == ',' || c == '\n' || c == '\r') c = ';';
  }
  return metric;
}

}  // namespace

Dataset LoadDataset(const std::string& path, DatasetFormat format,
                    int32_t d_override) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("LoadDataset: cannot open " + path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }

  std::vector<int32_t> values;
  int32_t max_item = 0;
  std::map<std::string, int32_t> categories;
  bool integer_mode = format == DatasetFormat::kIntegerLines;
  bool mode_decided = format != DatasetFormat::kAuto;

  for (size_t i = 0; i < lines.size(); ++i) {
    const std::string token = Trim(lines[i]);
    if (token.empty()) continue;
    if (!mode_decided) {
      int64_t ignored;
      integer_mode = ParseInteger(token, &ignored);
      mode_decided = true;
    }
    if (integer_mode) {
      int64_t value;
      if (!ParseInteger(token, &value) || value < 1 ||
          value > std::numeric_limits<int32_t>::max()) {
        throw std::runtime_error("LoadDataset: unparseable value at line " +
                                 std::to_string(i + 1));
      }
      values.push_back(static_cast<int32_t>(value));
      max_item = std::max(max_item, static_cast<int32_t>(value));
    } else {
      // First-appearance index assignment.
      auto [it, inserted] = categories.try_emplace(
          token, static_cast<int32_t>(categories.size() + 1));
      values.push_back(it->second);
      max_item = std::max(max_item, it->second);
    }
  }
  if (values.empty()) {
    throw std::runtime_error("LoadDataset: no values in " + path);
  }
  const int32_t d = d_override > 0 ? d_override : max_item;
  if (d < max_item) {
    throw std::runtime_error("LoadDataset: d override below max item index");
  }
  return Dataset::FromValues(std::move(values), d);
}

void SaveDataset(const Dataset& dataset, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("SaveDataset: cannot open " + path);
  for (const int32_t value : dataset.values) out << value << "\n";
}

Dataset SynthZipf(int64_t n, int32_t d, double exponent, uint64_t seed) {
  if (n < 1) throw std::domain_error("SynthZipf: n must be >= 1");
  if (d < 1) throw std::domain_error("SynthZipf: d must be >= 1");
  if (exponent < 0.0) throw std::domain_error("SynthZipf: exponent must be >= 0");
  std::vector<double> cdf(static_cast<size_t>(d));
  double total = 0.0;
  for (int32_t k = 1; k <= d; ++k) {
    total += std::pow(static_cast<double>(k), -exponent);
    cdf[static_cast<size_t>(k - 1)] = total;
  }
  for (double& c : cdf) c /= total;
  Rng rng(seed);
  std::vector<int32_t> values(static_cast<size_t>(n));
  for (auto& value : values) {
    const double u = rng.NextUnit();
    const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    value = static_cast<int32_t>(it - cdf.begin()) + 1;
    if (value > d) value = d;
  }
  return Dataset::FromValues(std::move(values), d);
}

void WriteCsv(const std::vector<ResultRow>& rows, std::ostream& out) {
  out << "protocol,epsilon,delta,beta,n,d,metric,value,stderr,seed\n";
  for (const ResultRow& row : rows) {
    out << row.protocol << ',' << FormatDouble(row.epsilon) << ','
        << FormatDouble(row.delta) << ',' << FormatDouble(row.beta) << ','
        << row.n << ',' << row.d << ',' << SanitizeMetric(row.metric) << ','
        << FormatDouble(row.value) << ',' << FormatDouble(row.std_err) << ','
        << row.seed << '\n';
  }
}

namespace {

// Per-cell protocol execution with all accountant parameters solved once.
class CellRunner {
 public:
  CellRunner(ProtocolKind kind, const ProtocolConfig& config, int64_t n,
             int32_t d, double wang_a)
      : kind_(kind), config_(config), wang_a_(wang_a) {
    if (IsProposed(kind)) {
      resolved_ = ResolveProtocol(kind, config);
    } else if (kind == ProtocolKind::kGrrShuffle) {
      eps_l_ = InvertAmplificationEpsL(AmplificationBoundKind::kGrr,
                                       config.epsilon, n, d, config.delta);
    } else if (IsSingleMessage(kind)) {
      eps_l_ = InvertAmplificationEpsL(AmplificationBoundKind::kGeneral,
                                       config.epsilon, n, d, config.delta);
    } else if (kind == ProtocolKind::kBc20) {
      multi_.q1 = Bc20DummyProb(config.epsilon, config.delta, n);
    } else if (kind == ProtocolKind::kCm22) {
      const Cm22Params params = Cm22ParamsFor(config.epsilon, config.delta, n);
      multi_.q2 = params.q2;
      multi_.xi = params.xi;
    } else if (kind == ProtocolKind::kLwy22) {
      multi_.q3 = Lwy22DummyProb(config.epsilon, config.delta, n, d);
    }
    if (wang_a_ > 0.0 && kind != ProtocolKind::kGrrShuffle) {
      throw std::invalid_argument(
          "dummy-blanket defense is implemented for the randomized-response "
          "value messages only");
    }
  }

  FrequencyEstimate Run(const Dataset& data, uint64_t seed) const {
    if (IsProposed(kind_)) {
      return RunProtocol(resolved_, data, seed);
    }
    Rng rng(seed);
    if (IsSingleMessage(kind_)) {
      BaselineMessages messages = RandomizeAll(kind_, data, eps_l_, rng);
      if (kind_ == ProtocolKind::kGrrShuffle && wang_a_ > 0.0) {
        const WangDefended defended =
            WangDummyDefense(messages.items, wang_a_, data.d, rng);
        return GrrEstimateWithDummies(defended.messages, data.n(),
                                      defended.dummy_count, eps_l_, data.d);
      }
      return EmpiricalEstimate(messages, data.n(), eps_l_, data.d);
    }
    MultiMessageReport report;
    if (kind_ == ProtocolKind::kBc20) {
      report = Bc20Round(data, multi_.q1, rng);
    } else if (kind_ == ProtocolKind::kCm22) {
      report = Cm22Round(data, multi_.q2, multi_.xi, rng);
    } else {
      report = Lwy22Round(data, multi_.q3, rng);
    }
    return MultiMessageEstimate(report, data.n(), multi_, data.d);
  }

  double AnalyticLoss(int64_t n, int32_t d) const {
    return BaselineExpectedL2(kind_, config_.epsilon, config_.delta, n, d);
  }

 private:
  ProtocolKind kind_;
  ProtocolConfig config_;
  ResolvedProtocol resolved_;
  double eps_l_ = 0.0;
  MultiMessageParams multi_;
  double wang_a_ = 0.0;
};

Dataset MaterializeDataset(const ExperimentConfig& config) {
  if (!config.dataset_path.empty()) {
    return LoadDataset(config.dataset_path, config.dataset_format);
  }
  return SynthZipf(config.n, config.d, config.zipf_exponent,
                   DeriveSeed(config.seed, 9001));
}

ResultRow BaseRow(const ExperimentConfig& config, ProtocolKind kind, double eps,
                  int64_t n, int32_t d) {
  ResultRow row;
  row.protocol = ProtocolName(kind);
  row.epsilon = eps;
  row.delta = config.delta;
  row.beta = IsProposed(kind) ? config.beta : 1.0;
  row.n = n;
  row.d = d;
  row.seed = config.seed;
  return row;
}

ResultRow SkippedRow(const ExperimentConfig& config, ProtocolKind kind,
                     double eps, int64_t n, int32_t d,
                     const std::string& reason) {
  ResultRow row = BaseRow(config, kind, eps, n, d);
  row.metric = "skipped[" + reason + "]";
  return row;
}

}  // namespace

std::vector<ResultRow> MseSweep(const ExperimentConfig& config) {
  const Dataset dataset = MaterializeDataset(config);
  const std::vector<double> truth = dataset.TrueFrequencies();
  const int64_t n = dataset.n();
  const int32_t d = dataset.d;

  std::vector<ResultRow> rows;
  uint64_t cell = 0;
  for (const ProtocolKind kind : config.protocols) {
    for (const double eps : config.eps_grid) {
      const uint64_t cell_seed = DeriveSeed(config.seed, ++cell);
      ProtocolConfig protocol_config{eps, config.delta, config.beta,
                                     config.alpha_bits};
      try {
        const CellRunner runner(kind, protocol_config, n, d, config.wang_a);
        const double variance_per_item =
            config.defense.significance_threshold
                ? runner.AnalyticLoss(n, d) / static_cast<double>(d)
                : 0.0;
        RunningStats loss_stats;
        for (int run = 0; run < config.runs; ++run) {
          FrequencyEstimate estimate =
              runner.Run(dataset, DeriveSeed(cell_seed, run));
          if (config.defense.significance_threshold) {
            estimate = SignificanceThreshold(estimate, variance_per_item,
                                             config.defense.alpha_sig);
          }
          if (config.defense.normalize) {
            estimate = NormalizeDefense(estimate);
          }
          double loss = 0.0;
          for (int32_t i = 0; i < d; ++i) {
            const double diff = estimate.estimates[static_cast<size_t>(i)] -
                                truth[static_cast<size_t>(i)];
            loss += diff * diff;
          }
          loss_stats.Add(loss);
        }
        ResultRow mse = BaseRow(config, kind, eps, n, d);
        mse.metric = "mse";
        mse.value = loss_stats.mean;
        mse.std_err = loss_stats.StdErr();
        rows.push_back(mse);

        ResultRow analytic = BaseRow(config, kind, eps, n, d);
        analytic.metric = "expected_l2";
        analytic.value = runner.AnalyticLoss(n, d);
        rows.push_back(analytic);
      } catch (const std::domain_error& error) {
        rows.push_back(SkippedRow(config, kind, eps, n, d, error.what()));
      }
    }
  }
  return rows;
}

double CommCost(ProtocolKind kind, const ProtocolConfig& config, int64_t n,
                int32_t d) {
  const double alpha = static_cast<double>(config.alpha_bits);
  const double nn = static_cast<double>(n);
  const double dd = static_cast<double>(d);
  if (IsProposed(kind)) {
    const ResolvedProtocol resolved = ResolveProtocol(kind, config);
    return alpha * ((1.0 + resolved.beta) * nn + resolved.mu * dd);
  }
  if (IsSingleMessage(kind)) return 2.0 * alpha * nn;
  switch (kind) {
    case ProtocolKind::kBc20: {
      const double q1 = Bc20DummyProb(config.epsilon, config.delta, n);
      return 2.0 * alpha * nn * (1.0 + dd * q1);
    }
    case ProtocolKind::kCm22: {
      const Cm22Params params = Cm22ParamsFor(config.epsilon, config.delta, n);
      return 2.0 * alpha * nn * static_cast<double>(params.xi + 1);
    }
    case ProtocolKind::kLwy22: {
      const double q3 = Lwy22DummyProb(config.epsilon, config.delta, n, d);
      return 2.0 * alpha * nn * (1.0 + q3);
    }
    default:
      throw std::invalid_argument("CommCost: unknown kind");
  }
}

std::vector<ResultRow> CostSweep(const ExperimentConfig& config) {
  std::vector<ResultRow> rows;
  for (const ProtocolKind kind : config.protocols) {
    for (const double eps : config.eps_grid) {
      ProtocolConfig protocol_config{eps, config.delta, config.beta,
                                     config.alpha_bits};
      try {
        ResultRow row = BaseRow(config, kind, eps, config.n, config.d);
        row.metric = "comm_cost_bits";
        row.value = CommCost(kind, protocol_config, config.n, config.d);
        rows.push_back(row);
      } catch (const std::domain_error& error) {
        rows.push_back(
            SkippedRow(config, kind, eps, config.n, config.d, error.what()));
      }
    }
  }
  return rows;
}

std::vector<ResultRow> AttackSweep(const ExperimentConfig& config) {
  const Dataset dataset = MaterializeDataset(config);
  const int64_t n = dataset.n();
  const int32_t d = dataset.d;
  const AttackSpec spec = MakeAttackSpec(config.lambda, config.target_count, d,
                                         DeriveSeed(config.seed, 777));
  std::vector<ResultRow> rows;
  uint64_t cell = 0;
  for (const ProtocolKind kind : config.protocols) {
    for (const double eps : config.eps_grid) {
      const uint64_t cell_seed = DeriveSeed(config.seed, ++cell);
      ProtocolConfig protocol_config{eps, config.delta, config.beta,
                                     config.alpha_bits};
      try {
        const DefenseOptions* defense =
            (config.defense.significance_threshold || config.defense.normalize)
                ? &config.defense
                : nullptr;
        const GainReport report = MeasureGain(kind, protocol_config, dataset,
                                              spec, config.runs, cell_seed,
                                              defense);
        ResultRow empirical = BaseRow(config, kind, eps, n, d);
        empirical.metric = "gain_empirical";
        empirical.value = report.empirical;
        empirical.std_err = report.std_err;
        rows.push_back(empirical);

        ResultRow predicted = BaseRow(config, kind, eps, n, d);
        predicted.metric = report.predicted_is_lower_bound
                               ? "gain_predicted_lower_bound"
                               : "gain_predicted";
        predicted.value = report.predicted;
        rows.push_back(predicted);
      } catch (const std::domain_error& error) {
        rows.push_back(SkippedRow(config, kind, eps, n, d, error.what()));
      }
    }
  }
  return rows;
}

std::vector<ResultRow> CollusionSweep(const ExperimentConfig& config) {
  std::vector<ResultRow> rows;
  for (const ProtocolKind kind : config.protocols) {
    for (const double eps : config.eps_grid) {
      try {
        const std::vector<double> actual = CollusionScenario(
            kind, eps, config.n, config.omega_ratios, config.delta, config.d);
        for (size_t i = 0; i < actual.size(); ++i) {
          ResultRow row = BaseRow(config, kind, eps, config.n, config.d);
          row.metric = "actual_epsilon[omega_ratio=" +
                       FormatDouble(config.omega_ratios[i]) + "]";
          row.value = actual[i];
          rows.push_back(row);
        }
      } catch (const std::domain_error& error) {
        rows.push_back(
            SkippedRow(config, kind, eps, config.n, config.d, error.what()));
      }
    }
  }
  return rows;
}

std::vector<ResultRow> VerifyDpSweep(const ExperimentConfig& config) {
  std::vector<ResultRow> rows;
  for (const ProtocolKind kind : config.protocols) {
    if (!IsProposed(kind)) {
      rows.push_back(SkippedRow(config, kind,
                                config.eps_grid.empty() ? 0.0
                                                        : config.eps_grid[0],
                                config.n, config.d,
                                "exact profiling applies to the "
                                "local-noise-free protocols"));
      continue;
    }
    for (const double eps : config.eps_grid) {
      ProtocolConfig protocol_config{eps, config.delta, config.beta,
                                     config.alpha_bits};
      try {
        const ResolvedProtocol resolved = ResolveProtocol(kind, protocol_config);
        const BinaryInputMechanism mechanism{resolved.dist.get(),
                                             resolved.beta};
        const double delta_hat = ExactDpProfile(mechanism, eps / 2.0);
        ResultRow mech_row = BaseRow(config, kind, eps, config.n, config.d);
        mech_row.beta = resolved.beta;
        mech_row.metric = "delta_hat_mechanism";
        mech_row.value = delta_hat;
        rows.push_back(mech_row);

        ResultRow protocol_row = mech_row;
        protocol_row.metric = "delta_hat_protocol";
        protocol_row.value = 2.0 * delta_hat;
        rows.push_back(protocol_row);
      } catch (const std::domain_error& error) {
        rows.push_back(
            SkippedRow(config, kind, eps, config.n, config.d, error.what()));
      }
    }
  }
  return rows;
}

}  // namespace augshuffle
