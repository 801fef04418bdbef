// Copyright 2026 The jdrsim Authors
//
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

// Experiment configuration, sweeps over the grid and the plain-text
// artifacts written by the command-line tool.

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "jdr/decoder.hpp"
#include "jdr/jc.hpp"
#include "jdr/physmodel.hpp"
#include "jdr/qsim.hpp"

namespace jdr {

inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kToolVersion = "0.1.0";

/// Raised for malformed or inconsistent configuration; the CLI maps it to exit 2.
struct ConfigError : Error {
  using Error::Error;
};

struct CodeSpec {
  int n = 3;
  int M = 4;
  CodebookKind kind = CodebookKind::parity;
  std::uint64_t seed = 0;
};

struct CircuitSpec {
  std::vector<int> layers{3};
  bool include_unitary = true;
};

struct GridSpec {
  double lo = 1e-3;
  double hi = 10.0;
  int count = 40;
};

struct ExperimentConfig {
  TransducerParams transducer;  // temperature is taken from `temperatures`
  std::vector<double> temperatures{1e-3};
  double compensation_loss_exponent = 0.0;
  JcConfig jc;
  double capacity_time_window = 10.0;  // units of 1/chi
  std::vector<double> rmpn{0.2};
  GridSpec capacity_grid;
  CodeSpec code;
  CircuitSpec circuit;
  TrainOptions optimizer;  // seed is overwritten per row
  NoiseModel noise;
  int jobs = 1;
  std::uint64_t seed = 1;

  void validate() const;
};

/// Defaults as a JSON tree; every accepted key appears here.
nlohmann::json default_config_json();
nlohmann::json to_json(const ExperimentConfig& cfg);
ExperimentConfig config_from_json(const nlohmann::json& j);

/// Merges `overlay` onto `base`, rejecting keys absent from `base`.
void merge_config(nlohmann::json& base, const nlohmann::json& overlay, const std::string& where = "");

/// Applies one KEY=VALUE override with a dotted key. VALUE is parsed as
/// JSON when possible and taken as a string otherwise.
void apply_override(nlohmann::json& tree, const std::string& assignment);

/// Defaults, then the optional file, then the overrides in order.
ExperimentConfig load_config(const std::optional<std::string>& path,
                             const std::vector<std::string>& overrides);

/// 64-bit FNV-1a of the canonical resolved configuration, as 16 hex digits.
std::string config_hash(const ExperimentConfig& cfg);

TransductionChannel channel_for(const ExperimentConfig& cfg, double temperature);
JcConfig capacity_jc(const ExperimentConfig& cfg);

// ---------------------------------------------------------------------------
// Tables

/// Comma-separated table with a versioned comment header.
struct Table {
  std::string command;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  void write(std::ostream& os) const;
};

std::string format_number(double x);

struct ResultRow {
  std::size_t index = 0;
  double rmpn = 0.0;
  double temperature = 0.0;
  int n = 0;
  int M = 0;
  std::string L;  // layer count, or "U" for the optimized unitary
  double p_err = 1.0;
  double p_n_helstrom = 0.0;
  double tau = 0.0;
  double t_star = 0.0;
  double J = 0.0;
  std::uint64_t seed = 0;
  double wall_time = 0.0;  // s; reported in the manifest only
  std::string status = "ok";
};

/// Error probability of pulse-wise detection for an n-bit codeword
/// (the single-pulse limit when n = 1).
double pulsewise_limit(double rmpn, int n);

/// Runs `count` independent tasks on `jobs` threads.
void parallel_for(std::size_t count, int jobs, const std::function<void(std::size_t)>& task);

/// One row per (temperature, rmpn, circuit) point, sorted by grid index.
std::vector<ResultRow> run_sweep(const ExperimentConfig& cfg);
Table sweep_table(const std::vector<ResultRow>& rows);

Table channel_table(const ExperimentConfig& cfg);
Table qubits_table(const ExperimentConfig& cfg);
Table capacity_table(const ExperimentConfig& cfg);
/// Trains noise-free and reports the error with and without the configured noise.
Table noise_table(const ExperimentConfig& cfg);

/// Run manifest: resolved configuration, seeds, versions and timings.
nlohmann::json make_manifest(const ExperimentConfig& cfg, const std::string& command,
                             const nlohmann::json& extra = {});

// ---------------------------------------------------------------------------
// Trained models

struct ModelArtifact {
  std::optional<CircuitLayout> layout;  // empty for a full unitary
  VectorXd angles;
  MatrixXc unitary;
  int n = 0;
  double J = 0.0;
  std::uint64_t seed = 0;
  std::string config_hash;
};

/// Trains on the first temperature and rmpn of the configuration, using the
/// first layer count, or a full unitary when no layer counts are given.
ModelArtifact train_model(const ExperimentConfig& cfg);

nlohmann::json to_json(const ModelArtifact& model);
ModelArtifact model_from_json(const nlohmann::json& j);

}  // namespace jdr
