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

// Codeword discrimination: codebooks, the average-success cost, and
// optimizers over layered circuits and over the full unitary group.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "jdr/core.hpp"
#include "jdr/density_matrix.hpp"
#include "jdr/jc.hpp"
#include "jdr/qsim.hpp"

namespace jdr {

enum class CodebookKind { parity, random, simplex };

CodebookKind parse_codebook_kind(const std::string& name);
std::string to_string(CodebookKind kind);

struct Codebook {
  int n = 0;
  int M = 0;
  std::vector<std::string> codewords;
  std::vector<std::string> output_map;  // codeword index -> measured bitstring
  std::vector<int> measured_qubits;

  int measured_bits() const { return static_cast<int>(measured_qubits.size()); }
  /// Outcome index of codeword i in measurement_distribution ordering.
  Eigen::Index outcome_index(int i) const;
  void validate() const;
};

/// parity: all even-weight strings (requires M = 2^(n-1)).
/// random: M distinct uniform strings drawn from `seed`.
/// simplex: the [n, log2 M] code whose generator columns cycle through the
///   nonzero vectors, unit vectors first (requires M a power of two).
Codebook make_codebook(int n, int M, CodebookKind kind, std::uint64_t seed = 0);

/// One state per codeword, built from the transduced BPSK pair.
std::vector<DensityMatrix> codeword_states(const Codebook& book, const TransducedPair& pair,
                                           int max_qubits = kDefaultMaxQubits);

/// Average probability of decoding each codeword correctly.
double cost(const Circuit& circuit, const std::vector<DensityMatrix>& states, const Codebook& book,
            const NoiseModel& noise = {});
/// Same objective for an arbitrary unitary; only the readout part of `noise` applies.
double cost(const MatrixXc& unitary, const std::vector<DensityMatrix>& states, const Codebook& book,
            const NoiseModel& noise = {});

/// Analytic gradient of the noise-free cost with respect to every angle.
VectorXd cost_gradient(const Circuit& circuit, const std::vector<DensityMatrix>& states,
                       const Codebook& book);

/// Cost and gradient in one pass.
double cost_and_gradient(const Circuit& circuit, const std::vector<DensityMatrix>& states,
                         const Codebook& book, VectorXd& gradient);

struct TrainOptions {
  int restarts = 16;
  int max_iters = 2000;
  double tol = 1e-9;
  std::uint64_t seed = 1;
  double learning_rate = 0.05;
  double min_learning_rate = 1e-7;
  int patience = 20;
  /// Replaces the random start of restart 0 (angles for train, a unitary
  /// for optimize_unitary).
  std::optional<VectorXd> initial_angles;
  std::optional<MatrixXc> initial_unitary;
};

struct TrainResult {
  bool is_unitary = false;
  VectorXd angles;
  MatrixXc unitary;
  double J = 0.0;
  double error = 1.0;
  int restarts_used = 0;
  int iterations = 0;  // summed over restarts
  bool converged = false;
};

/// Multi-restart adaptive-moment gradient ascent over circuit angles.
TrainResult train(const std::vector<DensityMatrix>& states, const Codebook& book,
                  const CircuitLayout& layout, const TrainOptions& opts = {});

/// Ascent over the unitary group: U <- polar(G + eps U) with G the Euclidean
/// gradient. Every step is accepted only if it does not decrease J.
TrainResult optimize_unitary(const std::vector<DensityMatrix>& states, const Codebook& book,
                             const TrainOptions& opts = {});

/// Unitary factor of the polar decomposition.
MatrixXc polar_unitary(const MatrixXc& a);

/// Haar-random unitary.
MatrixXc random_unitary(Eigen::Index dim, std::uint64_t seed);

struct DecodeSpec {
  Complex beta{0.0, 0.0};
  TransductionChannel channel;
  JcConfig jc;
  Codebook book;
  std::optional<CircuitLayout> layout;  // empty: optimize a full unitary
  NoiseModel noise;                     // applied only at evaluation
  TrainOptions train;
};

struct DecodeResult {
  double error = 1.0;
  double J = 0.0;
  TransducedPair pair;
  TrainResult trained;
};

/// Transduce, build codeword states, train noise-free, evaluate under noise.
DecodeResult decode_error(const DecodeSpec& spec);

}  // namespace jdr
