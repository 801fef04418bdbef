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

// Microwave-mode to qubit transfer through resonant Jaynes-Cummings exchange.
// Qubit basis ordering is (|g>, |e>) = (|0>, |1>).

#include <utility>

#include "jdr/core.hpp"
#include "jdr/density_matrix.hpp"
#include "jdr/fock.hpp"
#include "jdr/physmodel.hpp"

namespace jdr {

struct JcConfig {
  double chi = kTwoPi * 10e6;  // rad/s
  double time_window = 5.0;    // in units of 1/chi
  int grid_points = 2001;
  bool refine = true;
  double leakage_tol = 1e-8;

  /// Window used for capacity curves.
  static JcConfig capacity() {
    JcConfig c;
    c.time_window = 10.0;
    return c;
  }
};

void validate(const JcConfig& cfg);

struct TransducedPair {
  DensityMatrix rho_plus;
  DensityMatrix rho_minus;
  double t_star = 0.0;  // s
  double tau = 0.0;     // trace distance at t_star
};

struct BlochVector {
  double x = 0.0, y = 0.0, z = 0.0;
  double norm() const;
};

BlochVector bloch_vector(const DensityMatrix& qubit);

/// Joint field-qubit state after time t starting from field ⊗ |g><g|.
/// Index 2n + q labels |n> ⊗ |q>.
MatrixXc jc_joint_evolve(const DensityMatrix& field, double t, double chi);

/// Reduced qubit state after time t starting from field ⊗ |g><g|.
DensityMatrix jc_evolve(const DensityMatrix& field, double t, double chi);

/// Microwave-mode states rho(nbar_tr, ±sqrt(eta_tr) beta) on a common truncation.
std::pair<DensityMatrix, DensityMatrix> bpsk_fields(Complex beta, const TransductionChannel& ch,
                                                    double leakage_tol = 1e-8);

/// Trace distance of the two qubits produced from the given fields at time t.
double qubit_pair_distance(const DensityMatrix& field_plus, const DensityMatrix& field_minus,
                           double t, double chi);

/// Transduces both BPSK symbols and selects the interaction time that
/// maximizes their trace distance.
TransducedPair transduce_bpsk(Complex beta, const TransductionChannel& ch, const JcConfig& cfg);

/// Piecewise fit of the optimal interaction time in the short-time window.
double optimal_time_reference(double mpn_coherent, double nbar_tr, double chi);

}  // namespace jdr
