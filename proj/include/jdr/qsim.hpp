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

// Dense density-matrix simulation of layered variational circuits.
//
// Qubit 0 is the most significant bit of a computational-basis index, so the
// bitstring "b0 b1 ... b(n-1)" maps to index sum_q b_q 2^(n-1-q).

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "jdr/core.hpp"
#include "jdr/density_matrix.hpp"
#include "jdr/jc.hpp"

namespace jdr {

inline constexpr int kDefaultMaxQubits = 12;

// ---------------------------------------------------------------------------
// Gates

/// Rz(phi) Ry(theta) Rz(lambda), with Rz(a) = diag(e^{-ia/2}, e^{ia/2}).
template <typename Real>
Eigen::Matrix<std::complex<Real>, 2, 2> euler_zyz(Real phi, Real theta, Real lambda) {
  using C = std::complex<Real>;
  const Real c = std::cos(theta / 2), s = std::sin(theta / 2);
  const C ep = std::polar(Real(1), -(phi + lambda) / 2);
  const C em = std::polar(Real(1), -(phi - lambda) / 2);
  Eigen::Matrix<C, 2, 2> u;
  u << ep * c, -em * s, std::conj(em) * s, std::conj(ep) * c;
  return u;
}

/// Derivative of euler_zyz with respect to angle k (0: phi, 1: theta, 2: lambda).
Matrix2c euler_zyz_derivative(double phi, double theta, double lambda, int k);

inline constexpr std::uint64_t qubit_mask(int q, int n) { return std::uint64_t{1} << (n - 1 - q); }

// ---------------------------------------------------------------------------
// Kernels. `m` is any 2^n-row matrix; left application acts on its rows.

template <typename Derived>
void apply_1q_left(Eigen::MatrixBase<Derived>& m,
                   const Eigen::Matrix<typename Derived::Scalar, 2, 2>& g, int q, int n) {
  const std::uint64_t mask = qubit_mask(q, n);
  const Eigen::Index dim = m.rows();
  for (Eigen::Index i0 = 0; i0 < dim; ++i0) {
    if (static_cast<std::uint64_t>(i0) & mask) continue;
    const Eigen::Index i1 = i0 | static_cast<Eigen::Index>(mask);
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      const auto a = m(i0, c), b = m(i1, c);
      m(i0, c) = g(0, 0) * a + g(0, 1) * b;
      m(i1, c) = g(1, 0) * a + g(1, 1) * b;
    }
  }
}

/// m <- m * (g on qubit q)^dagger.
template <typename Derived>
void apply_1q_right_adjoint(Eigen::MatrixBase<Derived>& m,
                            const Eigen::Matrix<typename Derived::Scalar, 2, 2>& g, int q, int n) {
  const std::uint64_t mask = qubit_mask(q, n);
  const Eigen::Index dim = m.cols();
  const auto g00 = std::conj(g(0, 0)), g01 = std::conj(g(0, 1));
  const auto g10 = std::conj(g(1, 0)), g11 = std::conj(g(1, 1));
  for (Eigen::Index j0 = 0; j0 < dim; ++j0) {
    if (static_cast<std::uint64_t>(j0) & mask) continue;
    const Eigen::Index j1 = j0 | static_cast<Eigen::Index>(mask);
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      const auto a = m(r, j0), b = m(r, j1);
      m(r, j0) = a * g00 + b * g01;
      m(r, j1) = a * g10 + b * g11;
    }
  }
}

template <typename Derived>
void apply_cnot_left(Eigen::MatrixBase<Derived>& m, int control, int target, int n) {
  const std::uint64_t cm = qubit_mask(control, n), tm = qubit_mask(target, n);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    const auto u = static_cast<std::uint64_t>(i);
    if ((u & cm) && !(u & tm)) m.row(i).swap(m.row(static_cast<Eigen::Index>(u | tm)));
  }
}

template <typename Derived>
void apply_cnot_right(Eigen::MatrixBase<Derived>& m, int control, int target, int n) {
  const std::uint64_t cm = qubit_mask(control, n), tm = qubit_mask(target, n);
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    const auto u = static_cast<std::uint64_t>(j);
    if ((u & cm) && !(u & tm)) m.col(j).swap(m.col(static_cast<Eigen::Index>(u | tm)));
  }
}

/// rho <- g rho g^dagger with g acting on qubit q.
template <typename Derived>
void conjugate_1q(Eigen::MatrixBase<Derived>& rho,
                  const Eigen::Matrix<typename Derived::Scalar, 2, 2>& g, int q, int n) {
  apply_1q_left(rho, g, q, n);
  apply_1q_right_adjoint(rho, g, q, n);
}

template <typename Derived>
void conjugate_cnot(Eigen::MatrixBase<Derived>& rho, int control, int target, int n) {
  apply_cnot_left(rho, control, target, n);
  apply_cnot_right(rho, control, target, n);
}

/// rho <- (1-p) rho + p Tr_S(rho) ⊗ I_S / 2^|S| for the qubit set S.
template <typename Derived>
void depolarize(Eigen::MatrixBase<Derived>& rho, const std::vector<int>& qubits, int n,
                typename Derived::RealScalar p) {
  using Scalar = typename Derived::Scalar;
  if (p == 0) return;
  std::uint64_t set = 0;
  for (int q : qubits) set |= qubit_mask(q, n);
  const auto k = static_cast<int>(qubits.size());
  const auto dim = static_cast<std::uint64_t>(rho.rows());
  const auto keep = typename Derived::RealScalar(1) - p;
  const auto mix = p / static_cast<typename Derived::RealScalar>(std::uint64_t{1} << k);
  for (std::uint64_t i0 = 0; i0 < dim; ++i0) {
    if (i0 & set) continue;
    for (std::uint64_t j0 = 0; j0 < dim; ++j0) {
      if (j0 & set) continue;
      Scalar partial(0);
      std::uint64_t s = 0;
      do {
        partial += rho(static_cast<Eigen::Index>(i0 | s), static_cast<Eigen::Index>(j0 | s));
        s = (s - set) & set;
      } while (s != 0);
      // Scale the whole S-block, then add the replaced reduced state.
      std::uint64_t a = 0;
      do {
        std::uint64_t b = 0;
        do {
          rho(static_cast<Eigen::Index>(i0 | a), static_cast<Eigen::Index>(j0 | b)) *= keep;
          b = (b - set) & set;
        } while (b != 0);
        rho(static_cast<Eigen::Index>(i0 | a), static_cast<Eigen::Index>(j0 | a)) += mix * partial;
        a = (a - set) & set;
      } while (a != 0);
    }
  }
}

// ---------------------------------------------------------------------------
// Circuits

struct NoiseModel {
  double p1 = 0.0;  // depolarizing after each single-qubit gate
  double p2 = 0.0;  // two-qubit depolarizing after each CNOT
  double pm = 0.0;  // independent readout flip per measured qubit

  bool noiseless() const { return p1 == 0.0 && p2 == 0.0 && pm == 0.0; }
};

void validate(const NoiseModel& noise);

/// Coupling graph with a parallel CNOT schedule, repeated `layers` times.
///
/// Each layer runs, for every schedule step, a column of single-qubit gates
/// followed by that step's CNOTs. A final single-qubit column closes the
/// circuit, so there are steps*layers + 1 columns of 3n angles each.
struct CircuitLayout {
  int n = 1;
  int layers = 0;
  std::vector<std::pair<int, int>> edges;  // (control, target)
  std::vector<std::vector<std::pair<int, int>>> schedule;

  /// Nearest-neighbour ansatz: open chain for n <= 3, cycle for n >= 4.
  static CircuitLayout ansatz(int n, int layers);
  /// Layout with explicit edges; the schedule is a greedy edge colouring.
  static CircuitLayout from_edges(int n, int layers, std::vector<std::pair<int, int>> edges);

  int steps_per_layer() const { return static_cast<int>(schedule.size()); }
  int columns() const { return steps_per_layer() * layers + 1; }
  int parameter_count() const { return 3 * n * columns(); }
  int cnot_count() const;

  void validate() const;
};

struct GateOp {
  enum class Kind { single, cnot };
  Kind kind = Kind::single;
  int q0 = 0;            // target of a single gate, control of a CNOT
  int q1 = 0;            // CNOT target
  int param_offset = 0;  // first of three angles for single gates
};

/// Flattened gate sequence in execution order.
std::vector<GateOp> gate_sequence(const CircuitLayout& layout);

struct Circuit {
  CircuitLayout layout;
  VectorXd angles;

  /// All-zero angles: every single-qubit gate is the identity.
  static Circuit identity(const CircuitLayout& layout);
};

/// Applies the circuit in place to a 2^n x 2^n matrix, with depolarizing
/// channels from `noise` after every gate. Readout noise is not applied here.
void run_circuit_in_place(MatrixXc& rho, const Circuit& circuit, const NoiseModel& noise);

DensityMatrix run_circuit(const DensityMatrix& rho, const Circuit& circuit, const NoiseModel& noise);

/// Full circuit unitary (noise-free).
MatrixXc circuit_unitary(const Circuit& circuit);

/// Marginal outcome probabilities over `measured` (first entry most
/// significant) with independent readout flips of probability pm.
VectorXd measurement_distribution(const MatrixXc& rho, const std::vector<int>& measured, double pm);
VectorXd measurement_distribution(const DensityMatrix& rho, const std::vector<int>& measured,
                                  double pm);

struct EnsembleMember {
  double weight = 0.0;
  VectorXc state;
};

/// Spectral decomposition with eigenvalues below 1e-12 dropped.
std::vector<EnsembleMember> eigen_ensemble(const DensityMatrix& rho);

/// Tensor product assigning rho_plus to '0' and rho_minus to '1'.
DensityMatrix build_codeword_state(const std::string& bits, const TransducedPair& pair,
                                   int max_qubits = kDefaultMaxQubits);

int qubit_count(Eigen::Index dim);

}  // namespace jdr
