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

#include "jdr/qsim.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace jdr {

Matrix2c euler_zyz_derivative(double phi, double theta, double lambda, int k) {
  const Complex mi2{0.0, -0.5};
  Matrix2c z;
  z << 1.0, 0.0, 0.0, -1.0;
  switch (k) {
    case 0:
      return mi2 * z * euler_zyz(phi, theta, lambda);
    case 2:
      return euler_zyz(phi, theta, lambda) * (mi2 * z);
    case 1: {
      const double c = std::cos(theta / 2), s = std::sin(theta / 2);
      Matrix2c dy;
      dy << -0.5 * s, -0.5 * c, 0.5 * c, -0.5 * s;
      return euler_zyz(phi, 0.0, 0.0) * dy * euler_zyz(0.0, 0.0, lambda);
    }
    default:
      throw ParameterError("euler_zyz_derivative: angle index must be 0, 1 or 2");
  }
}

void validate(const NoiseModel& noise) {
  for (double p : {noise.p1, noise.p2, noise.pm})
    if (!(p >= 0.0 && p <= 1.0)) throw ParameterError("noise probabilities must lie in [0, 1]");
}

CircuitLayout CircuitLayout::from_edges(int n, int layers, std::vector<std::pair<int, int>> edges) {
  CircuitLayout out;
  out.n = n;
  out.layers = layers;
  out.edges = std::move(edges);
  std::vector<std::set<int>> busy;
  for (const auto& e : out.edges) {
    std::size_t step = 0;
    while (step < busy.size() && (busy[step].count(e.first) || busy[step].count(e.second))) ++step;
    if (step == busy.size()) {
      busy.emplace_back();
      out.schedule.emplace_back();
    }
    busy[step].insert(e.first);
    busy[step].insert(e.second);
    out.schedule[step].push_back(e);
  }
  out.validate();
  return out;
}

CircuitLayout CircuitLayout::ansatz(int n, int layers) {
  if (n < 1) throw ParameterError("ansatz: need at least one qubit");
  std::vector<std::pair<int, int>> edges;
  if (n <= 3) {
    for (int q = 0; q + 1 < n; ++q) edges.emplace_back(q, q + 1);
  } else {
    for (int q = 0; q < n; ++q) edges.emplace_back(q, (q + 1) % n);
  }
  return from_edges(n, layers, std::move(edges));
}

int CircuitLayout::cnot_count() const {
  std::size_t per_layer = 0;
  for (const auto& step : schedule) per_layer += step.size();
  return static_cast<int>(per_layer) * layers;
}

void CircuitLayout::validate() const {
  if (n < 1 || n > 30) throw ParameterError("CircuitLayout: qubit count out of range");
  if (layers < 0) throw ParameterError("CircuitLayout: negative layer count");
  for (const auto& step : schedule) {
    std::set<int> used;
    for (const auto& [c, t] : step) {
      if (c < 0 || c >= n || t < 0 || t >= n || c == t)
        throw ParameterError("CircuitLayout: CNOT qubit index out of range");
      if (!used.insert(c).second || !used.insert(t).second)
        throw ParameterError("CircuitLayout: schedule step reuses a qubit");
    }
  }
}

std::vector<GateOp> gate_sequence(const CircuitLayout& layout) {
  std::vector<GateOp> ops;
  int offset = 0;
  auto column = [&] {
    for (int q = 0; q < layout.n; ++q) {
      ops.push_back({GateOp::Kind::single, q, q, offset});
      offset += 3;
    }
  };
  for (int l = 0; l < layout.layers; ++l) {
    for (const auto& step : layout.schedule) {
      column();
      for (const auto& [c, t] : step) ops.push_back({GateOp::Kind::cnot, c, t, 0});
    }
  }
  column();
  return ops;
}

Circuit Circuit::identity(const CircuitLayout& layout) {
  return {layout, VectorXd::Zero(layout.parameter_count())};
}

namespace {

void check_circuit(const Circuit& circuit, Eigen::Index dim) {
  circuit.layout.validate();
  if (circuit.angles.size() != circuit.layout.parameter_count())
    throw DimensionError("circuit angle vector does not match the layout");
  if (dim != (Eigen::Index{1} << circuit.layout.n))
    throw DimensionError("state dimension does not match the circuit qubit count");
}

}  // namespace

void run_circuit_in_place(MatrixXc& rho, const Circuit& circuit, const NoiseModel& noise) {
  check_circuit(circuit, rho.rows());
  validate(noise);
  const int n = circuit.layout.n;
  const auto& a = circuit.angles;
  for (const auto& op : gate_sequence(circuit.layout)) {
    if (op.kind == GateOp::Kind::single) {
      const int k = op.param_offset;
      conjugate_1q(rho, euler_zyz(a[k], a[k + 1], a[k + 2]), op.q0, n);
      depolarize(rho, {op.q0}, n, noise.p1);
    } else {
      conjugate_cnot(rho, op.q0, op.q1, n);
      depolarize(rho, {op.q0, op.q1}, n, noise.p2);
    }
  }
}

DensityMatrix run_circuit(const DensityMatrix& rho, const Circuit& circuit, const NoiseModel& noise) {
  MatrixXc out = rho.matrix();
  run_circuit_in_place(out, circuit, noise);
  out = 0.5 * (out + out.adjoint()).eval();
  return DensityMatrix::from_matrix(std::move(out), rho.trace());
}

MatrixXc circuit_unitary(const Circuit& circuit) {
  const Eigen::Index dim = Eigen::Index{1} << circuit.layout.n;
  check_circuit(circuit, dim);
  MatrixXc u = MatrixXc::Identity(dim, dim);
  const auto& a = circuit.angles;
  for (const auto& op : gate_sequence(circuit.layout)) {
    if (op.kind == GateOp::Kind::single) {
      const int k = op.param_offset;
      apply_1q_left(u, euler_zyz(a[k], a[k + 1], a[k + 2]), op.q0, circuit.layout.n);
    } else {
      apply_cnot_left(u, op.q0, op.q1, circuit.layout.n);
    }
  }
  return u;
}

int qubit_count(Eigen::Index dim) {
  int n = 0;
  while ((Eigen::Index{1} << n) < dim) ++n;
  if ((Eigen::Index{1} << n) != dim) throw DimensionError("dimension is not a power of two");
  return n;
}

VectorXd measurement_distribution(const MatrixXc& rho, const std::vector<int>& measured, double pm) {
  const int n = qubit_count(rho.rows());
  if (!(pm >= 0.0 && pm <= 1.0)) throw ParameterError("readout flip probability must lie in [0, 1]");
  std::set<int> seen;
  for (int q : measured) {
    if (q < 0 || q >= n) throw ParameterError("measured qubit index out of range");
    if (!seen.insert(q).second) throw ParameterError("measured qubit indices must be distinct");
  }
  const auto m = static_cast<int>(measured.size());
  VectorXd probs = VectorXd::Zero(Eigen::Index{1} << m);
  for (Eigen::Index i = 0; i < rho.rows(); ++i) {
    Eigen::Index outcome = 0;
    for (int k = 0; k < m; ++k)
      if (static_cast<std::uint64_t>(i) & qubit_mask(measured[static_cast<std::size_t>(k)], n))
        outcome |= Eigen::Index{1} << (m - 1 - k);
    probs(outcome) += rho(i, i).real();
  }
  if (pm > 0.0) {
    for (int k = 0; k < m; ++k) {
      const Eigen::Index bit = Eigen::Index{1} << (m - 1 - k);
      VectorXd flipped(probs.size());
      for (Eigen::Index o = 0; o < probs.size(); ++o)
        flipped(o) = (1.0 - pm) * probs(o) + pm * probs(o ^ bit);
      probs = flipped;
    }
  }
  return probs;
}

VectorXd measurement_distribution(const DensityMatrix& rho, const std::vector<int>& measured,
                                  double pm) {
  return measurement_distribution(rho.matrix(), measured, pm);
}

std::vector<EnsembleMember> eigen_ensemble(const DensityMatrix& rho) {
  Eigen::SelfAdjointEigenSolver<MatrixXc> es(rho.matrix());
  std::vector<EnsembleMember> out;
  for (Eigen::Index k = es.eigenvalues().size() - 1; k >= 0; --k) {
    const double w = es.eigenvalues()(k);
    if (w < 1e-12) continue;
    out.push_back({w, es.eigenvectors().col(k)});
  }
  return out;
}

DensityMatrix build_codeword_state(const std::string& bits, const TransducedPair& pair, int max_qubits) {
  if (bits.empty()) throw ParameterError("codeword must contain at least one bit");
  if (static_cast<int>(bits.size()) > max_qubits) {
    std::ostringstream os;
    os << "codeword length " << bits.size() << " exceeds the configured maximum of " << max_qubits;
    throw SizeError(os.str());
  }
  auto pick = [&](char b) -> const DensityMatrix& {
    if (b == '0') return pair.rho_plus;
    if (b == '1') return pair.rho_minus;
    throw ParameterError("codeword bits must be '0' or '1'");
  };
  DensityMatrix state = pick(bits[0]);
  for (std::size_t k = 1; k < bits.size(); ++k) state = DensityMatrix::tensor(state, pick(bits[k]));
  return state;
}

}  // namespace jdr
