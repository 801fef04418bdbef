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

#include "jdr/limits.hpp"

#include <cmath>
#include <Eigen/Eigenvalues>

namespace jdr {

double helstrom_bpsk(double rmpn) {
  if (!(rmpn >= 0.0)) throw ParameterError("helstrom_bpsk: rmpn must be >= 0");
  // 1 - sqrt(1 - e^{-4r}) written to keep precision at both ends.
  const double overlap = std::exp(-4.0 * rmpn);
  return 0.5 * overlap / (1.0 + std::sqrt(-std::expm1(-4.0 * rmpn)));
}

double n_helstrom(double rmpn, int n) {
  if (n < 2) throw ParameterError("n_helstrom: n must be >= 2");
  return -std::expm1((n - 1) * std::log1p(-helstrom_bpsk(rmpn)));
}

double binary_entropy(double p) {
  if (p <= 0.0 || p >= 1.0) return 0.0;
  return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

double c1_capacity(double rmpn) { return 1.0 - binary_entropy(helstrom_bpsk(rmpn)); }

double von_neumann_entropy(const DensityMatrix& rho) {
  const VectorXd ev = rho.eigenvalues();
  double s = 0.0;
  for (double l : ev) {
    if (l < -1e-12) throw NumericalError("von_neumann_entropy: negative eigenvalue");
    if (l > 0.0) s -= l * std::log2(l);
  }
  return s;
}

void Ensemble::validate() const {
  if (members.empty()) throw ParameterError("ensemble is empty");
  double total = 0.0;
  for (const auto& [p, rho] : members) {
    if (!(p >= 0.0)) throw ParameterError("ensemble prior must be >= 0");
    if (rho.dim() != members.front().second.dim()) throw DimensionError("ensemble states differ in dimension");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-12) throw ParameterError("ensemble priors must sum to 1");
}

DensityMatrix Ensemble::average() const {
  validate();
  MatrixXc m = MatrixXc::Zero(members.front().second.dim(), members.front().second.dim());
  for (const auto& [p, rho] : members) m += p * rho.matrix();
  return DensityMatrix::from_matrix(m);
}

double holevo(const Ensemble& ensemble) {
  double chi = von_neumann_entropy(ensemble.average());
  for (const auto& [p, rho] : ensemble.members)
    if (p > 0.0) chi -= p * von_neumann_entropy(rho);
  return std::max(chi, 0.0);
}

double optical_bpsk_holevo(double rmpn) {
  if (!(rmpn >= 0.0)) throw ParameterError("optical_bpsk_holevo: rmpn must be >= 0");
  return binary_entropy(-0.5 * std::expm1(-2.0 * rmpn));
}

double jdr_capacity(double rmpn, const TransductionChannel& channel, const JcConfig& cfg) {
  if (!(rmpn >= 0.0)) throw ParameterError("jdr_capacity: rmpn must be >= 0");
  const auto pair = transduce_bpsk(Complex(std::sqrt(rmpn), 0.0), channel, cfg);
  Ensemble e;
  e.members = {{0.5, pair.rho_plus}, {0.5, pair.rho_minus}};
  return holevo(e);
}

std::vector<double> log_grid(double lo, double hi, int count) {
  if (!(lo > 0.0) || !(hi >= lo) || count < 1) throw ParameterError("log_grid: need 0 < lo <= hi, count >= 1");
  std::vector<double> g(static_cast<std::size_t>(count));
  if (count == 1) {
    g[0] = lo;
    return g;
  }
  const double a = std::log(lo), b = std::log(hi);
  for (int k = 0; k < count; ++k) g[static_cast<std::size_t>(k)] = std::exp(a + (b - a) * k / (count - 1));
  g.back() = hi;
  return g;
}

}  // namespace jdr
