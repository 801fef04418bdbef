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

#include "jdr/fock.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <unsupported/Eigen/MatrixFunctions>

namespace jdr {

namespace {

constexpr int kMinDim = 16;
constexpr int kMaxDim = 4096;

// Upper tail P(N >= dim) of a Poisson distribution with the given mean.
double poisson_tail(double mean, int dim) {
  if (mean == 0.0) return 0.0;
  double term = std::exp(-mean);
  double head = 0.0;
  for (int n = 0; n < dim; ++n) {
    head += term;
    term *= mean / (n + 1);
  }
  return std::max(0.0, 1.0 - head);
}

MatrixXc displaced_thermal_uncropped(double nbar, Complex alpha0, int work) {
  VectorXc pops(work);
  const double ratio = nbar / (nbar + 1.0);
  double p = 1.0 / (nbar + 1.0);
  for (int n = 0; n < work; ++n) {
    pops(n) = p;
    p *= ratio;
  }
  if (alpha0 == Complex{0.0, 0.0}) return pops.asDiagonal();
  const MatrixXc D = displacement_operator(alpha0, work, 1.0);
  return D * pops.asDiagonal() * D.adjoint();
}

// Population plus energy discarded by keeping levels below dim.
double discarded_weight(const MatrixXc& rho, int dim, double exact_energy) {
  double mass = 0.0, energy = 0.0;
  for (int n = 0; n < dim; ++n) {
    const double p = rho(n, n).real();
    mass += p;
    energy += n * p;
  }
  return std::max(0.0, 1.0 - mass) + std::max(0.0, exact_energy - energy);
}

}  // namespace

MatrixXc annihilation_operator(int dim) {
  if (dim < 1) throw ParameterError("annihilation_operator: dim must be positive");
  MatrixXc b = MatrixXc::Zero(dim, dim);
  for (int n = 1; n < dim; ++n) b(n - 1, n) = std::sqrt(static_cast<double>(n));
  return b;
}

MatrixXc displacement_operator(Complex alpha, int dim, double leakage_tol) {
  if (dim < 2) throw ParameterError("displacement_operator: dim must be at least 2");
  if (alpha == Complex{0.0, 0.0}) return MatrixXc::Identity(dim, dim);
  if (poisson_tail(std::norm(alpha), dim) > leakage_tol) {
    std::ostringstream os;
    os << "displacement_operator: dim " << dim << " too small for |alpha| = " << std::abs(alpha);
    throw TruncationError(os.str());
  }
  const MatrixXc b = annihilation_operator(dim);
  const MatrixXc generator = alpha * b.adjoint() - std::conj(alpha) * b;
  return generator.exp();
}

DensityMatrix fock_state(int n, int dim) {
  if (n < 0 || n >= dim) throw ParameterError("fock_state: level outside truncated space");
  VectorXc psi = VectorXc::Zero(dim);
  psi(n) = 1.0;
  return DensityMatrix::pure(psi);
}

DensityMatrix displaced_thermal(double nbar, Complex alpha0, const FockTruncation& trunc) {
  if (!(nbar >= 0.0) || !std::isfinite(nbar))
    throw ParameterError("displaced_thermal: nbar must be non-negative");
  if (!(trunc.leakage_tol > 0.0)) throw ParameterError("displaced_thermal: leakage_tol must be positive");
  if (trunc.dim != 0 && trunc.dim < 2) throw ParameterError("displaced_thermal: dim must be at least 2");

  const double energy = std::norm(alpha0) + nbar;
  int work = std::max(64, 2 * trunc.dim);
  work = std::max(work, static_cast<int>(2.0 * (energy + 10.0 * std::sqrt(energy + 1.0) +
                                                20.0 * (nbar + 1.0))));

  for (;;) {
    if (work > kMaxDim) throw TruncationError("displaced_thermal: state too large to truncate");
    const MatrixXc full = displaced_thermal_uncropped(nbar, alpha0, work);
    int dim = trunc.dim;
    if (dim == 0) {
      dim = kMinDim;
      while (2 * dim <= work && discarded_weight(full, dim, energy) >= trunc.leakage_tol) ++dim;
    }
    if (2 * dim > work) {
      work *= 2;
      continue;
    }
    const double discarded = discarded_weight(full, dim, energy);
    if (discarded >= trunc.leakage_tol) {
      std::ostringstream os;
      os << "displaced_thermal: dimension " << dim << " discards weight " << discarded
         << " > " << trunc.leakage_tol << "; increase the truncation";
      throw TruncationError(os.str());
    }
    MatrixXc rho = full.topLeftCorner(dim, dim);
    rho = 0.5 * (rho + rho.adjoint()).eval();
    rho /= rho.trace().real();
    return DensityMatrix::from_matrix(std::move(rho));
  }
}

double mean_photon_number(const DensityMatrix& rho) {
  double n = 0.0;
  for (Eigen::Index k = 0; k < rho.dim(); ++k) n += static_cast<double>(k) * rho(k, k).real();
  return n;
}

double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma) {
  if (rho.dim() != sigma.dim()) throw DimensionError("trace_distance: dimension mismatch");
  const MatrixXc diff = rho.matrix() - sigma.matrix();
  Eigen::SelfAdjointEigenSolver<MatrixXc> es(diff, Eigen::EigenvaluesOnly);
  return std::clamp(0.5 * es.eigenvalues().cwiseAbs().sum(), 0.0, 1.0);
}

}  // namespace jdr
