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

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <sstream>
#include <utility>

#include <Eigen/Dense>

#include "jdr/core.hpp"

namespace jdr {

template <typename Real>
struct DensityTolerance {
  static constexpr Real eps = std::numeric_limits<Real>::epsilon();
  static constexpr Real hermitian = std::max(Real(1e-12), Real(100) * eps);
  static constexpr Real trace = std::max(Real(1e-10), Real(1000) * eps);
  static constexpr Real min_eigenvalue = std::max(Real(1e-10), Real(1000) * eps);
};

/// Dense Hermitian, positive semidefinite, unit-trace matrix.
///
/// Invariants are checked whenever an instance is built from an arbitrary
/// matrix. The `tensor` path skips the eigenvalue check because a Kronecker
/// product of valid states is positive semidefinite by construction.
template <typename Real>
class BasicDensityMatrix {
 public:
  using Scalar = std::complex<Real>;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  BasicDensityMatrix() : data_(Matrix::Identity(1, 1)) {}

  static BasicDensityMatrix from_matrix(Matrix m, Real expected_trace = Real(1)) {
    BasicDensityMatrix rho(std::move(m));
    rho.check_hermitian_and_trace(expected_trace);
    rho.check_positive();
    return rho;
  }

  /// Projector onto a normalized pure state.
  template <typename Derived>
  static BasicDensityMatrix pure(const Eigen::MatrixBase<Derived>& psi) {
    const Real norm = psi.norm();
    if (!(norm > Real(0))) throw ParameterError("pure state has zero norm");
    const auto v = (psi / norm).eval();
    return BasicDensityMatrix(Matrix(v * v.adjoint()));
  }

  static BasicDensityMatrix maximally_mixed(Eigen::Index dim) {
    return BasicDensityMatrix(Matrix(Matrix::Identity(dim, dim) / Real(dim)));
  }

  /// Kronecker product `a ⊗ b`; `a` occupies the most significant index.
  static BasicDensityMatrix tensor(const BasicDensityMatrix& a, const BasicDensityMatrix& b) {
    const Eigen::Index da = a.dim(), db = b.dim();
    Matrix out(da * db, da * db);
    for (Eigen::Index i = 0; i < da; ++i)
      for (Eigen::Index j = 0; j < da; ++j)
        out.block(i * db, j * db, db, db) = a.data_(i, j) * b.data_;
    BasicDensityMatrix rho(std::move(out));
    rho.check_hermitian_and_trace(Real(1));
    return rho;
  }

  Eigen::Index dim() const noexcept { return data_.rows(); }
  const Matrix& matrix() const noexcept { return data_; }
  Scalar operator()(Eigen::Index i, Eigen::Index j) const { return data_(i, j); }

  Real trace() const { return data_.trace().real(); }
  Real purity() const { return (data_ * data_).trace().real(); }

  Eigen::Matrix<Real, Eigen::Dynamic, 1> eigenvalues() const {
    Eigen::SelfAdjointEigenSolver<Matrix> es(data_, Eigen::EigenvaluesOnly);
    return es.eigenvalues();
  }

 private:
  explicit BasicDensityMatrix(Matrix m) : data_(std::move(m)) {}

  void check_hermitian_and_trace(Real expected_trace) const {
    using Tol = DensityTolerance<Real>;
    if (data_.rows() != data_.cols() || data_.rows() == 0)
      throw DimensionError("density matrix must be square and non-empty");
    if (!data_.allFinite()) throw NumericalError("density matrix has non-finite entries");
    const Real asym = (data_ - data_.adjoint()).cwiseAbs().maxCoeff();
    if (asym > Tol::hermitian) {
      std::ostringstream os;
      os << "density matrix not Hermitian (max deviation " << asym << ")";
      throw NumericalError(os.str());
    }
    const Real tr = data_.trace().real();
    if (std::abs(tr - expected_trace) > Tol::trace) {
      std::ostringstream os;
      os << "density matrix trace " << tr << " differs from " << expected_trace;
      throw NumericalError(os.str());
    }
  }

  void check_positive() const {
    const Real lo = eigenvalues().minCoeff();
    if (lo < -DensityTolerance<Real>::min_eigenvalue) {
      std::ostringstream os;
      os << "density matrix has negative eigenvalue " << lo;
      throw NumericalError(os.str());
    }
  }

  Matrix data_;
};

using DensityMatrix = BasicDensityMatrix<double>;

}  // namespace jdr
