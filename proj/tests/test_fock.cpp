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

#include <doctest.h>

#include <cmath>

#include "jdr/fock.hpp"

using namespace jdr;

namespace {

VectorXc coherent_by_series(Complex alpha, int dim) {
  VectorXc v(dim);
  Complex term = std::exp(-0.5 * std::norm(alpha));
  for (int n = 0; n < dim; ++n) {
    v[n] = term;
    term *= alpha / std::sqrt(double(n + 1));
  }
  return v;
}

}  // namespace

TEST_CASE("annihilation operator matrix elements") {
  const MatrixXc a = annihilation_operator(6);
  for (int n = 1; n < 6; ++n) CHECK(a(n - 1, n).real() == doctest::Approx(std::sqrt(double(n))));
  CHECK(a.cwiseAbs().sum() == doctest::Approx(1 + std::sqrt(2.) + std::sqrt(3.) + 2 + std::sqrt(5.)));
}

TEST_CASE("displacement of the vacuum is the coherent series") {
  for (Complex alpha : {Complex(0.3, 0.0), Complex(-1.2, 0.4), Complex(0.0, 2.0)}) {
    const int dim = 40;
    const VectorXc v = displacement_operator(alpha, dim).col(0);
    const VectorXc ref = coherent_by_series(alpha, dim);
    CHECK((v - ref).norm() < 1e-9);
  }
  const MatrixXc id = displacement_operator(Complex(0.0, 0.0), 8);
  CHECK((id - MatrixXc::Identity(8, 8)).norm() == 0.0);
}

TEST_CASE("displacement rejects a space too small for its amplitude") {
  CHECK_THROWS_AS(displacement_operator(Complex(3.0, 0.0), 8), TruncationError);
}

TEST_CASE("displaced thermal with zero occupation is the coherent projector") {
  const Complex alpha(0.8, -0.3);
  const auto rho = displaced_thermal(0.0, alpha);
  const VectorXc ref = coherent_by_series(alpha, int(rho.dim()));
  CHECK((rho.matrix() - ref * ref.adjoint()).norm() < 1e-7);
}

TEST_CASE("displaced thermal moments") {
  for (double nbar : {0.0, 0.01, 0.5, 1.86}) {
    for (double a : {0.0, 0.5, 1.5}) {
      const Complex alpha(a, 0.2);
      const auto rho = displaced_thermal(nbar, alpha);
      CHECK(rho.trace() == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(mean_photon_number(rho) == doctest::Approx(nbar + std::norm(alpha)).epsilon(1e-6));
      const MatrixXc b = annihilation_operator(int(rho.dim()));
      const Complex mean = (rho.matrix() * b).trace();
      CHECK(std::abs(mean - alpha) < 1e-6);
      CHECK(rho.eigenvalues().minCoeff() > -1e-10);
      CHECK(rho.dim() >= 16);
    }
  }
}

TEST_CASE("thermal state has geometric populations") {
  const double nbar = 0.7;
  const auto rho = displaced_thermal(nbar, Complex(0.0, 0.0));
  for (int n = 0; n < 10; ++n)
    CHECK(rho(n, n).real() == doctest::Approx(std::pow(nbar, n) / std::pow(1 + nbar, n + 1)).epsilon(1e-9));
  CHECK(rho.purity() == doctest::Approx(1.0 / (2 * nbar + 1)).epsilon(1e-7));
}

TEST_CASE("fixed dimension is honoured") {
  FockTruncation t;
  t.dim = 24;
  CHECK(displaced_thermal(0.1, Complex(0.5, 0.0), t).dim() == 24);
  CHECK_THROWS_AS(fock_state(5, 4), ParameterError);
}

TEST_CASE("trace distance of pure states") {
  const int dim = 30;
  const VectorXc a = coherent_by_series(Complex(0.6, 0), dim), b = coherent_by_series(Complex(-0.6, 0), dim);
  const auto ra = DensityMatrix::pure(a), rb = DensityMatrix::pure(b);
  const double overlap = std::norm(a.dot(b));
  CHECK(trace_distance(ra, rb) == doctest::Approx(std::sqrt(1 - overlap)).epsilon(1e-9));
  CHECK(trace_distance(ra, ra) == doctest::Approx(0.0));
  CHECK(trace_distance(fock_state(0, 3), fock_state(2, 3)) == doctest::Approx(1.0));
}

TEST_CASE("density matrix construction validates its input") {
  MatrixXc m = MatrixXc::Zero(2, 2);
  m(0, 0) = 1.2;
  m(1, 1) = -0.2;
  CHECK_THROWS(DensityMatrix::from_matrix(m));
  m(0, 0) = 0.5;
  m(1, 1) = 0.6;
  CHECK_THROWS(DensityMatrix::from_matrix(m));
  m(1, 1) = 0.5;
  m(0, 1) = Complex(0, 0.1);
  CHECK_THROWS(DensityMatrix::from_matrix(m));
  m(1, 0) = Complex(0, -0.1);
  CHECK_NOTHROW(DensityMatrix::from_matrix(m));
}
