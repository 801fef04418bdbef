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

#include "jdr/jc.hpp"

#include <cmath>
#include <sstream>
#include <vector>

namespace jdr {

namespace {

void check_field_support(const DensityMatrix& field, double tol) {
  if (field.dim() < 2) throw DimensionError("JC evolution needs a field dimension of at least 2");
  const double top = field(field.dim() - 1, field.dim() - 1).real();
  if (top > tol) {
    std::ostringstream os;
    os << "JC evolution: field population " << top << " at the truncation edge";
    throw TruncationError(os.str());
  }
}

// Fock-space data of one field needed for repeated reduced-state evaluation.
struct FieldProfile {
  std::vector<double> populations;
  std::vector<Complex> lower_diagonal;  // rho(m+1, m)
  std::vector<double> sqrt_n;

  explicit FieldProfile(const DensityMatrix& field) {
    const auto d = static_cast<std::size_t>(field.dim());
    populations.resize(d);
    sqrt_n.resize(d);
    lower_diagonal.resize(d - 1);
    for (std::size_t n = 0; n < d; ++n) {
      populations[n] = field(n, n).real();
      sqrt_n[n] = std::sqrt(static_cast<double>(n));
    }
    for (std::size_t m = 0; m + 1 < d; ++m) lower_diagonal[m] = field(m + 1, m);
  }

  // Returns (excited population, <e|rho_q|g>).
  std::pair<double, Complex> qubit_elements(double chi_t) const {
    double pe = 0.0;
    for (std::size_t n = 1; n < populations.size(); ++n) {
      const double s = std::sin(chi_t * sqrt_n[n]);
      pe += populations[n] * s * s;
    }
    Complex c{0.0, 0.0};
    for (std::size_t m = 0; m < lower_diagonal.size(); ++m)
      c += lower_diagonal[m] * std::sin(chi_t * sqrt_n[m + 1]) * std::cos(chi_t * sqrt_n[m]);
    return {pe, Complex{0.0, -1.0} * c};
  }

  Matrix2c qubit(double chi_t) const {
    const auto [pe, c] = qubit_elements(chi_t);
    Matrix2c q;
    q << 1.0 - pe, std::conj(c), c, pe;
    return q;
  }
};

double qubit_distance(const Matrix2c& a, const Matrix2c& b) {
  const Matrix2c d = a - b;
  const double half_trace = 0.5 * (d(0, 0).real() + d(1, 1).real());
  const double half_gap = 0.5 * (d(0, 0).real() - d(1, 1).real());
  const double radius = std::sqrt(half_gap * half_gap + std::norm(d(1, 0)));
  return 0.5 * (std::abs(half_trace + radius) + std::abs(half_trace - radius));
}

template <typename F>
double golden_section_max(F f, double lo, double hi, double tol) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a), d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tol) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return fc >= fd ? c : d;
}

}  // namespace

void validate(const JcConfig& cfg) {
  if (!(cfg.chi > 0.0) || !std::isfinite(cfg.chi)) throw ParameterError("JcConfig: chi must be positive");
  if (!(cfg.time_window > 0.0)) throw ParameterError("JcConfig: time_window must be positive");
  if (cfg.grid_points < 2) throw ParameterError("JcConfig: grid_points must be at least 2");
  if (!(cfg.leakage_tol > 0.0)) throw ParameterError("JcConfig: leakage_tol must be positive");
}

double BlochVector::norm() const { return std::sqrt(x * x + y * y + z * z); }

BlochVector bloch_vector(const DensityMatrix& qubit) {
  if (qubit.dim() != 2) throw DimensionError("bloch_vector: expected a 2x2 state");
  const Complex r01 = qubit(0, 1);
  return {2.0 * r01.real(), -2.0 * r01.imag(), qubit(0, 0).real() - qubit(1, 1).real()};
}

MatrixXc jc_joint_evolve(const DensityMatrix& field, double t, double chi) {
  check_field_support(field, 1e-8);
  const Eigen::Index d = field.dim();
  MatrixXc U = MatrixXc::Identity(2 * d, 2 * d);
  const Complex i{0.0, 1.0};
  // |n,g> couples to |n-1,e> with frequency chi sqrt(n).
  for (Eigen::Index n = 1; n < d; ++n) {
    const double angle = chi * t * std::sqrt(static_cast<double>(n));
    const Eigen::Index g = 2 * n, e = 2 * (n - 1) + 1;
    U(g, g) = std::cos(angle);
    U(e, e) = std::cos(angle);
    U(g, e) = -i * std::sin(angle);
    U(e, g) = -i * std::sin(angle);
  }
  MatrixXc rho0 = MatrixXc::Zero(2 * d, 2 * d);
  for (Eigen::Index a = 0; a < d; ++a)
    for (Eigen::Index b = 0; b < d; ++b) rho0(2 * a, 2 * b) = field(a, b);
  return U * rho0 * U.adjoint();
}

DensityMatrix jc_evolve(const DensityMatrix& field, double t, double chi) {
  check_field_support(field, 1e-8);
  Matrix2c q = FieldProfile(field).qubit(chi * t);
  q = 0.5 * (q + q.adjoint()).eval();
  return DensityMatrix::from_matrix(MatrixXc(q), field.trace());
}

std::pair<DensityMatrix, DensityMatrix> bpsk_fields(Complex beta, const TransductionChannel& ch,
                                                    double leakage_tol) {
  if (!(ch.eta_tr > 0.0 && ch.eta_tr <= 1.0) || !(ch.nbar_tr >= 0.0))
    throw ParameterError("bpsk_fields: invalid transduction channel");
  const Complex alpha = std::sqrt(ch.eta_tr) * beta;
  FockTruncation trunc{0, leakage_tol};
  DensityMatrix plus = displaced_thermal(ch.nbar_tr, alpha, trunc);
  trunc.dim = static_cast<int>(plus.dim());
  DensityMatrix minus = displaced_thermal(ch.nbar_tr, -alpha, trunc);
  return {std::move(plus), std::move(minus)};
}

double qubit_pair_distance(const DensityMatrix& field_plus, const DensityMatrix& field_minus,
                           double t, double chi) {
  return qubit_distance(FieldProfile(field_plus).qubit(chi * t),
                        FieldProfile(field_minus).qubit(chi * t));
}

TransducedPair transduce_bpsk(Complex beta, const TransductionChannel& ch, const JcConfig& cfg) {
  validate(cfg);
  const auto [plus, minus] = bpsk_fields(beta, ch, cfg.leakage_tol);
  check_field_support(plus, cfg.leakage_tol);
  check_field_support(minus, cfg.leakage_tol);
  const FieldProfile fp(plus), fm(minus);
  auto distance = [&](double chi_t) { return qubit_distance(fp.qubit(chi_t), fm.qubit(chi_t)); };

  // Search in the dimensionless time chi * t.
  const double step = cfg.time_window / (cfg.grid_points - 1);
  int best = 0;
  double best_tau = distance(0.0);
  for (int k = 1; k < cfg.grid_points; ++k) {
    const double tau = distance(k * step);
    if (tau > best_tau) {
      best_tau = tau;
      best = k;
    }
  }
  double chi_t = best * step;
  if (cfg.refine && best_tau > 0.0) {
    const double lo = std::max(0, best - 1) * step;
    const double hi = std::min(cfg.grid_points - 1, best + 1) * step;
    const double refined = golden_section_max(distance, lo, hi, 1e-12 * cfg.time_window);
    if (distance(refined) > best_tau) chi_t = refined;
  }

  TransducedPair pair{jc_evolve(plus, chi_t / cfg.chi, cfg.chi),
                      jc_evolve(minus, chi_t / cfg.chi, cfg.chi), chi_t / cfg.chi, 0.0};
  pair.tau = trace_distance(pair.rho_plus, pair.rho_minus);
  return pair;
}

double optimal_time_reference(double mpn_coherent, double nbar_tr, double chi) {
  if (!(mpn_coherent >= 0.0) || !(nbar_tr >= 0.0) || !(chi > 0.0))
    throw ParameterError("optimal_time_reference: inputs must be non-negative, chi positive");
  constexpr double kLow = 1.0 / 6.0, kHigh = 0.25;
  const double mpn = mpn_coherent + nbar_tr;
  const double low_branch = kPi / (2.0 * chi);
  if (mpn <= kLow) return low_branch;
  const double high_branch = kPi / (4.0 * chi * std::sqrt(mpn_coherent + 1.5 * nbar_tr));
  if (mpn >= kHigh) return high_branch;
  const double w = (mpn - kLow) / (kHigh - kLow);
  return (1.0 - w) * low_branch + w * high_branch;
}

}  // namespace jdr
