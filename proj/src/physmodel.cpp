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

#include "jdr/physmodel.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace jdr {

namespace {

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    std::ostringstream os;
    os << name << " must be positive and finite, got " << v;
    throw ParameterError(os.str());
  }
}

void require_non_negative(double v, const char* name) {
  if (!(v >= 0.0) || !std::isfinite(v)) {
    std::ostringstream os;
    os << name << " must be non-negative and finite, got " << v;
    throw ParameterError(os.str());
  }
}

// Integral of f over [0, pi/2] with the returned error estimate checked
// against an absolute tolerance.
template <typename F>
double quarter_period_integral(F f, double tol, const char* name) {
  double err = 0.0;
  const double value = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
      f, 0.0, kPi / 2.0, 20, tol, &err);
  if (!std::isfinite(value) || err > tol) {
    std::ostringstream os;
    os << "quadrature for " << name << " did not converge (error estimate " << err << ")";
    throw NumericalError(os.str());
  }
  return value;
}

}  // namespace

TransducerParams TransducerParams::fiducial(double temperature_kelvin) {
  TransducerParams p;
  p.temperature = temperature_kelvin;
  return p;
}

void validate(const TransducerParams& p) {
  require_positive(p.omega1, "omega1");
  require_positive(p.omega2, "omega2");
  require_positive(p.omega3, "omega3");
  require_non_negative(p.kappa1, "kappa1");
  require_non_negative(p.kappa3, "kappa3");
  require_non_negative(p.gamma, "gamma");
  require_positive(p.g1_max, "g1_max");
  require_positive(p.g3_max, "g3_max");
  require_positive(p.G1_max, "G1_max");
  require_positive(p.G3_max, "G3_max");
  require_positive(p.temperature, "temperature");
  if (!(p.omega1 > p.omega3 && p.omega3 > p.omega2))
    throw ParameterError("frequencies must satisfy omega1 > omega3 > omega2");
}

std::vector<std::string> strong_coupling_warnings(const TransducerParams& p) {
  std::vector<std::string> out;
  auto check = [&](double G, double kappa, const char* label) {
    const double margin = 10.0 * std::max(kappa, p.gamma);
    if (G < margin) {
      std::ostringstream os;
      os << label << " = " << G << " rad/s is below 10*max(kappa, gamma) = " << margin
         << "; the swap protocol assumes strong coupling";
      out.push_back(os.str());
    }
  };
  check(p.G1_max, p.kappa1, "G1_max");
  check(p.G3_max, p.kappa3, "G3_max");
  return out;
}

double thermal_occupation(double omega, double temperature) {
  require_positive(omega, "omega");
  require_positive(temperature, "temperature");
  return 1.0 / std::expm1(kHbar * omega / (kBoltzmann * temperature));
}

namespace {

struct CavityAmplitudes {
  Complex B1, B3;
};

CavityAmplitudes cavity_amplitudes(const TransducerParams& p, const DriveConfig& d,
                                   double delta1, double delta3, double Q2) {
  const Complex i{0.0, 1.0};
  return {-i * d.E1 / (p.kappa1 / 2.0 + i * (delta1 - p.g1_max * Q2)),
          -i * d.E3 / (p.kappa3 / 2.0 + i * (delta3 - p.g3_max * Q2))};
}

Complex mechanical_amplitude(const TransducerParams& p, Complex B1, Complex B3) {
  const Complex i{0.0, 1.0};
  const double s = std::sqrt(2.0);
  return (i * p.g1_max / s * std::norm(B1) + i * p.g3_max / s * std::norm(B3)) /
         (i * p.omega2 + p.gamma / 2.0);
}

double relative_gap(Complex a, Complex b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale > 0.0 ? std::abs(a - b) / scale : 0.0;
}

}  // namespace

double steady_state_residual(const TransducerParams& p, const DriveConfig& drives,
                             const SteadyState& s) {
  const auto cav = cavity_amplitudes(p, drives, s.delta1, s.delta3, s.Q2);
  const Complex B2 = mechanical_amplitude(p, s.B1, s.B3);
  const double Q2 = std::sqrt(2.0) * s.B2.real();
  return std::max({relative_gap(cav.B1, s.B1), relative_gap(cav.B3, s.B3),
                   relative_gap(B2, s.B2), relative_gap(Q2, s.Q2)});
}

SteadyState steady_states(const TransducerParams& p, const DriveConfig& drives,
                          const SteadyStateOptions& opts) {
  validate(p);
  if (opts.max_iterations <= 0 || !(opts.relaxation > 0.0 && opts.relaxation <= 1.0))
    throw ParameterError("steady_states: invalid iteration options");

  double Q2 = 0.0;
  double delta1 = drives.delta1, delta3 = drives.delta3;
  double last_step = 0.0;
  for (int it = 1; it <= opts.max_iterations; ++it) {
    if (drives.auto_tune) {
      delta1 = p.omega2 + p.g1_max * Q2;
      delta3 = p.omega2 + p.g3_max * Q2;
    }
    const auto cav = cavity_amplitudes(p, drives, delta1, delta3, Q2);
    const Complex B2 = mechanical_amplitude(p, cav.B1, cav.B3);
    const double target = std::sqrt(2.0) * B2.real();
    last_step = relative_gap(target, Q2);
    if (last_step <= opts.tolerance * 1e-2) {
      SteadyState s;
      s.Q2 = target;
      s.delta1 = drives.auto_tune ? p.omega2 + p.g1_max * target : delta1;
      s.delta3 = drives.auto_tune ? p.omega2 + p.g3_max * target : delta3;
      const auto final_cav = cavity_amplitudes(p, drives, s.delta1, s.delta3, s.Q2);
      s.B1 = final_cav.B1;
      s.B3 = final_cav.B3;
      s.B2 = mechanical_amplitude(p, s.B1, s.B3);
      s.Q2 = std::sqrt(2.0) * s.B2.real();
      s.iterations = it;
      s.residual = steady_state_residual(p, drives, s);
      if (s.residual < opts.tolerance) return s;
      last_step = s.residual;
    }
    Q2 += opts.relaxation * (target - Q2);
  }
  std::ostringstream os;
  os << "steady_states: no convergence after " << opts.max_iterations
     << " iterations (last relative residual " << last_step << ")";
  throw ConvergenceError(os.str(), last_step);
}

DriveConfig drives_for_target_coupling(const TransducerParams& p) {
  validate(p);
  const Complex i{0.0, 1.0};
  DriveConfig d;
  d.auto_tune = true;
  // With delta_j - g_j Q2 = omega2, B_j = -i E_j / (kappa_j/2 + i omega2).
  d.E1 = i * (p.G1_max / p.g1_max) * (p.kappa1 / 2.0 + i * p.omega2);
  d.E3 = i * (p.G3_max / p.g3_max) * (p.kappa3 / 2.0 + i * p.omega2);
  d.delta1 = p.omega2;
  d.delta3 = p.omega2;
  return d;
}

TransductionChannel transduction_channel(const TransducerParams& p, const ChannelOptions& opts) {
  validate(p);
  const double nbar = thermal_occupation(p.omega2, p.temperature);
  const double nbar0 = opts.nbar0.value_or(nbar);
  require_non_negative(nbar0, "nbar0");
  require_non_negative(opts.compensation_loss_exponent, "compensation_loss_exponent");

  const double G1 = p.G1_max, G3 = p.G3_max;
  const double tau1 = kPi / (2.0 * G1);
  const double tau3 = kPi / (2.0 * G3);
  const double theta1 = (p.kappa1 + p.gamma) / 2.0;
  const double theta3 = (p.kappa3 + p.gamma) / 2.0;

  // Residual fraction of the initial mechanical state left after the first
  // swap carries the initial-state variance; the weight inside alpha1 does not.
  const double asym1 = (p.kappa1 - p.gamma) / (4.0 * G1);
  const double nu1 = asym1 * std::sqrt(2.0 * nbar0 + 1.0);
  const double nu3 = (p.kappa3 - p.gamma) / (4.0 * G3);

  const double tol = opts.quadrature_tolerance;
  // All integrals are taken in u = G tau on [0, pi/2].
  const double alpha1 = quarter_period_integral(
                            [&](double u) {
                              const double w = std::cos(u) + asym1 * std::sin(u);
                              return w * w * std::exp(-theta1 * u / (2.0 * G1));
                            },
                            tol, "alpha1") /
                        G1;
  const double beta3 = quarter_period_integral(
                           [&](double u) {
                             const double w = std::cos(u) - nu3 * std::sin(u);
                             return w * w * std::exp(-theta3 * u / (2.0 * G3));
                           },
                           tol, "beta3") /
                       G3;
  auto mu = [&](double G, double kappa, const char* name) {
    return quarter_period_integral(
               [&](double u) {
                 const double s = std::sin(u);
                 return s * s * std::exp(-kappa * u / G);
               },
               tol, name) /
           G;
  };
  const double mu1 = mu(G1, p.kappa1, "mu1");
  const double mu3 = mu(G3, p.kappa3, "mu3");

  const double decay = std::exp(-(theta1 * tau1 + theta3 * tau3));
  const double decay3 = std::exp(-theta3 * tau3);
  const double thermal = p.gamma * (2.0 * nbar + 1.0);

  double nbar_tr = 0.5 * (decay * (1.0 + nu1 * nu1) + p.kappa3 * beta3 + thermal * mu3 +
                          decay3 * (nu3 * nu3 + p.kappa1 * mu1 + thermal * alpha1) - 1.0);
  if (nbar_tr < -1e-9) {
    std::ostringstream os;
    os << "transduction_channel: negative added occupation " << nbar_tr;
    throw NumericalError(os.str());
  }
  nbar_tr = std::max(nbar_tr, 0.0);

  TransductionChannel ch;
  ch.eta_tr = decay * std::exp(-opts.compensation_loss_exponent);
  ch.nbar_tr = nbar_tr;
  ch.tau1 = tau1;
  ch.tau3 = tau3;
  ch.nbar0 = nbar0;
  return ch;
}

double insertion_efficiency(double kappa1, double pulse_width) {
  require_positive(kappa1, "kappa1");
  require_positive(pulse_width, "pulse_width");
  const double x = kappa1 * pulse_width;
  return -2.0 * std::expm1(-x / 2.0) / std::sqrt(x);
}

}  // namespace jdr
