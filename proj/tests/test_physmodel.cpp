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

#include "jdr/physmodel.hpp"

using namespace jdr;

namespace {

// Composite Simpson rule, used as an independent check of the adaptive quadrature.
template <typename F>
double simpson(F f, double a, double b, int panels = 20000) {
  const double h = (b - a) / panels;
  double s = f(a) + f(b);
  for (int k = 1; k < panels; ++k) s += (k % 2 ? 4.0 : 2.0) * f(a + k * h);
  return s * h / 3.0;
}

TransductionChannel channel_by_simpson(const TransducerParams& p) {
  const double nbar = 1.0 / std::expm1(kHbar * p.omega2 / (kBoltzmann * p.temperature));
  const double G1 = p.G1_max, G3 = p.G3_max;
  const double t1 = kPi / (2 * G1), t3 = kPi / (2 * G3);
  const double th1 = (p.kappa1 + p.gamma) / 2, th3 = (p.kappa3 + p.gamma) / 2;
  const double r1 = (p.kappa1 - p.gamma) / (4 * G1);
  const double nu1 = r1 * std::sqrt(2 * nbar + 1), nu3 = (p.kappa3 - p.gamma) / (4 * G3);
  const double a1 = simpson([&](double t) {
    const double w = std::cos(G1 * t) + r1 * std::sin(G1 * t);
    return w * w * std::exp(-th1 * t / 2);
  }, 0, t1);
  const double b3 = simpson([&](double t) {
    const double w = std::cos(G3 * t) - nu3 * std::sin(G3 * t);
    return w * w * std::exp(-th3 * t / 2);
  }, 0, t3);
  const double m1 = simpson([&](double t) { return std::pow(std::sin(G1 * t), 2) * std::exp(-p.kappa1 * t); }, 0, t1);
  const double m3 = simpson([&](double t) { return std::pow(std::sin(G3 * t), 2) * std::exp(-p.kappa3 * t); }, 0, t3);
  const double e = std::exp(-th1 * t1 - th3 * t3), e3 = std::exp(-th3 * t3);
  const double th = p.gamma * (2 * nbar + 1);
  TransductionChannel ch;
  ch.eta_tr = e;
  ch.nbar_tr = 0.5 * (e * (1 + nu1 * nu1) + p.kappa3 * b3 + th * m3 + e3 * (nu3 * nu3 + p.kappa1 * m1 + th * a1) - 1);
  return ch;
}

// Root of Q2 = sqrt(2) Re B2(Q2) by bisection, fixed detunings.
double q2_by_bisection(const TransducerParams& p, const DriveConfig& d, double lo, double hi) {
  auto f = [&](double q) {
    const Complex i{0, 1};
    const Complex b1 = -i * d.E1 / (p.kappa1 / 2 + i * (d.delta1 - p.g1_max * q));
    const Complex b3 = -i * d.E3 / (p.kappa3 / 2 + i * (d.delta3 - p.g3_max * q));
    const Complex b2 = (i * p.g1_max / std::sqrt(2.0) * std::norm(b1) + i * p.g3_max / std::sqrt(2.0) * std::norm(b3)) /
                       (i * p.omega2 + p.gamma / 2);
    return q - std::sqrt(2.0) * b2.real();
  };
  double flo = f(lo);
  for (int k = 0; k < 200; ++k) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if ((fm < 0) == (flo < 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("thermal occupation matches the Bose-Einstein law and its high-temperature expansion") {
  const double w = kTwoPi * 10e6;
  const double x = kHbar * w / kBoltzmann;  // in kelvin
  CHECK(thermal_occupation(w, 1.0) == doctest::Approx(1.0 / x - 0.5 + x / 12.0).epsilon(1e-9));
  CHECK(thermal_occupation(w, 1.0) == doctest::Approx(2083.16).epsilon(1e-5));
  CHECK(thermal_occupation(w, 1e-3) == doctest::Approx(1.6235).epsilon(1e-4));
  CHECK_THROWS_AS(thermal_occupation(w, 0.0), ParameterError);
  CHECK_THROWS_AS(thermal_occupation(-w, 1.0), ParameterError);
}

TEST_CASE("channel agrees with an independent Simpson evaluation") {
  for (double T : {1e-3, 0.1, 1.0}) {
    const auto p = TransducerParams::fiducial(T);
    const auto ch = transduction_channel(p);
    const auto ref = channel_by_simpson(p);
    CHECK(ch.eta_tr == doctest::Approx(ref.eta_tr).epsilon(1e-12));
    CHECK(ch.nbar_tr == doctest::Approx(ref.nbar_tr).epsilon(1e-7));
    CHECK(ch.tau1 == doctest::Approx(0.25e-6));
  }
}

TEST_CASE("fiducial device loss and heating") {
  const auto hot = transduction_channel(TransducerParams::fiducial(1.0));
  const auto cold = transduction_channel(TransducerParams::fiducial(1e-3));
  CHECK(hot.eta_tr == doctest::Approx(0.924).epsilon(0.002 / 0.924));
  CHECK(cold.eta_tr == doctest::Approx(0.924).epsilon(0.002 / 0.924));
  CHECK(hot.nbar_tr == doctest::Approx(1.8).epsilon(0.2 / 1.8));
  CHECK(cold.nbar_tr <= 0.005);
  CHECK(cold.nbar_tr >= 0.0);
}

TEST_CASE("lossless device is the identity channel") {
  auto p = TransducerParams::fiducial(1.0);
  p.kappa1 = p.kappa3 = p.gamma = 0.0;
  const auto ch = transduction_channel(p);
  CHECK(ch.eta_tr == doctest::Approx(1.0));
  CHECK(ch.nbar_tr == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("heating grows with temperature and compensation reduces only the transmission") {
  double last = -1.0;
  for (double T : {1e-3, 1e-2, 0.1, 1.0, 4.0}) {
    const double n = transduction_channel(TransducerParams::fiducial(T)).nbar_tr;
    CHECK(n > last);
    last = n;
  }
  ChannelOptions opts;
  opts.compensation_loss_exponent = 0.1;
  const auto base = transduction_channel(TransducerParams::fiducial(1.0));
  const auto comp = transduction_channel(TransducerParams::fiducial(1.0), opts);
  CHECK(comp.eta_tr == doctest::Approx(base.eta_tr * std::exp(-0.1)));
  CHECK(comp.nbar_tr == doctest::Approx(base.nbar_tr));
}

TEST_CASE("invalid parameters are rejected") {
  auto p = TransducerParams::fiducial(1.0);
  p.kappa1 = -1.0;
  CHECK_THROWS_AS(transduction_channel(p), ParameterError);
  p = TransducerParams::fiducial(1.0);
  p.omega3 = p.omega1 * 2;
  CHECK_THROWS_AS(validate(p), ParameterError);
  p = TransducerParams::fiducial(0.0);
  CHECK_THROWS_AS(validate(p), ParameterError);
}

TEST_CASE("strong-coupling warnings") {
  auto p = TransducerParams::fiducial(1.0);
  CHECK(strong_coupling_warnings(p).empty());
  p.G1_max = p.kappa1;
  CHECK(strong_coupling_warnings(p).size() == 1);
}

TEST_CASE("auto-tuned drives hit the target couplings") {
  const auto p = TransducerParams::fiducial(1e-3);
  const auto d = drives_for_target_coupling(p);
  const auto s = steady_states(p, d);
  CHECK(p.g1_max * std::abs(s.B1) == doctest::Approx(p.G1_max).epsilon(1e-9));
  CHECK(p.g3_max * std::abs(s.B3) == doctest::Approx(p.G3_max).epsilon(1e-9));
  CHECK(std::abs(s.B1) == doctest::Approx(1e5).epsilon(1e-9));
  CHECK(std::abs(s.B3) == doctest::Approx(2e5).epsilon(1e-9));
  CHECK(s.residual < 1e-12);
  CHECK(s.delta1 - p.g1_max * s.Q2 == doctest::Approx(p.omega2));
}

TEST_CASE("steady state with fixed detunings matches a bisection root") {
  auto p = TransducerParams::fiducial(1e-3);
  DriveConfig d;
  d.E1 = Complex(0.0, 2e9);
  d.E3 = Complex(0.0, 1e9);
  d.delta1 = d.delta3 = p.omega2;
  const auto s = steady_states(p, d);
  const double ref = q2_by_bisection(p, d, -1e6, 1e6);
  CHECK(s.Q2 == doctest::Approx(ref).epsilon(1e-9));
  CHECK(steady_state_residual(p, d, s) < 1e-12);
}

TEST_CASE("iteration budget exhaustion raises a convergence error") {
  const auto p = TransducerParams::fiducial(1e-3);
  DriveConfig d;
  d.E1 = Complex(0.0, 2e9);
  d.delta1 = d.delta3 = p.omega2;
  SteadyStateOptions o;
  o.max_iterations = 1;
  CHECK_THROWS_AS(steady_states(p, d, o), ConvergenceError);
}

TEST_CASE("insertion efficiency peaks near 0.903") {
  const double kappa = 1.0;
  double best = 0.0, best_x = 0.0;
  for (double x = 0.01; x < 10.0; x += 1e-3) {
    const double e = insertion_efficiency(kappa, x);
    if (e > best) {
      best = e;
      best_x = x;
    }
  }
  CHECK(best == doctest::Approx(0.9030).epsilon(1e-3));
  CHECK(best_x == doctest::Approx(2.513).epsilon(1e-2));
  CHECK(insertion_efficiency(2.0, 1.0) == doctest::Approx(2 * (1 - std::exp(-1.0)) / std::sqrt(2.0)));
}
