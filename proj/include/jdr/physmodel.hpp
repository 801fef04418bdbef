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

// Optomechanical optical-to-microwave transducer: steady states of the driven
// three-mode system and the effective loss/heating channel produced by the
// sequential swap protocol.

#include <optional>
#include <string>
#include <vector>

#include "jdr/core.hpp"

namespace jdr {

/// Physical device parameters. Frequencies and rates are angular (rad/s).
struct TransducerParams {
  double omega1 = kTwoPi * 31e12;  // optical cavity
  double omega2 = kTwoPi * 10e6;   // mechanical oscillator
  double omega3 = kTwoPi * 10e9;   // microwave cavity
  double kappa1 = kTwoPi * 50e3;
  double kappa3 = kTwoPi * 50e3;
  double gamma = kTwoPi * 500.0;
  double g1_max = kTwoPi * 10.0;
  double g3_max = kTwoPi * 5.0;
  double G1_max = kTwoPi * 1e6;
  double G3_max = kTwoPi * 1e6;
  double temperature = 1e-3;  // K

  /// Fiducial device at the given reservoir temperature.
  static TransducerParams fiducial(double temperature_kelvin);
};

/// Throws ParameterError on invalid values. Dissipation rates may be zero.
void validate(const TransducerParams& p);

/// Human-readable warnings when G_j < 10 max(kappa_j, gamma).
std::vector<std::string> strong_coupling_warnings(const TransducerParams& p);

/// Coherent cavity drives in the frame rotating at the drive frequencies.
struct DriveConfig {
  Complex E1{0.0, 0.0};
  Complex E3{0.0, 0.0};
  double delta1 = 0.0;
  double delta3 = 0.0;
  /// When set, delta_j is re-tuned each iteration so delta_j - g_j Q2 = omega2.
  bool auto_tune = false;
};

struct SteadyState {
  Complex B1, B2, B3;
  double Q2 = 0.0;
  double delta1 = 0.0;
  double delta3 = 0.0;
  double residual = 0.0;  // relative, after the final iterate
  int iterations = 0;
};

struct SteadyStateOptions {
  int max_iterations = 10000;
  double relaxation = 0.5;
  double tolerance = 1e-12;
};

/// Bose-Einstein occupation 1/(exp(hbar omega / k T) - 1).
double thermal_occupation(double omega, double temperature);

/// Self-consistent steady-state amplitudes of the driven cavities and the
/// mechanical mode. The cavity amplitudes depend on Q2 through the effective
/// detuning, and Q2 depends on the cavity populations; the loop is a damped
/// fixed-point iteration on Q2.
SteadyState steady_states(const TransducerParams& p, const DriveConfig& drives,
                          const SteadyStateOptions& opts = {});

/// Auto-tuned drives whose steady-state cavity amplitudes satisfy
/// g_j |B_j| = G_j_max.
DriveConfig drives_for_target_coupling(const TransducerParams& p);

/// Fixed-point residual of the steady-state relations, relative to |B|.
double steady_state_residual(const TransducerParams& p, const DriveConfig& drives,
                             const SteadyState& s);

struct TransductionChannel {
  double eta_tr = 1.0;
  double nbar_tr = 0.0;
  double tau1 = 0.0;  // s
  double tau3 = 0.0;  // s
  double nbar0 = 0.0;

  static TransductionChannel ideal() { return {}; }
};

struct ChannelOptions {
  /// Initial mechanical occupation; defaults to the reservoir occupation.
  std::optional<double> nbar0;
  /// Dimensionless kappa3 * t of the offset-compensation drive; 0 disables it.
  double compensation_loss_exponent = 0.0;
  double quadrature_tolerance = 1e-12;
};

/// Loss and added thermal occupation of the swap-based optical-to-microwave map.
TransductionChannel transduction_channel(const TransducerParams& p,
                                         const ChannelOptions& opts = {});

/// Input coupling efficiency of a unit-energy square pulse of width T.
double insertion_efficiency(double kappa1, double pulse_width);

}  // namespace jdr
