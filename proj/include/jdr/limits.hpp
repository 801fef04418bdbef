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

// Pulse-by-pulse error limits, capacities and Holevo information.

#include <utility>
#include <vector>

#include "jdr/core.hpp"
#include "jdr/density_matrix.hpp"
#include "jdr/jc.hpp"
#include "jdr/physmodel.hpp"

namespace jdr {

/// Minimum error probability for one BPSK pulse at mean photon number rmpn.
double helstrom_bpsk(double rmpn);

/// Error of n-1 independent optimal pulse decisions, 1 - (1 - p_H)^(n-1).
double n_helstrom(double rmpn, int n);

/// Binary entropy in bits, with h2(0) = h2(1) = 0.
double binary_entropy(double p);

/// Capacity of the binary symmetric channel left by pulse-wise Helstrom detection.
double c1_capacity(double rmpn);

/// Base-2 von Neumann entropy; eigenvalues below -1e-12 are an error, the rest are clamped.
double von_neumann_entropy(const DensityMatrix& rho);

struct Ensemble {
  std::vector<std::pair<double, DensityMatrix>> members;  // (prior, state)
  void validate() const;
  DensityMatrix average() const;
};

double holevo(const Ensemble& ensemble);

/// Holevo information of the equiprobable pure pair |±beta>.
double optical_bpsk_holevo(double rmpn);

/// Holevo information of the transduced qubit pair, time chosen by trace distance.
double jdr_capacity(double rmpn, const TransductionChannel& channel,
                    const JcConfig& cfg = JcConfig::capacity());

/// `count` log-spaced points in [lo, hi].
std::vector<double> log_grid(double lo = 1e-3, double hi = 10.0, int count = 40);

}  // namespace jdr
