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

// Truncated Fock-space states and operators for a single bosonic mode.

#include "jdr/core.hpp"
#include "jdr/density_matrix.hpp"

namespace jdr {

struct FockTruncation {
  int dim = 0;  // 0 selects the smallest adequate dimension (at least 16)
  double leakage_tol = 1e-8;
};

/// Annihilation operator b on span{|0>, ..., |dim-1>}.
MatrixXc annihilation_operator(int dim);

/// exp(alpha b^dagger - conj(alpha) b) in the truncated space.
MatrixXc displacement_operator(Complex alpha, int dim, double leakage_tol = 1e-8);

/// Fock state |n> in a space of dimension dim.
DensityMatrix fock_state(int n, int dim);

/// D(alpha0) rho_th(nbar) D(alpha0)^dagger, cropped to a dimension whose
/// discarded population and energy are below trunc.leakage_tol.
DensityMatrix displaced_thermal(double nbar, Complex alpha0, const FockTruncation& trunc = {});

/// Tr(rho b^dagger b).
double mean_photon_number(const DensityMatrix& rho);

/// Half the trace norm of rho - sigma.
double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma);

}  // namespace jdr
