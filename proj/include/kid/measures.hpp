// Copyright 2026 The kidecomp Authors
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

// Entropies and teleportation costs. All logarithms are base 2.

#include "kid/kidecomp.hpp"

namespace kid {

// -sum lambda log2 lambda over eigenvalues lambda > tol * lambda_max.
double von_neumann_entropy(const DensityMatrix& rho, double tol = kDefaultTol);
double von_neumann_entropy(const RealVector& spectrum, double tol = kDefaultTol);

// [Tr sqrt(rho^1/2 sigma rho^1/2)]^2, clamped to [0, 1].
double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma, double tol = kDefaultTol);

// -sum p log2 p, zero entries skipped.
double shannon_entropy(const std::vector<double>& p);

struct InfoMeasures {
  double S_total = 0.0;
  double I_C = 0.0;   // classical part, H(p^(l))
  double I_NC = 0.0;  // sum_l p^(l) S(rho_J^(l))
  double I_R = 0.0;   // sum_l p^(l) S(rho_K^(l))
  double E_per_prepare = 0.0;  // log2 max_l n_l
  double E_per_consume = 0.0;  // sum_l p^(l) log2 n_l
  double E_asy = 0.0;
  double I_passive = 0.0;
  double hybrid_qubit_rate = 0.0;
  double hybrid_bit_rate = 0.0;

  // |S_total - (I_C + I_NC + I_R)|
  double additivity_residual() const;
};

InfoMeasures info_measures(const KIDecomposition& d, const Ensemble& e, double tol = kDefaultTol);

}  // namespace kid
