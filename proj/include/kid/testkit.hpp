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

// Independent oracles: ensembles built directly in block form (so their
// decomposition is known by construction) and channels of the shape
// (+)_l 1_J (x) U_KE followed by a trace over the environment.

#include <cstdint>
#include <utility>
#include <vector>

#include "kid/kidecomp.hpp"
#include "kid/rng.hpp"

namespace kid {

struct PlantSpec {
  std::vector<std::pair<int, int>> blocks;  // (n, k)
  int num_states = 1;
  std::uint64_t seed = 0;
};

struct Planted {
  Ensemble ensemble;
  KIDecomposition truth;  // identity frame, blocks in spec order
};

// Throws RejectionExhausted when 64 draws fail the non-mergeability or
// irreducibility checks (e.g. one state with n > 1).
Planted planted_ensemble(const PlantSpec& spec);

struct Channel {
  int dim = 0;
  std::vector<Matrix> kraus;

  Matrix apply(const Matrix& rho) const;
  double tp_residual() const;  // ||sum K^dagger K - 1||_F
};

// u_ke[l] acts on C^{k_l} (x) C^{env_dim}, K index major; the environment
// starts in |0>. Outside the support the channel is the identity.
Channel form2_channel(const KIDecomposition& d, const std::vector<Matrix>& u_ke, int env_dim);

// Random U_KE^(l) that leave rho_K^(l) invariant after the environment is
// traced out: a unitary commuting with rho_K composed with unitaries on E
// controlled by the eigenbasis of rho_K.
Channel random_form2_channel(const KIDecomposition& d, int env_dim, std::uint64_t seed);

Matrix haar_unitary(int dim, std::uint64_t seed);
Matrix haar_unitary(int dim, Rng& rng);

// Random state of the given rank: G G^dagger / Tr with G a dim x rank
// Ginibre matrix.
DensityMatrix random_density(int dim, int rank, Rng& rng);

}  // namespace kid
