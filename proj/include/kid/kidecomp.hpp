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

// Koashi-Imoto decomposition of a finite ensemble {p_i, rho_i}:
//
//     supp(rho) = (+)_l H_J^(l) (x) H_K^(l)
//     rho_i     = (+)_l q^(i,l) rho_J^(i,l) (x) rho_K^(l)
//
// where rho_K^(l) does not depend on i and, for each l, the states
// {rho_J^(i,l)}_i admit no common block structure. The K factors carry no
// information about i (redundant part), the block label l is classical, and
// the J factors are the nonclassical part.
//
// Construction: the irreducible blocks of the algebra generated by the
// restricted states give a decomposition whose K factors are maximally
// mixed. Blocks whose weights are proportional in i and whose J states are
// unitarily equal for every i are then merged pairwise until no pair
// qualifies; merging is what produces non-maximally-mixed rho_K.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "kid/ensemble.hpp"

namespace kid {

struct KIBlock {
  int n = 0;                   // dim H_J
  int k = 0;                   // dim H_K
  Matrix isometry;             // rank x (n*k), column a*k + j = J index a, K index j
  DensityMatrix rho_K;         // k x k, shared by every state
  std::vector<double> q;       // q[i] = weight of state i in this block
  std::vector<std::optional<DensityMatrix>> rho_J;  // absent where q[i] == 0

  bool present(std::size_t i) const { return rho_J[i].has_value(); }
};

struct KIDecomposition {
  SupportFrame frame;
  std::vector<KIBlock> blocks;
  std::vector<double> p_block;           // p^(l) = sum_i p_i q^(i,l)
  std::vector<DensityMatrix> rho_J_avg;  // p-weighted block averages of rho_J

  std::size_t num_states() const { return blocks.empty() ? 0 : blocks.front().q.size(); }
  int support_dim() const { return frame.rank; }
};

// Throws FormViolation when a compressed state is not of the form
// q * (sigma (x) 1/k), and propagates DegenerateSample.
KIDecomposition ki_decompose(const Ensemble& e, std::uint64_t seed,
                             double tol = kDefaultTol);

struct MergeWitness {
  Matrix unitary;  // V with V rho_J^(i,a) V^dagger = rho_J^(i,b)
  double ratio;    // c with q^(i,b) = c q^(i,a)
};

std::optional<MergeWitness> mergeable(const KIBlock& a, const KIBlock& b,
                                      double tol = kDefaultTol);

// Combines b into a; the K factor of the result is (rho_K^a (+) c rho_K^b)/(1+c).
KIBlock merge_blocks(const KIBlock& a, const KIBlock& b, const MergeWitness& w);

// Recomputes p_block and rho_J_avg from the blocks.
void refresh_averages(KIDecomposition& d, const Ensemble& e);

// Block state q^(i,l) rho_J^(i,l) (x) rho_K^(l) of state i, embedded in the
// ambient space (zero when state i has no weight in the block).
Matrix embedded_block_state(const KIDecomposition& d, std::size_t block, std::size_t i);

// sum_l of the embedded block states: rho_i as the decomposition predicts it.
Matrix reconstruct_state(const KIDecomposition& d, std::size_t i);

// {p_i, (+)_l q^(i,l) rho_J^(i,l)} on dimension sum_l n_l.
Ensemble remove_redundancy(const KIDecomposition& d, const Ensemble& e);

struct VerificationReport {
  double tol = 0.0;
  double max_reconstruction_residual = 0.0;
  double max_weight_sum_residual = 0.0;  // max_i |sum_l q^(i,l) - 1|
  std::vector<std::size_t> block_commutant_dims;  // 1 means irreducible
  std::vector<std::pair<std::size_t, std::size_t>> mergeable_pairs;
  int channels_tested = 0;
  double max_channel_residual = 0.0;
  double channel_tp_residual = 0.0;

  bool reconstruction_ok() const { return max_reconstruction_residual <= tol; }
  bool weights_ok() const { return max_weight_sum_residual <= tol; }
  bool irreducible_ok() const;
  bool maximal_ok() const { return mergeable_pairs.empty(); }
  bool channels_ok() const { return max_channel_residual <= tol && channel_tp_residual <= tol; }
  bool passed() const {
    return reconstruction_ok() && weights_ok() && irreducible_ok() && maximal_ok() &&
           channels_ok();
  }
};

// Never throws on a bad decomposition; failures are reported.
VerificationReport verify(const KIDecomposition& d, const Ensemble& e, double tol = kDefaultTol,
                          int channels = 20, std::uint64_t seed = 0, int env_dim = 2);

std::string write_decomposition(const KIDecomposition& d);
KIDecomposition read_decomposition(std::string_view text);

}  // namespace kid
