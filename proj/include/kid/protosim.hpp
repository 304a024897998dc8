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

// Monte Carlo simulation of two transmission schemes built on a KI
// decomposition:
//
//  * individual: per message, measure the block label l, teleport the J
//    part through log2(n_l) ebits and re-prepare rho_K^(l) at the receiver;
//  * asymptotic: group N messages by l, project each group's J part onto a
//    high-probability subspace of rho_J^(l) at S(rho_J^(l)) + delta qubits
//    per message, teleport, and reattach the K parts.
//
// Entanglement is tracked as a ledger; no circuits are simulated. Trial t
// draws from the stream derive_seed(seed, t) and results are reduced in
// trial order, so output does not depend on the thread count.

#include <cstdint>
#include <vector>

#include "kid/kidecomp.hpp"

namespace kid {

struct TrialRecord {
  std::size_t i = 0;
  std::size_t l = 0;
  double ebits_consumed = 0.0;
  double conditional_fidelity = 0.0;
};

struct IndividualSummary {
  int trials = 0;
  double mean_ebits = 0.0;
  double stderr_ebits = 0.0;
  double max_ebits_observed = 0.0;
  double max_ebits_blocks = 0.0;  // max log2 n_l over blocks some state occupies
  double min_conditional_fidelity = 1.0;
  double mixture_residual = 0.0;  // max_i ||sum_l q^(i,l) block state - rho_i||_F
  std::vector<int> block_counts;
};

struct IndividualResult {
  std::vector<TrialRecord> records;
  IndividualSummary summary;
};

IndividualResult simulate_individual(const Ensemble& e, const KIDecomposition& d, int trials,
                                     std::uint64_t seed, double tol = kDefaultTol);

// Eigenvalue-index sequences s of length N with
// |-(1/N) sum_j log2 lambda_{s_j} - S| <= delta, stored by type class
// (occupation counts), never as a dense projector.
struct TypicalSet {
  int N = 0;
  double delta = 0.0;
  double entropy = 0.0;
  std::vector<std::vector<int>> types;  // counts per eigenvalue index
  double size = 0.0;                    // number of sequences
  double log2_size = 0.0;               // qubit cost of the block
  double weight = 0.0;                  // probability mass

  bool contains(const std::vector<int>& sequence) const;
};

// Throws EmptyTypicalSet when no sequence qualifies.
TypicalSet typical_projector(const std::vector<double>& spectrum, int N, double delta);

// Code used by the asymptotic scheme for a group of m messages: the
// min(n^m, max(1, floor(2^{m (S + delta)}))) most probable eigenvalue
// sequences of rho^{(x) m}, ties broken by lexicographic sequence index.
// Sequences are encoded base n with the first message most significant.
std::vector<std::uint32_t> high_probability_code(const std::vector<double>& spectrum, int m,
                                                 double delta);

struct AsymptoticConfig {
  int N = 8;
  double delta = 0.25;
  int trials = 10000;
  std::uint64_t seed = 0;
  int threads = 1;
};

struct AsymptoticRun {
  AsymptoticConfig config;
  double qubit_rate_used = 0.0;  // mean over trials of sum_groups log2|code| / N
  double bit_rate_used = 0.0;    // H({p^(l)})
  double F_bar = 0.0;            // projection branch sampled per group
  double F_stderr = 0.0;
  double F_mixture = 0.0;        // branch averaged analytically
  double F_mixture_stderr = 0.0;
  double success_rate = 0.0;     // fraction of groups whose projection succeeded
};

// Throws ConfigTooLarge when N log2(max n_l) > 20 or when a group's
// occupied subspace exceeds the dense cap (4096).
AsymptoticRun simulate_asymptotic(const Ensemble& e, const KIDecomposition& d,
                                  const AsymptoticConfig& cfg, double tol = kDefaultTol);

// One run per delta, all sharing cfg.seed, sorted by delta.
std::vector<AsymptoticRun> rate_sweep(const Ensemble& e, const KIDecomposition& d,
                                      const AsymptoticConfig& cfg, std::vector<double> deltas,
                                      double tol = kDefaultTol);

}  // namespace kid
