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

#include <cmath>
#include <limits>

#include "kid/algebra.hpp"
#include "kid/kidecomp.hpp"
#include "kid/rng.hpp"
#include "kid/testkit.hpp"

namespace kid {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool shapes_consistent(const KIDecomposition& d, const Ensemble& e) {
  if (d.frame.ambient_dim != e.dim || d.frame.isometry.rows() != e.dim ||
      d.frame.isometry.cols() != d.frame.rank) {
    return false;
  }
  for (const auto& b : d.blocks) {
    if (b.q.size() != e.size() || b.rho_J.size() != e.size()) return false;
    if (b.isometry.rows() != d.frame.rank || b.isometry.cols() != b.n * b.k) return false;
    if (b.rho_K.dim() != b.k) return false;
    for (const auto& s : b.rho_J) {
      if (s && s->dim() != b.n) return false;
    }
  }
  return true;
}

}  // namespace

bool VerificationReport::irreducible_ok() const {
  for (auto dim : block_commutant_dims) {
    if (dim != 1) return false;
  }
  return true;
}

VerificationReport verify(const KIDecomposition& d, const Ensemble& e, double tol, int channels,
                          std::uint64_t seed, int env_dim) {
  VerificationReport report;
  report.tol = tol;
  if (!shapes_consistent(d, e)) {
    report.max_reconstruction_residual = kInf;
    report.max_weight_sum_residual = kInf;
    report.max_channel_residual = kInf;
    return report;
  }

  for (std::size_t i = 0; i < e.size(); ++i) {
    const double r = (e.entries[i].state.matrix() - reconstruct_state(d, i)).norm();
    report.max_reconstruction_residual = std::max(report.max_reconstruction_residual, r);
    double total = 0.0;
    for (const auto& b : d.blocks) total += b.q[i];
    report.max_weight_sum_residual = std::max(report.max_weight_sum_residual, std::abs(total - 1.0));
  }

  for (const auto& b : d.blocks) {
    std::vector<Matrix> gens;
    for (const auto& s : b.rho_J) {
      if (s) gens.push_back(s->matrix());
    }
    try {
      const auto alg = generate_algebra(gens, b.n, tol);
      report.block_commutant_dims.push_back(commutant(alg, tol).size());
    } catch (const std::exception&) {
      report.block_commutant_dims.push_back(0);
    }
  }

  for (std::size_t a = 0; a < d.blocks.size(); ++a) {
    for (std::size_t b = a + 1; b < d.blocks.size(); ++b) {
      if (mergeable(d.blocks[a], d.blocks[b], tol)) report.mergeable_pairs.emplace_back(a, b);
    }
  }

  report.channels_tested = channels;
  for (int r = 0; r < channels; ++r) {
    try {
      const auto ch = random_form2_channel(d, env_dim, derive_seed(seed, static_cast<std::uint64_t>(r)));
      report.channel_tp_residual = std::max(report.channel_tp_residual, ch.tp_residual());
      for (const auto& entry : e.entries) {
        const double res = (ch.apply(entry.state.matrix()) - entry.state.matrix()).norm();
        report.max_channel_residual = std::max(report.max_channel_residual, res);
      }
    } catch (const std::exception&) {
      report.max_channel_residual = kInf;
    }
  }
  return report;
}

}  // namespace kid
