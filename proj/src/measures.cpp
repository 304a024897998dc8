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

#include "kid/measures.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace kid {

double von_neumann_entropy(const RealVector& spectrum, double tol) {
  if (spectrum.size() == 0) return 0.0;
  const double floor = tol * std::max(spectrum.maxCoeff(), 0.0);
  double s = 0.0;
  for (double x : spectrum) {
    if (x > floor && x > 0.0) s -= x * std::log2(x);
  }
  return std::max(s, 0.0);
}

double von_neumann_entropy(const DensityMatrix& rho, double tol) {
  return von_neumann_entropy(eig_hermitian(rho.matrix()).values, tol);
}

double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma, double tol) {
  // Work on supp(rho): with rho = V L V^dagger restricted to its nonzero
  // eigenvalues, rho^1/2 sigma rho^1/2 is unitarily equivalent to
  // L^1/2 V^dagger sigma V L^1/2.
  const auto er = eig_hermitian(rho.matrix());
  const double top = std::max(er.values.maxCoeff(), 0.0);
  std::vector<Eigen::Index> keep;
  for (Eigen::Index j = 0; j < er.values.size(); ++j) {
    if (er.values[j] > tol * top) keep.push_back(j);
  }
  if (keep.empty()) return 0.0;
  Matrix half(rho.dim(), static_cast<Eigen::Index>(keep.size()));
  for (std::size_t c = 0; c < keep.size(); ++c) {
    half.col(static_cast<Eigen::Index>(c)) = er.vectors.col(keep[c]) * std::sqrt(er.values[keep[c]]);
  }
  const Matrix m = half.adjoint() * sigma.matrix() * half;
  const RealVector ev = eig_hermitian(hermitian_part(m), 1.0).values;
  const double clamp = 64.0 * std::numeric_limits<double>::epsilon() * std::max(ev.maxCoeff(), 0.0);
  double root = 0.0;
  for (double x : ev) {
    if (x > clamp) root += std::sqrt(x);
  }
  return std::clamp(root * root, 0.0, 1.0);
}

double shannon_entropy(const std::vector<double>& p) {
  double h = 0.0;
  for (double x : p) {
    if (x > 0.0) h -= x * std::log2(x);
  }
  return std::max(h, 0.0);
}

double InfoMeasures::additivity_residual() const {
  return std::abs(S_total - (I_C + I_NC + I_R));
}

InfoMeasures info_measures(const KIDecomposition& d, const Ensemble& e, double tol) {
  InfoMeasures m;
  m.S_total = von_neumann_entropy(average_state(e), tol);
  m.I_C = shannon_entropy(d.p_block);
  int max_n = 1;
  for (std::size_t l = 0; l < d.blocks.size(); ++l) {
    const auto& b = d.blocks[l];
    const double p = d.p_block[l];
    m.I_NC += p * von_neumann_entropy(d.rho_J_avg[l], tol);
    m.I_R += p * von_neumann_entropy(b.rho_K, tol);
    m.E_per_consume += p * std::log2(static_cast<double>(b.n));
    if (p > 0.0) max_n = std::max(max_n, b.n);
  }
  m.E_per_prepare = std::log2(static_cast<double>(max_n));
  m.E_asy = m.I_NC;
  m.I_passive = m.I_C + m.I_NC;
  m.hybrid_qubit_rate = m.I_NC;
  m.hybrid_bit_rate = m.I_C;
  return m;
}

}  // namespace kid
