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

#include "kid/testkit.hpp"

#include <algorithm>
#include <cmath>

#include "kid/algebra.hpp"
#include "kid/error.hpp"

namespace kid {

namespace {

constexpr int kMaxRejections = 64;
constexpr double kRatioSpreadMin = 1e-3;
constexpr double kSpectrumGapMin = 1e-2;

std::vector<double> random_weights(int count, Rng& rng) {
  std::vector<double> w(static_cast<std::size_t>(count));
  double total = 0.0;
  for (auto& x : w) {
    x = 0.2 + 0.8 * uniform01(rng);
    total += x;
  }
  for (auto& x : w) x /= total;
  return w;
}

bool proportional_columns(const std::vector<std::vector<double>>& q, std::size_t a,
                          std::size_t b) {
  double lo = 1e300;
  double hi = 0.0;
  double mean = 0.0;
  for (const auto& row : q) {
    const double r = row[b] / row[a];
    lo = std::min(lo, r);
    hi = std::max(hi, r);
    mean += r;
  }
  mean /= static_cast<double>(q.size());
  return (hi - lo) / mean < kRatioSpreadMin;
}

// Full-rank state whose eigenvalues are pairwise separated by at least
// kSpectrumGapMin relative to the largest.
std::optional<DensityMatrix> distinct_spectrum_state(int k, Rng& rng) {
  auto values = random_weights(k, rng);
  std::sort(values.begin(), values.end());
  for (int j = 1; j < k; ++j) {
    if (values[j] - values[j - 1] < kSpectrumGapMin * values.back()) return std::nullopt;
  }
  const Matrix u = haar_unitary(k, rng);
  RealVector v = Eigen::Map<const RealVector>(values.data(), k);
  return DensityMatrix::trusted(u * v.cast<cplx>().asDiagonal() * u.adjoint());
}

}  // namespace

Matrix haar_unitary(int dim, Rng& rng) {
  if (dim < 1) throw Error(ErrorCode::InvalidArgument, "haar_unitary: dim must be >= 1");
  const Matrix g = ginibre(dim, dim, rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR();
  // Rescaling by the phases of diag(R) makes the distribution exactly Haar.
  for (int j = 0; j < dim; ++j) {
    const cplx rjj = r(j, j);
    q.col(j) *= rjj / std::abs(rjj);
  }
  return q;
}

Matrix haar_unitary(int dim, std::uint64_t seed) {
  Rng rng = make_rng(seed);
  return haar_unitary(dim, rng);
}

DensityMatrix random_density(int dim, int rank, Rng& rng) {
  const Matrix g = ginibre(dim, rank, rng);
  const Matrix m = g * g.adjoint();
  return DensityMatrix::trusted(m / m.trace().real());
}

Planted planted_ensemble(const PlantSpec& spec) {
  if (spec.blocks.empty() || spec.num_states < 1) {
    throw Error(ErrorCode::InvalidArgument, "planted_ensemble: need >= 1 block and >= 1 state");
  }
  int total = 0;
  for (auto [n, k] : spec.blocks) {
    if (n < 1 || k < 1) throw Error(ErrorCode::InvalidArgument, "planted_ensemble: n, k >= 1");
    total += n * k;
  }
  const auto num_blocks = spec.blocks.size();
  const auto num_states = static_cast<std::size_t>(spec.num_states);
  Rng rng = make_rng(spec.seed);

  for (int attempt = 0; attempt < kMaxRejections; ++attempt) {
    std::vector<std::vector<double>> q(num_states);
    for (auto& row : q) row = random_weights(static_cast<int>(num_blocks), rng);
    bool reject = false;
    for (std::size_t a = 0; a < num_blocks && !reject; ++a)
      for (std::size_t b = a + 1; b < num_blocks && !reject; ++b)
        reject = proportional_columns(q, a, b);
    if (reject) continue;

    std::vector<DensityMatrix> rho_k;
    for (auto [n, k] : spec.blocks) {
      auto s = distinct_spectrum_state(k, rng);
      if (!s) break;
      rho_k.push_back(*s);
    }
    if (rho_k.size() != num_blocks) continue;

    std::vector<std::vector<DensityMatrix>> sigma(num_blocks);
    for (std::size_t l = 0; l < num_blocks && !reject; ++l) {
      const int n = spec.blocks[l].first;
      std::vector<Matrix> gens;
      for (std::size_t i = 0; i < num_states; ++i) {
        sigma[l].push_back(random_density(n, n, rng));
        gens.push_back(sigma[l].back().matrix());
      }
      // The J states must generate all of M_n, otherwise the planted block
      // is not irreducible and the truth would not be canonical.
      reject = generate_algebra(gens, n).size() != static_cast<std::size_t>(n) * n;
    }
    if (reject) continue;

    const auto p = random_weights(spec.num_states, rng);
    const Matrix u = haar_unitary(total, rng);

    Planted out;
    out.ensemble.dim = total;
    out.truth.frame = {total, total, Matrix::Identity(total, total)};
    int offset = 0;
    for (std::size_t l = 0; l < num_blocks; ++l) {
      const auto [n, k] = spec.blocks[l];
      KIBlock block;
      block.n = n;
      block.k = k;
      block.isometry = u.middleCols(offset, n * k);
      block.rho_K = rho_k[l];
      for (std::size_t i = 0; i < num_states; ++i) {
        block.q.push_back(q[i][l]);
        block.rho_J.emplace_back(sigma[l][i]);
      }
      out.truth.blocks.push_back(std::move(block));
      offset += n * k;
    }
    for (std::size_t i = 0; i < num_states; ++i) {
      Matrix local = Matrix::Zero(total, total);
      int off = 0;
      for (std::size_t l = 0; l < num_blocks; ++l) {
        const auto [n, k] = spec.blocks[l];
        local.block(off, off, n * k, n * k) =
            q[i][l] * kron(sigma[l][i].matrix(), rho_k[l].matrix());
        off += n * k;
      }
      out.ensemble.entries.push_back(
          {p[i], DensityMatrix::trusted(u * local * u.adjoint())});
    }
    refresh_averages(out.truth, out.ensemble);
    return out;
  }
  throw Error(ErrorCode::RejectionExhausted,
              "no admissible planted ensemble after " + std::to_string(kMaxRejections) +
                  " draws; the block/state specification is infeasible");
}

Matrix Channel::apply(const Matrix& rho) const {
  Matrix out = Matrix::Zero(dim, dim);
  for (const auto& k : kraus) out += k * rho * k.adjoint();
  return out;
}

double Channel::tp_residual() const {
  Matrix acc = Matrix::Zero(dim, dim);
  for (const auto& k : kraus) acc += k.adjoint() * k;
  return (acc - Matrix::Identity(dim, dim)).norm();
}

Channel form2_channel(const KIDecomposition& d, const std::vector<Matrix>& u_ke, int env_dim) {
  if (u_ke.size() != d.blocks.size() || env_dim < 1) {
    throw Error(ErrorCode::InvalidArgument, "form2_channel: one U_KE per block required");
  }
  const int dim = d.frame.ambient_dim;
  Channel ch;
  ch.dim = dim;
  for (int out = 0; out < env_dim; ++out) {
    Matrix k_op = Matrix::Zero(dim, dim);
    for (std::size_t l = 0; l < d.blocks.size(); ++l) {
      const auto& b = d.blocks[l];
      // <out|_E U_KE |0>_E as an operator on K.
      Matrix x(b.k, b.k);
      for (int r = 0; r < b.k; ++r)
        for (int c = 0; c < b.k; ++c) x(r, c) = u_ke[l](r * env_dim + out, c * env_dim);
      const Matrix e = d.frame.isometry * b.isometry;
      k_op += e * kron(Matrix::Identity(b.n, b.n), x) * e.adjoint();
    }
    ch.kraus.push_back(std::move(k_op));
  }
  if (d.frame.rank < dim) {
    ch.kraus.push_back(Matrix::Identity(dim, dim) -
                       d.frame.isometry * d.frame.isometry.adjoint());
  }
  return ch;
}

Channel random_form2_channel(const KIDecomposition& d, int env_dim, std::uint64_t seed) {
  Rng rng = make_rng(seed);
  std::vector<Matrix> u_ke;
  for (const auto& b : d.blocks) {
    const auto eig = eig_hermitian(b.rho_K.matrix());
    // Unitary on K commuting with rho_K: Haar inside each eigenvalue cluster.
    Matrix w = Matrix::Zero(b.k, b.k);
    const auto starts = cluster_sorted(eig.values, kDefaultTol);
    for (std::size_t c = 0; c + 1 < starts.size(); ++c) {
      const int len = starts[c + 1] - starts[c];
      const Matrix v = eig.vectors.middleCols(starts[c], len);
      w += v * haar_unitary(len, rng) * v.adjoint();
    }
    // Controlled unitaries sum_j |kappa_j><kappa_j| (x) V_j on K (x) E.
    Matrix controlled = Matrix::Zero(b.k * env_dim, b.k * env_dim);
    for (int j = 0; j < b.k; ++j) {
      const Matrix proj = eig.vectors.col(j) * eig.vectors.col(j).adjoint();
      controlled += kron(proj, haar_unitary(env_dim, rng));
    }
    u_ke.push_back(kron(w, Matrix::Identity(env_dim, env_dim)) * controlled);
  }
  return form2_channel(d, u_ke, env_dim);
}

}  // namespace kid
